// Command-line front end: equidimensional decomposition into Chow forms,
// good-reduction prime checks and scans, height-bound reports, and parameter
// sweeps.  Every run is a deterministic function of its flags; reports go to
// standard output, with an optional JSON copy behind --output.

#include <CLI11.hpp>
#include <json.hpp>

#include <chowforms/chowforms.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

using namespace chowforms;
using json = nlohmann::json;

#ifndef CHOWFORMS_DATA_DIR
#define CHOWFORMS_DATA_DIR "data"
#endif

namespace {

std::string e6(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6e", v);
    return buf;
}

std::string g6(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

std::string chow_text(const ChowForm<RationalField>& C) {
    if (C.is_empty()) return "1";
    return print_chow_header({C.n, C.r, C.D}) + " " + print_polynomial(C.poly);
}

PolySystem load_system(const std::string& input) {
    const RationalField field;
    ParsedSystem<RationalField> parsed =
        input == "-" ? read_system(std::cin, field) : read_system_file(input, field);
    return make_system(parsed.n, std::move(parsed.polys));
}

void write_json(const std::string& path, const json& j) {
    if (path.empty()) return;
    std::ofstream out(path);
    if (!out) throw InputError("cannot write '" + path + "'");
    out << j.dump(2) << "\n";
    if (!out) throw InputError("write to '" + path + "' failed");
}

json form_json(int k, const ChowForm<RationalField>& C) {
    return json{{"k", k},
                {"r", C.r},
                {"D", C.D},
                {"poly", C.is_empty() ? "1" : print_polynomial(C.poly)}};
}

json matrix_json(const DenseMatrix<RationalField>& M) {
    json rows = json::array();
    for (int i = 0; i < M.size(); ++i) {
        json row = json::array();
        for (int j = 0; j < M.size(); ++j) row.push_back(M.at(i, j).get_str());
        rows.push_back(row);
    }
    return rows;
}

void print_verdict_line(const PrimeVerdict& v) {
    std::cout << v.p << " " << status_name(v.status);
    if (v.status == PrimeStatus::Bad && v.witness_k >= 0) std::cout << " " << v.witness_k;
    std::cout << "\n";
}

json verdict_json(const PrimeVerdict& v, bool with_forms) {
    json j{{"p", v.p}, {"status", status_name(v.status)}};
    if (v.status == PrimeStatus::Bad) j["witness_k"] = v.witness_k;
    if (!v.note.empty()) j["note"] = v.note;
    if (with_forms) {
        json forms = json::array();
        for (const auto& f : v.forms)
            forms.push_back(json{{"k", f.k}, {"reduced", f.reduced}, {"computed", f.computed}});
        j["forms"] = forms;
    }
    return j;
}

// ---- decompose -------------------------------------------------------------

int cmd_decompose(const std::string& input, std::uint64_t seed, int retries, bool trace,
                  const std::string& output) {
    const PolySystem sys = load_system(input);
    const DecompositionResult<RationalField> res = decompose(sys, seed, retries);

    for (int k = 0; k <= sys.n; ++k) {
        const auto& C = res.chow_forms[static_cast<std::size_t>(k)];
        std::cout << "C" << k << " = " << (C.is_empty() ? "1" : print_polynomial(C.poly))
                  << "\n";
    }
    if (trace) {
        std::cout << "transform det = " << res.transform.det_b.get_str() << "\n";
        for (int i = 0; i < res.transform.B.size(); ++i) {
            std::cout << "transform B[" << i << "] =";
            for (int j = 0; j < res.transform.B.size(); ++j)
                std::cout << " " << res.transform.B.at(i, j).get_str();
            std::cout << "\n";
        }
        for (const auto& st : res.trace) {
            const std::string at = "trace i=" + std::to_string(st.i)
                                 + " k=" + std::to_string(st.k) + " ";
            std::cout << at << "zero = " << chow_text(st.zero) << "\n";
            std::cout << at << "proper = " << chow_text(st.proper) << "\n";
            std::cout << at << "extra = " << chow_text(st.extra) << "\n";
            std::cout << at << "merged = " << chow_text(st.merged) << "\n";
            for (const auto& [l, c] : st.stripped)
                std::cout << at << "strip l=" << l << " = " << chow_text(c) << "\n";
        }
    }

    if (!output.empty()) {
        json forms = json::array();
        for (int k = 0; k <= sys.n; ++k)
            forms.push_back(form_json(k, res.chow_forms[static_cast<std::size_t>(k)]));
        json j{{"command", "decompose"}, {"input", input},      {"n", sys.n},
               {"seed", seed},           {"retries", retries},  {"forms", forms},
               {"transform", json{{"det", res.transform.det_b.get_str()},
                                  {"B", matrix_json(res.transform.B)}}}};
        if (trace) {
            json steps = json::array();
            for (const auto& st : res.trace) {
                json strip = json::array();
                for (const auto& [l, c] : st.stripped)
                    strip.push_back(json{{"l", l}, {"form", chow_text(c)}});
                steps.push_back(json{{"i", st.i},
                                     {"k", st.k},
                                     {"zero", chow_text(st.zero)},
                                     {"proper", chow_text(st.proper)},
                                     {"extra", chow_text(st.extra)},
                                     {"merged", chow_text(st.merged)},
                                     {"stripped", strip}});
            }
            j["trace"] = steps;
        }
        write_json(output, j);
    }
    return 0;
}

// ---- check-prime / scan-primes ----------------------------------------------

int cmd_check_prime(const std::string& input, std::uint64_t p, std::uint64_t seed,
                    int retries, const std::string& output) {
    const PolySystem sys = load_system(input);
    const PrimeVerdict v = check_prime(sys, p, seed, retries);
    print_verdict_line(v);
    if (!output.empty()) {
        json j = verdict_json(v, true);
        j["command"] = "check-prime";
        j["input"] = input;
        j["seed"] = seed;
        write_json(output, j);
    }
    return v.status == PrimeStatus::Indeterminate ? 1 : 0;
}

int cmd_scan_primes(const std::string& input, std::uint64_t p_max, std::uint64_t seed,
                    int retries, int jobs, const std::string& output) {
    const PolySystem sys = load_system(input);
    const std::vector<PrimeVerdict> verdicts = scan_primes(sys, p_max, seed, jobs, retries);
    std::cout << "2 Rejected\n";  // the even prime is never certified
    for (const auto& v : verdicts) print_verdict_line(v);
    if (!output.empty()) {
        json rows = json::array();
        for (const auto& v : verdicts)
            rows.push_back(verdict_json(v, v.status == PrimeStatus::Bad));
        write_json(output, json{{"command", "scan-primes"},
                                {"input", input},
                                {"p_max", p_max},
                                {"seed", seed},
                                {"verdicts", rows}});
    }
    return 0;
}

// ---- bound / sweep -----------------------------------------------------------

const char* kind_key(LemmaKind k) { return lemma_kind_name(k); }

int cmd_bound(int n, int s, int d, double h, bool trace, const std::string& output) {
    const BoundReport rep = total_bound(BoundParams{n, s, d, h});

    std::cout << "parameters:            n=" << n << " s=" << s << " d=" << d
              << " h=" << g6(h) << "\n";
    std::cout << "envelope:              D=" << e6(rep.env.D) << " H=" << e6(rep.env.H)
              << " h_prime=" << e6(rep.env.h_prime) << " H_prime=" << e6(rep.env.H_prime)
              << "\n";
    std::cout << "per-operation certificates:\n";
    for (LemmaKind k : {LemmaKind::SeparateH, LemmaKind::Intersection, LemmaKind::Union,
                        LemmaKind::Separate}) {
        double value = 0;
        long count = 0;
        for (const auto& c : rep.contributions)
            if (c.kind == k) {
                value = c.value;
                ++count;
            }
        char line[128];
        std::snprintf(line, sizeof line, "  %-22s value %s  count %ld\n", kind_key(k),
                      e6(value).c_str(), count);
        std::cout << line;
    }
    std::cout << "change of variables:   " << e6(rep.change_of_variables) << "\n";
    std::cout << "parity (ln 2):         " << e6(rep.parity) << "\n";
    std::cout << "subtotal per input:    " << e6(rep.step_subtotals.front()) << "\n";
    std::cout << "total: B = " << e6(rep.total) << "\n";
    std::cout << "class ratio B/(n^14 s h d^(3n+4)) = " << e6(rep.class_ratio) << "\n";
    if (trace) {
        for (const auto& c : rep.contributions) {
            std::cout << "contribution i=" << c.i << " k=" << c.k;
            if (c.l >= 0) std::cout << " l=" << c.l;
            std::cout << " " << kind_key(c.kind) << " = " << e6(c.value) << "\n";
        }
    }

    if (!output.empty()) {
        json contributions = json::array();
        for (const auto& c : rep.contributions) {
            json row{{"kind", kind_key(c.kind)}, {"i", c.i}, {"k", c.k}, {"value", c.value}};
            if (c.l >= 0) row["l"] = c.l;
            contributions.push_back(row);
        }
        write_json(output,
                   json{{"command", "bound"},
                        {"params", json{{"n", n}, {"s", s}, {"d", d}, {"h", h}}},
                        {"envelope", json{{"D", rep.env.D},
                                          {"H", rep.env.H},
                                          {"h_prime", rep.env.h_prime},
                                          {"H_prime", rep.env.H_prime}}},
                        {"contributions", contributions},
                        {"step_subtotals", rep.step_subtotals},
                        {"change_of_variables", rep.change_of_variables},
                        {"parity", rep.parity},
                        {"total", rep.total},
                        {"class_ratio", rep.class_ratio}});
    }
    return 0;
}

int cmd_sweep(const std::string& param, const std::vector<double>& values,
              const BoundParams& fixed, const std::string& table_path, bool table_explicit,
              const std::string& output) {
    ReferenceTable table;
    bool have_table = false;
    if (table_explicit) {
        table = read_reference_table_file(table_path);
        have_table = true;
    } else {
        std::ifstream probe(table_path);
        if (probe) {
            table = read_reference_table(probe);
            have_table = true;
        }
    }

    const std::vector<SweepRow> rows =
        sweep(param, values, fixed, have_table ? &table : nullptr);

    char line[160];
    std::snprintf(line, sizeof line, "%-6s %-12s %-14s %-14s %s\n", "param", "value", "A",
                  "B", "B/A");
    std::cout << line;
    for (const auto& r : rows) {
        std::snprintf(line, sizeof line, "%-6s %-12s %-14s %-14s %s\n", param.c_str(),
                      g6(r.value).c_str(),
                      r.reference ? e6(*r.reference).c_str() : "-",
                      e6(r.bound).c_str(), r.ratio ? e6(*r.ratio).c_str() : "-");
        std::cout << line;
    }

    if (!output.empty()) {
        json jrows = json::array();
        for (const auto& r : rows) {
            json row{{"value", r.value}, {"bound", r.bound}};
            row["reference"] = r.reference ? json(*r.reference) : json(nullptr);
            row["ratio"] = r.ratio ? json(*r.ratio) : json(nullptr);
            jrows.push_back(row);
        }
        write_json(output, json{{"command", "sweep"},
                                {"param", param},
                                {"fixed", json{{"n", fixed.n},
                                               {"s", fixed.s},
                                               {"d", fixed.d},
                                               {"h", fixed.h}}},
                                {"rows", jrows}});
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Chow forms of equidimensional components over Q, good-reduction "
                 "primes, and explicit height bounds"};
    app.require_subcommand(1);

    std::string input = "-";
    std::string output;
    std::uint64_t seed = 0;
    int retries = 8;
    bool trace = false;

    auto* dec = app.add_subcommand("decompose",
                                   "Chow forms of the equidimensional components");
    dec->add_option("input", input, "system file ('-' for standard input)");
    dec->add_option("--seed", seed, "random seed (default 0)");
    dec->add_option("--retries", retries, "general-position retries (default 8)");
    dec->add_flag("--trace", trace, "print the transform and every loop step");
    dec->add_option("--output", output, "write a JSON report to this path");

    std::uint64_t prime = 0;
    auto* chk = app.add_subcommand("check-prime", "classify one odd prime");
    chk->add_option("input", input, "system file ('-' for standard input)");
    chk->add_option("--prime", prime, "odd prime to classify")->required();
    chk->add_option("--seed", seed, "random seed (default 0)");
    chk->add_option("--retries", retries, "general-position retries (default 8)");
    chk->add_option("--output", output, "write a JSON report to this path");

    std::uint64_t p_max = 0;
    int jobs = 0;
    auto* scn = app.add_subcommand("scan-primes", "classify every odd prime up to a limit");
    scn->add_option("input", input, "system file ('-' for standard input)");
    scn->add_option("--max-prime", p_max, "scan odd primes up to this value")->required();
    scn->add_option("--seed", seed, "random seed (default 0)");
    scn->add_option("--retries", retries, "general-position retries (default 8)");
    scn->add_option("--jobs", jobs, "worker threads (default: available parallelism)");
    scn->add_option("--output", output, "write a JSON report to this path");

    int bn = 1, bs = 1, bd = 1;
    double bh = 1.0;
    auto* bnd = app.add_subcommand("bound", "height bound certifying good reduction");
    bnd->add_option("-n", bn, "number of variables (default 1)");
    bnd->add_option("-s", bs, "number of polynomials (default 1)");
    bnd->add_option("-d", bd, "max total degree (default 1)");
    bnd->add_option("--height", bh, "max coefficient height, ln scale (default 1)");
    bnd->add_flag("--trace", trace, "print every per-position contribution");
    bnd->add_option("--output", output, "write a JSON report to this path");

    std::string param;
    std::vector<double> values;
    std::string table_path = std::string(CHOWFORMS_DATA_DIR) + "/tables_dandrea.txt";
    auto* swp = app.add_subcommand("sweep", "evaluate the bound along one parameter");
    swp->add_option("--param", param, "swept parameter: n, s, d, or h")->required();
    swp->add_option("--values", values, "comma-separated parameter values")
        ->required()
        ->delimiter(',');
    auto* opt_n = swp->add_option("-n", bn, "fixed n (default: the reference table's)");
    auto* opt_s = swp->add_option("-s", bs, "fixed s (default: the reference table's)");
    auto* opt_d = swp->add_option("-d", bd, "fixed d (default: the reference table's)");
    auto* opt_h = swp->add_option("--height", bh, "fixed h (default: the reference table's)");
    auto* opt_t = swp->add_option("--table", table_path, "reference table file");
    swp->add_option("--output", output, "write a JSON report to this path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // help or version text
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (dec->parsed()) return cmd_decompose(input, seed, retries, trace, output);
        if (chk->parsed()) return cmd_check_prime(input, prime, seed, retries, output);
        if (scn->parsed()) return cmd_scan_primes(input, p_max, seed, retries, jobs, output);
        if (bnd->parsed()) return cmd_bound(bn, bs, bd, bh, trace, output);
        if (swp->parsed()) {
            BoundParams fixed = reference_fixed(param);
            if (opt_n->count()) fixed.n = bn;
            if (opt_s->count()) fixed.s = bs;
            if (opt_d->count()) fixed.d = bd;
            if (opt_h->count()) fixed.h = bh;
            return cmd_sweep(param, values, fixed, table_path, opt_t->count() > 0, output);
        }
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const UnknownKindError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const EvenPrimeError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const BadPrimeModulusError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;  // the computation gave up (retries exhausted, undefined step)
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
