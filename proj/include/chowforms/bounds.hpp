#pragma once
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"

namespace chowforms {

// Explicit height calculus for the reduction certificate.  Every quantity is
// a natural-log height; every function returns an upper bound.  Results are
// plain doubles: each named bound is rounded one step toward +infinity when
// it is produced, so compositions of these functions stay upper bounds even
// though the arithmetic between them rounds to nearest.

namespace detail {

inline double round_up(double x) {
    return std::nextafter(x, std::numeric_limits<double>::infinity());
}

// Integer power via binary exponentiation in long double.  Exact for
// integer bases while the value fits the 64-bit mantissa, which covers
// every parameter range the sweeps use.
inline double ipow(double base, int e) {
    long double acc = 1.0L;
    long double b = base;
    int k = e;
    while (k > 0) {
        if (k & 1) acc *= b;
        b *= b;
        k >>= 1;
    }
    return static_cast<double>(acc);
}

}  // namespace detail

// ---- the GCD certificate ------------------------------------------------------------

// Height of an integer certificate for a monic GCD over the rationals: any
// odd prime not dividing it reduces both inputs, their monic GCD, and the
// GCD computation itself compatibly mod p.  Arguments are degree and height
// bounds for the two polynomials and the number of variables they live in.
// Degrees below one are treated as one and heights below zero as zero, so
// the function is total and monotone.
inline double gcd_reduction_bound(double d_f, double h_f, double d_g, double h_g,
                                  double s_vars) {
    d_f = std::max(d_f, 1.0);
    d_g = std::max(d_g, 1.0);
    h_f = std::max(h_f, 0.0);
    h_g = std::max(h_g, 0.0);
    s_vars = std::max(s_vars, 1.0);
    double per_var = (d_f + d_g) * std::log(d_f + d_g)
                   + d_f * (h_g + s_vars * d_g)
                   + d_g * (h_f + s_vars * d_f)
                   + 2.0 * std::log(s_vars + 1.0) * d_f * d_g;
    return detail::round_up(s_vars * per_var + 2.0 * h_f + h_g);
}

// ---- parameters and envelopes -------------------------------------------------------

// Input-system parameters: n variables, s polynomials, degrees at most d,
// heights at most h.  All four must be at least one.
struct BoundParams {
    int n = 1;
    int s = 1;
    int d = 1;
    double h = 1.0;
};

inline void check_bound_params(const BoundParams& P) {
    if (P.n < 1 || P.s < 1 || P.d < 1 || P.h < 1.0)
        throw InputError("bound parameters must all be at least 1");
}

// Degree and height ceilings for every algebraic set the decomposition loop
// touches (D, H), together with the same ceilings after the integer change
// of variables that enforces general position (h_prime for the transformed
// input polynomials, H_prime for the transformed sets).
struct Envelope {
    double D = 0.0;
    double H = 0.0;
    double h_prime = 0.0;
    double H_prime = 0.0;
};

// Evaluated in long double and rounded once per field, so the doubles are
// the correctly rounded values of the defining expressions.
inline Envelope envelope(const BoundParams& P) {
    check_bound_params(P);
    const long double n = static_cast<long double>(P.n);
    const long double d = static_cast<long double>(P.d);
    long double dpow = 1.0L;
    {
        long double b = d;
        int k = P.n + 1;
        while (k > 0) {
            if (k & 1) dpow *= b;
            b *= b;
            k >>= 1;
        }
    }
    const long double D = 2.0L * dpow;
    const long double H = 5.0L * P.h * n * dpow * std::log(n + 1.0L);
    const long double lnd = std::log(d);
    Envelope e;
    e.D = static_cast<double>(D);
    e.H = static_cast<double>(H);
    e.h_prime = static_cast<double>(P.h + n * n * d * lnd);
    e.H_prime = static_cast<double>(H + n * n * D * lnd);
    return e;
}

// ---- per-operation certificates -----------------------------------------------------

namespace detail {

// Coefficient height of a primitive Chow form of a set with degree D and
// height H in ambient dimension n; the dimension of the set is taken at its
// ambient worst case, which only enlarges the bound.
inline double chow_coeff_height(double D, double H, double n) {
    return round_up(H + (n + 1.0) * D * std::log(n + 2.0));
}

// Number of variables such a form lives in: n+1 blocks of n+1.
inline double chow_vars(double n) { return (n + 1.0) * (n + 1.0); }

// Certificate that a primitive Chow form stays coprime to its U0_0
// derivative after reduction, i.e. that its reduction keeps distinct
// factors distinct.
inline double squarefree_pair_bound(double D, double H, double n) {
    const double dc = (n + 1.0) * D;
    const double hc = chow_coeff_height(D, H, n);
    return gcd_reduction_bound(dc, hc, dc, hc + std::log(std::max(D, 1.0)), chow_vars(n));
}

}  // namespace detail

// Union of two components via the squarefree part of the product of their
// Chow forms.  The product has total degree (n+1)(D1+D2); its coefficient
// height adds one ln(vars+1) term per degree to the operands' coefficient
// heights; the U0_0 derivative scales coefficients by at most the U0_0
// degree D1+D2.  One GCD certificate for (product, derivative), plus one
// squarefree certificate per operand.
inline double union_bound(double D1, double H1, double D2, double H2, double n) {
    const double dp = (n + 1.0) * (D1 + D2);
    const double hp = H1 + H2 + (n + 1.0) * std::log(n + 2.0) * (D1 + D2)
                    + std::log((n + 1.0) * (n + 1.0) + 1.0) * (D1 + D2);
    const double hpd = hp + std::log(std::max(D1 + D2, 1.0));
    const double core = gcd_reduction_bound(dp, hp, dp, hpd, detail::chow_vars(n));
    return detail::round_up(core + detail::squarefree_pair_bound(D1, H1, n)
                          + detail::squarefree_pair_bound(D2, H2, n));
}

// Splitting a component of degree D, height H along a hypersurface of degree
// d, height h.  Composition: shifting each block's leading variable by a new
// T variable turns the Chow form into a characteristic polynomial of degree
// (n+1)D and coefficient height chow_coeff_height + nD; substituting its
// n+1 first partials into the homogenized hypersurface costs one factor of
// d over (height of partials + ln(n+2) + ln(vars)·degree).  One GCD
// certificate for that pair in the U and T variables, plus the denominators
// and leading coefficient, plus the squarefree certificate of the input.
inline double separate_hypersurface_bound(double D, double H, double d, double h,
                                          double n) {
    const double h1 = detail::chow_coeff_height(D, H, n);
    const double denominators = h1 + 2.0 * std::max(h, 0.0);
    const double dp = (n + 1.0) * D;
    const double hp = h1 + n * D;
    const double hpart = hp + std::log(std::max(D, 1.0));
    const double hgp = h + d * (hpart + std::log(n + 2.0)
                                + std::log((n + 1.0) * (n + 2.0)) * (n + 1.0) * D);
    const double dgp = (n + 1.0) * d * D;
    const double s_vars = (n + 1.0) * (n + 2.0);
    const double core = gcd_reduction_bound(dp, hp, dgp, hgp, s_vars);
    return detail::round_up(denominators + core + detail::squarefree_pair_bound(D, H, n));
}

// Splitting a component of degree DV, height HV along an arbitrary
// component of degree DW, height HW.  The second component is replaced by
// the hypersurface obtained by projecting it along n+1 generic linear
// forms: that polynomial has degree DW in the points' coordinates, degree
// (n+1)DW in the projection coefficients, and coefficient height
// chow_coeff_height(DW) plus (n+1)DW·(ln((n+1)^2+1) + 2 ln((n+2)n)), the
// cost of substituting degree-two, height-zero arguments.  The rest is the
// hypersurface split with the projection coefficients carried as extra
// variables.
inline double separate_bound(double DV, double HV, double DW, double HW, double n) {
    const double hv1 = detail::chow_coeff_height(DV, HV, n);
    const double hw1 = detail::chow_coeff_height(DW, HW, n);
    const double hg = hw1 + (n + 1.0) * DW * (std::log((n + 1.0) * (n + 1.0) + 1.0)
                                              + 2.0 * std::log((n + 2.0) * n));
    const double dp = (n + 1.0) * DV;
    const double hp = hv1 + n * DV;
    const double hpart = hp + std::log(std::max(DV, 1.0));
    const double hgp = hg + DW * (hpart + std::log(n + 2.0)
                                  + std::log((n + 1.0) * (n + 2.0)) * (n + 1.0) * DV);
    const double dgp = (n + 1.0) * DV * DW + (n + 1.0) * DW;
    const double s_vars = (n + 1.0) * (n + 2.0) + (n + 1.0) * n;
    const double denominators = hv1 + hw1 + hg;
    const double core = gcd_reduction_bound(dp, hp, dgp, hgp, s_vars);
    return detail::round_up(denominators + core
                          + detail::squarefree_pair_bound(DV, HV, n));
}

// Evaluating the degree-d form of a component at one polynomial of height
// hF.  Only the denominator of the input form, the evaluated polynomial's
// top coefficient, and the squarefree certificate of the input enter; the
// evaluation itself is division-free until one exact division controlled by
// the same squarefree certificate.
inline double chow_eval_bound(double DV, double HV, double hF, double n) {
    const double denominators = detail::chow_coeff_height(DV, HV, n) + std::max(hF, 0.0);
    return detail::round_up(denominators + detail::squarefree_pair_bound(DV, HV, n));
}

// Proper intersection of a component with a hypersurface of degree dF,
// height hF.  On top of the evaluation certificate: the evaluated form's
// leading coefficient (its height obeys dF·HV + hF·DV + (n+1)ln(n+1)dF·DV),
// every prime that could divide a factor multiplicity (their product is at
// most the theta function of the output degree DW = dF·DV, and
// theta(x) <= 1.02x), and the squarefree certificate of the output at the
// intersection ceilings DW, HW.
inline double intersection_bound(double DV, double HV, double dF, double hF, double n) {
    const double eval_part = chow_eval_bound(DV, HV, hF, n);
    const double lead = dF * HV + hF * DV + (n + 1.0) * std::log(n + 1.0) * dF * DV;
    const double DW = dF * DV;
    const double HW = dF * HV + hF * DV + n * dF * DV * std::log(n + 1.0);
    const double multiplicities = 1.02 * DW;
    return detail::round_up(eval_part + lead + multiplicities
                          + detail::squarefree_pair_bound(DW, HW, n));
}

// ---- dispatch ------------------------------------------------------------------------

enum class LemmaKind { SeparateH, Intersection, Union, Separate, ChowEval };

inline const char* lemma_kind_name(LemmaKind k) {
    switch (k) {
        case LemmaKind::SeparateH: return "separate-hypersurface";
        case LemmaKind::Intersection: return "intersection";
        case LemmaKind::Union: return "union";
        case LemmaKind::Separate: return "separate";
        case LemmaKind::ChowEval: return "chow-evaluation";
    }
    return "?";
}

// First operand is always a component (degree, height); the second is a
// component for Union and Separate, a polynomial for SeparateH and
// Intersection, and only a height for ChowEval (deg_w is ignored there).
struct LemmaArgs {
    double deg_v = 1.0;
    double height_v = 0.0;
    double deg_w = 1.0;
    double height_w = 0.0;
    double n = 1.0;
};

inline double lemma_bound(LemmaKind kind, const LemmaArgs& a) {
    switch (kind) {
        case LemmaKind::SeparateH:
            return separate_hypersurface_bound(a.deg_v, a.height_v, a.deg_w, a.height_w, a.n);
        case LemmaKind::Intersection:
            return intersection_bound(a.deg_v, a.height_v, a.deg_w, a.height_w, a.n);
        case LemmaKind::Union:
            return union_bound(a.deg_v, a.height_v, a.deg_w, a.height_w, a.n);
        case LemmaKind::Separate:
            return separate_bound(a.deg_v, a.height_v, a.deg_w, a.height_w, a.n);
        case LemmaKind::ChowEval:
            return chow_eval_bound(a.deg_v, a.height_v, a.height_w, a.n);
    }
    throw UnknownKindError("unknown bound kind");
}

// ---- the full certificate ------------------------------------------------------------

// One addend of the total: the certificate of one operation at one position
// of the decomposition loop.  l is -1 except for the inner separation pass.
struct BoundContribution {
    LemmaKind kind = LemmaKind::Union;
    int i = 0;
    int k = 0;
    int l = -1;
    double value = 0.0;
};

struct BoundReport {
    BoundParams params;
    Envelope env;
    std::vector<BoundContribution> contributions;
    std::vector<double> step_subtotals;  // one per input polynomial
    double change_of_variables = 0.0;    // determinant of the general-position matrix
    double parity = 0.0;                 // ln 2: the even prime is always excluded
    double total = 0.0;
    double class_ratio = 0.0;            // total / (n^14 s h d^(3n+4))
};

// Sum of every operation certificate over the whole decomposition loop: for
// each of the s input polynomials and each dimension k, one hypersurface
// split, one intersection, one union, and one general separation per higher
// dimension, all evaluated at the envelope ceilings; plus the height of the
// change-of-variables determinant (n integer columns of entries no taller
// than ln(12 n^2 d^(2n+2))) and ln 2.  Any odd prime of bad reduction for a
// system within the parameters divides an integer of this height.
inline BoundReport total_bound(const BoundParams& P) {
    check_bound_params(P);
    BoundReport rep;
    rep.params = P;
    rep.env = envelope(P);
    const double n = static_cast<double>(P.n);
    const double D = rep.env.D;
    const double Hp = rep.env.H_prime;
    const double hp = rep.env.h_prime;
    const double d = static_cast<double>(P.d);

    const double sep_h = separate_hypersurface_bound(D, Hp, d, hp, n);
    const double inter = intersection_bound(D, Hp, d, hp, n);
    const double uni = union_bound(D, Hp, D, Hp, n);
    const double sep = separate_bound(D, Hp, D, Hp, n);

    double acc = 0.0;
    for (int i = 0; i < P.s; ++i) {
        double sub = 0.0;
        for (int k = 0; k <= P.n; ++k) {
            rep.contributions.push_back({LemmaKind::SeparateH, i, k, -1, sep_h});
            rep.contributions.push_back({LemmaKind::Intersection, i, k, -1, inter});
            rep.contributions.push_back({LemmaKind::Union, i, k, -1, uni});
            sub += sep_h + inter + uni;
            for (int l = k + 1; l <= P.n; ++l) {
                rep.contributions.push_back({LemmaKind::Separate, i, k, l, sep});
                sub += sep;
            }
        }
        rep.step_subtotals.push_back(sub);
        acc += sub;
    }

    rep.change_of_variables = detail::round_up(
        n * std::log(std::max(n, 1.0))
        + n * std::log(12.0 * n * n * detail::ipow(d, 2 * P.n + 2)));
    rep.parity = std::log(2.0);
    rep.total = detail::round_up(acc + rep.change_of_variables + rep.parity);
    rep.class_ratio = rep.total
                    / (detail::ipow(n, 14) * P.s * P.h * detail::ipow(d, 3 * P.n + 4));
    return rep;
}

// ---- parameter sweeps ----------------------------------------------------------------

// Reference values of the published comparison bound, keyed by the swept
// parameter and its value.  Only valid at that table's fixed parameters.
struct ReferenceTable {
    std::map<std::string, std::map<double, double>> rows;

    std::optional<double> lookup(const std::string& param, double value) const {
        auto it = rows.find(param);
        if (it == rows.end()) return std::nullopt;
        auto jt = it->second.find(value);
        if (jt == it->second.end()) return std::nullopt;
        return jt->second;
    }
};

// Line format: `<param> <value> <reference>`; `#` starts a comment.
inline ReferenceTable read_reference_table(std::istream& in) {
    ReferenceTable table;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream row(line);
        std::string param;
        if (!(row >> param)) continue;
        double value = 0.0, reference = 0.0;
        if (!(row >> value >> reference))
            throw InputError("reference table line " + std::to_string(lineno)
                             + ": expected `param value reference`");
        table.rows[param][value] = reference;
    }
    return table;
}

inline ReferenceTable read_reference_table_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open reference table: " + path);
    return read_reference_table(in);
}

// Fixed parameters each stored reference sweep was computed at; the swept
// field itself is left at its default and ignored by the match below.
inline BoundParams reference_fixed(const std::string& param) {
    if (param == "n") return BoundParams{1, 5, 2, 10.0};
    if (param == "s") return BoundParams{5, 1, 2, 10.0};
    if (param == "d") return BoundParams{3, 5, 1, 10.0};
    if (param == "h") return BoundParams{3, 5, 3, 1.0};
    throw InputError("unknown sweep parameter: " + param);
}

inline bool matches_reference_fixed(const std::string& param, const BoundParams& fixed) {
    const BoundParams want = reference_fixed(param);
    const bool n_ok = (param == "n") || fixed.n == want.n;
    const bool s_ok = (param == "s") || fixed.s == want.s;
    const bool d_ok = (param == "d") || fixed.d == want.d;
    const bool h_ok = (param == "h") || fixed.h == want.h;
    return n_ok && s_ok && d_ok && h_ok;
}

struct SweepRow {
    double value = 0.0;
    std::optional<double> reference;  // comparison bound, when on its grid
    double bound = 0.0;              // this calculus' total
    std::optional<double> ratio;     // bound / reference
};

// Evaluate total_bound along one parameter.  Integer parameters reject
// non-integer values; reference values attach only when the fixed
// parameters match the stored table's.
inline std::vector<SweepRow> sweep(const std::string& param,
                                   const std::vector<double>& values,
                                   BoundParams fixed,
                                   const ReferenceTable* table = nullptr) {
    if (param != "n" && param != "s" && param != "d" && param != "h")
        throw InputError("unknown sweep parameter: " + param);
    if (values.empty()) throw InputError("a sweep needs at least one value");
    const bool on_grid = table != nullptr && matches_reference_fixed(param, fixed);
    std::vector<SweepRow> out;
    out.reserve(values.size());
    for (double v : values) {
        BoundParams P = fixed;
        if (param == "h") {
            P.h = v;
        } else {
            if (v < 1.0 || v != std::floor(v) || v > 1e9)
                throw InputError("sweep parameter " + param
                                 + " needs a positive integer, got "
                                 + std::to_string(v));
            const int iv = static_cast<int>(v);
            if (param == "n") P.n = iv;
            if (param == "s") P.s = iv;
            if (param == "d") P.d = iv;
        }
        SweepRow row;
        row.value = v;
        row.bound = total_bound(P).total;
        if (on_grid) {
            row.reference = table->lookup(param, v);
            if (row.reference) row.ratio = row.bound / *row.reference;
        }
        out.push_back(row);
    }
    return out;
}

}  // namespace chowforms
