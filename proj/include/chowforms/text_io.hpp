#pragma once
#include <cctype>
#include <fstream>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "fields.hpp"
#include "polynomial.hpp"

namespace chowforms {

// ---- coefficient <-> text helpers -----------------------------------------

inline Rational coeff_from_rational(const RationalField&, const Rational& q) { return q; }

inline std::uint64_t coeff_from_rational(const PrimeField& f, const Rational& q) {
    const auto den = f.from_integer(Integer(q.get_den()));
    if (f.is_zero(den)) throw NotPAdmissibleError(f.modulus());
    return f.div(f.from_integer(Integer(q.get_num())), den);
}

// Sign split for printing: (is_negative, magnitude text).
inline std::pair<bool, std::string> coeff_sign_text(const RationalField&, const Rational& q) {
    Rational a = q < 0 ? Rational(-q) : q;
    std::string s = a.get_num().get_str();
    if (a.get_den() != 1) s += "/" + a.get_den().get_str();
    return {q < 0, s};
}

inline std::pair<bool, std::string> coeff_sign_text(const PrimeField&, std::uint64_t c) {
    return {false, std::to_string(c)};
}

// ---- printer ---------------------------------------------------------------

// Deterministic text form: terms in descending graded lex order, ` + `/` - `
// separators, `*` between factors, `^` for exponents above 1.  Re-parses to
// an identical term map.
template <class F>
std::string print_polynomial(const SparsePolynomial<F>& P) {
    if (P.is_zero()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [m, c] : P.terms()) {
        auto [neg, mag] = coeff_sign_text(P.field(), c);
        if (first) {
            if (neg) out += "-";
            first = false;
        } else {
            out += neg ? " - " : " + ";
        }
        std::string vars;
        for (std::size_t i = 0; i < m.e.size(); ++i) {
            if (m.e[i] == 0) continue;
            if (!vars.empty()) vars += "*";
            vars += P.order()->at(static_cast<int>(i)).name();
            if (m.e[i] > 1) vars += "^" + std::to_string(m.e[i]);
        }
        if (vars.empty()) {
            out += mag;
        } else if (mag == "1") {
            out += vars;
        } else {
            out += mag + "*" + vars;
        }
    }
    return out;
}

// ---- parser ----------------------------------------------------------------

namespace detail {

struct Cursor {
    const std::string& s;
    std::size_t i = 0;
    int line = 1;
    int col = 1;

    explicit Cursor(const std::string& text) : s(text) {}

    bool done() const { return i >= s.size(); }
    char peek() const { return s[i]; }

    void advance() {
        if (s[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
        ++i;
    }

    void skip_ws() {
        while (!done() && std::isspace(static_cast<unsigned char>(peek()))) advance();
    }

    [[noreturn]] void fail(const std::string& what) const {
        throw ParseError(line, col, what);
    }
};

inline Integer parse_number(Cursor& c) {
    c.skip_ws();
    if (c.done() || !std::isdigit(static_cast<unsigned char>(c.peek()))) c.fail("expected a number");
    std::string digits;
    while (!c.done() && std::isdigit(static_cast<unsigned char>(c.peek()))) {
        digits += c.peek();
        c.advance();
    }
    return Integer(digits);
}

inline int parse_exponent(Cursor& c) {
    const int line = c.line, col = c.col;
    const Integer e = parse_number(c);
    if (e <= 0 || e > 1000000) throw ParseError(line, col, "exponent out of range");
    return static_cast<int>(e.get_si());
}

}  // namespace detail

// Parse a polynomial in the text grammar over a given field and variable
// order.  Unknown variable names, or names outside the order, are reported
// with the offending position.
template <class F>
SparsePolynomial<F> parse_polynomial(const std::string& text, const F& field, const OrderPtr& order) {
    detail::Cursor c(text);
    SparsePolynomial<F> result(field, order);
    c.skip_ws();
    if (c.done()) c.fail("empty polynomial");

    bool first = true;
    while (true) {
        c.skip_ws();
        int sign = 1;
        if (!c.done() && (c.peek() == '+' || c.peek() == '-')) {
            sign = c.peek() == '-' ? -1 : 1;
            c.advance();
            c.skip_ws();
        } else if (!first) {
            break;
        }
        if (c.done()) c.fail("expected a term");

        Rational coeff = sign;
        Monomial mono(order->size());
        bool saw_factor = false;
        while (true) {
            c.skip_ws();
            if (!c.done() && std::isdigit(static_cast<unsigned char>(c.peek()))) {
                Integer num = detail::parse_number(c);
                c.skip_ws();
                if (!c.done() && c.peek() == '/') {
                    c.advance();
                    const int line = c.line, col = c.col;
                    Integer den = detail::parse_number(c);
                    if (den == 0) throw ParseError(line, col, "zero denominator");
                    coeff *= make_rational(num, den);
                } else {
                    coeff *= Rational(num);
                }
            } else if (!c.done() && std::isalpha(static_cast<unsigned char>(c.peek()))) {
                const int line = c.line, col = c.col;
                std::string name;
                while (!c.done() && (std::isalnum(static_cast<unsigned char>(c.peek())) || c.peek() == '_')) {
                    name += c.peek();
                    c.advance();
                }
                const auto v = parse_variable_name(name);
                if (!v) throw ParseError(line, col, "unknown variable '" + name + "'");
                const int pos = order->index_of(*v);
                if (pos < 0) throw ParseError(line, col, "variable '" + name + "' is not in this ring");
                int e = 1;
                c.skip_ws();
                if (!c.done() && c.peek() == '^') {
                    c.advance();
                    e = detail::parse_exponent(c);
                }
                mono.e[static_cast<std::size_t>(pos)] += e;
                mono.deg += e;
            } else {
                c.fail("expected a coefficient or a variable");
            }
            saw_factor = true;
            c.skip_ws();
            if (!c.done() && c.peek() == '*') {
                c.advance();
                continue;
            }
            break;
        }
        if (!saw_factor) c.fail("expected a term");
        result.add_term(mono, coeff_from_rational(field, coeff));
        first = false;
        c.skip_ws();
        if (c.done()) break;
        if (c.peek() != '+' && c.peek() != '-') c.fail("expected '+' or '-'");
    }
    return result;
}

// ---- chow{...} headers -----------------------------------------------------

struct ChowHeader {
    int n = 0;
    int r = -1;
    int D = 0;
};

inline std::string print_chow_header(const ChowHeader& h) {
    std::ostringstream os;
    os << "chow{n=" << h.n << ", r=" << h.r << ", D=" << h.D << "}";
    return os.str();
}

// Parses `chow{n=.., r=.., D=..}` at the front of `text`; returns the header
// and the offset just past the closing brace.
inline std::pair<ChowHeader, std::size_t> parse_chow_header(const std::string& text) {
    detail::Cursor c(text);
    c.skip_ws();
    auto expect = [&](const std::string& lit) {
        for (char ch : lit) {
            if (c.done() || c.peek() != ch) c.fail("expected '" + lit + "'");
            c.advance();
        }
    };
    auto expect_key = [&](const std::string& key) {
        c.skip_ws();
        expect(key);
        c.skip_ws();
        expect("=");
        c.skip_ws();
        int sign = 1;
        if (!c.done() && c.peek() == '-') {
            sign = -1;
            c.advance();
        }
        return sign * static_cast<int>(detail::parse_number(c).get_si());
    };
    expect("chow");
    c.skip_ws();
    expect("{");
    ChowHeader h;
    h.n = expect_key("n");
    c.skip_ws();
    expect(",");
    h.r = expect_key("r");
    c.skip_ws();
    expect(",");
    h.D = expect_key("D");
    c.skip_ws();
    expect("}");
    return {h, c.i};
}

// ---- system files ----------------------------------------------------------

template <class F>
struct ParsedSystem {
    int n = 0;
    std::vector<SparsePolynomial<F>> polys;
};

// Reads `n = <int>` then one polynomial per nonempty line; `#` starts a
// comment line.
template <class F>
ParsedSystem<F> read_system(std::istream& in, const F& field) {
    std::string line;
    int lineno = 0;
    int n = -1;
    while (std::getline(in, line)) {
        ++lineno;
        std::size_t a = line.find_first_not_of(" \t\r");
        if (a == std::string::npos || line[a] == '#') continue;
        std::size_t eq = line.find('=');
        if (line.compare(a, 1, "n") != 0 || eq == std::string::npos)
            throw ParseError(lineno, static_cast<int>(a) + 1, "expected 'n = <int>'");
        try {
            n = std::stoi(line.substr(eq + 1));
        } catch (const std::exception&) {
            throw ParseError(lineno, static_cast<int>(eq) + 2, "expected 'n = <int>'");
        }
        break;
    }
    if (n < 1) throw InputError("system file must start with 'n = <int>', n >= 1");
    ParsedSystem<F> sys;
    sys.n = n;
    const OrderPtr order = x_ring(n);
    while (std::getline(in, line)) {
        ++lineno;
        std::size_t a = line.find_first_not_of(" \t\r");
        if (a == std::string::npos || line[a] == '#') continue;
        try {
            sys.polys.push_back(parse_polynomial(line, field, order));
        } catch (const ParseError& e) {
            throw ParseError(static_cast<std::size_t>(lineno), e.column, e.message);
        }
    }
    if (sys.polys.empty()) throw InputError("system file lists no polynomials");
    return sys;
}

template <class F>
ParsedSystem<F> read_system_file(const std::string& path, const F& field) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path + "'");
    return read_system(in, field);
}

}  // namespace chowforms
