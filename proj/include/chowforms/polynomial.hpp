#pragma once
#include <algorithm>
#include <map>
#include <unordered_map>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "fields.hpp"
#include "monomial.hpp"
#include "variables.hpp"

namespace chowforms {

// Multivariate polynomial over a field F, stored as a term map ordered by
// graded lexicographic comparison (lead term first).  Every polynomial keeps
// a shared pointer to its variable order; binary operations require equal
// orders.  Zero coefficients are never stored.
template <class F>
class SparsePolynomial {
public:
    using Field = F;
    using Coeff = typename F::Elem;
    using TermMap = std::map<Monomial, Coeff, GrlexGreater>;

private:
    F field_;
    OrderPtr order_;
    TermMap terms_;

    void check_compatible(const SparsePolynomial& o) const {
        if (!(field_ == o.field_)) throw Error("mixed coefficient fields");
        if (order_ != o.order_ && !(*order_ == *o.order_)) throw Error("mixed variable orders");
    }

public:
    SparsePolynomial(F field, OrderPtr order) : field_(std::move(field)), order_(std::move(order)) {}

    static SparsePolynomial zero(const F& field, const OrderPtr& order) {
        return SparsePolynomial(field, order);
    }
    static SparsePolynomial constant(const F& field, const OrderPtr& order, const Coeff& c) {
        SparsePolynomial p(field, order);
        if (!field.is_zero(c)) p.terms_.emplace(Monomial(order->size()), c);
        return p;
    }
    static SparsePolynomial from_int(const F& field, const OrderPtr& order, long v) {
        return constant(field, order, field.from_int(v));
    }
    static SparsePolynomial variable(const F& field, const OrderPtr& order, const Variable& v) {
        const int pos = order->index_of(v);
        if (pos < 0) throw Error("variable " + v.name() + " is not in this ring");
        Monomial m(order->size());
        m.deg = 1;
        m.e[static_cast<std::size_t>(pos)] = 1;
        SparsePolynomial p(field, order);
        p.terms_.emplace(std::move(m), field.one());
        return p;
    }
    static SparsePolynomial one_term(const F& field, const OrderPtr& order, Monomial m, const Coeff& c) {
        SparsePolynomial p(field, order);
        if (!field.is_zero(c)) p.terms_.emplace(std::move(m), c);
        return p;
    }

    const F& field() const { return field_; }
    const OrderPtr& order() const { return order_; }
    const TermMap& terms() const { return terms_; }
    std::size_t term_count() const { return terms_.size(); }

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const {
        return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_one());
    }
    Coeff constant_value() const {
        if (terms_.empty()) return field_.zero();
        if (!is_constant()) throw Error("polynomial is not constant");
        return terms_.begin()->second;
    }

    const Monomial& lead_monomial() const {
        if (terms_.empty()) throw ZeroPolynomialError();
        return terms_.begin()->first;
    }
    const Coeff& lead_coeff() const {
        if (terms_.empty()) throw ZeroPolynomialError();
        return terms_.begin()->second;
    }

    int total_degree() const { return terms_.empty() ? -1 : terms_.begin()->first.deg; }

    int degree_in(const Variable& v) const {
        const int pos = order_->index_of(v);
        if (pos < 0) return terms_.empty() ? -1 : 0;
        int d = terms_.empty() ? -1 : 0;
        for (const auto& [m, c] : terms_) d = std::max(d, m.e[static_cast<std::size_t>(pos)]);
        return d;
    }

    // Max over terms of the exponent sum across the given positions.
    int degree_in_positions(const std::vector<int>& positions) const {
        int d = terms_.empty() ? -1 : 0;
        for (const auto& [m, c] : terms_) {
            int s = 0;
            for (int p : positions) s += m.e[static_cast<std::size_t>(p)];
            d = std::max(d, s);
        }
        return d;
    }

    void add_term(const Monomial& m, const Coeff& c) {
        if (field_.is_zero(c)) return;
        auto [it, fresh] = terms_.emplace(m, c);
        if (!fresh) {
            it->second = field_.add(it->second, c);
            if (field_.is_zero(it->second)) terms_.erase(it);
        }
    }

    SparsePolynomial operator-() const {
        SparsePolynomial r(field_, order_);
        for (const auto& [m, c] : terms_) r.terms_.emplace(m, field_.neg(c));
        return r;
    }

    SparsePolynomial& operator+=(const SparsePolynomial& o) {
        check_compatible(o);
        for (const auto& [m, c] : o.terms_) add_term(m, c);
        return *this;
    }
    SparsePolynomial& operator-=(const SparsePolynomial& o) {
        check_compatible(o);
        for (const auto& [m, c] : o.terms_) add_term(m, field_.neg(c));
        return *this;
    }
    friend SparsePolynomial operator+(SparsePolynomial a, const SparsePolynomial& b) {
        a += b;
        return a;
    }
    friend SparsePolynomial operator-(SparsePolynomial a, const SparsePolynomial& b) {
        a -= b;
        return a;
    }

    friend SparsePolynomial operator*(const SparsePolynomial& a, const SparsePolynomial& b) {
        a.check_compatible(b);
        SparsePolynomial r(a.field_, a.order_);
        if (a.is_zero() || b.is_zero()) return r;
        const SparsePolynomial& outer = a.term_count() <= b.term_count() ? a : b;
        const SparsePolynomial& inner = a.term_count() <= b.term_count() ? b : a;
        for (const auto& [ma, ca] : outer.terms_) {
            for (const auto& [mb, cb] : inner.terms_) {
                r.add_term(mono_mul(ma, mb), r.field_.mul(ca, cb));
            }
        }
        return r;
    }

    SparsePolynomial scaled(const Coeff& c) const {
        SparsePolynomial r(field_, order_);
        if (field_.is_zero(c)) return r;
        for (const auto& [m, cc] : terms_) r.terms_.emplace(m, field_.mul(cc, c));
        return r;
    }

    friend SparsePolynomial operator*(const SparsePolynomial& a, long c) {
        return a.scaled(a.field_.from_int(c));
    }
    friend SparsePolynomial operator*(long c, const SparsePolynomial& a) { return a * c; }
    friend SparsePolynomial operator+(SparsePolynomial a, long c) {
        a += constant(a.field_, a.order_, a.field_.from_int(c));
        return a;
    }
    friend SparsePolynomial operator-(SparsePolynomial a, long c) { return std::move(a) + (-c); }

    SparsePolynomial monic() const {
        if (is_zero()) throw ZeroPolynomialError();
        return scaled(field_.inv(lead_coeff()));
    }

    SparsePolynomial pow(unsigned e) const {
        SparsePolynomial r = from_int(field_, order_, 1);
        SparsePolynomial b = *this;
        while (e) {
            if (e & 1) r = r * b;
            if (e >>= 1) b = b * b;
        }
        return r;
    }

    // this -= c * x^m * B, the inner step of division loops.
    void axpy_sub(const Monomial& m, const Coeff& c, const SparsePolynomial& B) {
        check_compatible(B);
        for (const auto& [mb, cb] : B.terms_) {
            add_term(mono_mul(m, mb), field_.neg(field_.mul(c, cb)));
        }
    }

    SparsePolynomial derivative(const Variable& v) const {
        const int pos = order_->index_of(v);
        SparsePolynomial r(field_, order_);
        if (pos < 0) return r;
        for (const auto& [m, c] : terms_) {
            const std::int32_t e = m.e[static_cast<std::size_t>(pos)];
            if (e == 0) continue;
            Monomial mm = m;
            mm.e[static_cast<std::size_t>(pos)] -= 1;
            mm.deg -= 1;
            r.add_term(mm, field_.mul(c, field_.from_int(e)));
        }
        return r;
    }

    friend bool operator==(const SparsePolynomial& a, const SparsePolynomial& b) {
        a.check_compatible(b);
        if (a.terms_.size() != b.terms_.size()) return false;
        auto ia = a.terms_.begin();
        auto ib = b.terms_.begin();
        for (; ia != a.terms_.end(); ++ia, ++ib) {
            if (!(ia->first == ib->first) || !a.field_.equal(ia->second, ib->second)) return false;
        }
        return true;
    }

    // Ring morphism: send each variable either to the identically named
    // variable of the target order or to an explicit image polynomial
    // (which must live in the target order).
    SparsePolynomial map_into(const OrderPtr& target,
                              const std::map<Variable, SparsePolynomial>& images) const {
        const std::size_t src_n = order_->size();
        std::vector<int> to_pos(src_n, -1);
        std::vector<const SparsePolynomial*> to_poly(src_n, nullptr);
        for (std::size_t i = 0; i < src_n; ++i) {
            const Variable& v = order_->at(i);
            auto it = images.find(v);
            if (it != images.end()) {
                to_poly[i] = &it->second;
            } else {
                to_pos[i] = target->index_of(v);
            }
        }
        std::unordered_map<std::size_t, std::vector<SparsePolynomial>> powers;
        SparsePolynomial acc(field_, target);
        for (const auto& [m, c] : terms_) {
            Monomial base(target->size());
            bool needs_poly = false;
            for (std::size_t i = 0; i < src_n; ++i) {
                const std::int32_t e = m.e[i];
                if (e == 0) continue;
                if (to_poly[i]) {
                    needs_poly = true;
                } else {
                    if (to_pos[i] < 0)
                        throw Error("variable " + order_->at(i).name() + " has no image in target ring");
                    base.e[static_cast<std::size_t>(to_pos[i])] += e;
                    base.deg += e;
                }
            }
            SparsePolynomial term = one_term(field_, target, base, c);
            if (needs_poly) {
                for (std::size_t i = 0; i < src_n; ++i) {
                    const std::int32_t e = m.e[i];
                    if (e == 0 || !to_poly[i]) continue;
                    auto& pw = powers[i];
                    if (pw.empty()) pw.push_back(from_int(field_, target, 1));
                    while (static_cast<std::int32_t>(pw.size()) <= e)
                        pw.push_back(pw.back() * (*to_poly[i]));
                    term = term * pw[static_cast<std::size_t>(e)];
                }
            }
            acc += term;
        }
        return acc;
    }

    // Identity renaming into a ring that contains every variable in use.
    SparsePolynomial rename_into(const OrderPtr& target) const {
        return map_into(target, {});
    }

    // Substitute a single variable by a polynomial of the same ring.
    SparsePolynomial substitute(const Variable& v, const SparsePolynomial& image) const {
        std::map<Variable, SparsePolynomial> images;
        images.emplace(v, image);
        return map_into(order_, images);
    }

    // Set the listed variables to zero.
    SparsePolynomial zero_vars(const std::vector<Variable>& vs) const {
        std::vector<int> pos;
        for (const auto& v : vs) {
            const int p = order_->index_of(v);
            if (p >= 0) pos.push_back(p);
        }
        SparsePolynomial r(field_, order_);
        for (const auto& [m, c] : terms_) {
            bool kill = false;
            for (int p : pos)
                if (m.e[static_cast<std::size_t>(p)] != 0) {
                    kill = true;
                    break;
                }
            if (!kill) r.terms_.emplace(m, c);
        }
        return r;
    }

    Coeff evaluate_full(const std::map<Variable, Coeff>& values) const {
        std::vector<const Coeff*> val(order_->size(), nullptr);
        for (const auto& [v, c] : values) {
            const int p = order_->index_of(v);
            if (p >= 0) val[static_cast<std::size_t>(p)] = &c;
        }
        Coeff acc = field_.zero();
        for (const auto& [m, c] : terms_) {
            Coeff t = c;
            for (std::size_t i = 0; i < m.e.size(); ++i) {
                for (std::int32_t k = 0; k < m.e[i]; ++k) {
                    if (!val[i]) throw Error("no value for variable " + order_->at(i).name());
                    t = field_.mul(t, *val[i]);
                }
            }
            acc = field_.add(acc, t);
        }
        return acc;
    }

    // Multiply each term by fresh^(d - its degree in `vars`).  The fresh
    // variable must belong to the ring and not occur in the polynomial.
    SparsePolynomial homogenize(const Variable& fresh, const std::vector<Variable>& vars,
                                int d) const {
        const int fpos = order_->index_of(fresh);
        if (fpos < 0) throw Error("homogenization variable is not in this ring");
        if (degree_in(fresh) > 0) throw Error("homogenization variable already occurs");
        std::vector<int> pos;
        for (const auto& v : vars) {
            const int p = order_->index_of(v);
            if (p >= 0) pos.push_back(p);
        }
        SparsePolynomial r(field_, order_);
        for (const auto& [m, c] : terms_) {
            int s = 0;
            for (int p : pos) s += m.e[static_cast<std::size_t>(p)];
            if (s > d) throw DegreeExceedsTargetError();
            Monomial mm = m;
            mm.e[static_cast<std::size_t>(fpos)] += d - s;
            mm.deg += d - s;
            r.terms_.emplace(std::move(mm), c);
        }
        return r;
    }

    // Coefficients with respect to one variable; entry k is the coefficient
    // of v^k, living in the same ring with the v-exponent cleared.
    std::vector<SparsePolynomial> coeffs_in(const Variable& v) const {
        const int pos = order_->index_of(v);
        const int d = degree_in(v);
        std::vector<SparsePolynomial> out;
        if (d < 0) return out;
        out.assign(static_cast<std::size_t>(d) + 1, SparsePolynomial(field_, order_));
        for (const auto& [m, c] : terms_) {
            const std::int32_t e = pos < 0 ? 0 : m.e[static_cast<std::size_t>(pos)];
            Monomial mm = m;
            if (pos >= 0) {
                mm.e[static_cast<std::size_t>(pos)] = 0;
                mm.deg -= e;
            }
            out[static_cast<std::size_t>(e)].terms_.emplace(std::move(mm), c);
        }
        return out;
    }

    static SparsePolynomial assemble(const F& field, const OrderPtr& order, const Variable& v,
                                     const std::vector<SparsePolynomial>& coeffs) {
        SparsePolynomial vp = variable(field, order, v);
        SparsePolynomial acc(field, order);
        SparsePolynomial vpow = from_int(field, order, 1);
        for (std::size_t k = 0; k < coeffs.size(); ++k) {
            if (k > 0) vpow = vpow * vp;
            acc += coeffs[k].rename_into(order) * vpow;
        }
        return acc;
    }

    std::vector<Variable> variables_in_use() const {
        std::vector<char> used(order_->size(), 0);
        for (const auto& [m, c] : terms_) {
            for (std::size_t i = 0; i < m.e.size(); ++i)
                if (m.e[i] > 0) used[i] = 1;
        }
        std::vector<Variable> out;
        for (std::size_t i = 0; i < used.size(); ++i)
            if (used[i]) out.push_back(order_->at(i));
        return out;
    }
};

// Exact division: returns Q with A = Q*B, or throws NotDivisibleError.  For
// exact quotients the greedy lead-term reduction never needs a remainder
// bucket: lead(A) = lead(Q) * lead(B) holds at every step.
template <class F>
SparsePolynomial<F> exact_div(const SparsePolynomial<F>& A, const SparsePolynomial<F>& B) {
    if (B.is_zero()) throw DivisionByZeroError();
    SparsePolynomial<F> Q(A.field(), A.order());
    if (A.is_zero()) return Q;
    if (B.is_constant()) return A.scaled(A.field().inv(B.constant_value()));
    SparsePolynomial<F> R = A;
    const Monomial& lmB = B.lead_monomial();
    const auto lcB = B.lead_coeff();
    while (!R.is_zero()) {
        const Monomial& lmR = R.lead_monomial();
        if (!mono_divides(lmB, lmR)) throw NotDivisibleError();
        Monomial m = mono_div(lmR, lmB);
        auto c = R.field().div(R.lead_coeff(), lcB);
        Q.add_term(m, c);
        R.axpy_sub(m, c, B);
    }
    return Q;
}

// ---- Rational-specific helpers -------------------------------------------

inline bool is_integer_poly(const SparsePolynomial<RationalField>& P) {
    for (const auto& [m, c] : P.terms())
        if (c.get_den() != 1) return false;
    return true;
}

// Least common multiple of the coefficient denominators (the minimal d > 0
// with d*P integral).
inline Integer minimal_denominator(const SparsePolynomial<RationalField>& P) {
    Integer den = 1;
    for (const auto& [m, c] : P.terms()) {
        Integer g;
        mpz_lcm(g.get_mpz_t(), den.get_mpz_t(), c.get_den().get_mpz_t());
        den = g;
    }
    return den;
}

// height(P) = max(ln d, max ln|coefficient of d*P|) with d the minimal
// denominator; heights are natural logs.
inline double poly_height(const SparsePolynomial<RationalField>& P) {
    if (P.is_zero()) throw ZeroPolynomialError();
    const Integer den = minimal_denominator(P);
    Integer maxabs = 0;
    for (const auto& [m, c] : P.terms()) {
        Integer v = abs(c.get_num() * (den / c.get_den()));
        if (v > maxabs) maxabs = v;
    }
    return std::max(log_abs(den), log_abs(maxabs));
}

// (content, primitive): content * primitive = P; primitive has integer
// coefficients with gcd 1 and positive leading coefficient.
inline std::pair<Rational, SparsePolynomial<RationalField>> content_and_primitive(
    const SparsePolynomial<RationalField>& P) {
    if (P.is_zero()) throw ZeroPolynomialError();
    const Integer den = minimal_denominator(P);
    Integer g = 0;
    for (const auto& [m, c] : P.terms()) {
        Integer v = c.get_num() * (den / c.get_den());
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
    }
    Rational content = make_rational(g, den);
    if (P.lead_coeff() < 0) content = -content;
    return {content, P.scaled(1 / content)};
}

// Reduce a rational polynomial modulo p.  Throws NotPAdmissibleError when a
// denominator vanishes mod p.
inline SparsePolynomial<PrimeField> reduce_mod_p(const SparsePolynomial<RationalField>& P,
                                                 const PrimeField& fp) {
    SparsePolynomial<PrimeField> r(fp, P.order());
    for (const auto& [m, c] : P.terms()) {
        const std::uint64_t dm = fp.from_integer(Integer(c.get_den()));
        if (dm == 0) throw NotPAdmissibleError();
        const std::uint64_t nm = fp.from_integer(Integer(c.get_num()));
        r.add_term(m, fp.mul(nm, fp.inv(dm)));
    }
    return r;
}

}  // namespace chowforms
