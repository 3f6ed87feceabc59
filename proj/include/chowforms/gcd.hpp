#pragma once
#include <algorithm>
#include <limits>
#include <map>
#include <optional>
#include <type_traits>
#include <vector>

#include "polynomial.hpp"

namespace chowforms {

// Coefficient of v^k, in the same ring with the v-exponent cleared.
template <class F>
SparsePolynomial<F> coefficient_of(const SparsePolynomial<F>& P, const Variable& v, int k) {
    const int pos = P.order()->index_of(v);
    SparsePolynomial<F> r(P.field(), P.order());
    if (pos < 0) {
        if (k == 0) return P;
        return r;
    }
    for (const auto& [m, c] : P.terms()) {
        if (m.e[static_cast<std::size_t>(pos)] != k) continue;
        Monomial mm = m;
        mm.e[static_cast<std::size_t>(pos)] = 0;
        mm.deg -= k;
        r.add_term(mm, c);
    }
    return r;
}

// P * v^k.
template <class F>
SparsePolynomial<F> shift_by_var(const SparsePolynomial<F>& P, const Variable& v, int k) {
    if (k == 0) return P;
    const int pos = P.order()->index_of(v);
    if (pos < 0) throw Error("shift variable is not in this ring");
    Monomial m(P.order()->size());
    m.e[static_cast<std::size_t>(pos)] = k;
    m.deg = k;
    return P * SparsePolynomial<F>::one_term(P.field(), P.order(), m, P.field().one());
}

namespace detail {

// Canonical associate used throughout the gcd recursion.  Over the rationals
// this is the integer primitive part (positive leading coefficient), which
// keeps every pseudo-remainder in pure integer arithmetic; a monic scaling
// here would drag rational coefficients through the whole sequence.  Over a
// finite field the monic scaling is the cheap equivalent.
template <class F>
SparsePolynomial<F> gcd_normal_form(const SparsePolynomial<F>& P) {
    if constexpr (std::is_same_v<F, RationalField>) {
        if (P.is_zero()) return P;
        return content_and_primitive(P).second;
    } else {
        return P.monic();
    }
}

// Pseudo-remainder with the exact classical multiplier:
//   lc_v(B)^(deg_v A - deg_v B + 1) * A = Q*B + R,  deg_v R < deg_v B.
template <class F>
SparsePolynomial<F> pseudo_rem(const SparsePolynomial<F>& A, const SparsePolynomial<F>& B,
                               const Variable& v) {
    const int dB = B.degree_in(v);
    const SparsePolynomial<F> lB = coefficient_of(B, v, dB);
    SparsePolynomial<F> R = A;
    int e = A.degree_in(v) - dB + 1;
    while (!R.is_zero()) {
        const int dR = R.degree_in(v);
        if (dR < dB) break;
        const SparsePolynomial<F> lR = coefficient_of(R, v, dR);
        R = lB * R - shift_by_var(lR, v, dR - dB) * B;
        --e;
    }
    if (e > 0) R = lB.pow(static_cast<unsigned>(e)) * R;
    return R;
}

// Dense Euclid for polynomials that involve a single shared variable.
template <class F>
SparsePolynomial<F> univariate_gcd(const SparsePolynomial<F>& A, const SparsePolynomial<F>& B,
                                   const Variable& v) {
    const F& k = A.field();
    auto to_dense = [&](const SparsePolynomial<F>& P) {
        std::vector<typename F::Elem> c(static_cast<std::size_t>(P.degree_in(v)) + 1, k.zero());
        const int pos = P.order()->index_of(v);
        for (const auto& [m, cc] : P.terms()) c[static_cast<std::size_t>(m.e[static_cast<std::size_t>(pos)])] = cc;
        return c;
    };
    auto trim = [&](std::vector<typename F::Elem>& c) {
        while (!c.empty() && k.is_zero(c.back())) c.pop_back();
    };
    std::vector<typename F::Elem> a = to_dense(A), b = to_dense(B);
    trim(a);
    trim(b);
    while (!b.empty()) {
        // a mod b with monic reduction
        const auto lb = k.inv(b.back());
        while (a.size() >= b.size()) {
            const auto q = k.mul(a.back(), lb);
            const std::size_t off = a.size() - b.size();
            for (std::size_t i = 0; i < b.size(); ++i)
                a[off + i] = k.sub(a[off + i], k.mul(q, b[i]));
            a.pop_back();
            trim(a);
            if (a.empty()) break;
        }
        std::swap(a, b);
    }
    SparsePolynomial<F> g(A.field(), A.order());
    const auto la = k.inv(a.back());
    const int pos = A.order()->index_of(v);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (k.is_zero(a[i])) continue;
        Monomial m(A.order()->size());
        m.e[static_cast<std::size_t>(pos)] = static_cast<std::int32_t>(i);
        m.deg = static_cast<std::int32_t>(i);
        g.add_term(m, k.mul(a[i], la));
    }
    return g;
}

template <class F>
SparsePolynomial<F> monic_gcd_impl(const SparsePolynomial<F>& A, const SparsePolynomial<F>& B);

// Gcd of the coefficient list of P with respect to v, in normal form.
// Smallest coefficients first and an early exit keep the common "content 1"
// case cheap.
template <class F>
SparsePolynomial<F> content_in(const SparsePolynomial<F>& P, const Variable& v) {
    std::vector<SparsePolynomial<F>> cs;
    for (auto& c : P.coeffs_in(v)) {
        if (!c.is_zero()) cs.push_back(std::move(c));
    }
    std::sort(cs.begin(), cs.end(), [](const auto& x, const auto& y) {
        return x.term_count() < y.term_count();
    });
    SparsePolynomial<F> g = gcd_normal_form(cs.front());
    for (std::size_t i = 1; i < cs.size() && !g.is_constant(); ++i)
        g = monic_gcd_impl(g, cs[i]);
    return g;
}

// Subresultant pseudo-remainder sequence; inputs are primitive with respect
// to v and have positive v-degree.  Returns the last nonzero element (its
// primitive part is the gcd of the inputs), or a constant 1 when the gcd is
// v-free.
template <class F>
SparsePolynomial<F> subresultant_last(SparsePolynomial<F> A, SparsePolynomial<F> B,
                                      const Variable& v) {
    const F& k = A.field();
    if (A.degree_in(v) < B.degree_in(v)) std::swap(A, B);
    SparsePolynomial<F> g = SparsePolynomial<F>::from_int(k, A.order(), 1);
    SparsePolynomial<F> h = g;
    while (true) {
        const int delta = A.degree_in(v) - B.degree_in(v);
        SparsePolynomial<F> R = detail::pseudo_rem(A, B, v);
        if (R.is_zero()) return B;
        if (R.degree_in(v) == 0)
            return SparsePolynomial<F>::from_int(k, A.order(), 1);
        A = B;
        B = exact_div(R, g * h.pow(static_cast<unsigned>(delta)));
        g = coefficient_of(A, v, A.degree_in(v));
        if (delta == 1) {
            h = g;
        } else if (delta > 1) {
            h = exact_div(g.pow(static_cast<unsigned>(delta)), h.pow(static_cast<unsigned>(delta - 1)));
        }
    }
}

using FpPoly = SparsePolynomial<PrimeField>;

// Substitute v = x.
inline FpPoly fp_eval_at(const FpPoly& P, const Variable& v, std::uint64_t x) {
    const int pos = P.order()->index_of(v);
    const int d = P.degree_in(v);
    if (pos < 0 || d <= 0) return P;
    const PrimeField& k = P.field();
    std::vector<std::uint64_t> xp(static_cast<std::size_t>(d) + 1);
    xp[0] = k.one();
    for (std::size_t i = 1; i < xp.size(); ++i) xp[i] = k.mul(xp[i - 1], x);
    FpPoly r(k, P.order());
    for (const auto& [m, c] : P.terms()) {
        const std::int32_t e = m.e[static_cast<std::size_t>(pos)];
        Monomial mm = m;
        mm.e[static_cast<std::size_t>(pos)] = 0;
        mm.deg -= e;
        r.add_term(mm, k.mul(c, xp[static_cast<std::size_t>(e)]));
    }
    return r;
}

inline std::optional<FpPoly> fp_gcd(const FpPoly& A, const FpPoly& B);

// Gcd of the coefficient list with respect to t, via fp_gcd.
inline std::optional<FpPoly> fp_content_in(const FpPoly& P, const Variable& t) {
    std::vector<FpPoly> cs;
    for (auto& c : P.coeffs_in(t)) {
        if (!c.is_zero()) cs.push_back(std::move(c));
    }
    std::sort(cs.begin(), cs.end(), [](const auto& x, const auto& y) {
        return x.term_count() < y.term_count();
    });
    FpPoly g = cs.front().monic();
    for (std::size_t i = 1; i < cs.size() && !g.is_constant(); ++i) {
        auto r = fp_gcd(g, cs[i]);
        if (!r) return std::nullopt;
        g = std::move(*r);
    }
    return g;
}

// Core of the evaluation/interpolation gcd.  Inputs have positive t-degree
// and trivial content with respect to t; gamma is a known multiple of
// lc_t(gcd).  Returns h = gamma * gcd / lc_t(gcd), found by fixing the least
// significant variable at field points, recursing, and rebuilding the
// dependence by Newton interpolation.  Sample points where gamma vanishes
// are skipped (they could lose the lead structure); images whose t-degree
// exceeds the running minimum come from unlucky points and are dropped.
// Interpolation stops early once an extra sample agrees; the division check
// in fp_gcd keeps that honest.
inline std::optional<FpPoly> fp_gcd_imposed(const FpPoly& A, const FpPoly& B,
                                            const Variable& t, const FpPoly& gamma) {
    const PrimeField& k = A.field();
    const OrderPtr& o = A.order();
    int zpos = -1;
    auto scan = [&](const FpPoly& P) {
        for (const auto& v : P.variables_in_use()) {
            if (v == t) continue;
            zpos = std::max(zpos, o->index_of(v));
        }
    };
    scan(A);
    scan(B);
    scan(gamma);
    if (zpos < 0) return univariate_gcd(A, B, t).scaled(gamma.constant_value());

    const Variable z = o->at(static_cast<std::size_t>(zpos));
    const int needed = gamma.degree_in(z) + std::min(A.degree_in(z), B.degree_in(z)) + 1;
    const FpPoly zvar = FpPoly::variable(k, o, z);

    FpPoly H(k, o);
    FpPoly N = FpPoly::from_int(k, o, 1);
    int have = 0;
    int min_deg = std::numeric_limits<int>::max();
    const std::uint64_t budget =
        std::min<std::uint64_t>(k.modulus() - 1, static_cast<std::uint64_t>(needed) + 64);
    for (std::uint64_t i = 0; i < budget && have < needed; ++i) {
        const std::uint64_t x = k.modulus() - 1 - i;
        const FpPoly gx = fp_eval_at(gamma, z, x);
        if (gx.is_zero()) continue;
        const FpPoly Ax = fp_eval_at(A, z, x);
        const FpPoly Bx = fp_eval_at(B, z, x);
        if (Ax.is_zero() || Bx.is_zero()) continue;
        FpPoly hx(k, o);
        if (Ax.degree_in(t) == 0 || Bx.degree_in(t) == 0) {
            // A t-free image forces a t-free gcd there, so h evaluates to
            // gamma itself.
            hx = gx;
        } else {
            auto r = fp_gcd_imposed(Ax, Bx, t, gx);
            if (!r) return std::nullopt;
            hx = std::move(*r);
        }
        const int dt = hx.degree_in(t);
        if (dt > min_deg) continue;
        if (dt < min_deg) {
            min_deg = dt;
            H = FpPoly(k, o);
            N = FpPoly::from_int(k, o, 1);
            have = 0;
        }
        FpPoly diff = std::move(hx);
        diff -= fp_eval_at(H, z, x);
        if (diff.is_zero()) {
            if (have >= 1) return H;
            ++have;
            continue;
        }
        const std::uint64_t nx = fp_eval_at(N, z, x).constant_value();
        H += diff.scaled(k.inv(nx)) * N;
        N = N * (zvar - FpPoly::constant(k, o, x));
        ++have;
    }
    if (have < needed) return std::nullopt;
    return H;
}

// Monic gcd over a word-size prime field by evaluation and interpolation.
// Every large intermediate object is a univariate image; only the gcd
// itself is ever interpolated.  The primitive part is certified by trial
// division before use, so a std::nullopt (points exhausted over a tiny
// field, or a failed check) is the only failure mode and the caller can
// fall back to the subresultant path.
inline std::optional<FpPoly> fp_gcd(const FpPoly& A, const FpPoly& B) {
    if (A.is_zero() && B.is_zero()) throw BothZeroError();
    if (A.is_zero()) return B.monic();
    if (B.is_zero()) return A.monic();
    const PrimeField& k = A.field();
    if (A.is_constant() || B.is_constant()) return FpPoly::from_int(k, A.order(), 1);
    if (A == B) return A.monic();

    const auto va = A.variables_in_use();
    const auto vb = B.variables_in_use();
    if (va.size() == 1 && vb.size() == 1 && va[0] == vb[0])
        return univariate_gcd(A, B, va[0]);

    const int pa = A.order()->index_of(va.front());
    const int pb = B.order()->index_of(vb.front());
    const Variable t = pa <= pb ? va.front() : vb.front();

    if (A.degree_in(t) == 0 || B.degree_in(t) == 0) {
        // One side is t-free, so any common divisor is t-free and divides
        // every t-coefficient of the other side.
        const FpPoly& F = A.degree_in(t) == 0 ? A : B;
        const FpPoly& G = A.degree_in(t) == 0 ? B : A;
        auto cont = fp_content_in(G, t);
        if (!cont) return std::nullopt;
        return fp_gcd(F, *cont);
    }

    auto contA = fp_content_in(A, t);
    auto contB = fp_content_in(B, t);
    if (!contA || !contB) return std::nullopt;
    const FpPoly A1 = contA->is_constant() ? A : exact_div(A, *contA);
    const FpPoly B1 = contB->is_constant() ? B : exact_div(B, *contB);
    auto cg = fp_gcd(*contA, *contB);
    if (!cg) return std::nullopt;

    const FpPoly lcA = coefficient_of(A1, t, A1.degree_in(t));
    const FpPoly lcB = coefficient_of(B1, t, B1.degree_in(t));
    const FpPoly& gamma = lcA.term_count() <= lcB.term_count() ? lcA : lcB;
    auto H = fp_gcd_imposed(A1, B1, t, gamma);
    if (!H) return std::nullopt;

    FpPoly g = FpPoly::from_int(k, A.order(), 1);
    if (H->degree_in(t) > 0) {
        auto ch = fp_content_in(*H, t);
        if (!ch) return std::nullopt;
        g = ch->is_constant() ? std::move(*H) : exact_div(*H, *ch);
        try {
            exact_div(A1, g);
            exact_div(B1, g);
        } catch (const NotDivisibleError&) {
            return std::nullopt;
        }
    }
    return (*cg * g).monic();
}

// Rational number reconstruction: the unique n/d with n = v*d (mod M) and
// |n|, d <= sqrt(M/2), when it exists (Wang's algorithm).  The remainder
// sequence of (M, v) is walked until it drops below the bound; a result
// that is not in lowest terms means no admissible pair exists.
inline std::optional<Rational> rat_reconstruct(const Integer& v, const Integer& M) {
    Integer r0 = M, r1 = v, s0 = 0, s1 = 1;
    Integer bound;
    mpz_sqrt(bound.get_mpz_t(), Integer(M / 2).get_mpz_t());
    while (r1 > bound) {
        const Integer q = r0 / r1;
        Integer r2 = r0 - q * r1;
        r0 = r1;
        r1 = std::move(r2);
        Integer s2 = s0 - q * s1;
        s0 = s1;
        s1 = std::move(s2);
    }
    Integer n = r1, d = s1;
    if (d < 0) {
        d = -d;
        n = -n;
    }
    if (d == 0 || d > bound) return std::nullopt;
    Integer g;
    mpz_gcd(g.get_mpz_t(), n.get_mpz_t(), d.get_mpz_t());
    if (g != 1) return std::nullopt;
    Rational out(n);
    out /= Rational(d);
    return out;
}

// Modular gcd over the rationals.  Inputs are nonconstant integer
// polynomials in normal form.  Gcd images over word-size prime fields never
// grow coefficients, so the work per prime is cheap; the images are
// glued by Chinese remaindering with the leading coefficient imposed
// (lc(gcd) divides gcd(lc A, lc B)), read off in the symmetric range, and
// certified by trial division.  Images whose lead monomial is too large
// come from unlucky primes and are dropped; the certificate alone carries
// correctness.  Returns false when the prime budget runs out, in which case
// the caller falls back to the classical subresultant path.
inline bool modular_gcd(const SparsePolynomial<RationalField>& A,
                        const SparsePolynomial<RationalField>& B,
                        SparsePolynomial<RationalField>& out) {
    using QPoly = SparsePolynomial<RationalField>;
    const Integer la = A.lead_coeff().get_num();
    const Integer lb = B.lead_coeff().get_num();
    Integer gamma;
    mpz_gcd(gamma.get_mpz_t(), la.get_mpz_t(), lb.get_mpz_t());

    std::map<Monomial, Integer, GrlexGreater> residues;
    Integer modulus = 1;
    Monomial best_lm;
    bool have_image = false;
    QPoly prev_lift(A.field(), A.order());
    bool prev_valid = false;

    std::uint64_t p = PrimeField::max_modulus - 1;  // 2^61 - 1, an odd prime
    for (int used = 0, iters = 0; used < 128 && iters < 4096; ++iters, p -= 2) {
        while (!detail::is_prime_u64(p)) p -= 2;
        if (mpz_fdiv_ui(la.get_mpz_t(), p) == 0 || mpz_fdiv_ui(lb.get_mpz_t(), p) == 0) continue;
        const PrimeField fp(p);
        const auto gp = monic_gcd_impl(reduce_mod_p(A, fp), reduce_mod_p(B, fp));
        if (gp.is_constant()) {
            // The reduction of the true gcd keeps its lead monomial (p does
            // not divide gamma) and divides this image, so the gcd is 1.
            out = QPoly::from_int(A.field(), A.order(), 1);
            return true;
        }
        const Monomial& lm = gp.lead_monomial();
        if (have_image) {
            if (grlex_greater(lm, best_lm)) continue;
            if (grlex_greater(best_lm, lm)) {
                residues.clear();
                modulus = 1;
                prev_valid = false;
            }
        }
        have_image = true;
        best_lm = lm;

        const auto scaled = gp.scaled(fp.from_integer(gamma));
        const std::uint64_t minv = fp.inv(mpz_fdiv_ui(modulus.get_mpz_t(), p));
        auto crt = [&](Integer& r, std::uint64_t vp) {
            const std::uint64_t t = fp.mul(fp.sub(vp, mpz_fdiv_ui(r.get_mpz_t(), p)), minv);
            r += modulus * Integer(t);
        };
        for (auto& [m, r] : residues) {
            const auto it = scaled.terms().find(m);
            crt(r, it == scaled.terms().end() ? 0 : it->second);
        }
        for (const auto& [m, c] : scaled.terms()) {
            if (residues.count(m)) continue;
            Integer r = 0;
            crt(r, c);
            residues.emplace(m, std::move(r));
        }
        modulus *= p;
        ++used;

        QPoly lift(A.field(), A.order());
        const Integer half = modulus / 2;
        for (const auto& [m, r] : residues) {
            const Integer c = r > half ? Integer(r - modulus) : r;
            lift.add_term(m, Rational(c));
        }
        if (prev_valid && lift == prev_lift) {
            const QPoly cand = content_and_primitive(lift).second;
            try {
                exact_div(A, cand);
                exact_div(B, cand);
                out = cand;
                return true;
            } catch (const NotDivisibleError&) {
            }
        }
        prev_lift = std::move(lift);
        prev_valid = true;
    }
    return false;
}

// Returns the gcd in normal form (see gcd_normal_form), not monic.
template <class F>
SparsePolynomial<F> monic_gcd_impl(const SparsePolynomial<F>& A0, const SparsePolynomial<F>& B0) {
    if (A0.is_zero() && B0.is_zero()) throw BothZeroError();
    if (A0.is_zero()) return gcd_normal_form(B0);
    if (B0.is_zero()) return gcd_normal_form(A0);
    const F& k = A0.field();
    if (A0.is_constant() || B0.is_constant())
        return SparsePolynomial<F>::from_int(k, A0.order(), 1);

    const SparsePolynomial<F> A = gcd_normal_form(A0);
    const SparsePolynomial<F> B = gcd_normal_form(B0);
    if (A == B) return A;

    const auto va = A.variables_in_use();
    const auto vb = B.variables_in_use();
    if constexpr (std::is_same_v<F, RationalField>) {
        SparsePolynomial<F> g(k, A.order());
        if (modular_gcd(A, B, g)) return g;
    } else if constexpr (std::is_same_v<F, PrimeField>) {
        if (auto g = fp_gcd(A, B)) return std::move(*g);
    } else {
        if (va.size() == 1 && vb.size() == 1 && va[0] == vb[0])
            return univariate_gcd(A, B, va[0]);
    }

    // Main variable: the most significant position used by either input.
    const int pa = A.order()->index_of(va.front());
    const int pb = B.order()->index_of(vb.front());
    const Variable v = pa <= pb ? va.front() : vb.front();

    const SparsePolynomial<F> contA = content_in(A, v);
    const SparsePolynomial<F> contB = content_in(B, v);
    const SparsePolynomial<F> ppA = exact_div(A, contA);
    const SparsePolynomial<F> ppB = exact_div(B, contB);
    SparsePolynomial<F> c = monic_gcd_impl(contA, contB);

    SparsePolynomial<F> pp_gcd = SparsePolynomial<F>::from_int(k, A.order(), 1);
    if (ppA.degree_in(v) > 0 && ppB.degree_in(v) > 0) {
        SparsePolynomial<F> last = subresultant_last(ppA, ppB, v);
        if (last.degree_in(v) > 0) pp_gcd = exact_div(last, content_in(last, v));
    }
    return gcd_normal_form(c * pp_gcd);
}

}  // namespace detail

// Monic gcd under the ambient graded lexicographic order.  gcd(F, 0) is the
// monic scaling of F; gcd(0, 0) is undefined.
template <class F>
SparsePolynomial<F> monic_gcd(const SparsePolynomial<F>& A, const SparsePolynomial<F>& B) {
    return detail::monic_gcd_impl(A, B).monic();
}

// Squarefree test over a perfect field: P is squarefree (over the algebraic
// closure) iff gcd(P, dP/dv : every variable in use) is constant.
template <class F>
bool is_squarefree(const SparsePolynomial<F>& P) {
    if (P.is_zero()) return false;
    if (P.is_constant()) return true;
    SparsePolynomial<F> g = detail::gcd_normal_form(P);
    for (const auto& v : P.variables_in_use()) {
        if (g.is_constant()) return true;
        g = detail::monic_gcd_impl(g, P.derivative(v));
    }
    return g.is_constant();
}

}  // namespace chowforms
