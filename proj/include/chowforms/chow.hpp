#pragma once
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gcd.hpp"
#include "matrix.hpp"
#include "rng.hpp"
#include "text_io.hpp"

namespace chowforms {

// A Chow form: a polynomial in r+1 blocks U_i = (U_{i,0},...,U_{i,n}),
// multi-homogeneous of degree D in each block.  r = -1 encodes the empty
// set; its polynomial is the constant 1 in the variable-free ring.
template <class F>
struct ChowForm {
    SparsePolynomial<F> poly;
    int n = 0;
    int r = -1;
    int D = 0;

    bool is_empty() const { return r < 0; }

    bool operator==(const ChowForm& o) const {
        return n == o.n && r == o.r && D == o.D && poly == o.poly;
    }
};

template <class F>
ChowForm<F> chow_empty(const F& field, int n) {
    return {SparsePolynomial<F>::from_int(field, chow_ring(n, -1), 1), n, -1, 0};
}

// Positions of U_{i,0..n} inside the polynomial's variable order.
inline std::vector<int> block_positions(const OrderPtr& order, int n, int i) {
    std::vector<int> pos;
    for (int j = 0; j <= n; ++j) {
        const int p = order->index_of(var_u(i, j));
        if (p >= 0) pos.push_back(p);
    }
    return pos;
}

template <class F>
int block_degree(const SparsePolynomial<F>& P, int n, int i) {
    return P.degree_in_positions(block_positions(P.order(), n, i));
}

// Wraps a polynomial as a Chow form of dimension r, reading D off block 0;
// nonzero constants collapse to the empty form.
template <class F>
ChowForm<F> make_chow(SparsePolynomial<F> poly, int n, int r) {
    if (poly.is_zero()) throw ZeroPolynomialError();
    if (poly.is_constant()) return chow_empty(poly.field(), n);
    const int D = block_degree(poly, n, 0);
    return {std::move(poly), n, r, D};
}

template <class F>
ChowForm<F> chow_ambient(const F& field, int n) {
    if (n < 1) throw InputError("ambient dimension must be >= 1");
    const OrderPtr ring = chow_ring(n, n);
    PolyMatrix<F> m(field, ring, n + 1);
    for (int i = 0; i <= n; ++i)
        for (int j = 0; j <= n; ++j)
            m.at(i, j) = SparsePolynomial<F>::variable(field, ring, var_u(i, j));
    return {m.determinant(), n, n, 1};
}

// Product of the hyperplane forms U_{0,0} + x_1 U_{0,1} + ... + x_n U_{0,n}
// over the given points; the dimension-0 oracle.
template <class F>
ChowForm<F> chow_of_points(const F& field, int n,
                           const std::vector<std::vector<typename F::Elem>>& points) {
    for (std::size_t a = 0; a < points.size(); ++a) {
        if (static_cast<int>(points[a].size()) != n) throw InputError("point arity mismatch");
        for (std::size_t b = a + 1; b < points.size(); ++b) {
            bool same = true;
            for (int j = 0; j < n; ++j)
                if (!field.equal(points[a][static_cast<std::size_t>(j)],
                                 points[b][static_cast<std::size_t>(j)])) {
                    same = false;
                    break;
                }
            if (same) throw DuplicatePointError();
        }
    }
    if (points.empty()) return chow_empty(field, n);
    const OrderPtr ring = chow_ring(n, 0);
    SparsePolynomial<F> prod = SparsePolynomial<F>::from_int(field, ring, 1);
    for (const auto& pt : points) {
        SparsePolynomial<F> lin = SparsePolynomial<F>::variable(field, ring, var_u(0, 0));
        for (int j = 1; j <= n; ++j)
            lin += SparsePolynomial<F>::variable(field, ring, var_u(0, j))
                       .scaled(pt[static_cast<std::size_t>(j - 1)]);
        prod = prod * lin;
    }
    return {std::move(prod), n, 0, static_cast<int>(points.size())};
}

template <class F>
bool is_multi_homogeneous(const ChowForm<F>& C) {
    if (C.is_empty()) return true;
    std::vector<std::vector<int>> pos;
    for (int i = 0; i <= C.r; ++i) pos.push_back(block_positions(C.poly.order(), C.n, i));
    for (const auto& [m, c] : C.poly.terms()) {
        (void)c;
        for (int i = 0; i <= C.r; ++i) {
            int s = 0;
            for (int p : pos[static_cast<std::size_t>(i)]) s += m.e[static_cast<std::size_t>(p)];
            if (s != C.D) return false;
        }
    }
    return true;
}

// No monomial may exceed U_{0,0}^D ... U_{r,r}^D in the graded lex order.
template <class F>
bool monomial_bound_ok(const ChowForm<F>& C) {
    if (C.is_empty()) return true;
    Monomial bound(C.poly.order()->size());
    for (int i = 0; i <= C.r; ++i) {
        const int p = C.poly.order()->index_of(var_u(i, i));
        bound.e[static_cast<std::size_t>(p)] = C.D;
        bound.deg += C.D;
    }
    for (const auto& [m, c] : C.poly.terms()) {
        (void)c;
        if (grlex_greater(m, bound)) return false;
    }
    return true;
}

// Normal position: the leading monomial is exactly U_{0,0}^D ... U_{r,r}^D.
template <class F>
bool is_normal_position(const ChowForm<F>& C) {
    if (C.is_empty()) return true;
    Monomial want(C.poly.order()->size());
    for (int i = 0; i <= C.r; ++i) {
        const int p = C.poly.order()->index_of(var_u(i, i));
        want.e[static_cast<std::size_t>(p)] = C.D;
        want.deg += C.D;
    }
    return C.poly.lead_monomial() == want;
}

template <class F>
ChowForm<F> normalize_chow(const ChowForm<F>& C) {
    if (C.is_empty()) return chow_empty(C.poly.field(), C.n);
    if (!is_normal_position(C)) throw NotNormalPositionError();
    return {C.poly.monic(), C.n, C.r, C.D};
}

// Squarefree certificate for Chow polynomials: every irreducible factor of a
// Chow form involves U_{0,0}, so gcd(C, dC/dU_{0,0}) = 1 is both necessary
// and sufficient.
template <class F>
bool chow_squarefree_ok(const ChowForm<F>& C) {
    if (C.is_empty()) return true;
    const SparsePolynomial<F> d = C.poly.derivative(var_u(0, 0));
    if (d.is_zero()) return false;
    return monic_gcd(C.poly, d).is_constant();
}

// Integer-coefficient, content-1, positive-leading-coefficient representative.
inline ChowForm<RationalField> primitive_chow(const ChowForm<RationalField>& C) {
    if (C.is_empty()) return C;
    auto [content, prim] = content_and_primitive(C.poly);
    (void)content;
    return {std::move(prim), C.n, C.r, C.D};
}

// ---- characteristic polynomial ----------------------------------------------

// P = (-1)^D C(v_0,...,v_r) with v_i = (U_{i,0} - T_i, U_{i,1},...,U_{i,n}),
// in the interleaved order T_0 > U_{0,0} > ... > U_{0,n} > T_1 > ...
template <class F>
SparsePolynomial<F> characteristic_polynomial(const ChowForm<F>& C) {
    const F& k = C.poly.field();
    const OrderPtr ring = char_ring(C.n, C.r);
    if (C.is_empty()) return C.poly.rename_into(ring);
    std::map<Variable, SparsePolynomial<F>> images;
    for (int i = 0; i <= C.r; ++i)
        images.emplace(var_u(i, 0),
                       SparsePolynomial<F>::variable(k, ring, var_u(i, 0)) -
                           SparsePolynomial<F>::variable(k, ring, var_t(i)));
    SparsePolynomial<F> P = C.poly.map_into(ring, images);
    if (C.D % 2 != 0) P = -P;
    return P;
}

// ---- union -------------------------------------------------------------------

// Squarefree part of C1*C2: the Chow form of the union of the two varieties.
template <class F>
ChowForm<F> union_chow(const ChowForm<F>& C1, const ChowForm<F>& C2) {
    if (C1.is_empty()) return C2;
    if (C2.is_empty()) return C1;
    if (C1.n != C2.n || C1.r != C2.r) throw InputError("union needs matching n and r");
    const SparsePolynomial<F> P = C1.poly * C2.poly;
    const SparsePolynomial<F> Q = monic_gcd(P, P.derivative(var_u(0, 0)));
    return make_chow(exact_div(P, Q), C1.n, C1.r);
}

// ---- generic projection -------------------------------------------------------

inline OrderPtr projection_ring(int n, int blocks) {
    std::vector<Variable> v;
    for (int j = 1; j <= n; ++j) v.push_back(var_x(j));
    for (const auto& l : l_block_vars(n, blocks)) v.push_back(l);
    return make_order(v);
}

// Substitute U_{i,0} -> l_{i,1}X_1 + ... + l_{i,n}X_n and U_{i,j} -> -l_{i,j}:
// the result cuts out the cylinder over the image of the variety under the
// generic linear projection attached to the l parameters.
template <class F>
SparsePolynomial<F> generic_projection_chow(const ChowForm<F>& C) {
    const F& k = C.poly.field();
    const OrderPtr ring = projection_ring(C.n, C.r + 1);
    if (C.is_empty()) return C.poly.rename_into(ring);
    std::map<Variable, SparsePolynomial<F>> images;
    for (int i = 0; i <= C.r; ++i) {
        SparsePolynomial<F> L(k, ring);
        for (int j = 1; j <= C.n; ++j) {
            L += SparsePolynomial<F>::variable(k, ring, var_l(i, j)) *
                 SparsePolynomial<F>::variable(k, ring, var_x(j));
            images.emplace(var_u(i, j), -SparsePolynomial<F>::variable(k, ring, var_l(i, j)));
        }
        images.emplace(var_u(i, 0), std::move(L));
    }
    return C.poly.map_into(ring, images);
}

// Coefficients of the generic projection with respect to the l-monomials: a
// family of polynomials in X whose common zero set is the variety of C.
template <class F>
std::vector<SparsePolynomial<F>> equations_from_chow(const ChowForm<F>& C) {
    const F& k = C.poly.field();
    const SparsePolynomial<F> G = generic_projection_chow(C);
    const OrderPtr xring = x_ring(C.n);
    if (G.is_zero()) return {};
    const OrderPtr gring = G.order();
    std::vector<int> xpos, lpos;
    for (int p = 0; p < static_cast<int>(gring->size()); ++p)
        (gring->at(p).kind == VarKind::X ? xpos : lpos).push_back(p);
    std::map<Monomial, SparsePolynomial<F>, GrlexGreater> groups;
    for (const auto& [m, c] : G.terms()) {
        Monomial lpart(gring->size()), xmono(xring->size());
        for (int p : lpos) {
            lpart.e[static_cast<std::size_t>(p)] = m.e[static_cast<std::size_t>(p)];
            lpart.deg += m.e[static_cast<std::size_t>(p)];
        }
        for (int p : xpos) {
            const Variable v = gring->at(p);
            const int q = xring->index_of(v);
            xmono.e[static_cast<std::size_t>(q)] = m.e[static_cast<std::size_t>(p)];
            xmono.deg += m.e[static_cast<std::size_t>(p)];
        }
        auto [it, fresh] = groups.try_emplace(lpart, k, xring);
        (void)fresh;
        it->second.add_term(xmono, c);
    }
    std::vector<SparsePolynomial<F>> out;
    for (auto& [lm, poly] : groups) {
        (void)lm;
        bool dup = false;
        for (const auto& seen : out)
            if (seen == poly) {
                dup = true;
                break;
            }
        if (!dup) out.push_back(std::move(poly));
    }
    return out;
}

// ---- separation ---------------------------------------------------------------

// Split a normalized Chow form against a hypersurface V(G): returns
// (components inside V(G), remaining components), both normalized.
template <class F>
std::pair<ChowForm<F>, ChowForm<F>> separate_hypersurface_chow(const ChowForm<F>& C,
                                                               const SparsePolynomial<F>& G) {
    const F& k = C.poly.field();
    const ChowForm<F> empty = chow_empty(k, C.n);
    if (C.is_empty()) return {empty, empty};
    if (G.is_zero()) return {C, empty};
    if (G.is_constant()) return {empty, C};

    // Ring for P and the gcd: interleaved T/U variables, any l parameters of
    // G appended last so the gcd over the l-extended ring agrees with the
    // gcd over the T/U subring.
    std::vector<Variable> lvars;
    for (const auto& v : G.variables_in_use())
        if (v.kind == VarKind::L) lvars.push_back(v);
    const OrderPtr cring = char_ring(C.n, C.r);
    const OrderPtr ext = lvars.empty() ? cring : extend_order(cring, lvars);
    SparsePolynomial<F> P = characteristic_polynomial(C).rename_into(ext);

    // Over the rationals, work with the primitive integer scaling of P.  The
    // gcd below is monic regardless, and the quotient P/Q picks up exactly
    // the removed content, restored before finishing.
    typename F::Elem pscale = k.one();
    if constexpr (std::is_same_v<F, RationalField>) {
        auto cp = content_and_primitive(P);
        P = std::move(cp.second);
        pscale = cp.first;
    }

    // Homogenize G in its X variables to its X-degree with the extra
    // variable X_0, then evaluate at the derivative vector of P.
    std::vector<Variable> xvars;
    std::vector<int> xpos;
    for (int p = 0; p < static_cast<int>(G.order()->size()); ++p)
        if (G.order()->at(p).kind == VarKind::X) {
            xvars.push_back(G.order()->at(p));
            xpos.push_back(p);
        }
    const int dX = G.degree_in_positions(xpos);
    std::vector<Variable> hvars;
    hvars.push_back(var_x(0));
    for (const auto& v : xvars) hvars.push_back(v);
    for (const auto& v : lvars) hvars.push_back(v);
    const OrderPtr hring = make_order(hvars);
    const SparsePolynomial<F> Gh = G.rename_into(hring).homogenize(var_x(0), xvars, dX);

    std::map<Variable, SparsePolynomial<F>> images;
    images.emplace(var_x(0), P.derivative(var_t(0)));
    for (int j = 1; j <= C.n; ++j) images.emplace(var_x(j), -P.derivative(var_u(0, j)));
    const SparsePolynomial<F> GP = Gh.map_into(ext, images);

    const SparsePolynomial<F> Q = monic_gcd(P, GP);
    const SparsePolynomial<F> R = exact_div(P, Q);

    std::vector<Variable> tvars;
    for (int i = 0; i <= C.r; ++i) tvars.push_back(var_t(i));
    const OrderPtr uring = chow_ring(C.n, C.r);
    auto finish = [&](const SparsePolynomial<F>& S) -> ChowForm<F> {
        const int dT = S.degree_in(var_t(0));
        SparsePolynomial<F> s0 = S.zero_vars(tvars);
        if (s0.is_zero()) throw ZeroPolynomialError();
        for (const auto& v : s0.variables_in_use())
            if (v.kind == VarKind::L) throw NotNormalPositionError();
        if (dT % 2 != 0) s0 = -s0;
        ChowForm<F> out = make_chow(s0.rename_into(uring), C.n, C.r);
        if ((out.is_empty() ? 0 : out.D) != dT) throw NotNormalPositionError();
        return out;
    };
    return {finish(Q), finish(R.scaled(pscale))};
}

// Split a normalized Chow form against the variety of another Chow form,
// by separating against the generic projection of the latter.
template <class F>
std::pair<ChowForm<F>, ChowForm<F>> separate_chow(const ChowForm<F>& C, const ChowForm<F>& W) {
    const F& k = C.poly.field();
    if (W.is_empty()) return {chow_empty(k, C.n), C};
    if (C.is_empty()) return {chow_empty(k, C.n), chow_empty(k, C.n)};
    return separate_hypersurface_chow(C, generic_projection_chow(W));
}

// ---- degree-d Chow forms --------------------------------------------------------

// Companion matrix of P/a scaled by a, where a is the leading coefficient of
// P in v and D its v-degree: a on the subdiagonal, -(coefficient of v^i) in
// the last column.
template <class F>
PolyMatrix<F> pseudo_companion(const SparsePolynomial<F>& P, const Variable& v) {
    const int D = P.degree_in(v);
    if (D < 1) throw ZeroLeadingCoefficientError();
    const F& k = P.field();
    const OrderPtr ring = P.order();
    PolyMatrix<F> M(k, ring, D);
    const SparsePolynomial<F> a = coefficient_of(P, v, D);
    for (int i = 0; i + 1 < D; ++i) M.at(i + 1, i) = a;
    for (int i = 0; i < D; ++i) M.at(i, D - 1) = -coefficient_of(P, v, i);
    return M;
}

template <class F>
struct DegreeDValue {
    SparsePolynomial<F> poly;  // in blocks U_0..U_{r-1}
    int source_d = 0;
};

// How degree_d_chow_form does its work.  Auto switches to modular evaluation
// and interpolation over the rationals when the matrix route would blow up;
// SymbolicDense instantiates every generic coefficient of degree d (the
// reference path), SymbolicSparse only those in F's support; Interpolate
// forces the modular route.
enum class DegreeDStrategy { Auto, SymbolicDense, SymbolicSparse, Interpolate };

namespace detail {

// All exponent tuples (a_0,...,a_n) with sum d, in lexicographic order;
// the tuple's position is the index of its generic coefficient V_k.
inline std::vector<std::vector<int>> degree_tuples(int n, int d) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur(static_cast<std::size_t>(n) + 1, 0);
    auto rec = [&](auto&& self, int pos, int left) -> void {
        if (pos == n) {
            cur[static_cast<std::size_t>(pos)] = left;
            out.push_back(cur);
            return;
        }
        for (int a = left; a >= 0; --a) {
            cur[static_cast<std::size_t>(pos)] = a;
            self(self, pos + 1, left - a);
        }
        cur[static_cast<std::size_t>(pos)] = 0;
    };
    rec(rec, 0, d);
    return out;
}

template <class F>
PolyMatrix<F> poly_mat_mul(const PolyMatrix<F>& A, const PolyMatrix<F>& B) {
    const int n = A.size();
    const F& k = A.at(0, 0).field();
    PolyMatrix<F> R(k, A.at(0, 0).order(), n);
    for (int i = 0; i < n; ++i)
        for (int l = 0; l < n; ++l) {
            if (A.at(i, l).is_zero()) continue;
            for (int j = 0; j < n; ++j) {
                if (B.at(l, j).is_zero()) continue;
                R.at(i, j) += A.at(i, l) * B.at(l, j);
            }
        }
    return R;
}

template <class F>
PolyMatrix<F> poly_mat_identity(const F& k, const OrderPtr& ring, int n) {
    PolyMatrix<F> R(k, ring, n);
    for (int i = 0; i < n; ++i) R.at(i, i) = SparsePolynomial<F>::from_int(k, ring, 1);
    return R;
}

template <class F>
typename F::Elem elem_pow(const F& k, typename F::Elem b, int e) {
    typename F::Elem r = k.one();
    while (e > 0) {
        if (e & 1) r = k.mul(r, b);
        b = k.mul(b, b);
        e >>= 1;
    }
    return r;
}

// Value of P at a point given by position in P's variable order.
template <class F>
typename F::Elem value_at(const F& k, const SparsePolynomial<F>& P,
                          const std::vector<typename F::Elem>& vals) {
    typename F::Elem acc = k.zero();
    for (const auto& [m, c] : P.terms()) {
        typename F::Elem t = c;
        for (std::size_t i = 0; i < m.e.size(); ++i)
            if (m.e[i] > 0) t = k.mul(t, elem_pow(k, vals[i], m.e[i]));
        acc = k.add(acc, t);
    }
    return acc;
}

// ---- dense univariate arithmetic on coefficient vectors (index = degree) ---

template <class F>
int uv_deg(const F& k, const std::vector<typename F::Elem>& A) {
    for (int i = static_cast<int>(A.size()) - 1; i >= 0; --i)
        if (!k.is_zero(A[static_cast<std::size_t>(i)])) return i;
    return -1;
}

// A*B reduced modulo the monic chi; inputs have degree < deg chi.
template <class F>
std::vector<typename F::Elem> uv_mulmod_monic(const F& k, const std::vector<typename F::Elem>& A,
                                              const std::vector<typename F::Elem>& B,
                                              const std::vector<typename F::Elem>& chi) {
    const int Dm = static_cast<int>(chi.size()) - 1;
    std::vector<typename F::Elem> w(static_cast<std::size_t>(2 * Dm - 1), k.zero());
    for (std::size_t i = 0; i < A.size(); ++i) {
        if (k.is_zero(A[i])) continue;
        for (std::size_t j = 0; j < B.size(); ++j) {
            if (k.is_zero(B[j])) continue;
            w[i + j] = k.add(w[i + j], k.mul(A[i], B[j]));
        }
    }
    for (int i = 2 * Dm - 2; i >= Dm; --i) {
        const typename F::Elem c = w[static_cast<std::size_t>(i)];
        if (k.is_zero(c)) continue;
        for (int j = 0; j < Dm; ++j) {
            auto& slot = w[static_cast<std::size_t>(i - Dm + j)];
            slot = k.sub(slot, k.mul(c, chi[static_cast<std::size_t>(j)]));
        }
        w[static_cast<std::size_t>(i)] = k.zero();
    }
    w.resize(static_cast<std::size_t>(Dm));
    return w;
}

// Resultant by the Euclidean remainder sequence: each division step
// contributes lc(B)^(deg A - deg R) and the swap sign (-1)^(deg A * deg B).
template <class F>
typename F::Elem uv_resultant(const F& k, std::vector<typename F::Elem> A,
                              std::vector<typename F::Elem> B) {
    int da = uv_deg(k, A), db = uv_deg(k, B);
    if (da < 0 || db < 0) return k.zero();
    typename F::Elem res = k.one();
    if (da < db) {
        std::swap(A, B);
        std::swap(da, db);
        if ((da & 1) && (db & 1)) res = k.neg(res);
    }
    while (db > 0) {
        const typename F::Elem lb = B[static_cast<std::size_t>(db)];
        const typename F::Elem lbinv = k.inv(lb);
        for (int i = da; i >= db; --i) {
            const typename F::Elem c = k.mul(A[static_cast<std::size_t>(i)], lbinv);
            if (k.is_zero(c)) continue;
            for (int j = 0; j < db; ++j) {
                auto& slot = A[static_cast<std::size_t>(i - db + j)];
                slot = k.sub(slot, k.mul(c, B[static_cast<std::size_t>(j)]));
            }
            A[static_cast<std::size_t>(i)] = k.zero();
        }
        const int dr = uv_deg(k, A);
        if (dr < 0) return k.zero();
        if ((da & 1) && (db & 1)) res = k.neg(res);
        res = k.mul(res, elem_pow(k, lb, da - dr));
        std::swap(A, B);
        da = db;
        db = dr;
    }
    return k.mul(res, elem_pow(k, B[0], da));
}

// ---- point evaluation of the degree-d form ---------------------------------

// T-coefficient data of the degree-d pipeline, kept as polynomials in the
// U-variables so points can be substituted into it incrementally: pc[j] is
// the coefficient of T^j in P (pc[D] = a), wc[i][j] that of T^j in w_i, and
// fterms the exponent/coefficient pairs of F^h.
template <class F>
struct DegDData {
    int D = 0, d = 0;
    std::vector<SparsePolynomial<F>> pc;
    std::vector<std::vector<SparsePolynomial<F>>> wc;
    std::vector<std::pair<std::vector<int>, typename F::Elem>> fterms;
};

template <class F>
DegDData<F> build_degd_data(const SparsePolynomial<F>& P, const SparsePolynomial<F>& Fh,
                            int n, int r, int D, int d) {
    DegDData<F> out;
    out.D = D;
    out.d = d;
    const Variable T = var_t(0);
    for (int j = 0; j <= D; ++j) out.pc.push_back(coefficient_of(P, T, j));
    std::vector<SparsePolynomial<F>> ws;
    ws.push_back(P.derivative(T));
    for (int i = 1; i <= n; ++i) ws.push_back(-P.derivative(var_u(r, i)));
    for (const auto& w : ws) {
        // a = pc[D] is the coefficient of the pure U_{r,0}^D part of C, so it
        // has no block-r variables and every w_i stays below degree D in T.
        if (w.degree_in(T) >= D) throw NotNormalPositionError();
        std::vector<SparsePolynomial<F>> row;
        for (int j = 0; j < D; ++j) row.push_back(coefficient_of(w, T, j));
        out.wc.push_back(std::move(row));
    }
    const OrderPtr& hring = Fh.order();
    for (const auto& [m, c] : Fh.terms()) {
        std::vector<int> alpha(static_cast<std::size_t>(n) + 1, 0);
        for (int j = 0; j <= n; ++j)
            alpha[static_cast<std::size_t>(j)] =
                m.e[static_cast<std::size_t>(hring->index_of(var_x(j)))];
        out.fterms.emplace_back(std::move(alpha), c);
    }
    return out;
}

// Scalar core of the interpolation route: the value of the degree-d form at
// one point.  With chi(S) = a^(D-1) P(S/a) monic and every matrix in the
// pipeline a polynomial m(M_P) in the pseudo-companion matrix, each
// determinant is a resultant: det m(M_P) = Res(chi, m).  The value is
// a^d * Res(chi, F^h(m_0,...,m_n) mod chi) / Res(chi, m_0)^d; nothing is
// returned when a or the denominator resultant vanishes at the point.
template <class F>
std::optional<typename F::Elem> degd_point_value(
    const F& k, int D, int d, const std::vector<typename F::Elem>& pcs,
    const std::vector<std::vector<typename F::Elem>>& wcs,
    const std::vector<std::pair<std::vector<int>, typename F::Elem>>& fterms) {
    const typename F::Elem a = pcs[static_cast<std::size_t>(D)];
    if (k.is_zero(a)) return std::nullopt;
    const int top = std::max(D, d);
    std::vector<typename F::Elem> apw(static_cast<std::size_t>(top) + 1, k.one());
    for (int j = 1; j <= top; ++j)
        apw[static_cast<std::size_t>(j)] = k.mul(apw[static_cast<std::size_t>(j - 1)], a);
    std::vector<typename F::Elem> chi(static_cast<std::size_t>(D) + 1, k.zero());
    for (int j = 0; j < D; ++j)
        chi[static_cast<std::size_t>(j)] =
            k.mul(pcs[static_cast<std::size_t>(j)], apw[static_cast<std::size_t>(D - 1 - j)]);
    chi[static_cast<std::size_t>(D)] = k.one();
    std::vector<std::vector<typename F::Elem>> ms;
    for (const auto& wrow : wcs) {
        std::vector<typename F::Elem> m(static_cast<std::size_t>(D), k.zero());
        for (int j = 0; j < D; ++j)
            m[static_cast<std::size_t>(j)] =
                k.mul(wrow[static_cast<std::size_t>(j)], apw[static_cast<std::size_t>(D - j)]);
        ms.push_back(std::move(m));
    }
    const typename F::Elem R0 = uv_resultant(k, chi, ms[0]);
    if (k.is_zero(R0)) return std::nullopt;
    std::vector<typename F::Elem> one(static_cast<std::size_t>(D), k.zero());
    one[0] = k.one();
    std::vector<std::vector<std::vector<typename F::Elem>>> pw(ms.size(), {one});
    std::vector<typename F::Elem> phi(static_cast<std::size_t>(D), k.zero());
    for (const auto& [alpha, c] : fterms) {
        if (k.is_zero(c)) continue;
        std::vector<typename F::Elem> t = one;
        for (std::size_t i = 0; i < ms.size(); ++i) {
            const int e = alpha[i];
            if (e == 0) continue;
            while (static_cast<int>(pw[i].size()) <= e)
                pw[i].push_back(uv_mulmod_monic(k, pw[i].back(), ms[i], chi));
            t = uv_mulmod_monic(k, t, pw[i][static_cast<std::size_t>(e)], chi);
        }
        for (int j = 0; j < D; ++j) {
            auto& slot = phi[static_cast<std::size_t>(j)];
            slot = k.add(slot, k.mul(c, t[static_cast<std::size_t>(j)]));
        }
    }
    const typename F::Elem R1 = uv_resultant(k, chi, phi);
    const typename F::Elem num = k.mul(apw[static_cast<std::size_t>(d)], R1);
    return k.mul(num, elem_pow(k, k.inv(R0), d));
}

template <class F>
std::optional<typename F::Elem> degd_value_at(const F& k, const DegDData<F>& dat,
                                              const std::vector<typename F::Elem>& vals) {
    std::vector<typename F::Elem> pcs;
    for (const auto& q : dat.pc) pcs.push_back(value_at(k, q, vals));
    std::vector<std::vector<typename F::Elem>> wcs;
    for (const auto& row : dat.wc) {
        std::vector<typename F::Elem> vrow;
        for (const auto& q : row) vrow.push_back(value_at(k, q, vals));
        wcs.push_back(std::move(vrow));
    }
    return degd_point_value(k, dat.D, dat.d, pcs, wcs, dat.fterms);
}

inline DegDData<PrimeField> degd_reduce(const DegDData<RationalField>& dat,
                                        const PrimeField& fp) {
    DegDData<PrimeField> out;
    out.D = dat.D;
    out.d = dat.d;
    for (const auto& q : dat.pc) out.pc.push_back(reduce_mod_p(q, fp));
    for (const auto& row : dat.wc) {
        std::vector<FpPoly> vrow;
        for (const auto& q : row) vrow.push_back(reduce_mod_p(q, fp));
        out.wc.push_back(std::move(vrow));
    }
    for (const auto& [alpha, c] : dat.fterms) {
        const std::uint64_t den = fp.from_integer(Integer(c.get_den()));
        if (den == 0) throw NotPAdmissibleError();
        out.fterms.emplace_back(alpha, fp.mul(fp.from_integer(Integer(c.get_num())), fp.inv(den)));
    }
    return out;
}

inline void degd_subst(DegDData<PrimeField>& dat, const Variable& v, std::uint64_t x) {
    for (auto& q : dat.pc) q = fp_eval_at(q, v, x);
    for (auto& row : dat.wc)
        for (auto& q : row) q = fp_eval_at(q, v, x);
}

struct DegDInterpVar {
    Variable v;
    int bound;  // degree of the target in v
};

// Nested Newton interpolation of the point-value map in vars[idx..].  Nodes
// where the evaluation degenerates (a or det M_0 vanishing) are skipped; each
// level takes bound+1 good nodes from a slightly larger supply.  fuel caps
// the total number of leaf evaluations so a degenerate slice cannot thrash.
inline std::optional<FpPoly> degd_interp_rec(const PrimeField& fp, const DegDData<PrimeField>& dat,
                                             const std::vector<DegDInterpVar>& vars,
                                             std::size_t idx, const OrderPtr& outring,
                                             long& fuel) {
    if (dat.pc[static_cast<std::size_t>(dat.D)].is_zero()) return std::nullopt;
    if (idx == vars.size()) {
        if (--fuel < 0) return std::nullopt;
        std::vector<std::uint64_t> pcs;
        for (const auto& q : dat.pc) pcs.push_back(q.constant_value());
        std::vector<std::vector<std::uint64_t>> wcs;
        for (const auto& row : dat.wc) {
            std::vector<std::uint64_t> vrow;
            for (const auto& q : row) vrow.push_back(q.constant_value());
            wcs.push_back(std::move(vrow));
        }
        const auto v = degd_point_value(fp, dat.D, dat.d, pcs, wcs, dat.fterms);
        if (!v) return std::nullopt;
        return FpPoly::constant(fp, outring, *v);
    }
    const Variable v = vars[idx].v;
    const int bound = vars[idx].bound;
    FpPoly H(fp, outring);
    FpPoly Nf = FpPoly::from_int(fp, outring, 1);
    int have = 0;
    for (std::uint64_t x = 0; have <= bound && x < static_cast<std::uint64_t>(bound) + 65; ++x) {
        if (fuel < 0) return std::nullopt;
        DegDData<PrimeField> sub = dat;
        degd_subst(sub, v, x);
        const auto child = degd_interp_rec(fp, sub, vars, idx + 1, outring, fuel);
        if (!child) continue;
        FpPoly diff = *child;
        diff -= fp_eval_at(H, v, x);
        if (!diff.is_zero()) {
            const std::uint64_t nx = fp_eval_at(Nf, v, x).constant_value();
            H += diff.scaled(fp.inv(nx)) * Nf;
        }
        Nf = Nf * (FpPoly::variable(fp, outring, v) - FpPoly::constant(fp, outring, x));
        ++have;
    }
    if (have <= bound) return std::nullopt;
    return H;
}

// Restores block homogeneity of degree blockdeg: each block's 0-th variable
// absorbs the missing degree.  Fails when a term already exceeds blockdeg.
inline std::optional<SparsePolynomial<RationalField>> degd_rehomogenize(
    const SparsePolynomial<RationalField>& cand, const OrderPtr& outring, int n, int r,
    int blockdeg) {
    SparsePolynomial<RationalField> out(cand.field(), outring);
    std::vector<std::vector<int>> pos;
    for (int l = 0; l < r; ++l) {
        std::vector<int> row;
        for (int j = 0; j <= n; ++j) row.push_back(outring->index_of(var_u(l, j)));
        pos.push_back(std::move(row));
    }
    for (const auto& [m, c] : cand.terms()) {
        Monomial mm = m;
        for (int l = 0; l < r; ++l) {
            int s = 0;
            for (int j = 1; j <= n; ++j)
                s += mm.e[static_cast<std::size_t>(
                    pos[static_cast<std::size_t>(l)][static_cast<std::size_t>(j)])];
            if (s > blockdeg) return std::nullopt;
            mm.e[static_cast<std::size_t>(pos[static_cast<std::size_t>(l)][0])] = blockdeg - s;
        }
        mm.deg = 0;
        for (const auto e : mm.e) mm.deg += e;
        out.add_term(mm, c);
    }
    return out;
}

// Exact backstop for the modular route: one honest rational evaluation at a
// random integer point, compared against the candidate.  Points where the
// evaluation degenerates are redrawn; the block-r coordinates are drawn too,
// so a candidate wrongly independent of that block cannot pass.
inline bool degd_verify(const DegDData<RationalField>& qdat,
                        const SparsePolynomial<RationalField>& cand, const OrderPtr& ringT,
                        int n, int r) {
    const RationalField k;
    Rng rng(0x8f1bbcdcbfa53e0bULL);
    const OrderPtr& oring = cand.order();
    for (int tries = 0; tries < 32; ++tries) {
        std::vector<Rational> valsT(ringT->size(), Rational(0));
        std::vector<Rational> valsO(oring->size(), Rational(0));
        for (int l = 0; l <= r; ++l)
            for (int j = 0; j <= n; ++j) {
                const long x = static_cast<long>(rng.below(1u << 20)) - (1L << 19);
                valsT[static_cast<std::size_t>(ringT->index_of(var_u(l, j)))] = Rational(x);
                if (l < r)
                    valsO[static_cast<std::size_t>(oring->index_of(var_u(l, j)))] = Rational(x);
            }
        const auto v = degd_value_at(k, qdat, valsT);
        if (!v) continue;
        return k.equal(value_at(k, cand, valsO), *v);
    }
    return false;
}

// Modular route for degree_d_chow_form over the rationals.  The form is
// recovered one word-size prime at a time by nested interpolation of point
// values, the primes are glued by Chinese remaindering, the coefficients are
// lifted by rational reconstruction, and a stabilized candidate must pass the
// exact spot check before it is accepted.  The result is homogeneous of
// degree d*D in every surviving block (numerator and denominator determinant
// degrees cancel down to exactly a^d's contribution), which fixes the node
// counts up front: nothing is returned when the grid exceeds leaf_cap and the
// symbolic route should take over.  Genuine degeneracies throw
// NotNormalPositionError so the caller's retry loop re-randomizes.
inline std::optional<DegreeDValue<RationalField>> degree_d_interpolate(
    const ChowForm<RationalField>& C, const SparsePolynomial<RationalField>& Fpoly,
    long double leaf_cap) {
    const RationalField& k = C.poly.field();
    const int n = C.n, r = C.r, D = C.D;
    const int d = Fpoly.total_degree();
    const int blockdeg = d * D;
    const long double leaves = std::pow(static_cast<long double>(blockdeg + 1),
                                        static_cast<long double>(r) * n);
    if (leaves > leaf_cap) return std::nullopt;

    const Variable T = var_t(0);
    const OrderPtr ringT = extend_order(chow_ring(n, r), {T});
    SparsePolynomial<RationalField> P = C.poly.map_into(
        ringT,
        {{var_u(r, 0), SparsePolynomial<RationalField>::variable(k, ringT, var_u(r, 0)) -
                           SparsePolynomial<RationalField>::variable(k, ringT, T)}});
    if (D % 2 != 0) P = -P;
    if (P.degree_in(T) != D) throw ZeroLeadingCoefficientError();
    Rational unscale = 1;
    {
        auto cp = content_and_primitive(P);
        P = std::move(cp.second);
        for (int i = 0; i < d; ++i) unscale *= cp.first;
    }
    std::vector<Variable> hx;
    for (int j = 0; j <= n; ++j) hx.push_back(var_x(j));
    const OrderPtr hring = make_order(hx);
    std::vector<Variable> xonly(hx.begin() + 1, hx.end());
    SparsePolynomial<RationalField> Fh = Fpoly.rename_into(hring).homogenize(var_x(0), xonly, d);
    {
        auto cf = content_and_primitive(Fh);
        Fh = std::move(cf.second);
        for (int i = 0; i < D; ++i) unscale *= cf.first;
    }
    const DegDData<RationalField> qdat = build_degd_data(P, Fh, n, r, D, d);
    const OrderPtr outring = chow_ring(n, r - 1);

    std::vector<DegDInterpVar> ivars;
    for (int l = 0; l < r; ++l)
        for (int j = 1; j <= n; ++j) ivars.push_back({var_u(l, j), blockdeg});
    long fuel0 = 1L << 24;
    if (leaves * 4 + 4096 < static_cast<long double>(fuel0))
        fuel0 = static_cast<long>(leaves * 4) + 4096;

    std::map<Monomial, Integer, GrlexGreater> residues;
    Integer modulus = 1;
    SparsePolynomial<RationalField> prev(k, outring);
    bool prev_valid = false;
    bool probed = false;
    int used = 0, resets = 0, barren = 0;

    std::uint64_t p = PrimeField::max_modulus - 1;  // 2^61 - 1, an odd prime
    for (int iters = 0; used < 128 && iters < 4096; ++iters, p -= 2) {
        while (!is_prime_u64(p)) p -= 2;
        const PrimeField fp(p);
        const DegDData<PrimeField> fdat = degd_reduce(qdat, fp);
        if (fdat.pc[static_cast<std::size_t>(D)].is_zero()) continue;
        Rng rng(Rng::derive(0x517cc1b727220a95ULL, p));
        std::optional<FpPoly> image;
        for (int draw = 0; draw < 3 && !image; ++draw) {
            DegDData<PrimeField> bdat = fdat;
            for (int j = 0; j <= n; ++j) degd_subst(bdat, var_u(r, j), rng.below(p));
            if (!probed) {
                // The result must not involve the substituted block: values at
                // a common point have to agree across two independent draws.
                // At a point with nonzero value, scaling a block by 2 must
                // scale the value by 2^blockdeg; blockdeg < 61 keeps those
                // powers distinct mod p, so the check is sharp.
                DegDData<PrimeField> bdat2 = fdat;
                for (int j = 0; j <= n; ++j) degd_subst(bdat2, var_u(r, j), rng.below(p));
                for (int t = 0; t < 40 && !probed; ++t) {
                    std::vector<std::uint64_t> u(ringT->size(), 0);
                    for (int l = 0; l < r; ++l)
                        for (int j = 0; j <= n; ++j)
                            u[static_cast<std::size_t>(ringT->index_of(var_u(l, j)))] =
                                rng.below(p);
                    const auto v1 = degd_value_at(fp, bdat, u);
                    if (!v1) continue;
                    const auto v2 = degd_value_at(fp, bdat2, u);
                    if (!v2) continue;
                    if (*v1 != *v2) throw NotNormalPositionError();
                    if (*v1 == 0) continue;
                    bool scaled_ok = true;
                    for (int l = 0; l < r && scaled_ok; ++l) {
                        auto u2 = u;
                        for (int j = 0; j <= n; ++j) {
                            auto& cell =
                                u2[static_cast<std::size_t>(ringT->index_of(var_u(l, j)))];
                            cell = fp.mul(cell, 2);
                        }
                        const auto vs = degd_value_at(fp, bdat, u2);
                        if (!vs) {
                            scaled_ok = false;
                            break;
                        }
                        if (*vs != fp.mul(*v1, elem_pow(fp, fp.from_int(2), blockdeg)))
                            throw NotNormalPositionError();
                    }
                    probed = scaled_ok;
                }
            }
            DegDData<PrimeField> idat = bdat;
            for (int l = 0; l < r; ++l) degd_subst(idat, var_u(l, 0), 1);
            long fuel = fuel0;
            image = degd_interp_rec(fp, idat, ivars, 0, outring, fuel);
        }
        if (!image) {
            if (++barren >= 8 && used == 0) throw NotNormalPositionError();
            continue;
        }
        barren = 0;

        const std::uint64_t minv = fp.inv(mpz_fdiv_ui(modulus.get_mpz_t(), p));
        auto crt = [&](Integer& rr, std::uint64_t vp) {
            const std::uint64_t t = fp.mul(fp.sub(vp, mpz_fdiv_ui(rr.get_mpz_t(), p)), minv);
            rr += modulus * Integer(t);
        };
        for (auto& [m, rr] : residues) {
            const auto it = image->terms().find(m);
            crt(rr, it == image->terms().end() ? 0 : it->second);
        }
        for (const auto& [m, c] : image->terms()) {
            if (residues.count(m)) continue;
            Integer rr = 0;
            crt(rr, c);
            residues.emplace(m, std::move(rr));
        }
        modulus *= p;
        ++used;

        bool lifted = used >= 2;
        SparsePolynomial<RationalField> cand(k, outring);
        if (lifted) {
            for (const auto& [m, rr] : residues) {
                const auto q = rat_reconstruct(rr, modulus);
                if (!q) {
                    lifted = false;
                    break;
                }
                if (*q != 0) cand.add_term(m, *q);
            }
        }
        if (lifted && prev_valid && cand == prev) {
            const auto G = degd_rehomogenize(cand, outring, n, r, blockdeg);
            if (G && degd_verify(qdat, *G, ringT, n, r))
                return DegreeDValue<RationalField>{G->scaled(unscale), d};
            // A prime dividing a true denominator poisons the accumulated
            // residues; start the gluing over on fresh primes.
            if (++resets > 2) throw NotNormalPositionError();
            residues.clear();
            modulus = 1;
            prev_valid = false;
            probed = false;
            used = 0;
            continue;
        }
        prev = std::move(cand);
        prev_valid = lifted;
    }
    throw NotNormalPositionError();
}

}  // namespace detail

namespace detail {

// Symbolic route: the matrix pipeline evaluated on polynomial entries.  When
// dense_generic_block is set, every generic coefficient of degree d is
// instantiated (reference path); otherwise only the monomials supported by
// F's homogenization are.
template <class F>
DegreeDValue<F> degree_d_symbolic(const ChowForm<F>& C, const SparsePolynomial<F>& Fpoly,
                                  bool dense_generic_block) {
    if (C.is_empty() || C.r < 1) throw InputError("degree-d form needs dimension >= 1");
    if (Fpoly.is_zero()) throw ZeroPolynomialError();
    const int d = Fpoly.total_degree();
    if (d < 1) throw InputError("degree-d form needs deg F >= 1");
    const F& k = C.poly.field();
    const int n = C.n, r = C.r, D = C.D;

    // P = (-1)^D C(U_0,...,U_{r-1},U'_r), U'_r = (U_{r,0} - T, U_{r,1},...).
    const Variable T = var_t(0);
    const OrderPtr ringT = extend_order(chow_ring(n, r), {T});
    SparsePolynomial<F> P = C.poly.map_into(
        ringT, {{var_u(r, 0), SparsePolynomial<F>::variable(k, ringT, var_u(r, 0)) -
                                  SparsePolynomial<F>::variable(k, ringT, T)}});
    if (D % 2 != 0) P = -P;
    if (P.degree_in(T) != D) throw ZeroLeadingCoefficientError();

    // Over the rationals the matrix pipeline below runs on integer
    // coefficients: P and F^h are rescaled to their primitive integer parts.
    // The result is homogeneous of degree d in the coefficients of P and of
    // degree D in those of F^h, so the removed contents are restored exactly
    // on the way out.
    typename F::Elem unscale = k.one();
    if constexpr (std::is_same_v<F, RationalField>) {
        auto cp = content_and_primitive(P);
        P = std::move(cp.second);
        for (int i = 0; i < d; ++i) unscale = unscale * cp.first;
    }
    const SparsePolynomial<F> a = coefficient_of(P, T, D);
    const PolyMatrix<F> MP = pseudo_companion(P, T);

    // Homogenized coefficient vector of F: indices into the degree-d tuples.
    std::vector<Variable> hx;
    for (int j = 0; j <= n; ++j) hx.push_back(var_x(j));
    const OrderPtr hring = make_order(hx);
    std::vector<Variable> xonly(hx.begin() + 1, hx.end());
    SparsePolynomial<F> Fh = Fpoly.rename_into(hring).homogenize(var_x(0), xonly, d);
    if constexpr (std::is_same_v<F, RationalField>) {
        auto cf = content_and_primitive(Fh);
        Fh = std::move(cf.second);
        for (int i = 0; i < D; ++i) unscale = unscale * cf.first;
    }
    const auto tuples = detail::degree_tuples(n, d);
    std::map<std::vector<int>, int> tuple_index;
    for (std::size_t t = 0; t < tuples.size(); ++t)
        tuple_index.emplace(tuples[t], static_cast<int>(t));

    std::map<int, typename F::Elem> f_coeff;  // tuple index -> coefficient of F^h
    for (const auto& [m, c] : Fh.terms()) {
        std::vector<int> alpha(static_cast<std::size_t>(n) + 1, 0);
        for (int j = 0; j <= n; ++j)
            alpha[static_cast<std::size_t>(j)] =
                m.e[static_cast<std::size_t>(hring->index_of(var_x(j)))];
        f_coeff.emplace(tuple_index.at(alpha), c);
    }

    std::vector<int> support;
    if (dense_generic_block) {
        for (std::size_t t = 0; t < tuples.size(); ++t) support.push_back(static_cast<int>(t));
    } else {
        for (const auto& [idx, c] : f_coeff) {
            (void)c;
            support.push_back(idx);
        }
    }

    // The coefficients of F^h enter as scalars right away: specialization
    // commutes with the determinant and the exact division below, and the
    // generic-coefficient detour is exponentially larger.
    const OrderPtr uring = chow_ring(n, r);

    // M_i = w_i homogenized in T to degree D with T', then evaluated at
    // T' -> a*Id, T -> M_P; equivalently sum_j (coeff of T^j) a^(D-j) M_P^j.
    std::vector<SparsePolynomial<F>> apow(static_cast<std::size_t>(D) + 1,
                                          SparsePolynomial<F>::from_int(k, uring, 1));
    const SparsePolynomial<F> aU = a.rename_into(uring);
    for (int j = 1; j <= D; ++j) apow[static_cast<std::size_t>(j)] = apow[static_cast<std::size_t>(j - 1)] * aU;
    std::vector<PolyMatrix<F>> mp_pow;
    mp_pow.push_back(detail::poly_mat_identity(k, uring, D));
    {
        PolyMatrix<F> MPU(k, uring, D);
        for (int i = 0; i < D; ++i)
            for (int j = 0; j < D; ++j) MPU.at(i, j) = MP.at(i, j).rename_into(uring);
        for (int j = 1; j <= D; ++j) mp_pow.push_back(detail::poly_mat_mul(mp_pow.back(), MPU));
    }
    auto eval_w = [&](const SparsePolynomial<F>& w) {
        PolyMatrix<F> M(k, uring, D);
        const int dw = w.degree_in(T);
        for (int j = 0; j <= std::max(dw, 0); ++j) {
            const SparsePolynomial<F> cj = coefficient_of(w, T, j).rename_into(uring);
            if (cj.is_zero()) continue;
            const SparsePolynomial<F> s = cj * apow[static_cast<std::size_t>(D - j)];
            for (int x = 0; x < D; ++x)
                for (int y = 0; y < D; ++y) {
                    const auto& e = mp_pow[static_cast<std::size_t>(j)].at(x, y);
                    if (!e.is_zero()) M.at(x, y) += s * e;
                }
        }
        return M;
    };
    std::vector<PolyMatrix<F>> Ms;
    Ms.push_back(eval_w(P.derivative(T)));
    for (int i = 1; i <= n; ++i) Ms.push_back(eval_w(-P.derivative(var_u(r, i))));

    // F^h(M_0,...,M_n) with the coefficients of F already in place.
    std::vector<std::vector<PolyMatrix<F>>> mi_pow;
    for (int i = 0; i <= n; ++i) {
        int need = 0;
        for (int idx : support) need = std::max(need, tuples[static_cast<std::size_t>(idx)][static_cast<std::size_t>(i)]);
        std::vector<PolyMatrix<F>> pows;
        pows.push_back(detail::poly_mat_identity(k, uring, D));
        for (int j = 1; j <= need; ++j)
            pows.push_back(detail::poly_mat_mul(pows.back(), Ms[static_cast<std::size_t>(i)]));
        mi_pow.push_back(std::move(pows));
    }
    PolyMatrix<F> Fval(k, uring, D);
    for (int idx : support) {
        const auto it = f_coeff.find(idx);
        const typename F::Elem c = it == f_coeff.end() ? k.zero() : it->second;
        if (k.is_zero(c)) continue;
        const auto& alpha = tuples[static_cast<std::size_t>(idx)];
        PolyMatrix<F> term = detail::poly_mat_identity(k, uring, D);
        for (int i = 0; i <= n; ++i)
            if (alpha[static_cast<std::size_t>(i)] > 0)
                term = detail::poly_mat_mul(term, mi_pow[static_cast<std::size_t>(i)][static_cast<std::size_t>(alpha[static_cast<std::size_t>(i)])]);
        for (int x = 0; x < D; ++x)
            for (int y = 0; y < D; ++y)
                if (!term.at(x, y).is_zero()) Fval.at(x, y) += term.at(x, y).scaled(c);
    }

    const SparsePolynomial<F> detF = Fval.determinant();
    const SparsePolynomial<F> detM0 = Ms[0].determinant();
    SparsePolynomial<F> G = exact_div(apow[1].pow(static_cast<unsigned>(d)) * detF,
                                      detM0.pow(static_cast<unsigned>(d)));
    G = G.scaled(unscale);
    for (int j = 0; j <= n; ++j)
        if (G.degree_in(var_u(r, j)) > 0) throw NotNormalPositionError();
    return {G.rename_into(chow_ring(n, r - 1)), d};
}

}  // namespace detail

// The Chow form of V with the last linear block replaced by a generic degree
// d form, specialized at F.  Over the rationals, Auto switches to the modular
// interpolation route when the block degree d*D is moderate and the node grid
// small; every route computes the identical polynomial.
template <class F>
DegreeDValue<F> degree_d_chow_form(const ChowForm<F>& C, const SparsePolynomial<F>& Fpoly,
                                   DegreeDStrategy strategy = DegreeDStrategy::Auto) {
    if (C.is_empty() || C.r < 1) throw InputError("degree-d form needs dimension >= 1");
    if (Fpoly.is_zero()) throw ZeroPolynomialError();
    const int d = Fpoly.total_degree();
    if (d < 1) throw InputError("degree-d form needs deg F >= 1");
    if constexpr (std::is_same_v<F, RationalField>) {
        const bool pick = strategy == DegreeDStrategy::Interpolate ||
                          (strategy == DegreeDStrategy::Auto && C.D >= 2 && d * C.D <= 60);
        if (pick) {
            const long double cap = strategy == DegreeDStrategy::Interpolate
                                        ? std::numeric_limits<long double>::max()
                                        : 400000.0L;
            if (auto out = detail::degree_d_interpolate(C, Fpoly, cap)) return std::move(*out);
        }
    } else {
        if (strategy == DegreeDStrategy::Interpolate)
            throw InputError("interpolation route needs rational coefficients");
    }
    return detail::degree_d_symbolic(C, Fpoly, strategy == DegreeDStrategy::SymbolicDense);
}

// Monic product, with multiplicity one, of the irreducible factors of Q that
// depend on U_{0,0}.
template <class F>
SparsePolynomial<F> weak_squarefree_part(const SparsePolynomial<F>& Q) {
    if (Q.is_zero()) throw ZeroPolynomialError();
    const F& k = Q.field();
    if (Q.is_constant()) return SparsePolynomial<F>::from_int(k, Q.order(), 1);
    const SparsePolynomial<F> g = monic_gcd(Q, Q.derivative(var_u(0, 0)));
    return exact_div(Q.monic(), g);
}

// Chow form of V intersected with the hypersurface V(F); the caller
// guarantees the intersection is proper (dimension r-1) or empty.
template <class F>
ChowForm<F> intersection_chow(const ChowForm<F>& C, const SparsePolynomial<F>& Fpoly) {
    if (C.is_empty()) return C;
    if (Fpoly.is_zero()) throw ZeroPolynomialError();
    if (Fpoly.is_constant()) return chow_empty(C.poly.field(), C.n);
    const DegreeDValue<F> Q = degree_d_chow_form(C, Fpoly);
    return make_chow(weak_squarefree_part(Q.poly), C.n, C.r - 1);
}

// ---- Kronecker parametrization ---------------------------------------------------

template <class F>
struct KroneckerResult {
    SparsePolynomial<F> Q;               // Q(T) = C(T, alpha)
    std::vector<SparsePolynomial<F>> V;  // V_i(T) = (dC/dU_{0,i})(T, alpha)
};

// For a dimension-0 form: the solutions are (V_1(t)/Q'(t),...,V_n(t)/Q'(t))
// over the roots t of Q.  The evaluation point alpha must keep deg Q = D and
// Q squarefree; otherwise DegenerateAlpha asks the caller to resample.
template <class F>
KroneckerResult<F> kronecker_parametrization(const ChowForm<F>& C, const std::vector<long>& alpha) {
    if (C.r != 0) throw InputError("Kronecker parametrization needs dimension 0");
    if (static_cast<int>(alpha.size()) != C.n) throw InputError("alpha arity mismatch");
    const F& k = C.poly.field();
    const Variable T = var_t(0);
    const OrderPtr tring = make_order({T});
    std::map<Variable, SparsePolynomial<F>> images;
    images.emplace(var_u(0, 0), SparsePolynomial<F>::variable(k, tring, T));
    for (int i = 1; i <= C.n; ++i)
        images.emplace(var_u(0, i),
                       SparsePolynomial<F>::constant(k, tring, k.from_int(alpha[static_cast<std::size_t>(i - 1)])));
    KroneckerResult<F> out{C.poly.map_into(tring, images), {}};
    if (out.Q.degree_in(T) != C.D) throw DegenerateAlphaError();
    if (!monic_gcd(out.Q, out.Q.derivative(T)).is_constant()) throw DegenerateAlphaError();
    for (int i = 1; i <= C.n; ++i)
        out.V.push_back(C.poly.derivative(var_u(0, i)).map_into(tring, images));
    return out;
}

// ---- serialization -----------------------------------------------------------------

template <class F>
std::string print_chow(const ChowForm<F>& C) {
    return print_chow_header({C.n, C.r, C.D}) + " " + print_polynomial(C.poly);
}

template <class F>
ChowForm<F> parse_chow(const std::string& text, const F& field) {
    const auto [h, off] = parse_chow_header(text);
    const OrderPtr ring = chow_ring(h.n, h.r);
    SparsePolynomial<F> poly = parse_polynomial(text.substr(off), field, ring);
    if (poly.is_zero()) throw InputError("a Chow form cannot be zero");
    if (h.r < 0) {
        if (!poly.is_constant()) throw InputError("empty form must be constant");
        return chow_empty(field, h.n);
    }
    ChowForm<F> C{std::move(poly), h.n, h.r, h.D};
    if (block_degree(C.poly, C.n, 0) != C.D) throw InputError("header degree mismatch");
    return C;
}

}  // namespace chowforms
