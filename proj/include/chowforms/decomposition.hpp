#pragma once
#include <cstdint>
#include <utility>
#include <vector>

#include "chow.hpp"
#include "matrix.hpp"
#include "rng.hpp"

namespace chowforms {

// ---- input systems ----------------------------------------------------------------

// A system F_1..F_s in Z[X_1..X_n].  Rational input is scaled by its minimal
// denominator poly by poly; that leaves every zero set unchanged.
struct PolySystem {
    std::vector<SparsePolynomial<RationalField>> polys;
    int n = 0;
    int s = 0;
    long d = 1;    // max total degree, at least 1
    double h = 0;  // max coefficient height, natural-log scale
};

inline PolySystem make_system(int n, std::vector<SparsePolynomial<RationalField>> polys) {
    if (n < 1) throw InputError("a system needs n >= 1");
    if (polys.empty()) throw InputError("a system needs at least one polynomial");
    PolySystem sys;
    sys.n = n;
    sys.s = static_cast<int>(polys.size());
    const OrderPtr ring = x_ring(n);
    for (auto& p : polys) {
        if (p.is_zero()) throw InputError("zero polynomial in system");
        for (const auto& v : p.variables_in_use())
            if (v.kind != VarKind::X || v.a < 1 || v.a > n)
                throw InputError("system polynomials must live in X1..X" + std::to_string(n));
        SparsePolynomial<RationalField> q = p.rename_into(ring);
        if (!is_integer_poly(q)) {
            const Integer den = minimal_denominator(q);
            q = q.scaled(Rational(den));
        }
        sys.d = std::max(sys.d, static_cast<long>(q.total_degree()));
        sys.h = std::max(sys.h, poly_height(q));
        sys.polys.push_back(std::move(q));
    }
    return sys;
}

// ---- coordinate changes -----------------------------------------------------------

// An invertible change of variables X -> A X with A = B^{-1}; a_prime is the
// integer matrix det(B) * A.
template <class F>
struct TransformPair {
    DenseMatrix<F> B;
    DenseMatrix<F> A;
    typename F::Elem det_b;
    DenseMatrix<F> a_prime;
};

template <class F>
TransformPair<F> make_transform(const DenseMatrix<F>& B) {
    const F& k = B.field();
    const typename F::Elem det = B.determinant();
    if (k.is_zero(det)) throw SingularMatrixError();
    DenseMatrix<F> A = B.inverse();
    DenseMatrix<F> ap = A;
    for (int i = 0; i < A.size(); ++i)
        for (int j = 0; j < A.size(); ++j) ap.at(i, j) = k.mul(ap.at(i, j), det);
    return {B, std::move(A), det, std::move(ap)};
}

// Substitute each block's coordinate vector U_i by M * U_i, identically on
// every block.  Preserves multi-homogeneity and per-block degrees.
template <class F>
ChowForm<F> apply_block_transform(const ChowForm<F>& C, const DenseMatrix<F>& M) {
    const F& k = C.poly.field();
    if (M.size() != C.n + 1) throw InputError("transform size does not match the block length");
    if (k.is_zero(M.determinant())) throw SingularMatrixError();
    if (C.is_empty()) return C;
    const OrderPtr& o = C.poly.order();
    std::map<Variable, SparsePolynomial<F>> images;
    for (int i = 0; i <= C.r; ++i) {
        for (int j = 0; j <= C.n; ++j) {
            SparsePolynomial<F> img = SparsePolynomial<F>::zero(k, o);
            for (int c = 0; c <= C.n; ++c) {
                if (k.is_zero(M.at(j, c))) continue;
                img = img + SparsePolynomial<F>::variable(k, o, var_u(i, c)).scaled(M.at(j, c));
            }
            images.emplace(var_u(i, j), std::move(img));
        }
    }
    return make_chow(C.poly.map_into(o, images), C.n, C.r);
}

// The action of X -> A X on hyperplane coordinates: u_0 stays, the rest
// transform by the transpose.
template <class F>
DenseMatrix<F> hyperplane_transform(const DenseMatrix<F>& A) {
    const F& k = A.field();
    const int n = A.size();
    DenseMatrix<F> M(k, n + 1);
    M.at(0, 0) = k.one();
    for (int j = 0; j < n; ++j)
        for (int c = 0; c < n; ++c) M.at(j + 1, c + 1) = A.at(c, j);
    return M;
}

// Apply X -> A X to a polynomial in X_1..X_n.
template <class F>
SparsePolynomial<F> apply_point_transform(const SparsePolynomial<F>& P, const DenseMatrix<F>& A) {
    const F& k = P.field();
    const OrderPtr& o = P.order();
    const int n = A.size();
    std::map<Variable, SparsePolynomial<F>> images;
    for (int j = 1; j <= n; ++j) {
        SparsePolynomial<F> img = SparsePolynomial<F>::zero(k, o);
        for (int c = 1; c <= n; ++c) {
            if (k.is_zero(A.at(j - 1, c - 1))) continue;
            img = img + SparsePolynomial<F>::variable(k, o, var_x(c)).scaled(A.at(j - 1, c - 1));
        }
        images.emplace(var_x(j), std::move(img));
    }
    return P.map_into(o, images);
}

// ---- the main loop ----------------------------------------------------------------

// One pass of the double loop: everything recorded at position (i, k).
template <class F>
struct StepTrace {
    int i, k;
    ChowForm<F> zero;    // components of C_{i,k} inside V(F_{i+1})
    ChowForm<F> proper;  // the rest of C_{i,k}
    ChowForm<F> extra;   // proper intersection coming down from dimension k+1
    ChowForm<F> merged;  // union of zero and extra
    std::vector<std::pair<int, ChowForm<F>>> stripped;  // after removing C_{i+1,l}, l = n..k+1
};

template <class F>
struct RawDecomposition {
    std::vector<ChowForm<F>> chow_forms;  // indexed by dimension 0..n
    std::vector<StepTrace<F>> trace;
};

namespace detail {

// Normalized form or an Undefined error tagged with the loop position.
template <class F>
ChowForm<F> normalized_at(const ChowForm<F>& C, int i, int k, int l) {
    if (!C.is_empty() && !is_normal_position(C))
        throw UndefinedError(i, k, l, "intermediate form is not in normal position");
    return normalize_chow(C);
}

}  // namespace detail

// Dimension-by-dimension refinement: C_{0,*} describes the ambient space,
// and each equation F_{i+1} splits every C_{i,k} into the part inside
// V(F_{i+1}), joined with the proper intersection of the part above, minus
// whatever already lives in a higher-dimensional output component.
// Correct when the inputs are in general position; anything else surfaces
// as Undefined with the loop position.
template <class F>
RawDecomposition<F> decompose_chow_raw(const std::vector<SparsePolynomial<F>>& polys, int n) {
    if (polys.empty()) throw InputError("a system needs at least one polynomial");
    const F& field = polys.front().field();
    const int s = static_cast<int>(polys.size());

    std::vector<ChowForm<F>> cur;
    for (int k = 0; k < n; ++k) cur.push_back(chow_empty(field, n));
    cur.push_back(chow_ambient(field, n));

    std::vector<StepTrace<F>> trace;
    for (int i = 0; i < s; ++i) {
        const SparsePolynomial<F>& Fi = polys[static_cast<std::size_t>(i)];
        std::vector<ChowForm<F>> next = cur;
        ChowForm<F> proper_above = chow_empty(field, n);
        for (int k = n; k >= 0; --k) {
            ChowForm<F> zero = chow_empty(field, n), proper = chow_empty(field, n);
            ChowForm<F> merged = chow_empty(field, n);
            try {
                auto parts = separate_hypersurface_chow(cur[static_cast<std::size_t>(k)], Fi);
                zero = detail::normalized_at(parts.first, i, k, -1);
                proper = detail::normalized_at(parts.second, i, k, -1);
                ChowForm<F> extra = (k == n) ? chow_empty(field, n)
                                             : intersection_chow(proper_above, Fi);
                extra = detail::normalized_at(extra, i, k, -1);
                merged = detail::normalized_at(union_chow(zero, extra), i, k, -1);
                trace.push_back(StepTrace<F>{i, k, zero, proper, extra, merged, {}});
            } catch (const UndefinedError&) {
                throw;
            } catch (const ComputationUndefined& e) {
                throw UndefinedError(i, k, -1, e.what());
            }
            StepTrace<F>& st = trace.back();
            ChowForm<F> S = merged;
            for (int l = n; l >= k + 1; --l) {
                try {
                    auto parts = separate_chow(S, next[static_cast<std::size_t>(l)]);
                    S = detail::normalized_at(parts.second, i, k, l);
                } catch (const UndefinedError&) {
                    throw;
                } catch (const ComputationUndefined& e) {
                    throw UndefinedError(i, k, l, e.what());
                }
                st.stripped.emplace_back(l, S);
            }
            next[static_cast<std::size_t>(k)] = S;
            proper_above = proper;
        }
        cur = std::move(next);
    }
    return {std::move(cur), std::move(trace)};
}

// ---- random general position over the rationals -----------------------------------

template <class F>
struct DecompositionResult {
    std::vector<ChowForm<F>> chow_forms;  // indexed by dimension, original coordinates
    TransformPair<F> transform;
    std::vector<StepTrace<F>> trace;  // recorded in the transformed coordinates
};

// Entry bound for the random change of variables: 12 n^2 d^(2n+2).
inline Integer transform_entry_bound(int n, long d) {
    return 12 * Integer(n) * n * integer_pow(Integer(d), static_cast<unsigned long>(2 * n + 2));
}

struct GeneralPositionDraw {
    std::vector<SparsePolynomial<RationalField>> transformed;  // integer coefficients
    TransformPair<RationalField> transform;
};

// Sample an invertible integer matrix B with entries in [-M, M], M the bound
// above, and return G_i = delta_i F_i(A X) with A = B^{-1} and delta_i the
// minimal denominator.  Singular draws are resampled.
inline GeneralPositionDraw random_general_position(const PolySystem& sys, Rng& rng) {
    const RationalField field;
    const Integer M = transform_entry_bound(sys.n, sys.d);
    DenseMatrix<RationalField> B(field, sys.n);
    for (;;) {
        for (int i = 0; i < sys.n; ++i)
            for (int j = 0; j < sys.n; ++j) B.at(i, j) = Rational(uniform_symmetric(rng, M));
        if (B.determinant() != Rational(0)) break;
    }
    TransformPair<RationalField> tr = make_transform(B);
    GeneralPositionDraw draw{{}, std::move(tr)};
    for (const auto& f : sys.polys) {
        SparsePolynomial<RationalField> g = apply_point_transform(f, draw.transform.A);
        if (!is_integer_poly(g)) g = g.scaled(Rational(minimal_denominator(g)));
        draw.transformed.push_back(std::move(g));
    }
    return draw;
}

namespace detail {

// The invariants every successful decomposition must satisfy: squarefree
// multi-homogeneous forms whose degrees sum to at most d^n.
template <class F>
bool decomposition_outputs_ok(const std::vector<ChowForm<F>>& forms, const Integer& degree_budget) {
    Integer total = 0;
    for (const auto& c : forms) {
        if (c.is_empty()) continue;
        if (!is_multi_homogeneous(c)) return false;
        if (!monomial_bound_ok(c)) return false;
        if (!chow_squarefree_ok(c)) return false;
        total += c.D;
    }
    return total <= degree_budget;
}

}  // namespace detail

// Chow forms of the equidimensional components of V(F_1..F_s), computed
// through a random change of variables and mapped back to the original
// coordinates.  Outputs are not re-normalized: normal position can fail in
// the original coordinates.  Deterministic for a fixed seed.
inline DecompositionResult<RationalField> decompose(const PolySystem& sys, std::uint64_t seed,
                                                    int max_retries = 8) {
    const RationalField field;
    Rng rng(seed);
    const Integer budget = integer_pow(Integer(sys.d), static_cast<unsigned long>(sys.n));
    std::string last;
    for (int attempt = 0; attempt < max_retries; ++attempt) {
        GeneralPositionDraw draw = random_general_position(sys, rng);
        try {
            RawDecomposition<RationalField> raw = decompose_chow_raw(draw.transformed, sys.n);
            const DenseMatrix<RationalField> back = hyperplane_transform(draw.transform.A);
            std::vector<ChowForm<RationalField>> out;
            for (const auto& c : raw.chow_forms)
                out.push_back(c.is_empty() ? c : apply_block_transform(c, back));
            if (!detail::decomposition_outputs_ok(out, budget)) {
                last = "output invariant violated";
                continue;
            }
            return {std::move(out), std::move(draw.transform), std::move(raw.trace)};
        } catch (const ComputationUndefined& e) {
            last = e.what();
        }
    }
    throw RetriesExhaustedError("no general-position transform found after " +
                                std::to_string(max_retries) + " attempts; last failure: " + last);
}

}  // namespace chowforms
