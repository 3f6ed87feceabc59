#pragma once
#include <utility>
#include <vector>

#include "gcd.hpp"
#include "polynomial.hpp"

namespace chowforms {

// Dense square matrix over a coefficient field.
template <class F>
class DenseMatrix {
  public:
    using Elem = typename F::Elem;

    DenseMatrix(const F& field, int n) : field_(field), n_(n), a_(static_cast<std::size_t>(n) * n, field.zero()) {}

    static DenseMatrix identity(const F& field, int n) {
        DenseMatrix m(field, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = field.one();
        return m;
    }

    int size() const { return n_; }
    const F& field() const { return field_; }
    Elem& at(int i, int j) { return a_[static_cast<std::size_t>(i) * n_ + j]; }
    const Elem& at(int i, int j) const { return a_[static_cast<std::size_t>(i) * n_ + j]; }

    DenseMatrix operator*(const DenseMatrix& o) const {
        DenseMatrix r(field_, n_);
        for (int i = 0; i < n_; ++i)
            for (int k = 0; k < n_; ++k) {
                if (field_.is_zero(at(i, k))) continue;
                for (int j = 0; j < n_; ++j)
                    r.at(i, j) = field_.add(r.at(i, j), field_.mul(at(i, k), o.at(k, j)));
            }
        return r;
    }

    Elem determinant() const {
        DenseMatrix m = *this;
        Elem det = field_.one();
        for (int c = 0; c < n_; ++c) {
            int p = -1;
            for (int r = c; r < n_; ++r)
                if (!field_.is_zero(m.at(r, c))) { p = r; break; }
            if (p < 0) return field_.zero();
            if (p != c) {
                for (int j = 0; j < n_; ++j) std::swap(m.at(p, j), m.at(c, j));
                det = field_.neg(det);
            }
            det = field_.mul(det, m.at(c, c));
            const Elem inv = field_.inv(m.at(c, c));
            for (int r = c + 1; r < n_; ++r) {
                if (field_.is_zero(m.at(r, c))) continue;
                const Elem f = field_.mul(m.at(r, c), inv);
                for (int j = c; j < n_; ++j)
                    m.at(r, j) = field_.sub(m.at(r, j), field_.mul(f, m.at(c, j)));
            }
        }
        return det;
    }

    // Gauss-Jordan inverse; throws SingularMatrixError.
    DenseMatrix inverse() const {
        DenseMatrix m = *this;
        DenseMatrix inv = identity(field_, n_);
        for (int c = 0; c < n_; ++c) {
            int p = -1;
            for (int r = c; r < n_; ++r)
                if (!field_.is_zero(m.at(r, c))) { p = r; break; }
            if (p < 0) throw SingularMatrixError();
            if (p != c)
                for (int j = 0; j < n_; ++j) {
                    std::swap(m.at(p, j), m.at(c, j));
                    std::swap(inv.at(p, j), inv.at(c, j));
                }
            const Elem piv = field_.inv(m.at(c, c));
            for (int j = 0; j < n_; ++j) {
                m.at(c, j) = field_.mul(m.at(c, j), piv);
                inv.at(c, j) = field_.mul(inv.at(c, j), piv);
            }
            for (int r = 0; r < n_; ++r) {
                if (r == c || field_.is_zero(m.at(r, c))) continue;
                const Elem f = m.at(r, c);
                for (int j = 0; j < n_; ++j) {
                    m.at(r, j) = field_.sub(m.at(r, j), field_.mul(f, m.at(c, j)));
                    inv.at(r, j) = field_.sub(inv.at(r, j), field_.mul(f, inv.at(c, j)));
                }
            }
        }
        return inv;
    }

  private:
    F field_;
    int n_;
    std::vector<Elem> a_;
};

// Square matrix with polynomial entries, used for determinant work only.
template <class F>
class PolyMatrix {
  public:
    using Poly = SparsePolynomial<F>;

    PolyMatrix(const F& field, OrderPtr order, int n)
        : n_(n), a_(static_cast<std::size_t>(n) * n, Poly(field, order)) {}

    int size() const { return n_; }
    Poly& at(int i, int j) { return a_[static_cast<std::size_t>(i) * n_ + j]; }
    const Poly& at(int i, int j) const { return a_[static_cast<std::size_t>(i) * n_ + j]; }

    Poly determinant() const {
        if (n_ == 0) throw Error("determinant of an empty matrix");
        if (n_ == 1) return at(0, 0);
        if (n_ == 2) return at(0, 0) * at(1, 1) - at(0, 1) * at(1, 0);
        if (n_ == 3)
            return at(0, 0) * (at(1, 1) * at(2, 2) - at(1, 2) * at(2, 1)) -
                   at(0, 1) * (at(1, 0) * at(2, 2) - at(1, 2) * at(2, 0)) +
                   at(0, 2) * (at(1, 0) * at(2, 1) - at(1, 1) * at(2, 0));
        return bareiss();
    }

  private:
    // Fraction-free elimination: every division is exact.
    Poly bareiss() const {
        PolyMatrix m = *this;
        const F& k = m.at(0, 0).field();
        const OrderPtr order = m.at(0, 0).order();
        Poly prev = Poly::from_int(k, order, 1);
        bool negate = false;
        for (int c = 0; c + 1 < n_; ++c) {
            int p = -1;
            for (int r = c; r < n_; ++r)
                if (!m.at(r, c).is_zero()) { p = r; break; }
            if (p < 0) return Poly(k, order);
            if (p != c) {
                for (int j = 0; j < n_; ++j) std::swap(m.at(p, j), m.at(c, j));
                negate = !negate;
            }
            for (int r = c + 1; r < n_; ++r) {
                for (int j = c + 1; j < n_; ++j)
                    m.at(r, j) = exact_div(m.at(c, c) * m.at(r, j) - m.at(r, c) * m.at(c, j), prev);
                m.at(r, c) = Poly(k, order);
            }
            prev = m.at(c, c);
        }
        Poly d = m.at(n_ - 1, n_ - 1);
        return negate ? -d : d;
    }

    int n_;
    std::vector<Poly> a_;
};

// Sylvester resultant of A and B with respect to v.
template <class F>
SparsePolynomial<F> resultant_in(const SparsePolynomial<F>& A, const SparsePolynomial<F>& B,
                                 const Variable& v) {
    const int dA = A.degree_in(v), dB = B.degree_in(v);
    if (dA < 0 || dB < 0) throw ZeroPolynomialError();
    const F& k = A.field();
    const OrderPtr order = A.order();
    if (dA == 0 && dB == 0) return SparsePolynomial<F>::from_int(k, order, 1);
    if (dA == 0) return A.pow(static_cast<unsigned>(dB));
    if (dB == 0) return B.pow(static_cast<unsigned>(dA));
    PolyMatrix<F> s(k, order, dA + dB);
    for (int r = 0; r < dB; ++r)
        for (int i = 0; i <= dA; ++i) s.at(r, r + i) = coefficient_of(A, v, dA - i);
    for (int r = 0; r < dA; ++r)
        for (int i = 0; i <= dB; ++i) s.at(dB + r, r + i) = coefficient_of(B, v, dB - i);
    return s.determinant();
}

}  // namespace chowforms
