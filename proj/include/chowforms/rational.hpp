#pragma once
#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <string>

#include "errors.hpp"
#include "rng.hpp"

namespace chowforms {

using Integer = mpz_class;
using Rational = mpq_class;

inline Rational make_rational(const Integer& num, const Integer& den) {
    if (den == 0) throw DivisionByZeroError();
    Rational q(num, den);
    q.canonicalize();
    return q;
}

inline Rational make_rational(long num, long den = 1) {
    return make_rational(Integer(num), Integer(den));
}

// ln|z| computed exactly enough for height arithmetic: mpz_get_d_2exp splits
// z = m * 2^e with 0.5 <= |m| < 1, so ln|z| = ln|m| + e ln 2 without overflow.
inline double log_abs(const Integer& z) {
    if (z == 0) throw DivisionByZeroError();
    signed long e = 0;
    double m = mpz_get_d_2exp(&e, z.get_mpz_t());
    return std::log(std::fabs(m)) + static_cast<double>(e) * std::log(2.0);
}

inline Integer integer_pow(Integer base, unsigned long e) {
    Integer r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

// Uniform draw from {-bound, ..., bound} for an arbitrary-precision bound,
// assembled from 64-bit chunks so it is reproducible across platforms.
inline Integer uniform_symmetric(Rng& rng, const Integer& bound) {
    Integer span = 2 * bound + 1;  // rejection-sample v uniform in [0, span)
    const std::size_t bits = mpz_sizeinbase(span.get_mpz_t(), 2);
    const std::size_t chunks = (bits + 63) / 64;
    const std::size_t top_bits = bits - 64 * (chunks - 1);
    while (true) {
        Integer v = 0;
        for (std::size_t c = 0; c < chunks; ++c) {
            std::uint64_t w = rng.next();
            if (c == 0 && top_bits < 64) w >>= (64 - top_bits);
            v <<= 64;
            v += Integer(static_cast<unsigned long>(w));
        }
        if (v < span) return v - bound;
    }
}

}  // namespace chowforms
