#pragma once
#include <cstdint>
#include <string>

#include "errors.hpp"
#include "rational.hpp"

namespace chowforms {

// Field of rational numbers.  Elements are GMP rationals, which are kept
// canonical (coprime numerator/denominator, positive denominator) by GMP.
struct RationalField {
    using Elem = Rational;
    static constexpr bool is_prime_field = false;

    Elem zero() const { return Rational(0); }
    Elem one() const { return Rational(1); }
    Elem from_int(long v) const { return Rational(v); }

    Elem add(const Elem& a, const Elem& b) const { return a + b; }
    Elem sub(const Elem& a, const Elem& b) const { return a - b; }
    Elem mul(const Elem& a, const Elem& b) const { return a * b; }
    Elem neg(const Elem& a) const { return -a; }
    Elem inv(const Elem& a) const {
        if (a == 0) throw DivisionByZeroError();
        return 1 / a;
    }
    Elem div(const Elem& a, const Elem& b) const { return mul(a, inv(b)); }
    bool is_zero(const Elem& a) const { return a == 0; }
    bool equal(const Elem& a, const Elem& b) const { return a == b; }
    std::string to_string(const Elem& a) const { return a.get_str(); }

    bool operator==(const RationalField&) const { return true; }
};

namespace detail {

inline std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % p);
}

inline std::uint64_t powmod_u64(std::uint64_t a, std::uint64_t e, std::uint64_t p) {
    std::uint64_t r = 1 % p;
    while (e) {
        if (e & 1) r = mulmod_u64(r, a, p);
        a = mulmod_u64(a, a, p);
        e >>= 1;
    }
    return r;
}

// Deterministic Miller-Rabin; the listed bases decide primality for all
// 64-bit inputs.
inline bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t q : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % q == 0) return n == q;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        std::uint64_t x = powmod_u64(a % n, d, n);
        if (x == 0 || x == 1 || x == n - 1) continue;
        bool witness = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod_u64(x, x, n);
            if (x == n - 1) {
                witness = false;
                break;
            }
        }
        if (witness) return false;
    }
    return true;
}

}  // namespace detail

// Prime field F_p for an odd prime p < 2^61, on machine words.  p = 2 is
// rejected everywhere: the certified modulus carries a factor of 2, so 2 is
// never a certifiable prime, and several routines divide by 2.
class PrimeField {
    std::uint64_t p_;

public:
    using Elem = std::uint64_t;
    static constexpr bool is_prime_field = true;
    static constexpr std::uint64_t max_modulus = (1ULL << 61);

    explicit PrimeField(std::uint64_t p) : p_(p) {
        if (p == 2) throw EvenPrimeError();
        if (p >= max_modulus || !detail::is_prime_u64(p))
            throw BadPrimeModulusError("modulus " + std::to_string(p) +
                                       " is not an odd prime below 2^61");
    }

    std::uint64_t modulus() const { return p_; }

    Elem zero() const { return 0; }
    Elem one() const { return 1; }
    Elem from_int(long v) const {
        long r = v % static_cast<long>(p_);
        if (r < 0) r += static_cast<long>(p_);
        return static_cast<Elem>(r);
    }
    Elem from_integer(const Integer& z) const {
        std::uint64_t r = mpz_fdiv_ui(z.get_mpz_t(), static_cast<unsigned long>(p_));
        return r;
    }

    Elem add(Elem a, Elem b) const {
        Elem r = a + b;  // p < 2^61 leaves headroom, no overflow
        return r >= p_ ? r - p_ : r;
    }
    Elem sub(Elem a, Elem b) const { return a >= b ? a - b : a + p_ - b; }
    Elem mul(Elem a, Elem b) const { return detail::mulmod_u64(a, b, p_); }
    Elem neg(Elem a) const { return a == 0 ? 0 : p_ - a; }
    Elem inv(Elem a) const {
        if (a == 0) throw DivisionByZeroError();
        return detail::powmod_u64(a, p_ - 2, p_);
    }
    Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }
    Elem pow(Elem a, std::uint64_t e) const { return detail::powmod_u64(a, e, p_); }
    bool is_zero(Elem a) const { return a == 0; }
    bool equal(Elem a, Elem b) const { return a == b; }
    std::string to_string(Elem a) const { return std::to_string(a); }

    bool operator==(const PrimeField& o) const { return p_ == o.p_; }
};

}  // namespace chowforms
