#pragma once
#include <cstdint>
#include <vector>

#include "variables.hpp"

namespace chowforms {

// Exponent vector over a VariableOrder; position 0 is the most significant
// variable.  Total degree is cached for the graded comparison.
struct Monomial {
    std::int32_t deg = 0;
    std::vector<std::int32_t> e;

    Monomial() = default;
    explicit Monomial(std::size_t nvars) : e(nvars, 0) {}

    bool is_one() const { return deg == 0; }

    friend bool operator==(const Monomial& a, const Monomial& b) {
        return a.deg == b.deg && a.e == b.e;
    }
};

// Graded lexicographic: higher total degree wins; ties go to the monomial
// with the larger exponent at the most significant differing position.
inline bool grlex_greater(const Monomial& a, const Monomial& b) {
    if (a.deg != b.deg) return a.deg > b.deg;
    const std::size_t m = a.e.size();
    for (std::size_t i = 0; i < m; ++i) {
        if (a.e[i] != b.e[i]) return a.e[i] > b.e[i];
    }
    return false;
}

struct GrlexGreater {
    bool operator()(const Monomial& a, const Monomial& b) const { return grlex_greater(a, b); }
};

inline Monomial mono_mul(const Monomial& a, const Monomial& b) {
    Monomial r = a;
    r.deg += b.deg;
    for (std::size_t i = 0; i < r.e.size(); ++i) r.e[i] += b.e[i];
    return r;
}

inline bool mono_divides(const Monomial& a, const Monomial& b) {
    // does a divide b?
    for (std::size_t i = 0; i < a.e.size(); ++i)
        if (a.e[i] > b.e[i]) return false;
    return true;
}

inline Monomial mono_div(const Monomial& b, const Monomial& a) {
    Monomial r = b;
    r.deg -= a.deg;
    for (std::size_t i = 0; i < r.e.size(); ++i) r.e[i] -= a.e[i];
    return r;
}

}  // namespace chowforms
