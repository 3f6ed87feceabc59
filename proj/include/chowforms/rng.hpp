#pragma once
#include <cstdint>

namespace chowforms {

// splitmix64: tiny deterministic generator with identical output on every
// platform.  All randomized routines in the library draw from this so that a
// seed pins the whole run.
class Rng {
    std::uint64_t state_;

public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform draw from [0, bound) by rejection; bound > 0.
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t limit = bound * (~0ULL / bound);
        std::uint64_t v;
        do {
            v = next();
        } while (v >= limit);
        return v % bound;
    }

    // Derive an independent stream, e.g. one per worker or per prime.
    static std::uint64_t derive(std::uint64_t seed, std::uint64_t salt) {
        Rng r(seed ^ (0x9e3779b97f4a7c15ULL * (salt + 1)));
        r.next();
        return r.next();
    }
};

}  // namespace chowforms
