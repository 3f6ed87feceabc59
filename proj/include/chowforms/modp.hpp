#pragma once
#include <atomic>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "decomposition.hpp"

namespace chowforms {

// ---- verdicts ----------------------------------------------------------------------

enum class PrimeStatus { Good, Bad, Indeterminate };

inline const char* status_name(PrimeStatus s) {
    switch (s) {
        case PrimeStatus::Good: return "Good";
        case PrimeStatus::Bad: return "Bad";
        case PrimeStatus::Indeterminate: return "Indeterminate";
    }
    return "?";
}

// One dimension's pair of forms, both printed in the text grammar: the
// reduction of the rational side's primitive Chow form, and the form the
// mod-p decomposition produced.  "1" stands for the empty set; an empty
// string marks a side that was never computed.
struct DimensionPair {
    int k = 0;
    std::string reduced;
    std::string computed;
};

// Classification of one odd prime.  Good carries the matched pair for every
// dimension; Bad carries the disagreeing dimension and both sides of the
// disagreement; Indeterminate carries a note saying where the mod-p side
// gave up.  A Bad verdict is always a proof, never a guess.
struct PrimeVerdict {
    std::uint64_t p = 0;
    PrimeStatus status = PrimeStatus::Indeterminate;
    std::vector<DimensionPair> forms;
    int witness_k = -1;  // Bad only: the dimension of the disagreement
    std::string note;
};

// ---- the two sides -----------------------------------------------------------------

// Primitive Chow forms of the equidimensional components over the rationals,
// indexed by dimension.  This is the p-independent half of every prime
// check; primitive representatives are unique, so the result does not depend
// on the seed.
inline std::vector<ChowForm<RationalField>> primitive_decomposition(const PolySystem& sys,
                                                                    std::uint64_t seed,
                                                                    int max_retries = 8) {
    DecompositionResult<RationalField> res = decompose(sys, seed, max_retries);
    std::vector<ChowForm<RationalField>> out;
    out.reserve(res.chow_forms.size());
    for (const auto& c : res.chow_forms) out.push_back(primitive_chow(c));
    return out;
}

// Equidimensional decomposition of the reduced system over F_p, through a
// random coordinate change drawn from the given stream.  Polynomials that
// vanish mod p impose no condition and are dropped; if all of them vanish
// the variety is the whole affine space.  The decomposition loop's
// guarantees live in characteristic zero, so over F_p any failure, or an
// output breaking a Chow-form invariant, just discards the attempt;
// nullopt means no attempt survived the retry budget.
inline std::optional<std::vector<ChowForm<PrimeField>>> decompose_mod_p(const PolySystem& sys,
                                                                        const PrimeField& fp,
                                                                        Rng& rng,
                                                                        int max_retries = 8) {
    std::vector<SparsePolynomial<PrimeField>> polys;
    for (const auto& f : sys.polys) {
        SparsePolynomial<PrimeField> g = reduce_mod_p(f, fp);  // integer input: always defined
        if (!g.is_zero()) polys.push_back(std::move(g));
    }
    std::vector<ChowForm<PrimeField>> out;
    if (polys.empty()) {
        for (int k = 0; k < sys.n; ++k) out.push_back(chow_empty(fp, sys.n));
        out.push_back(chow_ambient(fp, sys.n));
        return out;
    }
    const Integer budget = integer_pow(Integer(sys.d), static_cast<unsigned long>(sys.n));
    for (int attempt = 0; attempt < max_retries; ++attempt) {
        DenseMatrix<PrimeField> B(fp, sys.n);
        bool invertible = false;
        for (int draw = 0; draw < 256 && !invertible; ++draw) {
            for (int i = 0; i < sys.n; ++i)
                for (int j = 0; j < sys.n; ++j) B.at(i, j) = rng.below(fp.modulus());
            invertible = !fp.is_zero(B.determinant());
        }
        if (!invertible) return std::nullopt;
        const TransformPair<PrimeField> tr = make_transform(B);
        std::vector<SparsePolynomial<PrimeField>> transformed;
        for (const auto& g : polys) transformed.push_back(apply_point_transform(g, tr.A));
        try {
            RawDecomposition<PrimeField> raw = decompose_chow_raw(transformed, sys.n);
            const DenseMatrix<PrimeField> back = hyperplane_transform(tr.A);
            out.clear();
            for (const auto& c : raw.chow_forms)
                out.push_back(c.is_empty() ? c : apply_block_transform(c, back));
            if (!detail::decomposition_outputs_ok(out, budget)) continue;
            return out;
        } catch (const ComputationUndefined&) {
            continue;
        }
    }
    return std::nullopt;
}

// ---- classification ----------------------------------------------------------------

// Classify one odd prime against precomputed primitive Chow forms of the
// rational decomposition.  Good means every dimension's primitive form
// reduces to a squarefree form that matches the mod-p decomposition up to a
// nonzero scalar.  Primitive forms have content 1, so their reductions are
// never zero, and multi-homogeneity is a property of each surviving
// monomial, so per-block degrees cannot drop either; squarefreeness is the
// one reduction invariant with room to break.
inline PrimeVerdict check_prime(const std::vector<ChowForm<RationalField>>& qforms,
                                const PolySystem& sys, std::uint64_t p, std::uint64_t seed,
                                int max_retries = 8) {
    const PrimeField fp(p);  // rejects p = 2, composites, p >= 2^61
    PrimeVerdict v;
    v.p = p;

    std::vector<ChowForm<PrimeField>> reduced;
    for (int k = 0; k <= sys.n; ++k) {
        const ChowForm<RationalField>& c = qforms[static_cast<std::size_t>(k)];
        if (c.is_empty()) {
            reduced.push_back(chow_empty(fp, sys.n));
            continue;
        }
        ChowForm<PrimeField> cr = make_chow(reduce_mod_p(c.poly, fp), c.n, c.r);
        if (!chow_squarefree_ok(cr)) {
            v.status = PrimeStatus::Bad;
            v.witness_k = k;
            v.forms.push_back({k, print_polynomial(cr.poly), ""});
            v.note = "reduction of the dimension-" + std::to_string(k) +
                     " form has a repeated factor";
            return v;
        }
        reduced.push_back(std::move(cr));
    }

    Rng rng(Rng::derive(seed, p));
    const auto side = decompose_mod_p(sys, fp, rng, max_retries);
    if (!side) {
        v.status = PrimeStatus::Indeterminate;
        v.note = "decomposition over F_" + std::to_string(p) + " failed on every transform";
        return v;
    }

    for (int k = 0; k <= sys.n; ++k) {
        const ChowForm<PrimeField>& qs = reduced[static_cast<std::size_t>(k)];
        const ChowForm<PrimeField>& ps = (*side)[static_cast<std::size_t>(k)];
        DimensionPair pr{k, print_polynomial(qs.poly), print_polynomial(ps.poly)};
        const bool match = qs.is_empty() == ps.is_empty() &&
                           (qs.is_empty() || qs.poly.monic() == ps.poly.monic());
        if (!match) {
            v.status = PrimeStatus::Bad;
            v.witness_k = k;
            v.forms.push_back(std::move(pr));
            v.note = "dimension-" + std::to_string(k) + " components disagree";
            return v;
        }
        v.forms.push_back(std::move(pr));
    }
    v.status = PrimeStatus::Good;
    return v;
}

inline PrimeVerdict check_prime(const PolySystem& sys, std::uint64_t p, std::uint64_t seed,
                                int max_retries = 8) {
    { const PrimeField probe(p); (void)probe; }  // validate p before the heavy half
    return check_prime(primitive_decomposition(sys, seed, max_retries), sys, p, seed,
                       max_retries);
}

// ---- scanning ----------------------------------------------------------------------

// Verdicts for every odd prime up to p_max, in ascending order.  The
// rational decomposition is hoisted out of the loop; each prime then runs on
// a stream derived from (seed, p), so the verdict list is one deterministic
// function of (sys, p_max, seed) no matter how many workers share the scan.
inline std::vector<PrimeVerdict> scan_primes(const PolySystem& sys, std::uint64_t p_max,
                                             std::uint64_t seed, int jobs = 1,
                                             int max_retries = 8) {
    if (p_max < 3) throw InputError("a prime scan needs p_max >= 3");
    const std::vector<ChowForm<RationalField>> qforms =
        primitive_decomposition(sys, seed, max_retries);
    std::vector<std::uint64_t> primes;
    for (std::uint64_t p = 3; p <= p_max; p += 2)
        if (detail::is_prime_u64(p)) primes.push_back(p);
    std::vector<PrimeVerdict> out(primes.size());
    if (jobs < 1) {
        jobs = static_cast<int>(std::thread::hardware_concurrency());
        if (jobs < 1) jobs = 1;
    }
    std::atomic<std::size_t> cursor{0};
    auto work = [&]() {
        for (;;) {
            const std::size_t i = cursor.fetch_add(1);
            if (i >= primes.size()) return;
            out[i] = check_prime(qforms, sys, primes[i], seed, max_retries);
        }
    };
    if (jobs == 1 || primes.size() <= 1) {
        work();
    } else {
        const std::size_t count = std::min(static_cast<std::size_t>(jobs), primes.size());
        std::vector<std::thread> pool;
        pool.reserve(count);
        for (std::size_t t = 0; t < count; ++t) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }
    return out;
}

// True when the log-sum of the Bad primes fits under the bound: the bad
// primes all divide one fixed nonzero integer of height at most `bound`, so
// the sum of ln p over them can never exceed it.
inline bool certify_against_bound(const std::vector<PrimeVerdict>& verdicts, double bound) {
    double s = 0;
    for (const auto& v : verdicts)
        if (v.status == PrimeStatus::Bad) s += std::log(static_cast<double>(v.p));
    return s <= bound;
}

}  // namespace chowforms
