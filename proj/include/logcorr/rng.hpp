#pragma once

#include <cmath>
#include <cstdint>

namespace logcorr {

/// Deterministic 64-bit generator used for all simulator randomness.
///
/// The algorithm is SplitMix64 (Steele, Lea & Vigna; the reference
/// implementation published with xoshiro). It is chosen over
/// std::mt19937_64 + std::*_distribution because the standard
/// distributions are implementation-defined: the same seed would produce
/// different traces under different standard libraries. Everything here
/// is pinned bit-for-bit so a scenario seed reproduces byte-identical
/// traces anywhere.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    /// Unbiased integer in [0, n), n >= 1. Rejection-samples the top
    /// remainder band instead of taking next() % n.
    std::uint64_t uniform_below(std::uint64_t n) {
        const std::uint64_t threshold = (0 - n) % n; // 2^64 mod n
        for (;;) {
            const std::uint64_t r = next();
            if (r >= threshold) return r % n;
        }
    }

    /// Inclusive range [lo, hi].
    std::uint64_t uniform_int(std::uint64_t lo, std::uint64_t hi) {
        return lo + uniform_below(hi - lo + 1);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    /// Poisson-distributed count via Knuth's product method. Fine for the
    /// small per-tick event rates used here (mean well below 10).
    std::uint32_t poisson(double mean) {
        if (mean <= 0.0) return 0;
        const double limit = std::exp(-mean);
        std::uint32_t k = 0;
        double product = 1.0;
        do {
            ++k;
            product *= uniform01();
        } while (product > limit);
        return k - 1;
    }

    /// Seed for a decorrelated substream. Feeding (seed, stream id)
    /// through one SplitMix64 step keeps host streams independent: adding
    /// a host never perturbs the draws of existing hosts.
    static std::uint64_t substream(std::uint64_t seed, std::uint64_t stream_id) {
        SplitMix64 g(seed + 0x9E3779B97F4A7C15ull * (stream_id + 1));
        return g.next();
    }

private:
    std::uint64_t state_;
};

} // namespace logcorr
