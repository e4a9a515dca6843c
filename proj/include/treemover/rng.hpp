// Counter-based deterministic RNG with splittable streams.
//
// Every draw is a pure function of (seed, stream, counter), so graphs generated
// in parallel from split streams are bitwise identical to a sequential run.
// std::uniform_*_distribution is implementation-defined; we avoid it entirely.
#pragma once

#include <cstdint>

namespace treemover {

namespace detail {

// SplitMix64 finalizer (Steele et al.), a well-mixed 64-bit permutation.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace detail

class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
        : key_(detail::mix64(seed ^ detail::mix64(stream))), counter_(0) {}

    // Independent child stream; drawing from it does not advance this stream.
    CounterRng split(std::uint64_t stream) const { return CounterRng(key_, stream + 1); }

    std::uint64_t next_u64() { return detail::mix64(key_ ^ detail::mix64(counter_++)); }

    // Uniform in [0, 1) with 53 random mantissa bits.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    // Uniform integer in [lo, hi] inclusive. Uses rejection to stay unbiased.
    std::uint64_t uniform_int(std::uint64_t lo, std::uint64_t hi) {
        const std::uint64_t span = hi - lo + 1;
        if (span == 0) return next_u64();  // full range
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
        std::uint64_t x;
        do {
            x = next_u64();
        } while (x >= limit);
        return lo + x % span;
    }

    bool bernoulli(double p) { return next_double() < p; }

private:
    std::uint64_t key_;
    std::uint64_t counter_;
};

}  // namespace treemover
