#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace needle {

// Deterministic generators, identical output on every platform. Pixel noise
// uses the counter-based form so results never depend on iteration order.

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

/// Derives an independent stream seed from (seed, stream index).
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t s = seed ^ (0x9E3779B97F4A7C15ull * (stream + 0x632BE59BD9B4E019ull));
    return splitmix64_next(s);
}

struct SplitMix64 {
    std::uint64_t state = 0;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() { return splitmix64_next(state); }

    /// Uniform in [0, 1), 53-bit resolution.
    double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    // Exactly uniform when n divides 2^64 (powers of two); negligibly biased otherwise.
    std::uint32_t next_below(std::uint32_t n) {
        return static_cast<std::uint32_t>(next() % n);
    }
};

/// Standard normal draw addressed by (seed, counter); schedule-independent.
inline double gaussian_at(std::uint64_t seed, std::uint64_t index) {
    SplitMix64 g(mix_seed(seed, index));
    double u1 = g.next_double();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    const double u2 = g.next_double();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace needle
