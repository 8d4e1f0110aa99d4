#pragma once

#include <cstdint>
#include <cmath>
#include <random>

namespace bornlab {

/// Deterministic 64-bit generator used throughout. The engine output sequence
/// is fixed by the C++ standard, and all distribution helpers below are
/// hand-rolled, so a (seed, call sequence) pair reproduces bit-identically on
/// any platform.
using Rng = std::mt19937_64;

/// splitmix64 finalizer (Steele, Lea, Flood). Full-avalanche mix of one word.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Seed for an independent task stream. Mixing a master seed with a stable
/// task index through the avalanche hash keeps every task's stream fixed no
/// matter how tasks are scheduled across workers. Nested streams are obtained
/// by using a derived seed as the master of the next level.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t task_index) noexcept {
    return splitmix64(splitmix64(master ^ 0x6a09e667f3bcc909ULL) ^ splitmix64(task_index));
}

inline Rng make_rng(std::uint64_t seed) { return Rng(seed); }

/// Uniform double in [0, 1) with 53-bit resolution.
inline double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Unbiased uniform integer in [0, n). Rejection sampling on the top block.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t n) {
    std::uint64_t x, r;
    do {
        x = rng();
        r = x % n;
    } while (x - r > std::uint64_t(-1) - (n - 1));
    return r;
}

inline bool bernoulli(Rng& rng, double p) { return uniform01(rng) < p; }

/// Standard normal via Box-Muller. Cache-free: one value per call, two
/// uniforms consumed, so the draw count per call is fixed.
inline double normal01(Rng& rng) {
    double u1 = uniform01(rng);
    double u2 = uniform01(rng);
    // 1 - u1 avoids log(0)
    return std::sqrt(-2.0 * std::log1p(-u1)) * std::cos(6.283185307179586476925287 * u2);
}

} // namespace bornlab
