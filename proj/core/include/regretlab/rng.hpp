#pragma once

#include <cstdint>
#include <random>

namespace regretlab {

using Rng = std::mt19937_64;

/// splitmix64 finalizer.
///   z = x;
///   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9;
///   z = (z ^ (z >> 27)) * 0x94D049BB133111EB;
///   return z ^ (z >> 31);
/// All arithmetic is modulo 2^64.
constexpr std::uint64_t splitmix64_mix(std::uint64_t x) {
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Seed of trial i: splitmix64_mix(master_seed + (i + 1) * 0x9E3779B97F4A7C15).
constexpr std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t trial) {
    return splitmix64_mix(master_seed + (trial + 1) * 0x9E3779B97F4A7C15ULL);
}

/// Uniform double in [0, 1) from the top 53 bits of one draw.
inline double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace regretlab
