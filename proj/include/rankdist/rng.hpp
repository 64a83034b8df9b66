#pragma once

// Seeding and bounded draws for the simulator. Everything here is specified
// bit for bit so that a (master seed, replicate) pair reproduces the same
// tree on any platform: std::mt19937_64 is fully specified by the standard,
// and the bounded draw below replaces the implementation-defined
// std::uniform_int_distribution.

#include <cstdint>
#include <random>

namespace rankdist::sim {

using Engine = std::mt19937_64;

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept
{
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Seed of replicate r: mix64(mix64(master) ^ (r * golden ratio constant)).
/// Stable across versions; changing it changes every published run.
constexpr std::uint64_t child_seed(std::uint64_t master, std::uint64_t replicate) noexcept
{
    return mix64(mix64(master) ^ (replicate * 0x9E3779B97F4A7C15ULL));
}

/// Uniform integer in [0, bound), bound >= 1. Lemire's multiply-shift with
/// rejection, so the result is exactly uniform.
inline std::uint64_t uniform_below(Engine& eng, std::uint64_t bound)
{
    unsigned __int128 m = static_cast<unsigned __int128>(eng()) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
        const std::uint64_t threshold = (0 - bound) % bound;
        while (low < threshold) {
            m = static_cast<unsigned __int128>(eng()) * bound;
            low = static_cast<std::uint64_t>(m);
        }
    }
    return static_cast<std::uint64_t>(m >> 64);
}

} // namespace rankdist::sim
