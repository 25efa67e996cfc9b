#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>

namespace bwdm {

/// SplitMix64 finalizer, used to derive independent seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Generator for substream `index` of `seed`. Every consumer that needs
/// order-independent randomness (one observation, one restart) owns its own
/// substream, so parallel and serial evaluation draw identical numbers.
inline std::mt19937_64 substream(std::uint64_t seed, std::uint64_t index) {
    return std::mt19937_64(splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632be59bd9b4e019ULL)));
}

// The standard distributions are implementation-defined, so draws are built
// directly from the engine's 64-bit output.

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(std::mt19937_64& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

/// Uniform integer in [0, n) by rejection sampling; n must be positive.
inline std::size_t uniform_index(std::mt19937_64& gen, std::size_t n) {
    const std::uint64_t range = n;
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % range;
    std::uint64_t v;
    do {
        v = gen();
    } while (v >= limit);
    return static_cast<std::size_t>(v % range);
}

/// Standard normal deviate (Box-Muller, one value per call).
double standard_normal(std::mt19937_64& gen);

}  // namespace bwdm
