#pragma once

#include <cstdint>

namespace demis {

// Counter-based randomness: every draw is a pure function of its key, so shot
// sets can be partitioned across tasks in any order with identical results.

inline std::uint64_t mix64(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ULL;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebULL;
    x ^= x >> 31;
    return x;
}

inline std::uint64_t hash_key(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    std::uint64_t x = mix64(seed + 0x9e3779b97f4a7c15ULL);
    x = mix64(x ^ (a + 0x9e3779b97f4a7c15ULL));
    x = mix64(x ^ (b + 0x9e3779b97f4a7c15ULL));
    return x;
}

/// Uniform double in [0,1) keyed by (seed, shot, site).
inline double site_uniform(std::uint64_t seed, std::uint64_t shot, std::uint64_t site) {
    return static_cast<double>(hash_key(seed, shot, site) >> 11) * 0x1.0p-53;
}

/// Uniform integer in [0, bound) keyed by (seed, a, b). bound >= 1.
inline std::uint64_t keyed_uniform_index(std::uint64_t seed, std::uint64_t a, std::uint64_t b,
                                         std::uint64_t bound) {
    return hash_key(seed, a, b) % bound;
}

}  // namespace demis
