#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace rankbench {

// FNV-1a, used for seed derivation and config hashing. Stable across platforms.
inline uint64_t fnv1a64(std::string_view data, uint64_t hash = 14695981039346656037ull) {
    for (unsigned char c : data) {
        hash ^= c;
        hash *= 1099511628211ull;
    }
    return hash;
}

inline uint64_t fnv1a64_mix(uint64_t hash, uint64_t value) {
    for (int i = 0; i < 8; ++i) {
        hash ^= (value >> (8 * i)) & 0xffu;
        hash *= 1099511628211ull;
    }
    return hash;
}

// Seed for one (stream, key) pair, e.g. tie-breaking for (source, match).
inline uint64_t derive_seed(uint64_t master, std::string_view stream, std::string_view key) {
    uint64_t h = fnv1a64_mix(14695981039346656037ull, master);
    h = fnv1a64(stream, h);
    h = fnv1a64(key, h);
    return h;
}

// std::uniform_*_distribution is not specified bit-exactly across standard
// libraries, so frozen expected values go through these helpers instead.
inline double uniform_real(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline std::size_t uniform_index(std::mt19937_64& rng, std::size_t bound) {
    // rejection sampling, unbiased
    const uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return static_cast<std::size_t>(x % bound);
}

template <typename T>
void shuffle_inplace(std::vector<T>& items, std::mt19937_64& rng) {
    for (std::size_t i = items.size(); i > 1; --i) {
        std::swap(items[i - 1], items[uniform_index(rng, i)]);
    }
}

// Standard-normal draw via Box-Muller on the portable uniform.
inline double normal_draw(std::mt19937_64& rng) {
    double u1 = uniform_real(rng);
    double u2 = uniform_real(rng);
    while (u1 <= 0.0) u1 = uniform_real(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
}

} // namespace rankbench
