#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace voxwheat {

// Unbiased draw in [0, n). Hand-rolled so seeded results are identical
// across standard library implementations.
inline std::uint64_t rng_below(std::mt19937_64& gen, std::uint64_t n) {
    std::uint64_t x, r;
    do {
        x = gen();
        r = x % n;
    } while (x - r > std::uint64_t(-1) - (n - 1));
    return r;
}

// Uniform double in [0, 1) with 53 bits of randomness.
inline double rng_unit(std::mt19937_64& gen) {
    return double(gen() >> 11) * 0x1.0p-53;
}

// Fisher-Yates with the portable draw above.
template <typename T>
void seeded_shuffle(std::vector<T>& values, std::mt19937_64& gen) {
    for (std::size_t i = values.size(); i > 1; --i) {
        std::swap(values[i - 1], values[rng_below(gen, i)]);
    }
}

// FNV-1a, used to derive independent seed streams from string keys.
inline std::uint64_t fnv1a(std::string_view text) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace voxwheat
