#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace tof {

using Rng = std::mt19937_64;

// Portable bounded draw (std distributions differ between standard libraries).
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
    if (bound <= 1) return 0;
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
    std::uint64_t v;
    do {
        v = rng();
    } while (v >= limit);
    return v % bound;
}

inline double uniform_unit(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

template <typename T>
void shuffle(std::vector<T>& v, Rng& rng) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[uniform_below(rng, i)]);
}

}  // namespace tof
