#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "geometry.hpp"

namespace topoctl {

// splitmix64; used for seed derivation so trial streams are decorrelated and
// order-independent.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
    return mix64(mix64(master) ^ mix64(stream + 0x517cc1b727220a95ULL));
}

/// Deterministic generator. Uses std::mt19937_64 (fully specified by the
/// standard) and hand-rolled uniform conversions, since the std distribution
/// classes are implementation-defined and would break cross-platform
/// reproducibility.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform double in [0, 1): 53 random mantissa bits.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, n) by rejection over the next power of two.
    std::uint64_t below(std::uint64_t n) {
        if (n == 0) throw std::invalid_argument("Rng::below: n must be positive");
        const std::uint64_t mask = n <= 1 ? 0 : ~std::uint64_t{0} >> __builtin_clzll(n - 1);
        for (;;) {
            const std::uint64_t v = engine_() & mask;
            if (v < n) return v;
        }
    }

    /// Uniform unordered pair {i, j}, i < j, from [0, n).
    std::pair<std::uint32_t, std::uint32_t> pair_below(std::uint32_t n) {
        if (n < 2) throw std::invalid_argument("Rng::pair_below: need n >= 2");
        const auto i = static_cast<std::uint32_t>(below(n));
        auto j = static_cast<std::uint32_t>(below(n - 1));
        if (j >= i) ++j;
        return i < j ? std::pair{i, j} : std::pair{j, i};
    }

    template <class T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
    }

private:
    std::mt19937_64 engine_;
};

/// n points independently uniform on the unit square, ids 1..n.
inline PointSet generate_uniform_points(std::size_t n, std::uint64_t seed) {
    if (n == 0) throw std::invalid_argument("generate_uniform_points: n must be >= 1");
    Rng rng(seed);
    std::vector<PointSet::Entry> entries;
    entries.reserve(n);
    for (std::size_t i = 1; i <= n; ++i) {
        const double x = rng.uniform01();
        const double y = rng.uniform01();
        entries.push_back({NodeId::number(i), x, y});
    }
    return PointSet(std::move(entries));
}

} // namespace topoctl
