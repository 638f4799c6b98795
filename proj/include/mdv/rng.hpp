#pragma once

#include <cstdint>

#include "mdv/vec.hpp"

namespace mdv {

inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// splitmix64. Sample i of a sweep draws from Rng::stream(seed, i), so results
// do not depend on iteration order; parallel and serial sweeps agree bitwise.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    static Rng stream(std::uint64_t seed, std::uint64_t index) {
        return Rng(mix64(mix64(seed) ^ (0x632be59bd9b4e019ULL * (index + 1))));
    }

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // in [0, 1)
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

    Vec uniform_vec(int dim, double lo, double hi) {
        Vec v(static_cast<std::size_t>(dim));
        for (auto& c : v) c = uniform(lo, hi);
        return v;
    }

    // in {0, ..., n-1}
    std::uint64_t uniform_index(std::uint64_t n) { return next_u64() % n; }

private:
    std::uint64_t state_;
};

} // namespace mdv
