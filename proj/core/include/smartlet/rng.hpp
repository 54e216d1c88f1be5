#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace smartlet {

// Counter-based stream: draw n of stream (seed, key) is a pure function, so
// agents never perturb each other's randomness and evaluation order is free.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t key) : base_(mix(seed ^ mix(key + 0x632be59bd9b4e019ULL))) {}

    std::uint64_t bits(std::uint64_t counter) const { return mix(base_ + counter * 0x9e3779b97f4a7c15ULL); }

    // Uniform in (0, 1).
    double uniform(std::uint64_t counter) const {
        return (static_cast<double>(bits(counter) >> 11) + 0.5) * 0x1.0p-53;
    }

    // Two independent standard normals (Box–Muller) from counters 2n, 2n+1.
    void normal_pair(std::uint64_t n, double& a, double& b) const {
        const double u1 = uniform(2 * n), u2 = uniform(2 * n + 1);
        const double r = std::sqrt(-2.0 * std::log(u1));
        a = r * std::cos(2 * std::numbers::pi * u2);
        b = r * std::sin(2 * std::numbers::pi * u2);
    }

    static constexpr std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t base_;
};

}  // namespace smartlet
