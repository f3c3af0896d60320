#pragma once

#include <cstdint>
#include <random>

#include "cubeconc/distribution.hpp"

namespace cubeconc {

// The project-wide RNG; mt19937_64 has a fixed cross-platform sequence and
// we map raw words to doubles ourselves so results do not depend on the
// standard library's distribution implementations.
using Rng = std::mt19937_64;

inline double uniform01(Rng& rng) {
    return double(rng() >> 11) * 0x1.0p-53; // [0, 1)
}

struct MonteCarloEstimate {
    uint64_t samples = 0;
    double estimate = 0.0; // point estimate of the tail probability
    double radius = 0.0;   // sqrt(ln(2/delta) / (2 samples))
};

// One draw from mu by the conditional chain rule, coordinate by coordinate;
// one uniform word is consumed per coordinate.
CubePoint sample_point(const CubeDistribution& mu, Rng& rng);

// Estimates mu{|d_H(.,y) - E d_H| >= c}. Works for generator-backed mu at
// any n and dense-backed mu under the dense cap; deterministic in seed.
MonteCarloEstimate mc_estimate_tail(const CubeDistribution& mu, const CubePoint& y, double c,
                                    uint64_t samples, uint64_t seed, double delta);

} // namespace cubeconc
