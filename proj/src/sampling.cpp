#include "cubeconc/sampling.hpp"

#include <bit>
#include <cmath>

#include "cubeconc/hamming_bounds.hpp"

namespace cubeconc {

CubePoint sample_point(const CubeDistribution& mu, Rng& rng) {
    const uint32_t n = mu.n();
    uint64_t idx = 0;
    for (uint32_t k = 1; k <= n; ++k) {
        double p0;
        if (k == 1) {
            p0 = mu.marginal(1).p0;
        } else {
            const ConditionalRow row = mu.conditional(k, CubePoint(k - 1, idx));
            if (!row.defined)
                fail(ErrorCode::invalid_parameter,
                     "sampler reached a zero-mass prefix; distribution is inconsistent");
            p0 = row.p0;
        }
        const int bit = uniform01(rng) < p0 ? 0 : 1;
        idx = (idx << 1) | uint64_t(bit);
    }
    return CubePoint(n, idx);
}

MonteCarloEstimate mc_estimate_tail(const CubeDistribution& mu, const CubePoint& y, double c,
                                    uint64_t samples, uint64_t seed, double delta) {
    if (samples == 0) fail(ErrorCode::invalid_parameter, "at least one sample is required");
    if (!(delta > 0.0 && delta < 1.0))
        fail(ErrorCode::invalid_parameter, "confidence parameter delta must lie in (0, 1)");
    if (!(c > 0.0)) fail(ErrorCode::invalid_parameter, "deviation threshold c must be positive");
    if (y.n() != mu.n()) fail(ErrorCode::dimension_mismatch, "point dimension mismatch");
    if (mu.kind() == DistKind::dense) (void)mu.dense_table(); // capacity check up front

    const double mean = mean_hamming(mu, y);
    const double cut = c - 1e-9; // same threshold guard as the exact tail
    Rng rng(seed);
    uint64_t hits = 0;
    for (uint64_t i = 0; i < samples; ++i) {
        const CubePoint x = sample_point(mu, rng);
        const double d = double(std::popcount(x.index() ^ y.index()));
        if (std::abs(d - mean) >= cut) ++hits;
    }
    MonteCarloEstimate out;
    out.samples = samples;
    out.estimate = double(hits) / double(samples);
    out.radius = std::sqrt(std::log(2.0 / delta) / (2.0 * double(samples)));
    return out;
}

} // namespace cubeconc
