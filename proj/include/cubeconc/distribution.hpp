#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cubeconc/cube_point.hpp"

namespace cubeconc {

// Absolute tolerance for identities on probabilities (masses, marginals).
inline constexpr double kProbTol = 1e-12;
// Relative tolerance for exponential-scale quantities (bounds, MGFs).
inline constexpr double kRelTol = 1e-9;

enum class DistKind { dense, product, markov, delta_mix };

const char* kind_name(DistKind kind);

struct MarginalRow {
    double p0 = 0.0; // mu^{(k)}(x_k = 0)
    double p1 = 0.0;
};

struct ConditionalRow {
    CubePoint prefix;       // (x_1,...,x_{k-1})
    double p0 = 0.0;        // mu(x_k = 0 | prefix); the factorization coefficient
    double p1 = 0.0;
    bool defined = false;   // false when mu_{k-1}(prefix) = 0
};

// Deviations eps_{x',y_k} of the conditional law of coordinate k from its
// marginal, over all prefixes x' of length k-1. Only eps_{x',0} is stored;
// eps_{x',1} is returned as its exact IEEE negation, so the sign relation
// eps_{x',y} = -eps_{x',1-y} holds bit-for-bit.
class EpsilonTable {
public:
    EpsilonTable(uint32_t k, std::vector<double> eps0, std::vector<uint8_t> defined);

    uint32_t k() const { return k_; }
    uint64_t prefix_count() const { return eps0_.size(); }
    bool defined(uint64_t prefix) const { return defined_[prefix] != 0; }

    double eps(uint64_t prefix, int y_bit) const {
        return y_bit == 0 ? eps0_[prefix] : -eps0_[prefix];
    }

    // max |eps_{x',.}| over defined prefixes only
    double sup_norm() const;

private:
    uint32_t k_;
    std::vector<double> eps0_;
    std::vector<uint8_t> defined_;
};

// An immutable probability measure on {0,1}^n. Generator-backed kinds
// (product, markov, delta_mix) answer marginal/conditional queries in closed
// form at any n <= 63; a dense table of all 2^n masses is materialized
// lazily (and cached) for the enumeration-based operations, subject to the
// dense capacity cap. All queries are safe to call concurrently.
class CubeDistribution {
public:
    // marginals[i] = P(x_{i+1} = 0); independent coordinates
    static CubeDistribution product(std::vector<double> p0_of_zero);

    // eps = 0: (1/2) delta_0 + (1/2) delta_1;
    // eps > 0: (1/2 - eps) delta_0 + (1/2) delta_1 + eps/(2^n-2) on the rest
    static CubeDistribution delta_mix(uint32_t n, double eps);

    // rows[j] = (p(0 | x=0), p(0 | x=1)) for coordinate j+2; n = rows.size()+1
    static CubeDistribution markov(double initial_p0, std::vector<std::array<double, 2>> rows);

    // seed is informational (recorded for reproducibility in reports)
    static CubeDistribution dense(uint32_t n, std::vector<double> probs,
                                  std::optional<uint64_t> seed = std::nullopt);

    // drawn uniformly from the 2^n-simplex (normalized exponentials),
    // deterministic in seed
    static CubeDistribution random_dense(uint32_t n, uint64_t seed);

    uint32_t n() const;
    DistKind kind() const;
    std::optional<uint64_t> seed() const; // set for random_dense

    const std::vector<double>& product_p0() const;
    double delta_eps() const;
    double markov_initial_p0() const;
    const std::vector<std::array<double, 2>>& markov_rows() const;

    // true when a dense table can be materialized under the current cap
    bool dense_capable() const;

    // all 2^n masses, index order fixed by CubePoint
    std::span<const double> dense_table() const;

    // mu_k over all 2^k prefixes (level k of the prefix-sum tree); level n
    // is the dense table itself
    std::span<const double> level(uint32_t k) const;

    double prob(const CubePoint& x) const;

    // mu_k(x') for k = prefix.n(); closed form for generator kinds
    double prefix_mass(const CubePoint& prefix) const;

    MarginalRow marginal(uint32_t k) const;

    ConditionalRow conditional(uint32_t k, const CubePoint& prefix) const;

    // 2 <= k <= n
    EpsilonTable epsilon_table(uint32_t k) const;

    // joint law of (x_1,...,x_k), dense-backed
    CubeDistribution marginalize(uint32_t k) const;

    double total_mass() const;

    // Capacity caps; CUBECONC_MAX_N overrides both when set.
    static uint32_t dense_cap();        // default 24
    static uint32_t random_dense_cap(); // default 12

private:
    struct Impl;
    explicit CubeDistribution(std::shared_ptr<Impl> impl) : impl_(std::move(impl)) {}

    std::shared_ptr<Impl> impl_;
};

} // namespace cubeconc
