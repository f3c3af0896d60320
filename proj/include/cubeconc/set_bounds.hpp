#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cubeconc/distribution.hpp"

namespace cubeconc {

// A subset of {0,1}^n as a bitset over the 2^n point indices.
class CubeSet {
public:
    explicit CubeSet(uint32_t n);

    static CubeSet full(uint32_t n);
    static CubeSet of(uint32_t n, std::span<const uint64_t> members);

    uint32_t n() const { return n_; }
    bool empty() const;
    uint64_t cardinality() const;
    bool contains(uint64_t index) const;
    void insert(uint64_t index);

    std::vector<uint64_t> members() const;
    const std::vector<uint64_t>& words() const { return words_; }

private:
    uint32_t n_;
    std::vector<uint64_t> words_;
};

// min_{a in A} d_H(x, a); A must be nonempty
uint32_t set_distance(const CubePoint& x, const CubeSet& a);

// d(x, A) for every x, by multi-source BFS over the cube graph
std::vector<uint8_t> distance_transform(const CubeSet& a);

// A_eps = {x : d(x,A) <= eps}
CubeSet enlargement(const CubeSet& a, uint32_t eps);

// alpha(mu, eps) = 1 - min{mu(A_eps) : mu(A) >= 1/2}, exact by enumerating
// every subset; n <= 4 only (the enumeration is doubly exponential).
double concentration_alpha(const CubeDistribution& mu, uint32_t eps);

// Certified lower bound on alpha from a pool of candidate half-mass sets
// (greedy mass orders, Hamming balls). Never reported as alpha itself.
double alpha_lower_bound(const CubeDistribution& mu, uint32_t eps);

struct MedianCheck {
    double lhs = 0.0;   // mu{|d_H(.,y) - M| <= eps}
    double rhs = 0.0;   // 1 - 2 alpha(mu, eps)
    uint32_t median = 0;
    bool holds = false;
};

// Lipschitz-median concentration chain for f = d_H(.,y); n <= 4.
MedianCheck median_concentration_check(const CubeDistribution& mu, const CubePoint& y,
                                       uint32_t eps);

// c_k = max over positive-mass prefixes of max(p0, p1), for k = 2..n
std::vector<double> conditional_sup_bounds(const CubeDistribution& mu);

struct SetDistanceBound {
    double t = 0.0;
    double mu_a = 0.0;
    std::vector<double> c;  // c_2..c_n
    double lhs = 0.0;       // int e^{t d(x,A)} dmu
    double mid = 0.0;       // (1/mu(A)) (1/2 + (e^t+e^-t)/4) (prod c_k^2) (2+e^t+e^-t)^{n-1}
    double outer = 0.0;     // (1/mu(A)) 4^{n-1} (prod c_k^2) e^{t^2 n/4}
    bool hypothesis_ok = false; // mu^{(1)}(0) = 1/2 within 1e-9
    bool holds = false;         // lhs <= mid <= outer (only asserted when hypothesis_ok)
};

SetDistanceBound lipschitz_set_bound(const CubeDistribution& mu, const CubeSet& a, double t);

struct TalagrandBaseline {
    double lhs = 0.0;
    double bound = 0.0; // (1/mu(A)) e^{t^2 n/4}
    bool holds = false;
};

// Product-measure comparator; rejects non-product distributions.
TalagrandBaseline talagrand_product_baseline(const CubeDistribution& mu, const CubeSet& a,
                                             double t);

struct MinMaxPoint {
    double a0 = 0.0;
    double a1 = 0.0;
    double value = 0.0; // c^2 (2 + e^t + e^-t)
};

// Closed-form maximizer of c min{1/a0, e^t/a1} + c min{1/a1, e^t/a0} on
// a0 + a1 = 1/c.
MinMaxPoint minmax_maximizer(double c, double t);

uint32_t alpha_heuristic_cap(); // default 12; CUBECONC_MAX_N overrides

} // namespace cubeconc
