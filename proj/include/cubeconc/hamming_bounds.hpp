#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "cubeconc/distribution.hpp"

namespace cubeconc {

// E_mu exp(t (d_H(x,y) - E_mu d_H(x,y))), computed by exact enumeration.
struct CenteredMgf {
    CubePoint y;
    double t = 0.0;
    double mean = 0.0;  // E_mu d_H(x,y) = sum_i mu^{(i)}(x_i != y_i)
    double value = 0.0;
};

// A single checked inequality lhs <= bound. slack_rel = (bound - lhs)/bound;
// holds means slack_rel >= -1e-9.
struct BoundReport {
    double lhs = 0.0;
    double bound = 0.0;
    double slack_rel = 0.0;
    bool holds = false;
};

// Per-level error terms of the inductive bound and their weighted sums.
struct ErrorLedger {
    CubePoint y;
    double t = 0.0;
    std::vector<double> terms;       // E_k, k = 1..n-1
    double weighted_sum = 0.0;       // sum_k e^{(n-k-1)t^2/2} E_k
    double abs_weighted_sum = 0.0;   // same with |E_k|
    double bound = 0.0;              // e^{nt^2/2} + weighted_sum
    double abs_bound = 0.0;          // e^{nt^2/2} + abs_weighted_sum
};

// Sign classification of the correlation integral for coordinate k.
struct CorrelationVerdict {
    uint32_t k = 0;
    int y_bit = 0;
    double integral = 0.0; // int a_{k-1}(x',y',t) eps_{x',y_k} dmu_{k-1}
    int sign = 0;          // +1 / 0 / -1, zero band at 1e-12
};

struct PcCheckResult {
    bool applicable = false; // all verdicts for k = 2..n nonnegative
    std::vector<CorrelationVerdict> verdicts;
    BoundReport report;      // lhs = centered MGF, bound = e^{nt^2/2}
};

struct SmallVarianceBound {
    CubePoint y;
    double t = 0.0;
    std::vector<double> b; // b_j = e^{-t mu^{(j)}(x_j != y_j)}(e^t - 1) ||eps_{.,y_j}||_inf, j = 2..n
    double value = 0.0;    // e^{t^2/2} prod_j (b_j + e^{t^2/2})
};

struct GoodYCount {
    uint64_t count = 0;   // #{y : centered MGF <= e^{nt^2/2}(1 + 1e-9)}
    uint64_t formula = 0; // 2^{n - ceil((n-1)/2)} * C(n, ceil((n-1)/2))
    bool marginals_half = false;
    // "e^{(n-k-1)w}|E_k| constant in k" at w = t^2 (as written) and w = t^2/2
    // (the weight the bound actually uses); constancy is measured on the
    // y-independent level max_y |E_k|, and an all-zero profile counts as
    // degenerate rather than constant.
    bool proportional_verbatim = false;
    bool proportional_halved = false;
    bool hypotheses_hold = false; // marginals_half && proportional_verbatim
};

struct TailComparison {
    double exact_tail = 0.0;     // mu{|d_H - E d_H| >= c} by enumeration
    double hoeffding_tail = 0.0; // 2 e^{-c^2/(2n)}
    bool applicable = false;     // the bound is only asserted for product mu
    bool holds = false;
};

double mean_hamming(const CubeDistribution& mu, const CubePoint& y);

CenteredMgf centered_mgf(const CubeDistribution& mu, const CubePoint& y, double t);

// e^{t(d_H(x',y') - E_{mu_k} d_H(x',y'))} for a length-k prefix x'
double a_factor(const CubeDistribution& mu, uint32_t k, const CubePoint& x_prefix,
                const CubePoint& y, double t);

// int a_{k-1} eps_{x',y_k} dmu_{k-1}, 2 <= k <= n. Flipping y_k negates the
// result exactly (every term is an IEEE negation of its counterpart).
double correlation_integral(const CubeDistribution& mu, const CubePoint& y, uint32_t k, double t);

// E_k for 1 <= k <= n-1
double error_term(const CubeDistribution& mu, const CubePoint& y, uint32_t k, double t);

std::pair<ErrorLedger, BoundReport> inductive_bound(const CubeDistribution& mu,
                                                    const CubePoint& y, double t);

CorrelationVerdict correlation_verdict(const CubeDistribution& mu, const CubePoint& y,
                                       uint32_t k, double t);

PcCheckResult pc_theorem_check(const CubeDistribution& mu, const CubePoint& y, double t);

GoodYCount count_good_y(const CubeDistribution& mu, double t);

// Both sides of the telescoping product identity; b holds b_2..b_n.
std::pair<double, double> product_formula(std::span<const double> b, double t, uint32_t n);

std::vector<double> b_factors(const CubeDistribution& mu, const CubePoint& y, double t);

// (|E_k|, closed-form upper bound on |E_k| from the b_j)
std::pair<double, double> error_abs_bound(const CubeDistribution& mu, const CubePoint& y,
                                          uint32_t k, double t);

std::pair<SmallVarianceBound, BoundReport> small_variance_bound(const CubeDistribution& mu,
                                                                const CubePoint& y, double t);

TailComparison tail_bound(const CubeDistribution& mu, const CubePoint& y, double c);

uint32_t count_good_y_cap(); // default 12; CUBECONC_MAX_N overrides

} // namespace cubeconc
