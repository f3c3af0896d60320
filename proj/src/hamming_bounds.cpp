#include "cubeconc/hamming_bounds.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>

#include "cubeconc/numeric.hpp"

namespace cubeconc {

namespace {

// Mismatch probabilities q_i = mu^{(i)}(x_i != y_i) and their prefix sums
// m_k = E_{mu_k} d_H(x',y'); shared by every bound in this module so the
// same marginal values feed the MGF mean, the a-factors and the prefactors.
struct YContext {
    uint32_t n = 0;
    uint64_t y = 0;
    std::vector<double> q;           // q[i-1], i = 1..n
    std::vector<double> prefix_mean; // prefix_mean[k] = m_k, k = 0..n
};

YContext make_context(const CubeDistribution& mu, const CubePoint& y) {
    if (y.n() != mu.n())
        fail(ErrorCode::dimension_mismatch,
             "y has dimension " + std::to_string(y.n()) + ", distribution has " +
                 std::to_string(mu.n()));
    YContext ctx;
    ctx.n = mu.n();
    ctx.y = y.index();
    ctx.q.resize(ctx.n);
    ctx.prefix_mean.resize(ctx.n + 1, 0.0);
    for (uint32_t i = 1; i <= ctx.n; ++i) {
        const MarginalRow m = mu.marginal(i);
        ctx.q[i - 1] = y.bit(i) == 0 ? m.p1 : m.p0;
        ctx.prefix_mean[i] = ctx.prefix_mean[i - 1] + ctx.q[i - 1];
    }
    return ctx;
}

void require_positive_t(double t) {
    if (!(t > 0.0))
        fail(ErrorCode::invalid_parameter, "t must be positive (the bounds hold for t > 0 only)");
}

std::vector<double> exp_by_distance(double t, double shift, uint32_t max_d) {
    std::vector<double> e(max_d + 1);
    for (uint32_t d = 0; d <= max_d; ++d) e[d] = std::exp(t * (double(d) - shift));
    return e;
}

double mgf_value(std::span<const double> table, const YContext& ctx, double t) {
    const auto ed = exp_by_distance(t, ctx.prefix_mean[ctx.n], ctx.n);
    CompensatedSum s;
    for (size_t x = 0; x < table.size(); ++x) {
        s.add(table[x] * ed[std::popcount(uint64_t(x) ^ ctx.y)]);
    }
    return s.value();
}

BoundReport make_report(double lhs, double bound) {
    BoundReport r;
    r.lhs = lhs;
    r.bound = bound;
    r.slack_rel = (bound - lhs) / bound;
    r.holds = r.slack_rel >= -kRelTol;
    return r;
}

// int a_{k-1} eps_{x',y_k} dmu_{k-1} given prebuilt pieces
double integral_for_coordinate(const CubeDistribution& mu, const YContext& ctx, uint32_t k,
                               double t) {
    const uint32_t len = k - 1; // prefix length
    const EpsilonTable eps = mu.epsilon_table(k);
    const auto lv = mu.level(len);
    const uint64_t yp = ctx.y >> (ctx.n - len);
    const int y_bit = int((ctx.y >> (ctx.n - k)) & 1u);
    const auto ad = exp_by_distance(t, ctx.prefix_mean[len], len);
    CompensatedSum s;
    for (uint64_t j = 0; j < lv.size(); ++j) {
        if (!eps.defined(j)) continue; // zero-mass prefixes contribute nothing
        s.add(ad[std::popcount(j ^ yp)] * eps.eps(j, y_bit) * lv[j]);
    }
    return s.value();
}

uint32_t env_or(uint32_t fallback) {
    const char* s = std::getenv("CUBECONC_MAX_N");
    if (!s || !*s) return fallback;
    char* end = nullptr;
    const long v = std::strtol(s, &end, 10);
    if (end == s || *end != '\0' || v < 1 || v > 63) return fallback;
    return uint32_t(v);
}

} // namespace

uint32_t count_good_y_cap() {
    static const uint32_t cap = env_or(12);
    return cap;
}

double mean_hamming(const CubeDistribution& mu, const CubePoint& y) {
    const YContext ctx = make_context(mu, y);
    return ctx.prefix_mean[ctx.n];
}

CenteredMgf centered_mgf(const CubeDistribution& mu, const CubePoint& y, double t) {
    require_positive_t(t);
    const YContext ctx = make_context(mu, y);
    const auto table = mu.dense_table();
    CenteredMgf out;
    out.y = y;
    out.t = t;
    out.mean = ctx.prefix_mean[ctx.n];
    out.value = mgf_value(table, ctx, t);
    return out;
}

double a_factor(const CubeDistribution& mu, uint32_t k, const CubePoint& x_prefix,
                const CubePoint& y, double t) {
    require_positive_t(t);
    if (k == 0 || k > mu.n()) fail(ErrorCode::invalid_parameter, "a-factor level out of range");
    if (x_prefix.n() != k)
        fail(ErrorCode::invalid_parameter, "a-factor prefix must have length k");
    const YContext ctx = make_context(mu, y);
    const uint32_t d = std::popcount(x_prefix.index() ^ (ctx.y >> (ctx.n - k)));
    return std::exp(t * (double(d) - ctx.prefix_mean[k]));
}

double correlation_integral(const CubeDistribution& mu, const CubePoint& y, uint32_t k,
                            double t) {
    require_positive_t(t);
    if (k < 2 || k > mu.n())
        fail(ErrorCode::invalid_parameter, "correlation coordinate must satisfy 2 <= k <= n");
    const YContext ctx = make_context(mu, y);
    return integral_for_coordinate(mu, ctx, k, t);
}

double error_term(const CubeDistribution& mu, const CubePoint& y, uint32_t k, double t) {
    require_positive_t(t);
    if (k == 0 || k + 1 > mu.n())
        fail(ErrorCode::invalid_parameter, "error term index must satisfy 1 <= k <= n-1");
    const YContext ctx = make_context(mu, y);
    const double integral = integral_for_coordinate(mu, ctx, k + 1, t);
    return std::exp(-t * ctx.q[k]) * (1.0 - std::exp(t)) * integral;
}

std::pair<ErrorLedger, BoundReport> inductive_bound(const CubeDistribution& mu,
                                                    const CubePoint& y, double t) {
    require_positive_t(t);
    const YContext ctx = make_context(mu, y);
    const auto table = mu.dense_table();
    const uint32_t n = ctx.n;

    ErrorLedger ledger;
    ledger.y = y;
    ledger.t = t;
    ledger.terms.resize(n >= 1 ? n - 1 : 0);
    const double one_minus_et = 1.0 - std::exp(t);
    for (uint32_t k = 1; k + 1 <= n; ++k) {
        const double integral = integral_for_coordinate(mu, ctx, k + 1, t);
        ledger.terms[k - 1] = std::exp(-t * ctx.q[k]) * one_minus_et * integral;
    }
    CompensatedSum weighted, abs_weighted;
    for (uint32_t k = 1; k + 1 <= n; ++k) {
        const double w = std::exp(double(n - k - 1) * t * t / 2.0);
        weighted.add(w * ledger.terms[k - 1]);
        abs_weighted.add(w * std::abs(ledger.terms[k - 1]));
    }
    ledger.weighted_sum = weighted.value();
    ledger.abs_weighted_sum = abs_weighted.value();
    const double base = std::exp(double(n) * t * t / 2.0);
    ledger.bound = base + ledger.weighted_sum;
    ledger.abs_bound = base + ledger.abs_weighted_sum;

    const double lhs = mgf_value(table, ctx, t);
    BoundReport report = make_report(lhs, ledger.bound);
    return {std::move(ledger), report};
}

CorrelationVerdict correlation_verdict(const CubeDistribution& mu, const CubePoint& y,
                                       uint32_t k, double t) {
    CorrelationVerdict v;
    v.k = k;
    v.y_bit = y.bit(k);
    v.integral = correlation_integral(mu, y, k, t);
    if (v.integral > kProbTol) {
        v.sign = 1;
    } else if (v.integral < -kProbTol) {
        v.sign = -1;
    } else {
        v.sign = 0;
    }
    return v;
}

PcCheckResult pc_theorem_check(const CubeDistribution& mu, const CubePoint& y, double t) {
    require_positive_t(t);
    const YContext ctx = make_context(mu, y);
    const auto table = mu.dense_table();
    PcCheckResult out;
    out.applicable = true;
    for (uint32_t k = 2; k <= ctx.n; ++k) {
        CorrelationVerdict v;
        v.k = k;
        v.y_bit = y.bit(k);
        v.integral = integral_for_coordinate(mu, ctx, k, t);
        v.sign = v.integral > kProbTol ? 1 : (v.integral < -kProbTol ? -1 : 0);
        if (v.sign < 0) out.applicable = false;
        out.verdicts.push_back(v);
    }
    const double lhs = mgf_value(table, ctx, t);
    out.report = make_report(lhs, std::exp(double(ctx.n) * t * t / 2.0));
    if (!out.applicable) out.report.holds = true; // nothing asserted
    return out;
}

GoodYCount count_good_y(const CubeDistribution& mu, double t) {
    require_positive_t(t);
    const uint32_t n = mu.n();
    if (n > count_good_y_cap())
        fail(ErrorCode::capacity, "count_good_y enumerates all 2^n points y; capped at n = " +
                                      std::to_string(count_good_y_cap()));
    const auto table = mu.dense_table();
    std::vector<double> p0(n), p1(n);
    for (uint32_t i = 1; i <= n; ++i) {
        const MarginalRow m = mu.marginal(i);
        p0[i - 1] = m.p0;
        p1[i - 1] = m.p1;
    }

    GoodYCount out;
    const uint32_t m = n / 2; // ceil((n-1)/2)
    out.formula = (uint64_t(1) << (n - m)) * binomial(n, m);

    const double threshold = std::exp(double(n) * t * t / 2.0) * (1.0 + kRelTol);
    const uint64_t points = uint64_t(1) << n;
    for (uint64_t yi = 0; yi < points; ++yi) {
        double mean = 0.0;
        for (uint32_t i = 0; i < n; ++i) {
            mean += ((yi >> (n - 1 - i)) & 1u) ? p0[i] : p1[i];
        }
        std::vector<double> ed(n + 1);
        for (uint32_t d = 0; d <= n; ++d) ed[d] = std::exp(t * (double(d) - mean));
        CompensatedSum s;
        for (uint64_t x = 0; x < points; ++x) {
            s.add(table[x] * ed[std::popcount(x ^ yi)]);
        }
        if (s.value() <= threshold) ++out.count;
    }

    out.marginals_half = true;
    for (uint32_t i = 0; i < n; ++i) {
        if (std::abs(p0[i] - 0.5) > kRelTol) out.marginals_half = false;
    }

    // Level profile max_y |E_k|; E_k depends on y only through y_1..y_{k+1},
    // and the integral's magnitude is invariant under flipping y_{k+1}.
    std::vector<double> emax(n >= 1 ? n - 1 : 0, 0.0);
    const double et_minus_1 = std::exp(t) - 1.0;
    for (uint32_t k = 1; k + 1 <= n; ++k) {
        const EpsilonTable eps = mu.epsilon_table(k + 1);
        const auto lv = mu.level(k);
        std::vector<double> etd(k + 1);
        for (uint32_t d = 0; d <= k; ++d) etd[d] = std::exp(t * double(d));
        double worst = 0.0;
        for (uint64_t yp = 0; yp < (uint64_t(1) << k); ++yp) {
            double mk = 0.0;
            for (uint32_t i = 0; i < k; ++i) {
                mk += ((yp >> (k - 1 - i)) & 1u) ? p0[i] : p1[i];
            }
            CompensatedSum s;
            for (uint64_t j = 0; j < lv.size(); ++j) {
                if (!eps.defined(j)) continue;
                s.add(etd[std::popcount(j ^ yp)] * eps.eps(j, 0) * lv[j]);
            }
            worst = std::max(worst, std::exp(-t * mk) * std::abs(s.value()));
        }
        const double prefactor = std::max(std::exp(-t * p1[k]), std::exp(-t * p0[k]));
        emax[k - 1] = prefactor * et_minus_1 * worst;
    }

    const auto constant_profile = [&](double w) {
        if (emax.empty()) return false;
        double lo = emax[0] * std::exp(double(n - 2) * w);
        double hi = lo;
        for (uint32_t k = 1; k + 1 <= n; ++k) {
            const double v = emax[k - 1] * std::exp(double(n - k - 1) * w);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        if (hi <= 1e-15) return false; // degenerate: all error terms vanish
        return (hi - lo) / hi <= 1e-6;
    };
    out.proportional_verbatim = constant_profile(t * t);
    out.proportional_halved = constant_profile(t * t / 2.0);
    out.hypotheses_hold = out.marginals_half && out.proportional_verbatim;
    return out;
}

std::pair<double, double> product_formula(std::span<const double> b, double t, uint32_t n) {
    if (n == 0) fail(ErrorCode::invalid_parameter, "dimension must be positive");
    if (b.size() != n - 1)
        fail(ErrorCode::invalid_parameter, "expected n-1 entries b_2..b_n, got " +
                                               std::to_string(b.size()));
    const double e = std::exp(t * t / 2.0);
    double lhs = 1.0;
    for (double bj : b) lhs *= bj + e;

    // rhs = e^{(n-1)t^2/2} + e^{(n-2)t^2/2} b_2
    //       + sum_{k=2..n-1} e^{(n-k-1)t^2/2} b_{k+1} prod_{j=2..k}(b_j + e^{t^2/2})
    double rhs = std::exp(double(n - 1) * t * t / 2.0);
    if (n >= 2) rhs += std::exp(double(n - 2) * t * t / 2.0) * b[0];
    double running = 1.0; // prod_{j=2..k}(b_j + e)
    for (uint32_t k = 2; k + 1 <= n; ++k) {
        running *= b[k - 2] + e;
        rhs += std::exp(double(n - k - 1) * t * t / 2.0) * b[k - 1] * running;
    }
    return {lhs, rhs};
}

std::vector<double> b_factors(const CubeDistribution& mu, const CubePoint& y, double t) {
    require_positive_t(t);
    const YContext ctx = make_context(mu, y);
    std::vector<double> b(ctx.n >= 1 ? ctx.n - 1 : 0);
    const double et_minus_1 = std::exp(t) - 1.0;
    for (uint32_t j = 2; j <= ctx.n; ++j) {
        b[j - 2] = std::exp(-t * ctx.q[j - 1]) * et_minus_1 * mu.epsilon_table(j).sup_norm();
    }
    return b;
}

std::pair<double, double> error_abs_bound(const CubeDistribution& mu, const CubePoint& y,
                                          uint32_t k, double t) {
    const double abs_ek = std::abs(error_term(mu, y, k, t));
    const std::vector<double> b = b_factors(mu, y, t);
    const double e = std::exp(t * t / 2.0);
    double bound;
    if (k == 1) {
        bound = b[0] * e;
    } else {
        double prod = 1.0;
        for (uint32_t j = 2; j <= k; ++j) prod *= b[j - 2] + e;
        bound = b[k - 1] * e * prod;
    }
    return {abs_ek, bound};
}

std::pair<SmallVarianceBound, BoundReport> small_variance_bound(const CubeDistribution& mu,
                                                                const CubePoint& y, double t) {
    SmallVarianceBound svb;
    svb.y = y;
    svb.t = t;
    svb.b = b_factors(mu, y, t);
    const double e = std::exp(t * t / 2.0);
    double value = e;
    for (double bj : svb.b) value *= bj + e;
    svb.value = value;
    const CenteredMgf mgf = centered_mgf(mu, y, t);
    return {std::move(svb), make_report(mgf.value, value)};
}

TailComparison tail_bound(const CubeDistribution& mu, const CubePoint& y, double c) {
    if (!(c > 0.0)) fail(ErrorCode::invalid_parameter, "deviation threshold c must be positive");
    const YContext ctx = make_context(mu, y);
    const auto table = mu.dense_table();
    const double mean = ctx.prefix_mean[ctx.n];
    // 1e-9 guard so integer distances exactly at the threshold are kept even
    // when the mean carries float rounding
    const double cut = c - 1e-9;
    CompensatedSum s;
    for (size_t x = 0; x < table.size(); ++x) {
        const double d = double(std::popcount(uint64_t(x) ^ ctx.y));
        if (std::abs(d - mean) >= cut) s.add(table[x]);
    }
    TailComparison out;
    out.exact_tail = s.value();
    out.hoeffding_tail = 2.0 * std::exp(-c * c / (2.0 * double(ctx.n)));
    out.applicable = mu.kind() == DistKind::product;
    out.holds = !out.applicable || out.exact_tail <= out.hoeffding_tail + kProbTol;
    return out;
}

} // namespace cubeconc
