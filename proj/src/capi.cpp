#include "cubeconc.h"

#include <cstring>
#include <string>
#include <vector>

#include "cubeconc/distribution.hpp"
#include "cubeconc/hamming_bounds.hpp"
#include "cubeconc/json_io.hpp"
#include "cubeconc/sampling.hpp"
#include "cubeconc/set_bounds.hpp"

struct cubeconc_dist {
    cubeconc::CubeDistribution impl;
};

struct cubeconc_set {
    cubeconc::CubeSet impl;
};

namespace {

thread_local std::string t_last_error;

cubeconc_status map_code(cubeconc::ErrorCode code) {
    using cubeconc::ErrorCode;
    switch (code) {
        case ErrorCode::invalid_parameter: return CUBECONC_ERROR_INVALID_PARAMETER;
        case ErrorCode::dimension_mismatch: return CUBECONC_ERROR_DIMENSION_MISMATCH;
        case ErrorCode::capacity: return CUBECONC_ERROR_CAPACITY;
        case ErrorCode::not_applicable: return CUBECONC_ERROR_NOT_APPLICABLE;
        case ErrorCode::empty_set: return CUBECONC_ERROR_EMPTY_SET;
        case ErrorCode::io: return CUBECONC_ERROR_IO;
    }
    return CUBECONC_ERROR_INTERNAL;
}

template <typename F>
cubeconc_status guarded(F&& f) {
    try {
        f();
        return CUBECONC_OK;
    } catch (const cubeconc::Error& e) {
        t_last_error = e.what();
        return map_code(e.code());
    } catch (const std::exception& e) {
        t_last_error = e.what();
        return CUBECONC_ERROR_INTERNAL;
    } catch (...) {
        t_last_error = "unknown error";
        return CUBECONC_ERROR_INTERNAL;
    }
}

cubeconc_status invalid(const char* msg) {
    t_last_error = msg;
    return CUBECONC_ERROR_INVALID_PARAMETER;
}

cubeconc::CubePoint point(const cubeconc_dist* dist, uint64_t index) {
    return cubeconc::CubePoint(dist->impl.n(), index);
}

void put(double* out, double v) {
    if (out) *out = v;
}
void put(int* out, int v) {
    if (out) *out = v;
}
void put(uint32_t* out, uint32_t v) {
    if (out) *out = v;
}
void put(uint64_t* out, uint64_t v) {
    if (out) *out = v;
}

} // namespace

extern "C" {

const char* cubeconc_version(void) { return "0.1.0"; }

const char* cubeconc_status_name(cubeconc_status status) {
    switch (status) {
        case CUBECONC_OK: return "ok";
        case CUBECONC_ERROR_INVALID_PARAMETER: return "invalid parameter";
        case CUBECONC_ERROR_DIMENSION_MISMATCH: return "dimension mismatch";
        case CUBECONC_ERROR_CAPACITY: return "capacity exceeded";
        case CUBECONC_ERROR_NOT_APPLICABLE: return "not applicable";
        case CUBECONC_ERROR_EMPTY_SET: return "empty set";
        case CUBECONC_ERROR_IO: return "i/o error";
        case CUBECONC_ERROR_INTERNAL: return "internal error";
    }
    return "unknown";
}

const char* cubeconc_last_error(void) { return t_last_error.c_str(); }

cubeconc_status cubeconc_dist_product(uint32_t n, const double* p0_of_zero,
                                      cubeconc_dist** out) {
    if (!p0_of_zero || !out) return invalid("null pointer argument");
    return guarded([&] {
        *out = new cubeconc_dist{cubeconc::CubeDistribution::product(
            std::vector<double>(p0_of_zero, p0_of_zero + n))};
    });
}

cubeconc_status cubeconc_dist_delta_mix(uint32_t n, double eps, cubeconc_dist** out) {
    if (!out) return invalid("null pointer argument");
    return guarded([&] {
        *out = new cubeconc_dist{cubeconc::CubeDistribution::delta_mix(n, eps)};
    });
}

cubeconc_status cubeconc_dist_markov(uint32_t n, double initial_p0, const double* rows,
                                     cubeconc_dist** out) {
    if (!out || (n > 1 && !rows)) return invalid("null pointer argument");
    return guarded([&] {
        if (n == 0) cubeconc::fail(cubeconc::ErrorCode::invalid_parameter, "n must be positive");
        std::vector<std::array<double, 2>> r(n - 1);
        for (uint32_t j = 0; j + 1 < n; ++j) r[j] = {rows[2 * j], rows[2 * j + 1]};
        *out = new cubeconc_dist{cubeconc::CubeDistribution::markov(initial_p0, std::move(r))};
    });
}

cubeconc_status cubeconc_dist_dense(uint32_t n, const double* probs, cubeconc_dist** out) {
    if (!probs || !out) return invalid("null pointer argument");
    return guarded([&] {
        if (n == 0 || n > 63)
            cubeconc::fail(cubeconc::ErrorCode::invalid_parameter, "n must be in [1, 63]");
        const size_t size = size_t(1) << n;
        *out = new cubeconc_dist{
            cubeconc::CubeDistribution::dense(n, std::vector<double>(probs, probs + size))};
    });
}

cubeconc_status cubeconc_dist_random_dense(uint32_t n, uint64_t seed, cubeconc_dist** out) {
    if (!out) return invalid("null pointer argument");
    return guarded([&] {
        *out = new cubeconc_dist{cubeconc::CubeDistribution::random_dense(n, seed)};
    });
}

cubeconc_status cubeconc_dist_read_json(const char* path, cubeconc_dist** out) {
    if (!path || !out) return invalid("null pointer argument");
    return guarded([&] {
        *out = new cubeconc_dist{cubeconc::read_distribution_json(std::string(path))};
    });
}

cubeconc_status cubeconc_dist_write_json(const cubeconc_dist* dist, const char* path) {
    if (!dist || !path) return invalid("null pointer argument");
    return guarded([&] { cubeconc::write_distribution_json(dist->impl, std::string(path)); });
}

void cubeconc_dist_free(cubeconc_dist* dist) { delete dist; }

uint32_t cubeconc_dist_n(const cubeconc_dist* dist) { return dist ? dist->impl.n() : 0; }

cubeconc_kind cubeconc_dist_kind(const cubeconc_dist* dist) {
    using cubeconc::DistKind;
    if (!dist) return CUBECONC_KIND_DENSE;
    switch (dist->impl.kind()) {
        case DistKind::dense: return CUBECONC_KIND_DENSE;
        case DistKind::product: return CUBECONC_KIND_PRODUCT;
        case DistKind::markov: return CUBECONC_KIND_MARKOV;
        case DistKind::delta_mix: return CUBECONC_KIND_DELTA_MIX;
    }
    return CUBECONC_KIND_DENSE;
}

int cubeconc_dist_seed(const cubeconc_dist* dist, uint64_t* seed) {
    if (!dist || !dist->impl.seed()) return 0;
    put(seed, *dist->impl.seed());
    return 1;
}

cubeconc_status cubeconc_dist_prob(const cubeconc_dist* dist, uint64_t index, double* out) {
    if (!dist || !out) return invalid("null pointer argument");
    return guarded([&] { *out = dist->impl.prob(point(dist, index)); });
}

cubeconc_status cubeconc_dist_marginal(const cubeconc_dist* dist, uint32_t k, double* p0,
                                       double* p1) {
    if (!dist) return invalid("null pointer argument");
    return guarded([&] {
        const cubeconc::MarginalRow m = dist->impl.marginal(k);
        put(p0, m.p0);
        put(p1, m.p1);
    });
}

cubeconc_status cubeconc_dist_conditional(const cubeconc_dist* dist, uint32_t k,
                                          uint64_t prefix, double* p0, double* p1,
                                          int* defined) {
    if (!dist) return invalid("null pointer argument");
    return guarded([&] {
        const cubeconc::ConditionalRow row =
            dist->impl.conditional(k, cubeconc::CubePoint(k - 1, prefix));
        put(p0, row.p0);
        put(p1, row.p1);
        put(defined, row.defined ? 1 : 0);
    });
}

cubeconc_status cubeconc_dist_epsilon(const cubeconc_dist* dist, uint32_t k, uint64_t prefix,
                                      int y_bit, double* eps, int* defined) {
    if (!dist) return invalid("null pointer argument");
    if (y_bit != 0 && y_bit != 1) return invalid("y_bit must be 0 or 1");
    return guarded([&] {
        const cubeconc::EpsilonTable table = dist->impl.epsilon_table(k);
        if (prefix >= table.prefix_count())
            cubeconc::fail(cubeconc::ErrorCode::invalid_parameter, "prefix index out of range");
        put(defined, table.defined(prefix) ? 1 : 0);
        put(eps, table.defined(prefix) ? table.eps(prefix, y_bit) : 0.0);
    });
}

cubeconc_status cubeconc_dist_epsilon_sup(const cubeconc_dist* dist, uint32_t k, double* out) {
    if (!dist || !out) return invalid("null pointer argument");
    return guarded([&] { *out = dist->impl.epsilon_table(k).sup_norm(); });
}

cubeconc_status cubeconc_hamming(uint32_t n, uint64_t x, uint64_t y, uint32_t* out) {
    if (!out) return invalid("null pointer argument");
    return guarded([&] {
        *out = cubeconc::hamming(cubeconc::CubePoint(n, x), cubeconc::CubePoint(n, y));
    });
}

cubeconc_status cubeconc_mean_hamming(const cubeconc_dist* dist, uint64_t y, double* out) {
    if (!dist || !out) return invalid("null pointer argument");
    return guarded([&] { *out = cubeconc::mean_hamming(dist->impl, point(dist, y)); });
}

cubeconc_status cubeconc_centered_mgf(const cubeconc_dist* dist, uint64_t y, double t,
                                      double* mean, double* value) {
    if (!dist) return invalid("null pointer argument");
    return guarded([&] {
        const cubeconc::CenteredMgf m = cubeconc::centered_mgf(dist->impl, point(dist, y), t);
        put(mean, m.mean);
        put(value, m.value);
    });
}

cubeconc_status cubeconc_a_factor(const cubeconc_dist* dist, uint32_t k, uint64_t x_prefix,
                                  uint64_t y, double t, double* out) {
    if (!dist || !out) return invalid("null pointer argument");
    return guarded([&] {
        *out = cubeconc::a_factor(dist->impl, k, cubeconc::CubePoint(k, x_prefix),
                                  point(dist, y), t);
    });
}

cubeconc_status cubeconc_error_term(const cubeconc_dist* dist, uint64_t y, uint32_t k,
                                    double t, double* out) {
    if (!dist || !out) return invalid("null pointer argument");
    return guarded([&] { *out = cubeconc::error_term(dist->impl, point(dist, y), k, t); });
}

cubeconc_status cubeconc_inductive_bound(const cubeconc_dist* dist, uint64_t y, double t,
                                         double* mgf, double* bound, double* terms,
                                         int* holds) {
    if (!dist) return invalid("null pointer argument");
    return guarded([&] {
        const auto [ledger, report] = cubeconc::inductive_bound(dist->impl, point(dist, y), t);
        put(mgf, report.lhs);
        put(bound, report.bound);
        put(holds, report.holds ? 1 : 0);
        if (terms) {
            for (size_t i = 0; i < ledger.terms.size(); ++i) terms[i] = ledger.terms[i];
        }
    });
}

cubeconc_status cubeconc_correlation_verdict(const cubeconc_dist* dist, uint64_t y, uint32_t k,
                                             double t, double* integral, int* sign) {
    if (!dist) return invalid("null pointer argument");
    return guarded([&] {
        const cubeconc::CorrelationVerdict v =
            cubeconc::correlation_verdict(dist->impl, point(dist, y), k, t);
        put(integral, v.integral);
        put(sign, v.sign);
    });
}

cubeconc_status cubeconc_pc_check(const cubeconc_dist* dist, uint64_t y, double t,
                                  int* applicable, double* mgf, double* bound, int* holds) {
    if (!dist) return invalid("null pointer argument");
    return guarded([&] {
        const cubeconc::PcCheckResult r =
            cubeconc::pc_theorem_check(dist->impl, point(dist, y), t);
        put(applicable, r.applicable ? 1 : 0);
        put(mgf, r.report.lhs);
        put(bound, r.report.bound);
        put(holds, r.report.holds ? 1 : 0);
    });
}

cubeconc_status cubeconc_count_good_y(const cubeconc_dist* dist, double t, uint64_t* count,
                                      uint64_t* formula, int* marginals_half,
                                      int* prop_verbatim, int* prop_halved,
                                      int* hypotheses_hold) {
    if (!dist) return invalid("null pointer argument");
    return guarded([&] {
        const cubeconc::GoodYCount g = cubeconc::count_good_y(dist->impl, t);
        put(count, g.count);
        put(formula, g.formula);
        put(marginals_half, g.marginals_half ? 1 : 0);
        put(prop_verbatim, g.proportional_verbatim ? 1 : 0);
        put(prop_halved, g.proportional_halved ? 1 : 0);
        put(hypotheses_hold, g.hypotheses_hold ? 1 : 0);
    });
}

cubeconc_status cubeconc_product_formula(const double* b, uint32_t len, double t, double* lhs,
                                         double* rhs) {
    if ((len > 0 && !b)) return invalid("null pointer argument");
    return guarded([&] {
        const auto [l, r] =
            cubeconc::product_formula(std::span<const double>(b, len), t, len + 1);
        put(lhs, l);
        put(rhs, r);
    });
}

cubeconc_status cubeconc_error_abs_bound(const cubeconc_dist* dist, uint64_t y, uint32_t k,
                                         double t, double* abs_ek, double* bound) {
    if (!dist) return invalid("null pointer argument");
    return guarded([&] {
        const auto [a, b] = cubeconc::error_abs_bound(dist->impl, point(dist, y), k, t);
        put(abs_ek, a);
        put(bound, b);
    });
}

cubeconc_status cubeconc_small_variance_bound(const cubeconc_dist* dist, uint64_t y, double t,
                                              double* mgf, double* value, double* b,
                                              int* holds) {
    if (!dist) return invalid("null pointer argument");
    return guarded([&] {
        const auto [svb, report] =
            cubeconc::small_variance_bound(dist->impl, point(dist, y), t);
        put(mgf, report.lhs);
        put(value, svb.value);
        put(holds, report.holds ? 1 : 0);
        if (b) {
            for (size_t i = 0; i < svb.b.size(); ++i) b[i] = svb.b[i];
        }
    });
}

cubeconc_status cubeconc_tail_bound(const cubeconc_dist* dist, uint64_t y, double c,
                                    double* exact_tail, double* hoeffding_tail,
                                    int* applicable, int* holds) {
    if (!dist) return invalid("null pointer argument");
    return guarded([&] {
        const cubeconc::TailComparison tc = cubeconc::tail_bound(dist->impl, point(dist, y), c);
        put(exact_tail, tc.exact_tail);
        put(hoeffding_tail, tc.hoeffding_tail);
        put(applicable, tc.applicable ? 1 : 0);
        put(holds, tc.holds ? 1 : 0);
    });
}

cubeconc_status cubeconc_mc_tail(const cubeconc_dist* dist, uint64_t y, double c,
                                 uint64_t samples, uint64_t seed, double delta,
                                 double* estimate, double* radius) {
    if (!dist) return invalid("null pointer argument");
    return guarded([&] {
        const cubeconc::MonteCarloEstimate e =
            cubeconc::mc_estimate_tail(dist->impl, point(dist, y), c, samples, seed, delta);
        put(estimate, e.estimate);
        put(radius, e.radius);
    });
}

cubeconc_status cubeconc_set_create(uint32_t n, cubeconc_set** out) {
    if (!out) return invalid("null pointer argument");
    return guarded([&] { *out = new cubeconc_set{cubeconc::CubeSet(n)}; });
}

cubeconc_status cubeconc_set_full(uint32_t n, cubeconc_set** out) {
    if (!out) return invalid("null pointer argument");
    return guarded([&] { *out = new cubeconc_set{cubeconc::CubeSet::full(n)}; });
}

cubeconc_status cubeconc_set_from_members(uint32_t n, const uint64_t* members, size_t count,
                                          cubeconc_set** out) {
    if (!out || (count > 0 && !members)) return invalid("null pointer argument");
    return guarded([&] {
        *out = new cubeconc_set{
            cubeconc::CubeSet::of(n, std::span<const uint64_t>(members, count))};
    });
}

cubeconc_status cubeconc_set_add(cubeconc_set* set, uint64_t index) {
    if (!set) return invalid("null pointer argument");
    return guarded([&] { set->impl.insert(index); });
}

cubeconc_status cubeconc_set_read_json(const char* path, cubeconc_set** out) {
    if (!path || !out) return invalid("null pointer argument");
    return guarded([&] { *out = new cubeconc_set{cubeconc::read_set_json(std::string(path))}; });
}

cubeconc_status cubeconc_set_write_json(const cubeconc_set* set, const char* path) {
    if (!set || !path) return invalid("null pointer argument");
    return guarded([&] { cubeconc::write_set_json(set->impl, std::string(path)); });
}

void cubeconc_set_free(cubeconc_set* set) { delete set; }

uint32_t cubeconc_set_n(const cubeconc_set* set) { return set ? set->impl.n() : 0; }

uint64_t cubeconc_set_cardinality(const cubeconc_set* set) {
    return set ? set->impl.cardinality() : 0;
}

int cubeconc_set_contains(const cubeconc_set* set, uint64_t index) {
    if (!set) return 0;
    try {
        return set->impl.contains(index) ? 1 : 0;
    } catch (...) {
        return 0;
    }
}

cubeconc_status cubeconc_set_distance(const cubeconc_set* set, uint64_t x, uint32_t* out) {
    if (!set || !out) return invalid("null pointer argument");
    return guarded([&] {
        *out = cubeconc::set_distance(cubeconc::CubePoint(set->impl.n(), x), set->impl);
    });
}

cubeconc_status cubeconc_set_enlargement(const cubeconc_set* set, uint32_t eps,
                                         cubeconc_set** out) {
    if (!set || !out) return invalid("null pointer argument");
    return guarded([&] { *out = new cubeconc_set{cubeconc::enlargement(set->impl, eps)}; });
}

cubeconc_status cubeconc_concentration_alpha(const cubeconc_dist* dist, uint32_t eps,
                                             double* out) {
    if (!dist || !out) return invalid("null pointer argument");
    return guarded([&] { *out = cubeconc::concentration_alpha(dist->impl, eps); });
}

cubeconc_status cubeconc_alpha_lower_bound(const cubeconc_dist* dist, uint32_t eps,
                                           double* out) {
    if (!dist || !out) return invalid("null pointer argument");
    return guarded([&] { *out = cubeconc::alpha_lower_bound(dist->impl, eps); });
}

cubeconc_status cubeconc_median_check(const cubeconc_dist* dist, uint64_t y, uint32_t eps,
                                      double* lhs, double* rhs, uint32_t* median, int* holds) {
    if (!dist) return invalid("null pointer argument");
    return guarded([&] {
        const cubeconc::MedianCheck m =
            cubeconc::median_concentration_check(dist->impl, point(dist, y), eps);
        put(lhs, m.lhs);
        put(rhs, m.rhs);
        put(median, m.median);
        put(holds, m.holds ? 1 : 0);
    });
}

cubeconc_status cubeconc_conditional_sup_bounds(const cubeconc_dist* dist, double* c_out) {
    if (!dist || !c_out) return invalid("null pointer argument");
    return guarded([&] {
        const std::vector<double> c = cubeconc::conditional_sup_bounds(dist->impl);
        for (size_t i = 0; i < c.size(); ++i) c_out[i] = c[i];
    });
}

cubeconc_status cubeconc_lipschitz_set_bound(const cubeconc_dist* dist,
                                             const cubeconc_set* set, double t, double* lhs,
                                             double* mid, double* outer, double* mu_a,
                                             int* hypothesis_ok, int* holds) {
    if (!dist || !set) return invalid("null pointer argument");
    return guarded([&] {
        const cubeconc::SetDistanceBound b =
            cubeconc::lipschitz_set_bound(dist->impl, set->impl, t);
        put(lhs, b.lhs);
        put(mid, b.mid);
        put(outer, b.outer);
        put(mu_a, b.mu_a);
        put(hypothesis_ok, b.hypothesis_ok ? 1 : 0);
        put(holds, b.holds ? 1 : 0);
    });
}

cubeconc_status cubeconc_talagrand_baseline(const cubeconc_dist* dist,
                                            const cubeconc_set* set, double t, double* lhs,
                                            double* bound, int* holds) {
    if (!dist || !set) return invalid("null pointer argument");
    return guarded([&] {
        const cubeconc::TalagrandBaseline b =
            cubeconc::talagrand_product_baseline(dist->impl, set->impl, t);
        put(lhs, b.lhs);
        put(bound, b.bound);
        put(holds, b.holds ? 1 : 0);
    });
}

cubeconc_status cubeconc_minmax_maximizer(double c, double t, double* a0, double* a1,
                                          double* value) {
    return guarded([&] {
        const cubeconc::MinMaxPoint p = cubeconc::minmax_maximizer(c, t);
        put(a0, p.a0);
        put(a1, p.a1);
        put(value, p.value);
    });
}

} // extern "C"
