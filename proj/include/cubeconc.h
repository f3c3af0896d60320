/* cubeconc — concentration-of-measure toolkit for distributions on the
 * Boolean cube {0,1}^n.
 *
 * C API of the shared library. All objects are opaque handles created and
 * destroyed through these functions; every fallible call returns a
 * cubeconc_status and reports results through out-pointers. On failure a
 * human-readable message is available from cubeconc_last_error() (thread
 * local, valid until the next failing call on the same thread).
 *
 * Conventions:
 *   - coordinates are numbered 1..n;
 *   - a point y is passed as its integer index sum_k y_k 2^(n-k)
 *     (y_1 is the most significant bit, so the bit string "y_1...y_n"
 *     is the index in binary);
 *   - output buffers are caller-allocated with the documented lengths and
 *     may be NULL when the caller does not want that output.
 *
 * Distributions are immutable once created; all queries on them are safe to
 * call concurrently from multiple threads.
 */
#ifndef CUBECONC_H
#define CUBECONC_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(CUBECONC_BUILD)
#define CUBECONC_API __declspec(dllexport)
#else
#define CUBECONC_API __declspec(dllimport)
#endif
#else
#define CUBECONC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef struct cubeconc_dist cubeconc_dist;
typedef struct cubeconc_set cubeconc_set;

typedef enum cubeconc_status {
    CUBECONC_OK = 0,
    CUBECONC_ERROR_INVALID_PARAMETER = 1,
    CUBECONC_ERROR_DIMENSION_MISMATCH = 2,
    CUBECONC_ERROR_CAPACITY = 3,
    CUBECONC_ERROR_NOT_APPLICABLE = 4,
    CUBECONC_ERROR_EMPTY_SET = 5,
    CUBECONC_ERROR_IO = 6,
    CUBECONC_ERROR_INTERNAL = 7
} cubeconc_status;

typedef enum cubeconc_kind {
    CUBECONC_KIND_DENSE = 0,
    CUBECONC_KIND_PRODUCT = 1,
    CUBECONC_KIND_MARKOV = 2,
    CUBECONC_KIND_DELTA_MIX = 3
} cubeconc_kind;

CUBECONC_API const char* cubeconc_version(void);
CUBECONC_API const char* cubeconc_status_name(cubeconc_status status);
CUBECONC_API const char* cubeconc_last_error(void);

/* ---- distributions ---------------------------------------------------- */

/* p0_of_zero[i] = P(x_{i+1} = 0), n entries */
CUBECONC_API cubeconc_status cubeconc_dist_product(uint32_t n, const double* p0_of_zero,
                                                   cubeconc_dist** out);

CUBECONC_API cubeconc_status cubeconc_dist_delta_mix(uint32_t n, double eps,
                                                     cubeconc_dist** out);

/* rows holds 2(n-1) doubles: rows[2j] = p(0|0), rows[2j+1] = p(0|1) for
 * coordinate j+2 */
CUBECONC_API cubeconc_status cubeconc_dist_markov(uint32_t n, double initial_p0,
                                                  const double* rows, cubeconc_dist** out);

/* probs holds 2^n masses in index order */
CUBECONC_API cubeconc_status cubeconc_dist_dense(uint32_t n, const double* probs,
                                                 cubeconc_dist** out);

CUBECONC_API cubeconc_status cubeconc_dist_random_dense(uint32_t n, uint64_t seed,
                                                        cubeconc_dist** out);

CUBECONC_API cubeconc_status cubeconc_dist_read_json(const char* path, cubeconc_dist** out);
CUBECONC_API cubeconc_status cubeconc_dist_write_json(const cubeconc_dist* dist,
                                                      const char* path);

CUBECONC_API void cubeconc_dist_free(cubeconc_dist* dist);

CUBECONC_API uint32_t cubeconc_dist_n(const cubeconc_dist* dist);
CUBECONC_API cubeconc_kind cubeconc_dist_kind(const cubeconc_dist* dist);
/* returns 1 and fills *seed when the distribution carries a generation seed */
CUBECONC_API int cubeconc_dist_seed(const cubeconc_dist* dist, uint64_t* seed);

CUBECONC_API cubeconc_status cubeconc_dist_prob(const cubeconc_dist* dist, uint64_t index,
                                                double* out);

/* marginal law of coordinate k */
CUBECONC_API cubeconc_status cubeconc_dist_marginal(const cubeconc_dist* dist, uint32_t k,
                                                    double* p0, double* p1);

/* conditional law of coordinate k (2 <= k <= n) given a length-(k-1) prefix;
 * *defined = 0 when the prefix has zero mass */
CUBECONC_API cubeconc_status cubeconc_dist_conditional(const cubeconc_dist* dist, uint32_t k,
                                                       uint64_t prefix, double* p0, double* p1,
                                                       int* defined);

/* eps_{prefix, y_bit} = mu(x_k = y_bit | prefix) - mu^{(k)}(y_bit) */
CUBECONC_API cubeconc_status cubeconc_dist_epsilon(const cubeconc_dist* dist, uint32_t k,
                                                   uint64_t prefix, int y_bit, double* eps,
                                                   int* defined);

/* max |eps| over positive-mass prefixes at coordinate k */
CUBECONC_API cubeconc_status cubeconc_dist_epsilon_sup(const cubeconc_dist* dist, uint32_t k,
                                                       double* out);

/* ---- Hamming-distance concentration ------------------------------------ */

CUBECONC_API cubeconc_status cubeconc_hamming(uint32_t n, uint64_t x, uint64_t y,
                                              uint32_t* out);

CUBECONC_API cubeconc_status cubeconc_mean_hamming(const cubeconc_dist* dist, uint64_t y,
                                                   double* out);

/* mean = E d_H(x,y); value = E e^{t(d_H - mean)} by exact enumeration */
CUBECONC_API cubeconc_status cubeconc_centered_mgf(const cubeconc_dist* dist, uint64_t y,
                                                   double t, double* mean, double* value);

/* e^{t(d_H(x',y') - E_{mu_k} d_H)} for the length-k prefix x' */
CUBECONC_API cubeconc_status cubeconc_a_factor(const cubeconc_dist* dist, uint32_t k,
                                               uint64_t x_prefix, uint64_t y, double t,
                                               double* out);

/* level-k error term, 1 <= k <= n-1 */
CUBECONC_API cubeconc_status cubeconc_error_term(const cubeconc_dist* dist, uint64_t y,
                                                 uint32_t k, double t, double* out);

/* bound = e^{nt^2/2} + sum_k e^{(n-k-1)t^2/2} E_k; terms (len n-1) optional.
 * *holds reports mgf <= bound within 1e-9 relative slack. */
CUBECONC_API cubeconc_status cubeconc_inductive_bound(const cubeconc_dist* dist, uint64_t y,
                                                      double t, double* mgf, double* bound,
                                                      double* terms, int* holds);

/* integral of a_{k-1} eps_{x',y_k} over mu_{k-1}; sign is +1/0/-1 with a
 * 1e-12 zero band */
CUBECONC_API cubeconc_status cubeconc_correlation_verdict(const cubeconc_dist* dist, uint64_t y,
                                                          uint32_t k, double t,
                                                          double* integral, int* sign);

/* applicable = all verdicts for k = 2..n nonnegative; then mgf <= e^{nt^2/2}
 * is asserted and *holds reports it */
CUBECONC_API cubeconc_status cubeconc_pc_check(const cubeconc_dist* dist, uint64_t y, double t,
                                               int* applicable, double* mgf, double* bound,
                                               int* holds);

CUBECONC_API cubeconc_status cubeconc_count_good_y(const cubeconc_dist* dist, double t,
                                                   uint64_t* count, uint64_t* formula,
                                                   int* marginals_half, int* prop_verbatim,
                                                   int* prop_halved, int* hypotheses_hold);

/* b holds b_2..b_n (len n-1) */
CUBECONC_API cubeconc_status cubeconc_product_formula(const double* b, uint32_t len, double t,
                                                      double* lhs, double* rhs);

CUBECONC_API cubeconc_status cubeconc_error_abs_bound(const cubeconc_dist* dist, uint64_t y,
                                                      uint32_t k, double t, double* abs_ek,
                                                      double* bound);

/* value = e^{t^2/2} prod_j (b_j + e^{t^2/2}); b output (len n-1) optional */
CUBECONC_API cubeconc_status cubeconc_small_variance_bound(const cubeconc_dist* dist,
                                                           uint64_t y, double t, double* mgf,
                                                           double* value, double* b,
                                                           int* holds);

/* exact = mu{|d_H - E d_H| >= c}; hoeffding = 2 e^{-c^2/(2n)}; the bound is
 * asserted (holds) only for product distributions */
CUBECONC_API cubeconc_status cubeconc_tail_bound(const cubeconc_dist* dist, uint64_t y,
                                                 double c, double* exact_tail,
                                                 double* hoeffding_tail, int* applicable,
                                                 int* holds);

CUBECONC_API cubeconc_status cubeconc_mc_tail(const cubeconc_dist* dist, uint64_t y, double c,
                                              uint64_t samples, uint64_t seed, double delta,
                                              double* estimate, double* radius);

/* ---- sets and set-distance bounds --------------------------------------- */

CUBECONC_API cubeconc_status cubeconc_set_create(uint32_t n, cubeconc_set** out);
CUBECONC_API cubeconc_status cubeconc_set_full(uint32_t n, cubeconc_set** out);
CUBECONC_API cubeconc_status cubeconc_set_from_members(uint32_t n, const uint64_t* members,
                                                       size_t count, cubeconc_set** out);
CUBECONC_API cubeconc_status cubeconc_set_add(cubeconc_set* set, uint64_t index);
CUBECONC_API cubeconc_status cubeconc_set_read_json(const char* path, cubeconc_set** out);
CUBECONC_API cubeconc_status cubeconc_set_write_json(const cubeconc_set* set,
                                                     const char* path);
CUBECONC_API void cubeconc_set_free(cubeconc_set* set);

CUBECONC_API uint32_t cubeconc_set_n(const cubeconc_set* set);
CUBECONC_API uint64_t cubeconc_set_cardinality(const cubeconc_set* set);
CUBECONC_API int cubeconc_set_contains(const cubeconc_set* set, uint64_t index);

CUBECONC_API cubeconc_status cubeconc_set_distance(const cubeconc_set* set, uint64_t x,
                                                   uint32_t* out);

CUBECONC_API cubeconc_status cubeconc_set_enlargement(const cubeconc_set* set, uint32_t eps,
                                                      cubeconc_set** out);

/* exact concentration function, n <= 4 */
CUBECONC_API cubeconc_status cubeconc_concentration_alpha(const cubeconc_dist* dist,
                                                          uint32_t eps, double* out);

/* certified lower bound on alpha from candidate half-mass sets, n <= 12 */
CUBECONC_API cubeconc_status cubeconc_alpha_lower_bound(const cubeconc_dist* dist,
                                                        uint32_t eps, double* out);

/* lhs = mu{|d_H(.,y) - M| <= eps}, rhs = 1 - 2 alpha(mu, eps); n <= 4 */
CUBECONC_API cubeconc_status cubeconc_median_check(const cubeconc_dist* dist, uint64_t y,
                                                   uint32_t eps, double* lhs, double* rhs,
                                                   uint32_t* median, int* holds);

/* c_out receives c_2..c_n (len n-1) */
CUBECONC_API cubeconc_status cubeconc_conditional_sup_bounds(const cubeconc_dist* dist,
                                                             double* c_out);

/* uniform-Lipschitz set-distance bound; asserts lhs <= mid <= outer when the
 * first-marginal hypothesis holds */
CUBECONC_API cubeconc_status cubeconc_lipschitz_set_bound(const cubeconc_dist* dist,
                                                          const cubeconc_set* set, double t,
                                                          double* lhs, double* mid,
                                                          double* outer, double* mu_a,
                                                          int* hypothesis_ok, int* holds);

/* product-measure baseline: lhs = int e^{t d(x,A)} dmu <= e^{t^2 n/4}/mu(A) */
CUBECONC_API cubeconc_status cubeconc_talagrand_baseline(const cubeconc_dist* dist,
                                                         const cubeconc_set* set, double t,
                                                         double* lhs, double* bound,
                                                         int* holds);

/* closed-form maximizer of the constrained two-term min-max objective */
CUBECONC_API cubeconc_status cubeconc_minmax_maximizer(double c, double t, double* a0,
                                                       double* a1, double* value);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* CUBECONC_H */
