#include "cubeconc/set_bounds.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <numeric>

#include "cubeconc/numeric.hpp"

namespace cubeconc {

namespace {

uint32_t env_or(uint32_t fallback) {
    const char* s = std::getenv("CUBECONC_MAX_N");
    if (!s || !*s) return fallback;
    char* end = nullptr;
    const long v = std::strtol(s, &end, 10);
    if (end == s || *end != '\0' || v < 1 || v > 63) return fallback;
    return uint32_t(v);
}

void require_nonempty(const CubeSet& a) {
    if (a.empty()) fail(ErrorCode::empty_set, "set operation requires a nonempty set");
}

constexpr uint32_t kAlphaExactCap = 4; // the exact infimum enumerates 2^(2^n) subsets

} // namespace

uint32_t alpha_heuristic_cap() {
    static const uint32_t cap = env_or(12);
    return cap;
}

CubeSet::CubeSet(uint32_t n) : n_(n) {
    if (n == 0 || n > CubeDistribution::dense_cap())
        fail(ErrorCode::capacity,
             "cube sets are materialized over 2^n indices; n must be in [1, " +
                 std::to_string(CubeDistribution::dense_cap()) + "]");
    words_.assign(((size_t(1) << n) + 63) / 64, 0);
}

CubeSet CubeSet::full(uint32_t n) {
    CubeSet a(n);
    const uint64_t points = uint64_t(1) << n;
    for (size_t w = 0; w < a.words_.size(); ++w) a.words_[w] = ~uint64_t(0);
    const uint32_t tail = uint32_t(points % 64);
    if (tail) a.words_.back() = (uint64_t(1) << tail) - 1;
    return a;
}

CubeSet CubeSet::of(uint32_t n, std::span<const uint64_t> members) {
    CubeSet a(n);
    for (uint64_t m : members) a.insert(m);
    return a;
}

bool CubeSet::empty() const {
    for (uint64_t w : words_) {
        if (w) return false;
    }
    return true;
}

uint64_t CubeSet::cardinality() const {
    uint64_t c = 0;
    for (uint64_t w : words_) c += uint64_t(std::popcount(w));
    return c;
}

bool CubeSet::contains(uint64_t index) const {
    if (index >> n_) fail(ErrorCode::invalid_parameter, "set index out of range");
    return (words_[index / 64] >> (index % 64)) & 1u;
}

void CubeSet::insert(uint64_t index) {
    if (index >> n_) fail(ErrorCode::invalid_parameter, "set index out of range");
    words_[index / 64] |= uint64_t(1) << (index % 64);
}

std::vector<uint64_t> CubeSet::members() const {
    std::vector<uint64_t> out;
    for (size_t w = 0; w < words_.size(); ++w) {
        uint64_t bits = words_[w];
        while (bits) {
            const int b = std::countr_zero(bits);
            out.push_back(uint64_t(w) * 64 + uint64_t(b));
            bits &= bits - 1;
        }
    }
    return out;
}

uint32_t set_distance(const CubePoint& x, const CubeSet& a) {
    if (x.n() != a.n()) fail(ErrorCode::dimension_mismatch, "point and set dimensions differ");
    require_nonempty(a);
    uint32_t best = x.n() + 1;
    const auto& words = a.words();
    for (size_t w = 0; w < words.size(); ++w) {
        uint64_t bits = words[w];
        while (bits) {
            const int b = std::countr_zero(bits);
            bits &= bits - 1;
            const uint64_t member = uint64_t(w) * 64 + uint64_t(b);
            best = std::min(best, uint32_t(std::popcount(member ^ x.index())));
            if (best == 0) return 0;
        }
    }
    return best;
}

std::vector<uint8_t> distance_transform(const CubeSet& a) {
    require_nonempty(a);
    const uint32_t n = a.n();
    const uint64_t points = uint64_t(1) << n;
    std::vector<uint8_t> dist(points, 0xFF);
    std::vector<uint64_t> frontier = a.members();
    for (uint64_t x : frontier) dist[x] = 0;
    uint8_t d = 0;
    while (!frontier.empty()) {
        std::vector<uint64_t> next;
        for (uint64_t x : frontier) {
            for (uint32_t i = 0; i < n; ++i) {
                const uint64_t nb = x ^ (uint64_t(1) << i);
                if (dist[nb] == 0xFF) {
                    dist[nb] = uint8_t(d + 1);
                    next.push_back(nb);
                }
            }
        }
        frontier = std::move(next);
        ++d;
    }
    return dist;
}

CubeSet enlargement(const CubeSet& a, uint32_t eps) {
    const std::vector<uint8_t> dist = distance_transform(a);
    CubeSet out(a.n());
    for (uint64_t x = 0; x < dist.size(); ++x) {
        if (dist[x] <= eps) out.insert(x);
    }
    return out;
}

namespace {

// Subset masks over the 2^n cell indices, n <= 4 so masks fit in 32 bits.
struct TinyCube {
    uint32_t n;
    uint32_t cells;
    std::vector<double> mass;    // mass[m] for every subset mask m
    std::vector<uint32_t> flip;  // flip[i]: permutation masks are built from

    explicit TinyCube(const CubeDistribution& mu) {
        n = mu.n();
        cells = uint32_t(1) << n;
        const auto table = mu.dense_table();
        const uint32_t masks = uint32_t(1) << cells;
        mass.resize(masks, 0.0);
        for (uint32_t m = 1; m < masks; ++m) {
            const uint32_t low = uint32_t(std::countr_zero(m));
            mass[m] = mass[m & (m - 1)] + table[low];
        }
    }

    uint32_t dilate(uint32_t m) const {
        uint32_t out = m;
        for (uint32_t i = 0; i < n; ++i) {
            const uint32_t step = 1u << i;
            uint32_t lo = 0;
            for (uint32_t j = 0; j < cells; ++j) {
                if (!((j >> i) & 1u)) lo |= 1u << j;
            }
            out |= ((m & lo) << step) | ((m >> step) & lo);
        }
        return out;
    }
};

} // namespace

double concentration_alpha(const CubeDistribution& mu, uint32_t eps) {
    if (mu.n() > kAlphaExactCap)
        fail(ErrorCode::capacity,
             "exact concentration function enumerates 2^(2^n) subsets and is limited to n <= " +
                 std::to_string(kAlphaExactCap) + "; use the documented lower-bound heuristic "
                 "for larger n");
    const TinyCube cube(mu);
    const uint32_t masks = uint32_t(1) << cube.cells;
    double min_enlarged = 1.0;
    for (uint32_t m = 1; m < masks; ++m) {
        if (cube.mass[m] < 0.5 - kProbTol) continue;
        uint32_t e = m;
        for (uint32_t step = 0; step < eps && e != masks - 1; ++step) e = cube.dilate(e);
        min_enlarged = std::min(min_enlarged, cube.mass[e]);
    }
    return 1.0 - min_enlarged;
}

double alpha_lower_bound(const CubeDistribution& mu, uint32_t eps) {
    const uint32_t n = mu.n();
    if (n > alpha_heuristic_cap())
        fail(ErrorCode::capacity, "alpha lower-bound heuristic is capped at n = " +
                                      std::to_string(alpha_heuristic_cap()));
    const auto table = mu.dense_table();
    const uint64_t points = uint64_t(1) << n;
    double best = 0.0;

    // greedy half-mass sets in both mass orders, enlarged by BFS
    std::vector<uint64_t> order(points);
    std::iota(order.begin(), order.end(), 0);
    const auto greedy = [&](bool descending) {
        std::stable_sort(order.begin(), order.end(), [&](uint64_t a, uint64_t b) {
            return descending ? table[a] > table[b] : table[a] < table[b];
        });
        CubeSet a(n);
        double mass = 0.0;
        for (uint64_t x : order) {
            a.insert(x);
            mass += table[x];
            if (mass >= 0.5 - kProbTol) break;
        }
        if (mass < 0.5 - kProbTol) return;
        const auto dist = distance_transform(a);
        CompensatedSum enlarged;
        for (uint64_t x = 0; x < points; ++x) {
            if (dist[x] <= eps) enlarged.add(table[x]);
        }
        best = std::max(best, 1.0 - enlarged.value());
    };
    greedy(true);
    greedy(false);

    // Hamming balls: the enlargement of a ball is a ball, so only the
    // distance pmf around each candidate center is needed
    std::vector<double> pmf(n + 1);
    for (uint64_t center = 0; center < points; ++center) {
        std::fill(pmf.begin(), pmf.end(), 0.0);
        for (uint64_t x = 0; x < points; ++x) pmf[std::popcount(x ^ center)] += table[x];
        double cdf = 0.0;
        uint32_t radius = n;
        for (uint32_t d = 0; d <= n; ++d) {
            cdf += pmf[d];
            if (cdf >= 0.5 - kProbTol) {
                radius = d;
                break;
            }
        }
        double enlarged = 0.0;
        const uint32_t reach = std::min(radius + eps, n);
        for (uint32_t d = 0; d <= reach; ++d) enlarged += pmf[d];
        best = std::max(best, 1.0 - enlarged);
    }
    return std::max(best, 0.0);
}

MedianCheck median_concentration_check(const CubeDistribution& mu, const CubePoint& y,
                                       uint32_t eps) {
    if (y.n() != mu.n()) fail(ErrorCode::dimension_mismatch, "point dimension mismatch");
    const uint32_t n = mu.n();
    const auto table = mu.dense_table();
    std::vector<double> pmf(n + 1, 0.0);
    for (uint64_t x = 0; x < table.size(); ++x) pmf[std::popcount(x ^ y.index())] += table[x];

    // smallest m with mu(d <= m) >= 1/2; this m also satisfies mu(d >= m) >= 1/2
    uint32_t median = n;
    double cdf = 0.0;
    for (uint32_t d = 0; d <= n; ++d) {
        cdf += pmf[d];
        if (cdf >= 0.5 - kProbTol) {
            median = d;
            break;
        }
    }

    MedianCheck out;
    out.median = median;
    CompensatedSum lhs;
    for (uint32_t d = 0; d <= n; ++d) {
        if (d + eps >= median && d <= median + eps) lhs.add(pmf[d]);
    }
    out.lhs = lhs.value();
    out.rhs = 1.0 - 2.0 * concentration_alpha(mu, eps);
    out.holds = out.lhs >= out.rhs - kProbTol;
    return out;
}

std::vector<double> conditional_sup_bounds(const CubeDistribution& mu) {
    const uint32_t n = mu.n();
    std::vector<double> c(n >= 1 ? n - 1 : 0, 0.0);
    for (uint32_t k = 2; k <= n; ++k) {
        const auto parents = mu.level(k - 1);
        const auto children = mu.level(k);
        double worst = 0.0;
        for (size_t j = 0; j < parents.size(); ++j) {
            if (parents[j] > 0.0) {
                worst = std::max(worst,
                                 std::max(children[2 * j], children[2 * j + 1]) / parents[j]);
            }
        }
        c[k - 2] = worst;
    }
    return c;
}

SetDistanceBound lipschitz_set_bound(const CubeDistribution& mu, const CubeSet& a, double t) {
    if (!(t > 0.0)) fail(ErrorCode::invalid_parameter, "t must be positive");
    if (a.n() != mu.n()) fail(ErrorCode::dimension_mismatch, "set and distribution dimensions");
    require_nonempty(a);
    const uint32_t n = mu.n();
    const auto table = mu.dense_table();
    const auto dist = distance_transform(a);

    SetDistanceBound out;
    out.t = t;
    out.c = conditional_sup_bounds(mu);

    std::vector<double> ed(n + 1);
    for (uint32_t d = 0; d <= n; ++d) ed[d] = std::exp(t * double(d));
    CompensatedSum lhs, mass;
    for (uint64_t x = 0; x < table.size(); ++x) {
        lhs.add(table[x] * ed[dist[x]]);
        if (a.contains(x)) mass.add(table[x]);
    }
    out.lhs = lhs.value();
    out.mu_a = mass.value();

    double c_sq = 1.0;
    for (double ck : out.c) c_sq *= ck * ck;
    const double cosh_term = 0.5 + (std::exp(t) + std::exp(-t)) / 4.0;
    const double ct = 2.0 + std::exp(t) + std::exp(-t);
    out.mid = cosh_term * c_sq * std::pow(ct, double(n - 1)) / out.mu_a;
    out.outer = std::ldexp(1.0, int(2 * (n - 1))) * c_sq *
                std::exp(t * t * double(n) / 4.0) / out.mu_a;

    out.hypothesis_ok = std::abs(mu.marginal(1).p0 - 0.5) <= kRelTol;
    const bool chain =
        out.lhs <= out.mid * (1.0 + kRelTol) && out.mid <= out.outer * (1.0 + kRelTol);
    out.holds = !out.hypothesis_ok || chain;
    return out;
}

TalagrandBaseline talagrand_product_baseline(const CubeDistribution& mu, const CubeSet& a,
                                             double t) {
    if (mu.kind() != DistKind::product)
        fail(ErrorCode::not_applicable,
             "the product-measure baseline applies to product distributions only");
    if (!(t > 0.0)) fail(ErrorCode::invalid_parameter, "t must be positive");
    if (a.n() != mu.n()) fail(ErrorCode::dimension_mismatch, "set and distribution dimensions");
    require_nonempty(a);
    const uint32_t n = mu.n();
    const auto table = mu.dense_table();
    const auto dist = distance_transform(a);
    std::vector<double> ed(n + 1);
    for (uint32_t d = 0; d <= n; ++d) ed[d] = std::exp(t * double(d));
    CompensatedSum lhs, mass;
    for (uint64_t x = 0; x < table.size(); ++x) {
        lhs.add(table[x] * ed[dist[x]]);
        if (a.contains(x)) mass.add(table[x]);
    }
    TalagrandBaseline out;
    out.lhs = lhs.value();
    out.bound = std::exp(t * t * double(n) / 4.0) / mass.value();
    out.holds = out.lhs <= out.bound * (1.0 + kRelTol);
    return out;
}

MinMaxPoint minmax_maximizer(double c, double t) {
    if (!(c > 0.0) || !(t > 0.0))
        fail(ErrorCode::invalid_parameter, "minmax maximizer needs c > 0 and t > 0");
    const double et = std::exp(t);
    MinMaxPoint out;
    out.a0 = et / (c * (1.0 + et));
    out.a1 = 1.0 / (c * (1.0 + et));
    out.value = c * c * (2.0 + et + std::exp(-t));
    return out;
}

} // namespace cubeconc
