#include "cubeconc/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <random>

#include "cubeconc/numeric.hpp"
#include "cubeconc/sampling.hpp"

namespace cubeconc {

namespace {

std::optional<uint32_t> env_max_n() {
    static const std::optional<uint32_t> cached = []() -> std::optional<uint32_t> {
        const char* s = std::getenv("CUBECONC_MAX_N");
        if (!s || !*s) return std::nullopt;
        char* end = nullptr;
        const long v = std::strtol(s, &end, 10);
        if (end == s || *end != '\0' || v < 1 || v > 63) return std::nullopt;
        return uint32_t(v);
    }();
    return cached;
}

void check_probability(double p, const char* what) {
    if (!(p >= 0.0 && p <= 1.0))
        fail(ErrorCode::invalid_parameter,
             std::string(what) + " must lie in [0, 1], got " + std::to_string(p));
}

double pow2d(uint32_t e) { return std::ldexp(1.0, int(e)); }

} // namespace

const char* kind_name(DistKind kind) {
    switch (kind) {
        case DistKind::dense: return "dense";
        case DistKind::product: return "product";
        case DistKind::markov: return "markov";
        case DistKind::delta_mix: return "delta_mix";
    }
    return "unknown";
}

EpsilonTable::EpsilonTable(uint32_t k, std::vector<double> eps0, std::vector<uint8_t> defined)
    : k_(k), eps0_(std::move(eps0)), defined_(std::move(defined)) {}

double EpsilonTable::sup_norm() const {
    double m = 0.0;
    for (size_t j = 0; j < eps0_.size(); ++j) {
        if (defined_[j]) m = std::max(m, std::abs(eps0_[j]));
    }
    return m;
}

struct CubeDistribution::Impl {
    uint32_t n = 0;
    DistKind kind = DistKind::dense;
    std::optional<uint64_t> seed;

    std::vector<double> product_p0;
    double delta_eps = 0.0;
    double markov_initial = 0.0;
    std::vector<std::array<double, 2>> markov_rows;

    // lazy caches; distributions are immutable so these are build-once
    mutable std::once_flag dense_once;
    mutable std::vector<double> dense;
    mutable std::once_flag levels_once;
    mutable std::vector<std::vector<double>> levels; // k = 0..n-1
    mutable std::once_flag marg_once;
    mutable std::vector<MarginalRow> marg;

    std::vector<double> materialize() const;
};

uint32_t CubeDistribution::dense_cap() { return env_max_n().value_or(24); }
uint32_t CubeDistribution::random_dense_cap() { return env_max_n().value_or(12); }

CubeDistribution CubeDistribution::product(std::vector<double> p0_of_zero) {
    if (p0_of_zero.empty() || p0_of_zero.size() > CubePoint::kMaxDimension)
        fail(ErrorCode::invalid_parameter, "product distribution needs 1..63 marginals");
    for (double p : p0_of_zero) check_probability(p, "marginal probability");
    auto impl = std::make_shared<Impl>();
    impl->n = uint32_t(p0_of_zero.size());
    impl->kind = DistKind::product;
    impl->product_p0 = std::move(p0_of_zero);
    return CubeDistribution(std::move(impl));
}

CubeDistribution CubeDistribution::delta_mix(uint32_t n, double eps) {
    if (n == 0 || n > CubePoint::kMaxDimension)
        fail(ErrorCode::invalid_parameter, "delta_mix dimension must be in [1, 63]");
    if (!(eps >= 0.0 && eps < 0.5))
        fail(ErrorCode::invalid_parameter, "delta_mix eps must lie in [0, 1/2)");
    if (eps > 0.0 && n == 1)
        fail(ErrorCode::invalid_parameter,
             "delta_mix with eps > 0 needs n >= 2 (no points besides the two atoms)");
    auto impl = std::make_shared<Impl>();
    impl->n = n;
    impl->kind = DistKind::delta_mix;
    impl->delta_eps = eps;
    return CubeDistribution(std::move(impl));
}

CubeDistribution CubeDistribution::markov(double initial_p0,
                                          std::vector<std::array<double, 2>> rows) {
    if (rows.size() + 1 > CubePoint::kMaxDimension)
        fail(ErrorCode::invalid_parameter, "markov chain length must be <= 63");
    check_probability(initial_p0, "initial probability");
    for (const auto& row : rows) {
        check_probability(row[0], "transition probability");
        check_probability(row[1], "transition probability");
    }
    auto impl = std::make_shared<Impl>();
    impl->n = uint32_t(rows.size() + 1);
    impl->kind = DistKind::markov;
    impl->markov_initial = initial_p0;
    impl->markov_rows = std::move(rows);
    return CubeDistribution(std::move(impl));
}

CubeDistribution CubeDistribution::dense(uint32_t n, std::vector<double> probs,
                                         std::optional<uint64_t> seed) {
    if (n == 0 || n > CubePoint::kMaxDimension)
        fail(ErrorCode::invalid_parameter, "dense dimension must be in [1, 63]");
    if (n > dense_cap())
        fail(ErrorCode::capacity, "dense backing is capped at n = " +
                                      std::to_string(dense_cap()) +
                                      " (set CUBECONC_MAX_N to override)");
    if (probs.size() != (size_t(1) << n))
        fail(ErrorCode::invalid_parameter, "dense table must hold exactly 2^n probabilities");
    for (double p : probs) {
        if (!(p >= 0.0))
            fail(ErrorCode::invalid_parameter, "dense table entries must be nonnegative");
    }
    const double total = compensated_total(probs);
    if (std::abs(total - 1.0) > kProbTol)
        fail(ErrorCode::invalid_parameter,
             "dense table mass is " + std::to_string(total) + ", expected 1 within 1e-12");
    auto impl = std::make_shared<Impl>();
    impl->n = n;
    impl->kind = DistKind::dense;
    impl->dense = std::move(probs);
    impl->seed = seed;
    return CubeDistribution(std::move(impl));
}

CubeDistribution CubeDistribution::random_dense(uint32_t n, uint64_t seed) {
    if (n == 0)
        fail(ErrorCode::invalid_parameter, "dimension must be positive");
    if (n > random_dense_cap())
        fail(ErrorCode::capacity, "random dense tables are capped at n = " +
                                      std::to_string(random_dense_cap()) +
                                      " (set CUBECONC_MAX_N to override)");
    Rng rng(seed);
    std::vector<double> probs(size_t(1) << n);
    for (double& p : probs) {
        // exponential samples normalized below: uniform on the simplex
        p = -std::log1p(-uniform01(rng));
    }
    const double total = compensated_total(probs);
    if (!(total > 0.0)) fail(ErrorCode::invalid_parameter, "degenerate random table");
    for (double& p : probs) p /= total;
    return dense(n, std::move(probs), seed);
}

uint32_t CubeDistribution::n() const { return impl_->n; }
DistKind CubeDistribution::kind() const { return impl_->kind; }
std::optional<uint64_t> CubeDistribution::seed() const { return impl_->seed; }
const std::vector<double>& CubeDistribution::product_p0() const { return impl_->product_p0; }
double CubeDistribution::delta_eps() const { return impl_->delta_eps; }
double CubeDistribution::markov_initial_p0() const { return impl_->markov_initial; }
const std::vector<std::array<double, 2>>& CubeDistribution::markov_rows() const {
    return impl_->markov_rows;
}

bool CubeDistribution::dense_capable() const { return impl_->n <= dense_cap(); }

std::span<const double> CubeDistribution::dense_table() const {
    const Impl& im = *impl_;
    if (im.n > dense_cap())
        fail(ErrorCode::capacity,
             "operation needs a dense table; n = " + std::to_string(im.n) +
                 " exceeds the cap of " + std::to_string(dense_cap()) +
                 " (set CUBECONC_MAX_N to override)");
    std::call_once(im.dense_once, [&] {
        if (im.dense.empty()) im.dense = im.materialize();
    });
    return im.dense;
}

std::vector<double> CubeDistribution::Impl::materialize() const {
    const size_t size = size_t(1) << n;
    std::vector<double> table;
    switch (kind) {
        case DistKind::dense:
            table = dense;
            break;
        case DistKind::product: {
            table.assign(1, 1.0);
            for (uint32_t k = 0; k < n; ++k) {
                std::vector<double> next(table.size() * 2);
                const double p0 = product_p0[k];
                for (size_t j = 0; j < table.size(); ++j) {
                    next[2 * j] = table[j] * p0;
                    next[2 * j + 1] = table[j] * (1.0 - p0);
                }
                table = std::move(next);
            }
            break;
        }
        case DistKind::markov: {
            table = {markov_initial, 1.0 - markov_initial};
            for (uint32_t k = 2; k <= n; ++k) {
                const auto& row = markov_rows[k - 2];
                std::vector<double> next(table.size() * 2);
                for (size_t j = 0; j < table.size(); ++j) {
                    const double p0 = row[j & 1];
                    next[2 * j] = table[j] * p0;
                    next[2 * j + 1] = table[j] * (1.0 - p0);
                }
                table = std::move(next);
            }
            break;
        }
        case DistKind::delta_mix: {
            if (n == 1) {
                table = {0.5, 0.5};
            } else {
                const double rest = delta_eps > 0.0 ? delta_eps / (pow2d(n) - 2.0) : 0.0;
                table.assign(size, rest);
                table.front() = 0.5 - delta_eps;
                table.back() = 0.5;
            }
            break;
        }
    }
    return table;
}

std::span<const double> CubeDistribution::level(uint32_t k) const {
    const Impl& im = *impl_;
    if (k > im.n) fail(ErrorCode::invalid_parameter, "level index out of range");
    if (k == im.n) return dense_table();
    std::call_once(im.levels_once, [&] {
        const auto table = dense_table();
        im.levels.resize(im.n);
        std::span<const double> upper = table;
        for (uint32_t j = im.n; j-- > 0;) {
            auto& lv = im.levels[j];
            lv.resize(size_t(1) << j);
            for (size_t i = 0; i < lv.size(); ++i) lv[i] = upper[2 * i] + upper[2 * i + 1];
            upper = lv;
        }
    });
    return im.levels[k];
}

double CubeDistribution::prob(const CubePoint& x) const {
    if (x.n() != impl_->n) fail(ErrorCode::dimension_mismatch, "point dimension mismatch");
    return prefix_mass(x);
}

double CubeDistribution::prefix_mass(const CubePoint& prefix) const {
    const Impl& im = *impl_;
    const uint32_t m = prefix.n();
    if (m > im.n) fail(ErrorCode::invalid_parameter, "prefix longer than dimension");
    const uint64_t p = prefix.index();
    switch (im.kind) {
        case DistKind::dense:
            return level(m)[p];
        case DistKind::product: {
            double mass = 1.0;
            for (uint32_t k = 1; k <= m; ++k) {
                const double p0 = im.product_p0[k - 1];
                mass *= prefix.bit(k) ? 1.0 - p0 : p0;
            }
            return mass;
        }
        case DistKind::markov: {
            double mass = prefix.bit(1) ? 1.0 - im.markov_initial : im.markov_initial;
            for (uint32_t k = 2; k <= m; ++k) {
                const double p0 = im.markov_rows[k - 2][size_t(prefix.bit(k - 1))];
                mass *= prefix.bit(k) ? 1.0 - p0 : p0;
            }
            return mass;
        }
        case DistKind::delta_mix: {
            if (m == 0) return 1.0;
            const bool all0 = p == 0;
            const bool all1 = p == CubePoint::mask(m);
            double mass = 0.0;
            if (im.delta_eps > 0.0) {
                const double completions = pow2d(im.n - m);
                const double others = (all0 || all1) ? completions - 1.0 : completions;
                mass = im.delta_eps * others / (pow2d(im.n) - 2.0);
            }
            if (all0) mass += 0.5 - im.delta_eps;
            if (all1) mass += 0.5;
            return mass;
        }
    }
    return 0.0;
}

MarginalRow CubeDistribution::marginal(uint32_t k) const {
    const Impl& im = *impl_;
    if (k == 0 || k > im.n) fail(ErrorCode::invalid_parameter, "marginal index out of range");
    switch (im.kind) {
        case DistKind::product: {
            const double p0 = im.product_p0[k - 1];
            return {p0, 1.0 - p0};
        }
        case DistKind::markov: {
            double q = im.markov_initial;
            for (uint32_t j = 2; j <= k; ++j) {
                const auto& row = im.markov_rows[j - 2];
                q = q * row[0] + (1.0 - q) * row[1];
            }
            return {q, 1.0 - q};
        }
        case DistKind::delta_mix: {
            if (im.n == 1) return {0.5, 0.5};
            const double p0 = 0.5 - im.delta_eps / 2.0;
            return {p0, 1.0 - p0};
        }
        case DistKind::dense: {
            std::call_once(im.marg_once, [&] {
                im.marg.resize(im.n);
                for (uint32_t j = 1; j <= im.n; ++j) {
                    const auto lv = level(j);
                    CompensatedSum s0, s1;
                    for (size_t i = 0; i < lv.size(); i += 2) {
                        s0.add(lv[i]);
                        s1.add(lv[i + 1]);
                    }
                    im.marg[j - 1] = {s0.value(), s1.value()};
                }
            });
            return im.marg[k - 1];
        }
    }
    return {};
}

ConditionalRow CubeDistribution::conditional(uint32_t k, const CubePoint& prefix) const {
    const Impl& im = *impl_;
    if (k < 2 || k > im.n)
        fail(ErrorCode::invalid_parameter, "conditional coordinate must satisfy 2 <= k <= n");
    if (prefix.n() != k - 1)
        fail(ErrorCode::invalid_parameter, "conditional prefix must have length k-1");
    ConditionalRow row;
    row.prefix = prefix;
    switch (im.kind) {
        case DistKind::product: {
            row.defined = prefix_mass(prefix) > 0.0;
            const double p0 = im.product_p0[k - 1];
            if (row.defined) {
                row.p0 = p0;
                row.p1 = 1.0 - p0;
            }
            break;
        }
        case DistKind::markov: {
            row.defined = prefix_mass(prefix) > 0.0;
            if (row.defined) {
                const double p0 = im.markov_rows[k - 2][size_t(prefix.bit(k - 1))];
                row.p0 = p0;
                row.p1 = 1.0 - p0;
            }
            break;
        }
        case DistKind::delta_mix: {
            const double parent = prefix_mass(prefix);
            row.defined = parent > 0.0;
            if (row.defined) {
                const double child0 = prefix_mass(CubePoint(k, prefix.index() << 1));
                const double child1 = prefix_mass(CubePoint(k, (prefix.index() << 1) | 1));
                row.p0 = child0 / parent;
                row.p1 = child1 / parent;
            }
            break;
        }
        case DistKind::dense: {
            const double parent = level(k - 1)[prefix.index()];
            row.defined = parent > 0.0;
            if (row.defined) {
                const auto lv = level(k);
                row.p0 = lv[2 * prefix.index()] / parent;
                row.p1 = lv[2 * prefix.index() + 1] / parent;
            }
            break;
        }
    }
    return row;
}

EpsilonTable CubeDistribution::epsilon_table(uint32_t k) const {
    const Impl& im = *impl_;
    if (k < 2 || k > im.n)
        fail(ErrorCode::invalid_parameter, "epsilon table coordinate must satisfy 2 <= k <= n");
    const size_t prefixes = size_t(1) << (k - 1);
    std::vector<double> eps0(prefixes, 0.0);
    std::vector<uint8_t> defined(prefixes, 0);
    const double marg_p0 = marginal(k).p0;
    switch (im.kind) {
        case DistKind::product: {
            // independent coordinates: deviations vanish identically
            const auto parents = level(k - 1);
            for (size_t j = 0; j < prefixes; ++j) defined[j] = parents[j] > 0.0;
            break;
        }
        default: {
            const auto parents = level(k - 1);
            const auto children = level(k);
            for (size_t j = 0; j < prefixes; ++j) {
                if (parents[j] > 0.0) {
                    defined[j] = 1;
                    eps0[j] = children[2 * j] / parents[j] - marg_p0;
                }
            }
            break;
        }
    }
    return EpsilonTable(k, std::move(eps0), std::move(defined));
}

CubeDistribution CubeDistribution::marginalize(uint32_t k) const {
    if (k == 0 || k > impl_->n)
        fail(ErrorCode::invalid_parameter, "marginalize index out of range");
    const auto lv = level(k);
    return dense(k, std::vector<double>(lv.begin(), lv.end()));
}

double CubeDistribution::total_mass() const { return compensated_total(dense_table()); }

} // namespace cubeconc
