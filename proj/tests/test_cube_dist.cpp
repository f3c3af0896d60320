#include <doctest.h>

#include <cmath>
#include <thread>

#include "cubeconc/distribution.hpp"
#include "cubeconc/numeric.hpp"
#include "cubeconc/sampling.hpp"
#include "oracles.hpp"

using namespace cubeconc;

namespace {

CubeDistribution random_markov(uint32_t n, Rng& rng, double initial_p0 = -1.0) {
    std::vector<std::array<double, 2>> rows(n - 1);
    for (auto& row : rows) row = {uniform01(rng), uniform01(rng)};
    const double init = initial_p0 >= 0.0 ? initial_p0 : uniform01(rng);
    return CubeDistribution::markov(init, std::move(rows));
}

} // namespace

TEST_CASE("cube point encoding round-trips") {
    const CubePoint p = CubePoint::from_bits("0101");
    CHECK(p.n() == 4);
    CHECK(p.index() == 5);
    CHECK(p.bits() == "0101");
    CHECK(p.bit(1) == 0);
    CHECK(p.bit(2) == 1);
    CHECK(p.bit(4) == 1);
    CHECK(p.prefix(2) == CubePoint::from_bits("01"));
    CHECK(p.complement() == CubePoint::from_bits("1010"));
    CHECK(p.weight() == 2);

    Rng rng(7);
    for (int i = 0; i < 200; ++i) {
        const uint32_t n = 1 + uint32_t(rng() % 20);
        const uint64_t idx = rng() & CubePoint::mask(n);
        const CubePoint q(n, idx);
        CHECK(CubePoint::from_bits(q.bits()).index() == idx);
        // index = sum x_k 2^(n-k)
        uint64_t rebuilt = 0;
        for (uint32_t k = 1; k <= n; ++k) rebuilt += uint64_t(q.bit(k)) << (n - k);
        CHECK(rebuilt == idx);
    }

    CHECK_THROWS_AS(CubePoint(0, 0), Error);
    CHECK_THROWS_AS(CubePoint(3, 8), Error);
    CHECK_THROWS_AS(CubePoint::from_bits("012"), Error);
}

TEST_CASE("product distribution masses follow the product rule") {
    const auto uniform = CubeDistribution::product({0.5, 0.5});
    for (uint64_t x = 0; x < 4; ++x) CHECK(uniform.prob(CubePoint(2, x)) == doctest::Approx(0.25));

    const auto point_mass = CubeDistribution::product({1.0, 1.0});
    CHECK(point_mass.prob(CubePoint(2, 0)) == 1.0);
    CHECK(point_mass.prob(CubePoint(2, 3)) == 0.0);

    const auto skew = CubeDistribution::product({0.3, 0.6});
    CHECK(skew.prob(CubePoint::from_bits("01")) == doctest::Approx(0.12)); // 0.3 * 0.4

    CHECK_THROWS_AS(CubeDistribution::product({0.5, 1.5}), Error);
    CHECK_THROWS_AS(CubeDistribution::product({-0.1}), Error);
}

TEST_CASE("delta mix matches its defining mass table") {
    const auto pure = CubeDistribution::delta_mix(3, 0.0);
    const auto table = pure.dense_table();
    CHECK(table[0] == 0.5);
    CHECK(table[7] == 0.5);
    for (uint64_t x = 1; x < 7; ++x) CHECK(table[x] == 0.0);

    const auto mixed = CubeDistribution::delta_mix(3, 0.1);
    CHECK(mixed.prob(CubePoint(3, 0)) == doctest::Approx(0.4));
    CHECK(mixed.prob(CubePoint(3, 7)) == doctest::Approx(0.5));
    for (uint64_t x = 1; x < 7; ++x)
        CHECK(mixed.prob(CubePoint(3, x)) == doctest::Approx(0.1 / 6.0));

    const auto two = CubeDistribution::delta_mix(2, 0.2);
    CHECK(two.prob(CubePoint::from_bits("00")) == doctest::Approx(0.3));
    CHECK(two.prob(CubePoint::from_bits("11")) == doctest::Approx(0.5));
    CHECK(two.prob(CubePoint::from_bits("01")) == doctest::Approx(0.1));
    CHECK(two.prob(CubePoint::from_bits("10")) == doctest::Approx(0.1));

    CHECK_THROWS_AS(CubeDistribution::delta_mix(3, 0.5), Error);
    CHECK_THROWS_AS(CubeDistribution::delta_mix(1, 0.1), Error);
}

TEST_CASE("markov chain masses follow the chain rule") {
    const auto copy_chain = CubeDistribution::markov(0.5, {{1.0, 0.0}});
    CHECK(copy_chain.prob(CubePoint::from_bits("00")) == 0.5);
    CHECK(copy_chain.prob(CubePoint::from_bits("11")) == 0.5);
    CHECK(copy_chain.prob(CubePoint::from_bits("01")) == 0.0);
    CHECK(copy_chain.prob(CubePoint::from_bits("10")) == 0.0);

    const auto unif = CubeDistribution::markov(0.5, {{0.5, 0.5}});
    for (uint64_t x = 0; x < 4; ++x) CHECK(unif.prob(CubePoint(2, x)) == doctest::Approx(0.25));

    const auto sticky = CubeDistribution::markov(0.5, {{0.8, 0.2}});
    CHECK(sticky.prob(CubePoint::from_bits("00")) == doctest::Approx(0.4));
    CHECK(sticky.prob(CubePoint::from_bits("01")) == doctest::Approx(0.1));
    CHECK(sticky.prob(CubePoint::from_bits("10")) == doctest::Approx(0.1));
    CHECK(sticky.prob(CubePoint::from_bits("11")) == doctest::Approx(0.4));

    CHECK_THROWS_AS(CubeDistribution::markov(1.2, {{0.5, 0.5}}), Error);
}

TEST_CASE("random dense tables are simplex points, deterministic in seed") {
    const auto a = CubeDistribution::random_dense(3, 42);
    const auto b = CubeDistribution::random_dense(3, 42);
    const auto c = CubeDistribution::random_dense(3, 43);
    bool identical = true, differs = false;
    for (uint64_t x = 0; x < 8; ++x) {
        identical = identical && a.dense_table()[x] == b.dense_table()[x];
        differs = differs || a.dense_table()[x] != c.dense_table()[x];
        CHECK(a.dense_table()[x] > 0.0);
    }
    CHECK(identical);
    CHECK(differs);
    CHECK(std::abs(a.total_mass() - 1.0) <= kProbTol);

    const auto tiny = CubeDistribution::random_dense(1, 9);
    CHECK(tiny.dense_table()[0] >= 0.0);
    CHECK(std::abs(tiny.dense_table()[0] + tiny.dense_table()[1] - 1.0) <= kProbTol);

    CHECK_THROWS_AS(CubeDistribution::random_dense(13, 1), Error);
}

TEST_CASE("marginals: closed forms agree with dense recomputation") {
    CHECK(CubeDistribution::product({0.5, 0.5, 0.5}).marginal(2).p0 == 0.5);
    CHECK(CubeDistribution::delta_mix(3, 0.0).marginal(1).p0 == 0.5);
    // 0.5*0.8 + 0.5*0.2
    CHECK(CubeDistribution::markov(0.5, {{0.8, 0.2}}).marginal(2).p0 == doctest::Approx(0.5));

    Rng rng(11);
    for (int rep = 0; rep < 20; ++rep) {
        const uint32_t n = 2 + uint32_t(rng() % 7);
        const CubeDistribution mu = rep % 2 == 0
                                        ? random_markov(n, rng)
                                        : CubeDistribution::delta_mix(n, 0.4 * uniform01(rng));
        const auto table = mu.dense_table();
        for (uint32_t k = 1; k <= n; ++k) {
            const MarginalRow m = mu.marginal(k);
            CHECK(m.p0 == doctest::Approx(oracle::marginal_p(table, n, k, 0)).epsilon(1e-12));
            CHECK(std::abs(m.p0 + m.p1 - 1.0) <= kProbTol);
        }
    }
    CHECK_THROWS_AS(CubeDistribution::delta_mix(3, 0.0).marginal(4), Error);
}

TEST_CASE("conditionals: product rows equal marginals, zero-mass prefixes flagged") {
    const auto prod = CubeDistribution::product({0.3, 0.7, 0.4});
    for (uint32_t k = 2; k <= 3; ++k) {
        for (uint64_t p = 0; p < (uint64_t(1) << (k - 1)); ++p) {
            const ConditionalRow row = prod.conditional(k, CubePoint(k - 1, p));
            REQUIRE(row.defined);
            CHECK(row.p0 == prod.marginal(k).p0);
        }
    }

    const auto pure = CubeDistribution::delta_mix(2, 0.0);
    const ConditionalRow after_zero = pure.conditional(2, CubePoint::from_bits("0"));
    REQUIRE(after_zero.defined);
    CHECK(after_zero.p0 == 1.0); // the only atom through prefix (0) is 00

    // markov chain reaching prefix (1) with probability 0
    const auto stuck = CubeDistribution::markov(1.0, {{0.5, 0.5}});
    CHECK_FALSE(stuck.conditional(2, CubePoint::from_bits("1")).defined);

    CHECK_THROWS_AS(pure.conditional(2, CubePoint::from_bits("00")), Error);
    CHECK_THROWS_AS(pure.conditional(1, CubePoint::from_bits("0")), Error);
}

TEST_CASE("conditional rows average to the marginal") {
    Rng rng(67);
    for (int rep = 0; rep < 12; ++rep) {
        const uint32_t n = 2 + uint32_t(rng() % 6);
        const CubeDistribution mu = rep % 2 == 0 ? CubeDistribution::random_dense(n, rng())
                                                 : random_markov(n, rng);
        for (uint32_t k = 2; k <= n; ++k) {
            const auto parents = mu.level(k - 1);
            double mean_c = 0.0;
            for (uint64_t p = 0; p < parents.size(); ++p) {
                const ConditionalRow row = mu.conditional(k, CubePoint(k - 1, p));
                if (row.defined) mean_c += row.p0 * parents[p];
            }
            CHECK(std::abs(mean_c - mu.marginal(k).p0) <= kProbTol);
        }
    }
}

TEST_CASE("epsilon tables: sign relation is exact and means vanish") {
    const auto pure = CubeDistribution::delta_mix(2, 0.0);
    const EpsilonTable eps = pure.epsilon_table(2);
    CHECK(eps.eps(0, 0) == doctest::Approx(0.5));
    CHECK(eps.eps(0, 1) == doctest::Approx(-0.5));
    CHECK(eps.eps(1, 0) == doctest::Approx(-0.5));
    CHECK(eps.eps(1, 1) == doctest::Approx(0.5));
    CHECK(eps.sup_norm() == doctest::Approx(0.5));

    const auto prod = CubeDistribution::product({0.3, 0.7, 0.4});
    for (uint32_t k = 2; k <= 3; ++k) {
        const EpsilonTable e = prod.epsilon_table(k);
        for (uint64_t p = 0; p < e.prefix_count(); ++p) CHECK(e.eps(p, 0) == 0.0);
        CHECK(e.sup_norm() == 0.0);
    }

    // zero-mass prefixes are flagged and stay out of the sup norm
    const auto gated = CubeDistribution::markov(0.5, {{1.0, 0.0}, {0.8, 0.3}});
    const EpsilonTable ge = gated.epsilon_table(3);
    CHECK(ge.defined(0));       // prefix (0,0)
    CHECK_FALSE(ge.defined(1)); // prefix (0,1) is unreachable
    CHECK_FALSE(ge.defined(2));
    CHECK(ge.defined(3));
    CHECK(ge.eps(0, 0) == doctest::Approx(0.25).epsilon(1e-14));  // 0.8 - 0.55
    CHECK(ge.eps(3, 0) == doctest::Approx(-0.25).epsilon(1e-14)); // 0.3 - 0.55
    CHECK(ge.sup_norm() == doctest::Approx(0.25).epsilon(1e-14));

    Rng rng(5);
    for (int rep = 0; rep < 10; ++rep) {
        const uint32_t n = 2 + uint32_t(rng() % 6);
        const auto mu = CubeDistribution::random_dense(n, rng());
        const auto lv = mu.dense_table();
        for (uint32_t k = 2; k <= n; ++k) {
            const EpsilonTable e = mu.epsilon_table(k);
            double weighted_mean = 0.0;
            for (uint64_t p = 0; p < e.prefix_count(); ++p) {
                // bitwise-exact sign flip
                CHECK(e.eps(p, 0) == -e.eps(p, 1));
                if (e.defined(p)) {
                    CHECK(e.eps(p, 0) ==
                          doctest::Approx(oracle::epsilon(lv, n, k, p, 0)).epsilon(1e-12));
                    weighted_mean += e.eps(p, 0) * oracle::prefix_mass(lv, n, k - 1, p);
                }
            }
            CHECK(std::abs(weighted_mean) <= kProbTol);
        }
    }
}

TEST_CASE("generators and dense materialization agree") {
    Rng rng(23);
    for (int rep = 0; rep < 12; ++rep) {
        const uint32_t n = 2 + uint32_t(rng() % 9);
        CubeDistribution mu = [&] {
            switch (rep % 3) {
                case 0: {
                    std::vector<double> p0(n);
                    for (double& p : p0) p = uniform01(rng);
                    return CubeDistribution::product(std::move(p0));
                }
                case 1: return random_markov(n, rng);
                default: return CubeDistribution::delta_mix(n, 0.45 * uniform01(rng));
            }
        }();
        const auto table = mu.dense_table();
        CHECK(std::abs(compensated_total(table) - 1.0) <= kProbTol);

        // closed-form point masses vs the materialized table
        for (uint64_t x = 0; x < table.size(); ++x) {
            CHECK(mu.prob(CubePoint(n, x)) == doctest::Approx(table[x]).epsilon(1e-12));
        }
        // closed-form prefix masses and conditionals vs raw sums
        for (uint32_t k = 1; k <= n; ++k) {
            for (uint64_t p = 0; p < (uint64_t(1) << k); ++p) {
                const double want = oracle::prefix_mass(table, n, k, p);
                CHECK(mu.prefix_mass(CubePoint(k, p)) ==
                      doctest::Approx(want).epsilon(1e-11));
            }
        }
        for (uint32_t k = 2; k <= n; ++k) {
            for (uint64_t p = 0; p < (uint64_t(1) << (k - 1)); ++p) {
                const ConditionalRow row = mu.conditional(k, CubePoint(k - 1, p));
                const double want = oracle::conditional_p(table, n, k, p, 0);
                if (row.defined) {
                    CHECK(row.p0 == doctest::Approx(want).epsilon(1e-11));
                    CHECK(std::abs(row.p0 + row.p1 - 1.0) <= 1e-12);
                } else {
                    CHECK(std::isnan(want));
                }
            }
        }
    }
}

TEST_CASE("prefix-sum levels are consistent under marginalization") {
    Rng rng(31);
    const auto mu = CubeDistribution::random_dense(6, 17);
    for (uint32_t k = 1; k <= 6; ++k) {
        const auto lv = mu.level(k);
        if (k > 1) {
            const auto up = mu.level(k - 1);
            for (uint64_t p = 0; p < up.size(); ++p) {
                CHECK(up[p] == lv[2 * p] + lv[2 * p + 1]); // exact: built this way
            }
        }
        const CubeDistribution margin = mu.marginalize(k);
        for (uint64_t p = 0; p < lv.size(); ++p) {
            CHECK(margin.dense_table()[p] == lv[p]);
        }
    }
    (void)rng;
}

TEST_CASE("concurrent first-touch queries race safely on a shared distribution") {
    const auto mu = CubeDistribution::markov(
        0.5, std::vector<std::array<double, 2>>(9, {{0.7, 0.2}}));
    std::vector<std::thread> workers;
    std::vector<double> results(8, 0.0);
    for (int w = 0; w < 8; ++w) {
        workers.emplace_back([&, w] {
            // lazy dense/level/marginal caches all get hit from every thread
            double acc = mu.dense_table()[w];
            acc += mu.marginal(1 + uint32_t(w) % 10).p0;
            acc += mu.conditional(2 + uint32_t(w) % 9, CubePoint(1 + uint32_t(w) % 9, 0)).p0;
            acc += mu.epsilon_table(2 + uint32_t(w) % 9).sup_norm();
            results[w] = acc;
        });
    }
    for (auto& th : workers) th.join();
    for (int w = 0; w < 8; ++w) {
        double want = mu.dense_table()[w];
        want += mu.marginal(1 + uint32_t(w) % 10).p0;
        want += mu.conditional(2 + uint32_t(w) % 9, CubePoint(1 + uint32_t(w) % 9, 0)).p0;
        want += mu.epsilon_table(2 + uint32_t(w) % 9).sup_norm();
        CHECK(results[w] == want);
    }
}

TEST_CASE("dense capacity guard rejects oversized requests") {
    std::vector<double> two = {0.5, 0.5};
    CHECK_THROWS_AS(CubeDistribution::dense(2, two), Error); // wrong size
    std::vector<double> bad = {0.5, 0.6};
    CHECK_THROWS_AS(CubeDistribution::dense(1, bad), Error); // mass != 1
    std::vector<double> neg = {1.5, -0.5};
    CHECK_THROWS_AS(CubeDistribution::dense(1, neg), Error);

    const auto big = CubeDistribution::product(std::vector<double>(40, 0.5));
    CHECK(big.n() == 40);
    CHECK_FALSE(big.dense_capable());
    CHECK_THROWS_AS(big.dense_table(), Error);
    CHECK(big.marginal(40).p0 == 0.5); // closed form still fine
}
