#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "oppsim/rng.hpp"
#include "oppsim/trimstats.hpp"
#include "oppsim/util.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

using namespace oppsim;

TEST_CASE("trimming and truncation basics") {
    const std::vector<double> v{5, 1, 3};
    CHECK(trimmed_sum(v, 1) == 4.0);
    CHECK(trimmed_sum(v, 0) == 9.0);
    CHECK(trimmed_sum(v, 3) == 0.0);
    CHECK_THROWS_AS(trimmed_sum(v, 4), std::invalid_argument);
    CHECK(trimmed_sum(std::vector<double>{2, 2, 1}, 1) == 3.0);

    CHECK(truncated_sum(v, 3.0) == 4.0); // inclusive boundary
    CHECK(truncated_sum(v, 0.5) == 0.0);
    CHECK(truncated_sum(v, 10.0) == 9.0);

    CHECK(exceed_counts(v, 3.0) == std::pair<std::int64_t, std::int64_t>{1, 2});
    CHECK(exceed_counts(std::vector<double>{}, 1.0) ==
          std::pair<std::int64_t, std::int64_t>{0, 0});
}

TEST_CASE("trimmed sum equals full-sort oracle, ties included") {
    RngStream rng(1234, 0);
    for (int rep = 0; rep < 300; ++rep) {
        const std::int64_t n = 1 + static_cast<std::int64_t>(rng.next_unit() * 40.0);
        std::vector<double> v(static_cast<std::size_t>(n));
        for (double& x : v)
            x = std::floor(rng.next_unit() * 6.0); // ties guaranteed
        for (std::int64_t r : {std::int64_t{0}, std::int64_t{1}, n / 2, n - 1, n}) {
            if (r < 0)
                continue;
            auto sorted = v;
            std::sort(sorted.begin(), sorted.end(), std::greater<>());
            const double oracle = std::accumulate(sorted.begin() + static_cast<std::ptrdiff_t>(r),
                                                  sorted.end(), 0.0);
            CHECK(trimmed_sum(v, r) == oracle);
        }
    }
}

TEST_CASE("residual identity examples") {
    {
        const auto [lhs, rhs] = residual_identity(std::vector<double>{5, 1, 3}, 1, 3.0);
        CHECK(lhs == 0.0);
        CHECK(rhs == 0.0);
    }
    {
        const auto [lhs, rhs] = residual_identity(std::vector<double>{5, 4, 1}, 2, 3.0);
        CHECK(lhs == 0.0);
        CHECK(rhs == 0.0);
    }
    {
        // all below threshold, nothing trimmed
        const auto [lhs, rhs] = residual_identity(std::vector<double>{1, 2, 3}, 0, 10.0);
        CHECK(lhs == 0.0);
        CHECK(rhs == 0.0);
    }
}

TEST_CASE("residual identity within 1e-9 relative on float input") {
    RngStream rng(2222, 0);
    for (int rep = 0; rep < 100; ++rep) {
        const std::int64_t n = 10 + static_cast<std::int64_t>(rng.next_unit() * 500.0);
        std::vector<double> v(static_cast<std::size_t>(n));
        double scale = 0.0;
        for (double& x : v) {
            x = (1.0 / rng.next_unit() - 1.0) * std::exp(8.0 * rng.next_unit());
            scale += std::fabs(x);
        }
        const auto r = static_cast<std::int64_t>(rng.next_unit() * static_cast<double>(n));
        const double t = 1.0 / rng.next_unit();
        const auto [lhs, rhs] = residual_identity(v, r, t);
        CHECK(std::fabs(lhs - rhs) <= 1e-9 * std::max(1.0, scale));
    }
}

TEST_CASE("deterministic trim residual bound") {
    auto res = trim_residual_bound_check(std::vector<double>{5, 4, 1}, 2, 3.0);
    CHECK(res.applicable);
    CHECK(res.holds);
    CHECK(res.residual == 0.0);
    CHECK(res.bound == 0.0);

    res = trim_residual_bound_check(std::vector<double>{5, 1, 2}, 2, 3.0);
    CHECK(res.applicable);
    CHECK(res.holds);
    CHECK(res.residual == 2.0);
    CHECK(res.bound == 3.0);

    res = trim_residual_bound_check(std::vector<double>{1, 2, 3}, 2, 5.0); // all below t
    CHECK(res.applicable);
    CHECK(res.holds);

    res = trim_residual_bound_check(std::vector<double>{5, 6, 7}, 1, 3.0); // r < exceed count
    CHECK_FALSE(res.applicable);
}

TEST_CASE("breakdown fields are mutually consistent") {
    RngStream rng(3333, 0);
    std::vector<double> scratch;
    for (int rep = 0; rep < 100; ++rep) {
        const std::int64_t n = 1 + static_cast<std::int64_t>(rng.next_unit() * 200.0);
        std::vector<double> v(static_cast<std::size_t>(n));
        for (double& x : v)
            x = std::min(std::floor(1.0 / rng.next_unit()) + 1.0, 0x1.0p40);
        const auto r = static_cast<std::int64_t>(rng.next_unit() * static_cast<double>(n));
        const double t = std::floor(1.0 / rng.next_unit()) + 1.0;
        const auto bd = breakdown(v, r, t, scratch);
        CHECK(bd.trimmed_sum == bd.total - bd.top_r_sum); // exact on integer data
        CHECK(bd.truncated_sum + bd.over_t_sum == bd.total);
        CHECK(bd.exceed_count <= bd.geq_count);
        CHECK(bd.truncated_sum - bd.trimmed_sum == bd.top_r_sum - bd.over_t_sum);
    }
}

TEST_CASE("expected exceedance and geq counts") {
    const auto id = DistributionSpec::identity();
    const auto ints = GoodSequence::integers();
    CHECK(expected_exceed_count(100, 10.0, id, ints) == doctest::Approx(10.0).epsilon(1e-15));
    CHECK(expected_geq_count(100, 10.0, id, ints) ==
          doctest::Approx(100.0 / 9.0).epsilon(1e-15));
    // off-grid threshold: strict and weak tails coincide
    CHECK(expected_geq_count(100, 10.5, id, ints) ==
          doctest::Approx(expected_exceed_count(100, 10.5, id, ints)).epsilon(1e-15));
    // everything above threshold when t sits below the first atom
    CHECK(expected_exceed_count(7, 1.0, id, ints) == 7.0);
    // ordering holds across a grid
    for (double t : {1.0, 3.0, 10.0, 1000.0})
        CHECK(expected_exceed_count(50, t, id, ints) <= expected_geq_count(50, t, id, ints));
}

TEST_CASE("expected truncated sum: values and the dual route") {
    const auto id = DistributionSpec::identity();
    const auto quad = DistributionSpec::quadratic();
    const auto ints = GoodSequence::integers();
    CHECK(expected_truncated_sum(1, 3.0, id, ints) == doctest::Approx(1.5).epsilon(1e-13));
    CHECK(expected_truncated_sum(10, 3.0, id, ints) == doctest::Approx(15.0).epsilon(1e-13));
    CHECK(expected_truncated_sum(1, 3.0, quad, ints) ==
          doctest::Approx(41.0 / 24.0).epsilon(1e-13));

    // the call itself cross-checks the Abel route; cover the full matrix
    const DistributionSpec dists[] = {id, quad};
    const GoodSequence seqs[] = {ints, GoodSequence::scaled_integers(2)};
    for (const auto& dist : dists)
        for (const auto& seq : seqs)
            for (std::int64_t n : {std::int64_t{1}, std::int64_t{10}, std::int64_t{100}})
                for (double t : {3.0, 10.0, 100.0})
                    CHECK(expected_truncated_sum(n, t, dist, seq) >= 0.0);
}

TEST_CASE("truncated mean lower bounds") {
    const DistributionSpec dists[] = {DistributionSpec::identity(),
                                      DistributionSpec::quadratic()};
    const GoodSequence seqs[] = {GoodSequence::integers(), GoodSequence::scaled_integers(2)};
    for (const auto& dist : dists) {
        for (const auto& seq : seqs) {
            double c_low = std::numeric_limits<double>::infinity();
            for (double t : {3.0, 10.0, 100.0, 1000.0, 100000.0}) {
                const double d1 = expected_truncated_sum(1, t, dist, seq);
                const double envelope = dist.c1() * seq.relative_gap_sum(t) + seq.value_at(1) -
                                        dist.c2();
                CHECK(d1 >= envelope - 1e-12);
                c_low = std::min(c_low, d1 / std::log(t));
            }
            CHECK(c_low > 0.0); // reported growth constant d(1,t) >= c log t
        }
    }
}

TEST_CASE("choose_beta frozen value and schedule guarantee") {
    const auto id = DistributionSpec::identity();
    const auto ints = GoodSequence::integers();
    // horizon maximum sits at n = 5 where the grid floor lags t = n^0.4
    const double beta = choose_beta(id, ints, 0.4, 1000000, 0.1, 1.5);
    CHECK(beta == doctest::Approx(1.65 * std::pow(5.0, 0.4)).epsilon(1e-13));
    CHECK(beta == doctest::Approx(3.141).epsilon(1e-3));
    // margin 1, eps0 0: exactly the finite-horizon supremum
    CHECK(choose_beta(id, ints, 0.4, 1000000, 0.0, 1.0) ==
          doctest::Approx(std::pow(5.0, 0.4)).epsilon(1e-13));

    // block-wise maximization equals the brute-force scan
    for (double gamma : {0.31, 0.4, 0.47}) {
        const double block = choose_beta(id, ints, gamma, 20000, 0.0, 1.0);
        double brute = 0.0;
        for (std::int64_t n = 1; n <= 20000; ++n) {
            const double t = std::pow(static_cast<double>(n), gamma);
            brute = std::max(brute, expected_exceed_count(n, t, id, ints) /
                                        std::pow(static_cast<double>(n), 1.0 - gamma));
        }
        CHECK(block == doctest::Approx(brute).epsilon(1e-12));
    }

    // resulting schedule dominates (1+eps0) A_n across the horizon
    const double eps0 = 0.1;
    const double beta_grid = choose_beta(id, ints, 0.4, 1000000, eps0, 1.0, 1000);
    for (std::int64_t n : {std::int64_t{1000}, std::int64_t{1023}, std::int64_t{5000},
                           std::int64_t{100000}, std::int64_t{1000000}}) {
        const double t = std::pow(static_cast<double>(n), 0.4);
        const double r = std::ceil(beta_grid * std::pow(static_cast<double>(n), 0.6));
        CHECK(r >= (1.0 + eps0) * expected_exceed_count(n, t, id, ints));
    }
}

TEST_CASE("input validation") {
    const auto id = DistributionSpec::identity();
    const auto ints = GoodSequence::integers();
    CHECK_THROWS_AS(expected_exceed_count(10, 0.5, id, ints), std::invalid_argument);
    CHECK_THROWS_AS(choose_beta(id, ints, 0.6, 100, 0.1, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(choose_beta(id, ints, 0.4, 100, 0.1, 0.5), std::invalid_argument);
}
