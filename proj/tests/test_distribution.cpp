#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "oppsim/distribution.hpp"

#include <cmath>

using namespace oppsim;

TEST_CASE("built-in distributions validate and invert") {
    const auto id = DistributionSpec::identity();
    id.validate();
    CHECK(id.cdf(0.25) == 0.25);
    CHECK(id.cdf_inverse(0.25) == 0.25);
    CHECK(id.alpha() == 1.0);

    const auto quad = DistributionSpec::quadratic();
    quad.validate();
    CHECK(quad.cdf(0.5) == doctest::Approx(3.0 / 8.0).epsilon(1e-15));
    CHECK(quad.cdf_inverse(3.0 / 8.0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(quad.c1() == 0.5);
    CHECK(quad.c2() == 1.0);
    CHECK(quad.alpha() == 0.5);
    // stable near zero: F_inv(p) ~ 2p
    CHECK(quad.cdf_inverse(1e-18) == doctest::Approx(2e-18).epsilon(1e-9));
    CHECK(quad.cdf_inverse(1e-18) > 0.0);
}

TEST_CASE("custom distribution falls back to bisection") {
    const auto f = [](double x) { return x * (1.0 + x) * 0.5; };
    const auto dist = DistributionSpec::custom(f, nullptr, 0.5, 1.0, 0.5, "quad-bisect");
    dist.validate();
    const auto quad = DistributionSpec::quadratic();
    for (double p : {1e-6, 0.1, 0.375, 0.9, 0.999}) {
        CHECK(dist.cdf_inverse(p) == doctest::Approx(quad.cdf_inverse(p)).epsilon(1e-10));
    }
}

TEST_CASE("validate rejects broken specs") {
    // envelope violated: F(x)/x -> 0 at the origin but C1 = 0.5 declared
    const auto sq = DistributionSpec::custom([](double x) { return x * x; }, nullptr, 0.5, 1.0,
                                             std::nullopt, "square");
    CHECK_THROWS_AS(sq.validate(), std::invalid_argument);
    // non-monotone
    const auto wavy = DistributionSpec::custom(
        [](double x) { return x + 0.2 * std::sin(6.283185307179586 * x); }, nullptr, 0.1, 3.0,
        std::nullopt, "wavy");
    CHECK_THROWS_AS(wavy.validate(), std::invalid_argument);
    // bad envelope constants
    CHECK_THROWS_AS(DistributionSpec::custom([](double x) { return x; }, nullptr, 2.0, 1.0,
                                             std::nullopt, "bad"),
                    std::invalid_argument);
}

TEST_CASE("inverse round trip within 1e-12 on a dense grid") {
    for (const auto& dist : {DistributionSpec::identity(), DistributionSpec::quadratic()}) {
        for (int i = 1; i < 2000; ++i) {
            const double p = static_cast<double>(i) / 2000.0;
            CHECK(std::fabs(dist.cdf(dist.cdf_inverse(p)) - p) <= 1e-12);
        }
    }
}
