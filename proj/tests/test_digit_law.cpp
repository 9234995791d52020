#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "oppsim/digit_law.hpp"
#include "oppsim/kernels.hpp"
#include "oppsim/rng.hpp"

#include <cmath>

using namespace oppsim;

TEST_CASE("delta kernel values and monotonicity") {
    CHECK(delta_kernel(2.0, 2.0, 0.0) == 1.0);
    CHECK(delta_kernel(2.0, 3.0, 0.0) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(delta_kernel(2.0, 4.0, 1.0) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK_THROWS_AS(delta_kernel(2.0, 1.0, 0.0), std::domain_error);
    CHECK_THROWS_AS(delta_kernel(0.0, 1.0, 0.0), std::domain_error);

    RngStream rng(3, 0);
    for (int rep = 0; rep < 200; ++rep) {
        const double phi = 0.5 + 10.0 * rng.next_unit();
        const double y = 2.0 * rng.next_unit();
        double prev = delta_kernel(phi, phi, y);
        for (double k = phi + 0.25; k < phi + 20.0; k += 0.25) {
            const double cur = delta_kernel(phi, k, y);
            CHECK(cur < prev);
            prev = cur;
        }
    }
}

TEST_CASE("digit mass values") {
    const auto ints = GoodSequence::integers();
    const auto id = DistributionSpec::identity();
    const auto quad = DistributionSpec::quadratic();
    CHECK(digit_mass(2, id, ints) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(digit_mass(1, id, ints) == 0.0);
    CHECK(digit_mass(2, quad, ints) == doctest::Approx(5.0 / 8.0).epsilon(1e-15));
}

TEST_CASE("digit mass telescopes to one") {
    const GoodSequence seqs[] = {GoodSequence::integers(), GoodSequence::scaled_integers(2)};
    const DistributionSpec dists[] = {DistributionSpec::identity(), DistributionSpec::quadratic()};
    for (const auto& seq : seqs) {
        for (const auto& dist : dists) {
            for (std::int64_t cutoff : {1, 10, 1000}) {
                kernels::NeumaierAccumulator acc;
                for (std::int64_t s = 1; s <= cutoff; ++s)
                    acc.add(digit_mass(s, dist, seq));
                acc.add(digit_tail(cutoff, dist, seq));
                CHECK(std::fabs(acc.value() - 1.0) <= 1e-12);
            }
        }
    }
}

TEST_CASE("conditional digit mass values and telescoping") {
    const auto id = DistributionSpec::identity();
    const auto engel = ExpansionFamily::engel();
    const auto luroth = ExpansionFamily::luroth_type();

    CHECK(conditional_digit_mass(2, 3, 1, engel, id) == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
    CHECK(conditional_digit_mass(2, 2, 1, luroth, id) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK_THROWS_AS(conditional_digit_mass(2, 1, 1, engel, id), std::domain_error);

    // partial sums reach 1 - F(phi(b)/(H+1)) exactly (zero y, integer phi)
    for (const auto* fam : {&engel, &luroth}) {
        const std::int64_t b = 3;
        const double phi = fam->phi(1, mpz_class(static_cast<long>(b))).get_d();
        kernels::NeumaierAccumulator acc;
        const std::int64_t hmin = static_cast<std::int64_t>(phi);
        const std::int64_t cap = hmin + 50;
        for (std::int64_t h = hmin; h <= cap; ++h)
            acc.add(conditional_digit_mass(b, h, 1, *fam, id));
        const double expect = 1.0 - id.cdf(phi / static_cast<double>(cap + 1));
        CHECK(std::fabs(acc.value() - expect) <= 1e-12);
    }
}

TEST_CASE("conditional tail matches mass telescoping") {
    const auto quad = DistributionSpec::quadratic();
    const auto engel = ExpansionFamily::engel();
    for (std::int64_t b : {1, 2, 7}) {
        for (std::int64_t h = b; h <= b + 20; ++h) {
            const double lhs = conditional_digit_tail(b, h, 1, engel, quad) -
                               conditional_digit_tail(b, h + 1, 1, engel, quad);
            CHECK(lhs == doctest::Approx(conditional_digit_mass(b, h + 1, 1, engel, quad))
                             .epsilon(1e-12));
        }
    }
}

TEST_CASE("integrality hypothesis check") {
    const auto ints = GoodSequence::integers();
    CHECK(integrality_hypothesis_holds(ExpansionFamily::engel(), ints, 50, 3));
    CHECK(integrality_hypothesis_holds(ExpansionFamily::luroth_type(), ints, 50, 3));
    CHECK(integrality_hypothesis_holds(ExpansionFamily::engel(),
                                       GoodSequence::scaled_integers(2), 50, 3));

    // constant y = 1: x*phi + (x-1)*phi is an integer for integer x, phi
    const auto y_one = ExpansionFamily::custom(
        [](int, const mpz_class& h) { return mpq_class(h); },
        [](int, std::span<const mpz_class>) { return mpq_class(1); }, 1, true, "engel-y1");
    CHECK(integrality_hypothesis_holds(y_one, ints, 20, 2));

    // constant y = 1/2 breaks integrality on even x
    const auto y_half = ExpansionFamily::custom(
        [](int, const mpz_class& h) { return mpq_class(h); },
        [](int, std::span<const mpz_class>) { return mpq_class(1, 2); }, 1, true, "engel-yhalf");
    CHECK_FALSE(integrality_hypothesis_holds(y_half, ints, 20, 2));
}
