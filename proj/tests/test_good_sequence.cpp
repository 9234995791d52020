#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "oppsim/good_sequence.hpp"
#include "oppsim/rng.hpp"

#include <cmath>

using namespace oppsim;

TEST_CASE("index_above on the built-in grids") {
    const auto ints = GoodSequence::integers();
    CHECK(ints.index_above(2.5) == 3);
    CHECK(ints.index_above(3.0) == 4); // strictly greater
    CHECK(ints.index_above(0.5) == 1);
    const auto even = GoodSequence::scaled_integers(2);
    CHECK(even.index_above(6.0) == 4);
    CHECK(even.index_above(5.9) == 3);
    CHECK_THROWS_AS(ints.index_above(-1.0), std::invalid_argument);
    CHECK_THROWS_AS(ints.index_above(std::nan("")), std::invalid_argument);
}

TEST_CASE("index_above / value_at consistency") {
    const GoodSequence seqs[] = {
        GoodSequence::integers(), GoodSequence::scaled_integers(3),
        GoodSequence::custom([](std::int64_t j) { return j == 0 ? 0.0 : 1.5 * j - 0.5; }, 1.5,
                             "affine-offset")};
    RngStream rng(7, 0);
    for (const auto& seq : seqs) {
        for (std::int64_t s = 1; s <= 200; ++s) {
            const double lo = seq.value_at(s - 1);
            const double hi = seq.value_at(s);
            const double u = lo + (hi - lo) * 0.999 * rng.next_unit();
            CHECK(seq.index_above(u) == s);
            CHECK(seq.index_above(lo) == s); // boundary is strict
        }
    }
}

TEST_CASE("relative gap sum closed values") {
    const auto ints = GoodSequence::integers();
    CHECK(ints.relative_gap_sum(5.0) == doctest::Approx(25.0 / 12.0).epsilon(1e-14));
    CHECK(ints.relative_gap_sum(1.5) == 0.0);
    const auto even = GoodSequence::scaled_integers(2);
    CHECK(even.relative_gap_sum(6.0) == doctest::Approx(1.5).epsilon(1e-14));
}

TEST_CASE("relative gap sum matches direct summation for a custom rule") {
    const auto rule = [](std::int64_t j) { return j == 0 ? 0.0 : 1.5 * j - 0.5; };
    const auto seq = GoodSequence::custom(rule, 1.5, "affine-offset");
    seq.validate_prefix(1000);
    for (double u : {2.0, 7.3, 100.0, 999.5}) {
        const std::int64_t ju = seq.index_above(u);
        double direct = 0.0;
        for (std::int64_t j = 2; j <= ju - 1; ++j)
            direct += (rule(j) - rule(j - 1)) / rule(j - 1);
        CHECK(seq.relative_gap_sum(u) == doctest::Approx(direct).epsilon(1e-12));
    }
}

TEST_CASE("harmonic closed form agrees with direct summation") {
    for (double m : {1.0, 2.0, 100.0, 2047.0, 2048.0, 5000.0, 100000.0}) {
        double direct = 0.0;
        for (std::int64_t k = static_cast<std::int64_t>(m); k >= 1; --k)
            direct += 1.0 / static_cast<double>(k);
        CHECK(harmonic(m) == doctest::Approx(direct).epsilon(1e-14));
    }
    CHECK(harmonic(0.5) == 0.0);
    // far beyond 2^53: monotone and close to log m + gamma
    const double h = harmonic(1e25);
    CHECK(h == doctest::Approx(std::log(1e25) + 0.5772156649015329).epsilon(1e-12));
}

TEST_CASE("validate_prefix flags non-good sequences") {
    // unbounded gaps
    const auto quad = GoodSequence::custom(
        [](std::int64_t j) { return static_cast<double>(j) * static_cast<double>(j); }, 3.0,
        "squares");
    CHECK_THROWS_AS(quad.validate_prefix(10), std::invalid_argument);
    // first value below 1
    const auto small = GoodSequence::custom(
        [](std::int64_t j) { return j == 0 ? 0.0 : 0.5 + 0.5 * static_cast<double>(j - 1); }, 1.0,
        "small-start");
    CHECK_THROWS_AS(small.validate_prefix(10), std::invalid_argument);
    // not strictly increasing
    const auto flat = GoodSequence::custom(
        [](std::int64_t j) { return j == 0 ? 0.0 : 1.0; }, 1.0, "flat");
    CHECK_THROWS_AS(flat.validate_prefix(10), std::invalid_argument);
    // healthy built-ins pass
    GoodSequence::integers().validate_prefix(10000);
    GoodSequence::scaled_integers(5).validate_prefix(10000);
}
