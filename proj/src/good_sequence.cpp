#include "oppsim/good_sequence.hpp"

#include "oppsim/kernels.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace oppsim {

namespace {

constexpr double kEulerGamma = 0.57721566490153286060651209008240243;

double harmonic_exact(std::int64_t m) {
    kernels::NeumaierAccumulator acc;
    for (std::int64_t k = m; k >= 1; --k)
        acc.add(1.0 / static_cast<double>(k));
    return acc.value();
}

} // namespace

double harmonic(double m) {
    if (!std::isfinite(m))
        throw std::invalid_argument("harmonic: nonfinite argument");
    if (m < 1.0)
        return 0.0;
    const double mf = std::floor(m);
    if (mf < 2048.0)
        return harmonic_exact(static_cast<std::int64_t>(mf));
    const double inv = 1.0 / mf;
    const double inv2 = inv * inv;
    // H_m = ln m + gamma + 1/(2m) - 1/(12m^2) + 1/(120m^4) - 1/(252m^6) + ...
    return std::log(mf) + kEulerGamma + 0.5 * inv -
           inv2 * (1.0 / 12.0 - inv2 * (1.0 / 120.0 - inv2 / 252.0));
}

GoodSequence::GoodSequence(Kind kind, std::int64_t scale, double ell, Rule rule, std::string name)
    : kind_(kind), scale_(scale), ell_(ell), rule_(std::move(rule)), name_(std::move(name)) {}

GoodSequence GoodSequence::integers() {
    return GoodSequence(Kind::Integers, 1, 1.0, nullptr, "integers");
}

GoodSequence GoodSequence::scaled_integers(std::int64_t scale) {
    if (scale < 1)
        throw std::invalid_argument("scaled_integers: scale must be >= 1");
    return GoodSequence(Kind::ScaledIntegers, scale, static_cast<double>(scale), nullptr,
                        "scaled_integers(" + std::to_string(scale) + ")");
}

GoodSequence GoodSequence::custom(Rule rule, double gap_bound, std::string name) {
    if (!rule)
        throw std::invalid_argument("custom sequence: null rule");
    if (!(gap_bound > 0.0) || !std::isfinite(gap_bound))
        throw std::invalid_argument("custom sequence: gap bound must be positive and finite");
    return GoodSequence(Kind::Custom, 0, gap_bound, std::move(rule), std::move(name));
}

std::int64_t GoodSequence::scale() const {
    if (!is_affine())
        throw std::logic_error("scale(): sequence is not affine");
    return scale_;
}

double GoodSequence::value_at(std::int64_t j) const {
    if (j < 0)
        throw std::invalid_argument("value_at: negative index");
    if (is_affine())
        return static_cast<double>(scale_) * static_cast<double>(j);
    return rule_(j);
}

std::int64_t GoodSequence::index_above(double u) const {
    if (!std::isfinite(u) || u < 0.0)
        throw std::invalid_argument("index_above: argument must be finite and >= 0");
    if (is_affine()) {
        const double q = std::floor(u / static_cast<double>(scale_));
        if (q >= 9.2e18)
            throw std::out_of_range("index_above: index exceeds 64-bit range");
        return static_cast<std::int64_t>(q) + 1;
    }
    // Custom rule: gallop past u, then binary-search the crossing.
    std::int64_t lo = 0, hi = 1;
    while (rule_(hi) <= u) {
        lo = hi;
        if (hi > (std::int64_t{1} << 62) / 2)
            throw std::out_of_range("index_above: index exceeds 64-bit range");
        hi *= 2;
    }
    while (hi - lo > 1) {
        const std::int64_t mid = lo + (hi - lo) / 2;
        if (rule_(mid) <= u)
            lo = mid;
        else
            hi = mid;
    }
    return hi;
}

double GoodSequence::relative_gap_sum(double u) const {
    if (!std::isfinite(u) || u < 0.0)
        throw std::invalid_argument("relative_gap_sum: argument must be finite and >= 0");
    if (is_affine()) {
        // Gaps are constant: each term is 1/(j-1), so the sum is H_{j_u - 2}.
        const double m = std::floor(u / static_cast<double>(scale_)) - 1.0;
        return harmonic(m);
    }
    const std::int64_t ju = index_above(u);
    kernels::NeumaierAccumulator acc;
    double prev = rule_(1);
    for (std::int64_t j = 2; j <= ju - 1; ++j) {
        const double cur = rule_(j);
        acc.add((cur - prev) / prev);
        prev = cur;
    }
    return acc.value();
}

void GoodSequence::validate_prefix(std::int64_t count) const {
    if (count < 1)
        throw std::invalid_argument("validate_prefix: count must be >= 1");
    double prev = value_at(0);
    if (prev != 0.0)
        throw std::invalid_argument("good sequence: value_at(0) must be 0");
    for (std::int64_t j = 1; j <= count; ++j) {
        const double cur = value_at(j);
        if (!std::isfinite(cur))
            throw std::invalid_argument("good sequence: nonfinite value at index " + std::to_string(j));
        if (j >= 1 && cur < 1.0)
            throw std::invalid_argument("good sequence: value below 1 at index " + std::to_string(j));
        if (!(cur > prev))
            throw std::invalid_argument("good sequence: not strictly increasing at index " + std::to_string(j));
        const double gap = cur - prev;
        if (gap > ell_ * (1.0 + 1e-12) + 1e-12)
            throw std::invalid_argument("good sequence: gap bound violated at index " + std::to_string(j));
        prev = cur;
    }
}

} // namespace oppsim
