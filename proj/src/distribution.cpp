#include "oppsim/distribution.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace oppsim {

DistributionSpec::DistributionSpec(Kind kind, Fn cdf, Fn inverse, double c1, double c2,
                                   std::optional<double> alpha, std::string name)
    : kind_(kind), cdf_(std::move(cdf)), inverse_(std::move(inverse)), c1_(c1), c2_(c2),
      alpha_(alpha), name_(std::move(name)) {
    if (!(c1_ > 0.0) || !(c2_ >= c1_))
        throw std::invalid_argument("distribution: need 0 < C1 <= C2");
}

DistributionSpec DistributionSpec::identity() {
    return DistributionSpec(Kind::Identity, nullptr, nullptr, 1.0, 1.0, 1.0, "identity");
}

DistributionSpec DistributionSpec::quadratic() {
    return DistributionSpec(Kind::Quadratic, nullptr, nullptr, 0.5, 1.0, 0.5, "quadratic");
}

DistributionSpec DistributionSpec::custom(Fn cdf, Fn inverse, double c1, double c2,
                                          std::optional<double> alpha, std::string name) {
    if (!cdf)
        throw std::invalid_argument("custom distribution: null cdf");
    return DistributionSpec(Kind::Custom, std::move(cdf), std::move(inverse), c1, c2, alpha,
                            std::move(name));
}

double DistributionSpec::cdf(double x) const {
    if (!std::isfinite(x))
        throw std::invalid_argument("cdf: nonfinite argument");
    if (x <= 0.0)
        return 0.0;
    if (x >= 1.0)
        return 1.0;
    switch (kind_) {
    case Kind::Identity:
        return x;
    case Kind::Quadratic:
        return x * (1.0 + x) * 0.5;
    case Kind::Custom:
    default:
        return cdf_(x);
    }
}

double DistributionSpec::cdf_inverse(double p) const {
    if (!std::isfinite(p) || p < 0.0 || p > 1.0)
        throw std::invalid_argument("cdf_inverse: argument outside [0,1]");
    if (p == 0.0)
        return 0.0;
    if (p == 1.0)
        return 1.0;
    switch (kind_) {
    case Kind::Identity:
        return p;
    case Kind::Quadratic:
        // Positive root of x^2 + x - 2p, written to stay accurate as p -> 0.
        return 4.0 * p / (1.0 + std::sqrt(1.0 + 8.0 * p));
    case Kind::Custom:
    default:
        break;
    }
    if (inverse_)
        return inverse_(p);
    // Bisection on [0,1]; F is monotone with F(0)=0 <= p <= 1 = F(1).
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (cdf(mid) < p)
            lo = mid;
        else
            hi = mid;
        if (hi - lo <= 1e-12 * std::max(lo, 1e-300))
            break;
    }
    return 0.5 * (lo + hi);
}

void DistributionSpec::validate(int grid_points) const {
    if (grid_points < 2)
        throw std::invalid_argument("validate: grid too small");
    if (cdf(0.0) != 0.0)
        throw std::invalid_argument("distribution: F(0) != 0");
    if (cdf(1.0) != 1.0)
        throw std::invalid_argument("distribution: F(1) != 1");
    double prev = 0.0;
    for (int i = 1; i <= grid_points; ++i) {
        const double x = static_cast<double>(i) / grid_points;
        const double fx = cdf(x);
        if (fx < prev)
            throw std::invalid_argument("distribution: F not nondecreasing near x=" + std::to_string(x));
        const double ratio = fx / x;
        if (ratio < c1_ * (1.0 - 1e-9) || ratio > c2_ * (1.0 + 1e-9))
            throw std::invalid_argument("distribution: F(x)/x outside [C1, C2] near x=" + std::to_string(x));
        prev = fx;
    }
    for (int i = 1; i < grid_points; ++i) {
        const double p = static_cast<double>(i) / grid_points;
        const double back = cdf(cdf_inverse(p));
        if (std::fabs(back - p) > 1e-12)
            throw std::invalid_argument("distribution: inverse round trip off at p=" + std::to_string(p));
    }
}

} // namespace oppsim
