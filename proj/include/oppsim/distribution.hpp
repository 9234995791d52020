#pragma once

#include <functional>
#include <optional>
#include <string>

namespace oppsim {

// Distribution function F on [0,1] with F(0) = 0, F(1) = 1, together with
// the density-ratio envelope C1 <= F(x)/x <= C2 on (0,1] and, when it
// exists, alpha = lim_{x->0} F(x)/x.
class DistributionSpec {
  public:
    enum class Kind { Identity, Quadratic, Custom };
    using Fn = std::function<double(double)>;

    // F(x) = x. C1 = C2 = alpha = 1.
    static DistributionSpec identity();
    // F(x) = x(1+x)/2. C1 = 1/2, C2 = 1, alpha = 1/2.
    static DistributionSpec quadratic();
    // Arbitrary monotone F; inverse may be omitted, in which case cdf_inverse
    // falls back to bisection (relative tolerance 1e-12, at most 200 steps).
    static DistributionSpec custom(Fn cdf, Fn inverse, double c1, double c2,
                                   std::optional<double> alpha, std::string name);

    Kind kind() const { return kind_; }
    const std::string& name() const { return name_; }
    double c1() const { return c1_; }
    double c2() const { return c2_; }
    std::optional<double> alpha() const { return alpha_; }

    double cdf(double x) const;
    double cdf_inverse(double p) const;

    // Checks F(0) = 0, F(1) = 1, monotonicity, the C1/C2 envelope and the
    // inverse round trip |F(F^-1(p)) - p| <= 1e-12 on a dense grid.
    void validate(int grid_points = 4096) const;

  private:
    DistributionSpec(Kind kind, Fn cdf, Fn inverse, double c1, double c2,
                     std::optional<double> alpha, std::string name);

    Kind kind_;
    Fn cdf_;     // custom only
    Fn inverse_; // custom only, may be null
    double c1_, c2_;
    std::optional<double> alpha_;
    std::string name_;
};

} // namespace oppsim
