#include "oppsim/digit_law.hpp"

#include <cmath>
#include <stdexcept>

namespace oppsim {

double delta_kernel(double phi_val, double k, double y) {
    if (!(phi_val > 0.0))
        throw std::domain_error("delta_kernel: phi must be positive");
    if (y < 0.0)
        throw std::domain_error("delta_kernel: y must be nonnegative");
    if (k < phi_val)
        throw std::domain_error("delta_kernel: k below admissible range");
    return phi_val * (1.0 + y) / (k + phi_val * y);
}

mpq_class delta_kernel_q(const mpq_class& phi_val, const mpq_class& k, const mpq_class& y) {
    if (phi_val <= 0)
        throw std::domain_error("delta_kernel_q: phi must be positive");
    if (y < 0)
        throw std::domain_error("delta_kernel_q: y must be nonnegative");
    if (k < phi_val)
        throw std::domain_error("delta_kernel_q: k below admissible range");
    return phi_val * (1 + y) / (k + phi_val * y);
}

double digit_mass(std::int64_t s, const DistributionSpec& dist, const GoodSequence& seq) {
    if (s < 1)
        throw std::invalid_argument("digit_mass: s must be >= 1");
    return digit_tail(s - 1, dist, seq) - digit_tail(s, dist, seq);
}

double digit_tail(std::int64_t s, const DistributionSpec& dist, const GoodSequence& seq) {
    if (s < 0)
        throw std::invalid_argument("digit_tail: s must be >= 0");
    if (s == 0)
        return 1.0; // F(1/lambda_0) with lambda_0 = 0 reads as F(inf) = 1
    return dist.cdf(1.0 / seq.value_at(s));
}

namespace {

double y_at(const ExpansionFamily& fam, int step, std::int64_t b) {
    const mpz_class digit(static_cast<long>(b));
    const mpz_class hist[] = {digit};
    return fam.y(step, std::span<const mpz_class>(hist, 1)).get_d();
}

} // namespace

double conditional_digit_mass(std::int64_t b, std::int64_t h, int step,
                              const ExpansionFamily& fam, const DistributionSpec& dist) {
    const mpz_class digit(static_cast<long>(b));
    const double phi = fam.phi(step, digit).get_d();
    const mpz_class hmin = fam.min_next_digit(step, digit);
    if (mpz_class(static_cast<long>(h)) < hmin)
        throw std::domain_error("conditional_digit_mass: digit below admissible minimum");
    const double y = y_at(fam, step, b);
    const double hi = delta_kernel(phi, static_cast<double>(h), y);
    const double lo = delta_kernel(phi, static_cast<double>(h) + 1.0, y);
    return dist.cdf(hi) - dist.cdf(lo);
}

double conditional_digit_tail(std::int64_t b, std::int64_t h, int step,
                              const ExpansionFamily& fam, const DistributionSpec& dist) {
    const mpz_class digit(static_cast<long>(b));
    const double phi = fam.phi(step, digit).get_d();
    const mpz_class hmin = fam.min_next_digit(step, digit);
    if (mpz_class(static_cast<long>(h)) < hmin - 1)
        throw std::domain_error("conditional_digit_tail: digit below admissible minimum");
    const double y = y_at(fam, step, b);
    return dist.cdf(delta_kernel(phi, static_cast<double>(h) + 1.0, y));
}

} // namespace oppsim
