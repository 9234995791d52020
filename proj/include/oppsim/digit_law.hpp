#pragma once

#include <cstdint>

#include <gmpxx.h>

#include "oppsim/distribution.hpp"
#include "oppsim/expansion_family.hpp"
#include "oppsim/good_sequence.hpp"

namespace oppsim {

// delta(phi, k, y) = phi(1+y)/(k + phi*y): maps a candidate digit k to the
// ratio threshold it represents. Strictly decreasing in k; equals 1 at
// k = phi when y = 0. Requires k >= phi > 0, y >= 0.
double delta_kernel(double phi_val, double k, double y);
mpq_class delta_kernel_q(const mpq_class& phi_val, const mpq_class& k, const mpq_class& y);

// Discrete density of the grid variables: P(X = value_at(s)) for s >= 1,
//   digit_mass(s) = F(1/lambda_{s-1}) - F(1/lambda_s),  F(1/lambda_0) := 1.
// Telescopes to 1 over s.
double digit_mass(std::int64_t s, const DistributionSpec& dist, const GoodSequence& seq);

// Tail of the same law: P(X > value_at(s)) = F(1/lambda_s); s = 0 gives 1.
double digit_tail(std::int64_t s, const DistributionSpec& dist, const GoodSequence& seq);

// One-step conditional digit law: P(next = h | current = b) =
// F(delta(phi_n(b), h, y)) - F(delta(phi_n(b), h+1, y)) for admissible h.
// Throws std::domain_error when h is below the admissible minimum.
double conditional_digit_mass(std::int64_t b, std::int64_t h, int step, const ExpansionFamily& fam,
                              const DistributionSpec& dist);

// P(next > h | current = b) = F(delta(phi_n(b), h+1, y)).
double conditional_digit_tail(std::int64_t b, std::int64_t h, int step,
                              const ExpansionFamily& fam, const DistributionSpec& dist);

} // namespace oppsim
