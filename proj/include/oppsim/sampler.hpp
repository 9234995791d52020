#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include <gmpxx.h>

#include "oppsim/distribution.hpp"
#include "oppsim/expansion_family.hpp"
#include "oppsim/good_sequence.hpp"
#include "oppsim/rng.hpp"

namespace oppsim {

// Measure-zero guard: tail inversion is undefined at u in {0,1}; callers
// drawing from RngStream never see it (next_unit is strictly interior).
struct resample_needed : std::domain_error {
    resample_needed() : std::domain_error("uniform variate must lie strictly inside (0,1)") {}
};

// One sampled digit chain: digits B_1..B_{n+1}, ratios R_1..R_n and their
// grid discretizations X_j = value_at(index_above(R_j)).
struct ChainPath {
    std::vector<mpz_class> digits;
    std::vector<double> ratios;
    std::vector<double> x;
};

// Smallest admissible digit h with tail probability
//   P(next > h | current = b) = F(delta(phi(b), h+1, y)) <= u,
// computed by closed-form tail inversion in exact rational arithmetic
// (never by unbounded scan): h = ceil(phi(1+y)/F_inv(u) - phi*y) - 1,
// clamped to the admissible minimum.
mpz_class next_digit(const mpz_class& b, int step, const ExpansionFamily& fam,
                     const DistributionSpec& dist, double u,
                     std::span<const mpz_class> history = {});

// First digit: same inversion rule against the virtual step-0 kernel
// phi = min_first_digit, y = 0, i.e. P(B_1 > h) = F(min_first_digit/(h+1)).
mpz_class first_digit(const ExpansionFamily& fam, const DistributionSpec& dist, double u);

// Exact ratio of a sampled step: (B_{j+1} + phi_j(B_j) Y_j) / (phi_j(B_j)(1 + Y_j)).
// `j` is 1-based; digits must hold at least j+1 entries.
mpq_class chain_ratio(const ExpansionFamily& fam, std::span<const mpz_class> digits, int j);

// Grid value above an exact ratio (strict: result > r).
double grid_value_above(const GoodSequence& seq, const mpq_class& r);

// Draws a full chain of length n (digits B_1..B_{n+1}). Digits grow
// geometrically, hence the configurable cap (default 1000).
ChainPath sample_chain(const ExpansionFamily& fam, const DistributionSpec& dist,
                       const GoodSequence& seq, std::int64_t n, RngStream& rng,
                       std::int64_t cap = 1000);

// Independent draws of the discretized variables, law P(X = value_at(s)) =
// digit_mass(s), via X = value_at(index_above(1 / F_inv(u))).
double sample_one_x(const DistributionSpec& dist, const GoodSequence& seq, double u);
void sample_iid_x_into(std::span<double> out, const DistributionSpec& dist,
                       const GoodSequence& seq, RngStream& rng);
std::vector<double> sample_iid_x(const DistributionSpec& dist, const GoodSequence& seq,
                                 std::int64_t n, RngStream& rng);

} // namespace oppsim
