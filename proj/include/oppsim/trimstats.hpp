#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "oppsim/distribution.hpp"
#include "oppsim/good_sequence.hpp"

namespace oppsim {

// Per-sample decomposition of the trimming/truncation quantities at trim
// count r and truncation level t.
struct TrimmedSumBreakdown {
    double total = 0.0;          // sum of all values
    double trimmed_sum = 0.0;    // sum after removing the r largest
    double truncated_sum = 0.0;  // sum of values <= t
    double top_r_sum = 0.0;      // sum of the r largest
    double over_t_sum = 0.0;     // sum of values > t
    std::int64_t exceed_count = 0; // #{v > t}
    std::int64_t geq_count = 0;    // #{v >= t}
};

// Sum after removing exactly r maximal elements (ties resolved by original
// index; the sum is tie-invariant). Selection runs in expected linear time.
// r = n gives 0; r > n is an error.
double trimmed_sum(std::span<const double> values, std::int64_t r);

// Sum of values <= t (inclusive boundary).
double truncated_sum(std::span<const double> values, double t);

// (#{v > t}, #{v >= t}).
std::pair<std::int64_t, std::int64_t> exceed_counts(std::span<const double> values, double t);

// All of the above in one pass; `scratch` is reused across calls.
TrimmedSumBreakdown breakdown(std::span<const double> values, std::int64_t r, double t,
                              std::vector<double>& scratch);

// The exact trimming/truncation identity
//   Z - S^r = (sum of r largest) - (sum of values > t):
// returns (lhs, rhs). Equal bit-for-bit on integer-valued input whose sums
// stay below 2^53; within compensated-summation error otherwise.
std::pair<double, double> residual_identity(std::span<const double> values, std::int64_t r,
                                            double t);

// Deterministic residual bound: when r >= #{v > t}, the trimming residual
// satisfies Z - S^r <= (r - #{v > t}) * t.
struct TrimResidualBound {
    bool applicable = false; // r >= #{v > t}
    bool holds = false;
    double residual = 0.0;
    double bound = 0.0;
};
TrimResidualBound trim_residual_bound_check(std::span<const double> values, std::int64_t r,
                                            double t);

// Exact model quantities for n iid grid variables truncated at t >= 1:
//   expected_exceed_count     A_n = n * F(1/lambda_{j_t - 1})
//   expected_geq_count        B_n = n * F(1/lambda_{s*-1}), s* smallest with lambda_{s*} >= t
//   expected_truncated_sum    d_n = n * sum_{s < j_t} lambda_s * digit_mass(s)
// expected_truncated_sum evaluates both the defining sum and its Abel
// rearrangement and throws internal_consistency_error if they disagree
// beyond 1e-12 relative.
double expected_exceed_count(std::int64_t n, double t, const DistributionSpec& dist,
                             const GoodSequence& seq);
double expected_geq_count(std::int64_t n, double t, const DistributionSpec& dist,
                          const GoodSequence& seq);
double expected_truncated_sum(std::int64_t n, double t, const DistributionSpec& dist,
                              const GoodSequence& seq);

// Smallest trim coefficient (scaled by margin and 1+eps0) such that
// r_n = ceil(beta * n^(1-gamma)) >= ceil((1+eps0) * A_n) holds for every
// integer n in [n_min, n_max] with t_n = n^gamma:
//   beta = margin * (1+eps0) * max_n A_n / n^(1-gamma).
double choose_beta(const DistributionSpec& dist, const GoodSequence& seq, double gamma,
                   std::int64_t n_max, double eps0, double margin, std::int64_t n_min = 1);

} // namespace oppsim
