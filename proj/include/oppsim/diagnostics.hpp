#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "oppsim/distribution.hpp"
#include "oppsim/good_sequence.hpp"
#include "oppsim/plan.hpp"

namespace oppsim {

// Bernstein tail bound for a maximal partial-sum deviation of size t given a
// uniform bound M on the centered summands and the variance of the sum:
//   2 * exp(-t^2 / (2*varZ + (2/3)*M*t)).
double bernstein_tail(double t, double m_bound, double var_z);

// Numerical check of the two-sided envelope for the relative gap sum:
//   lower: phi(u) >= log u - log lambda_1 - ell          (every u)
//   upper: phi(u) <= (1+eps)(log u - log lambda_1)       (u large enough)
struct PhiBoundsReport {
    std::int64_t points = 0;
    std::int64_t lower_violations = 0;
    double min_lower_margin = 0.0;          // min over grid of phi(u) - lower bound
    std::optional<double> upper_threshold;  // smallest tested u from which the
                                            // upper bound holds at all tested points
    bool upper_attained = false;
};
PhiBoundsReport phi_bounds_check(const GoodSequence& seq, std::span<const double> u_grid,
                                 double eps);

// Locates the onset of the upper bound for affine sequences, scanning
// log-spaced points up to u_max (the closed harmonic form stays exact far
// beyond 2^53, where the crossing sits for small eps). Returns the first
// tested u from which the bound holds at every tested point, or nullopt.
std::optional<double> phi_upper_crossing(const GoodSequence& seq, double eps,
                                         double u_max = 1e40, int points_per_decade = 16);

// Finite-horizon summability evidence for the series driving the strong
// laws, with t_n = n^gamma. Never asserts convergence of the infinite
// series: it reports partial sums plus an explicit certificate.
struct SeriesReport {
    std::string label;
    double partial_sum = 0.0;        // sum over n = 1..n_max
    double last_summand = 0.0;
    double last_ratio = 1.0;         // summand(n_max) / summand(n_max - 1)
    enum class Verdict { ConvergentCertificate, Divergent, Inconclusive };
    Verdict verdict = Verdict::Inconclusive;
    std::int64_t certificate_n = 0;  // -log summand(n) >= 2 log n for all tested n >= this
    std::string detail;
};
struct SummabilityReport {
    double gamma = 0.0, c = 0.0;
    std::int64_t n_max = 0;
    SeriesReport variance_series;        // exp(-c d_n^2 / (n t_n^2)), exact d_n
    SeriesReport count_series;           // exp(-c A_n), exact A_n
    SeriesReport variance_surrogate;     // exp(-c n log^2 t_n / t_n^2)
    SeriesReport count_surrogate;        // exp(-c n / t_n)
};
SummabilityReport summability_check(const DistributionSpec& dist, const GoodSequence& seq,
                                    double gamma, double c, std::int64_t n_max);

// Numerical status of the strong-law assumptions along a grid:
//   ratio1 = A_n t_n / d_n   (bounded; ~ const / log n for the built-ins)
//   ratio2 = (r_n - A_n) t_n / d_n  (must tend to 0)
//   summand1/2 and their partial sums as in the summability series
// plus the trim-schedule requirement r_n >= ceil((1+eps0) A_n), whose
// violation on the grid is a configuration error.
struct AssumptionRow {
    std::int64_t n = 0;
    double ratio1 = 0.0, ratio2 = 0.0;
    double summand1 = 0.0, summand2 = 0.0;
    double partial_sum1 = 0.0, partial_sum2 = 0.0; // cumulative over all n' <= n
};
struct AssumptionReport {
    double eps0 = 0.1, c = 0.01;
    std::vector<AssumptionRow> rows;
    double max_ratio1 = 0.0;
    bool ratio2_decreasing = true;
    bool schedule_ok = true;
};
AssumptionReport assumption_report(const DistributionSpec& dist, const GoodSequence& seq,
                                   const TrimPlan& plan, std::span<const std::int64_t> n_grid,
                                   double eps0 = 0.1, double c = 0.01);

} // namespace oppsim
