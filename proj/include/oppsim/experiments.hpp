#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "oppsim/distribution.hpp"
#include "oppsim/expansion_family.hpp"
#include "oppsim/good_sequence.hpp"
#include "oppsim/plan.hpp"

namespace oppsim {

enum class SampleMode { IidX, Chain, Both };

struct ExperimentConfig {
    DistributionSpec dist = DistributionSpec::identity();
    GoodSequence seq = GoodSequence::integers();
    ExpansionFamily fam = ExpansionFamily::engel();
    TrimPlan plan;
    std::vector<std::int64_t> n_grid;
    std::int64_t paths = 50;
    std::uint64_t seed = 0;
    SampleMode mode = SampleMode::IidX;
    int workers = 0;               // 0 = hardware concurrency
    std::int64_t chain_cap = 1000; // mode Chain/Both only

    // Grid increasing, max <= 1e8 (<= chain_cap in chain mode), paths >= 1,
    // r(n) < n on the grid.
    void validate() const;
};

// Per-(n, statistic) aggregation across paths. `target` is the limit the
// statistic is expected to approach (NaN when the model does not pin one).
struct StatRow {
    std::int64_t n = 0;
    std::string statistic;
    double target = 0.0;
    double mean = 0.0, median = 0.0, stddev = 0.0, min = 0.0, max = 0.0;
    std::int64_t paths = 0;
};

// Exact per-grid-point model quantities the ratios are measured against.
struct GridPointInfo {
    std::int64_t n = 0;
    double t = 0.0;
    std::int64_t r = 0;
    double a_n = 0.0;
    double d_n = 0.0;
};

struct ConvergenceReport {
    std::vector<GridPointInfo> grid;
    std::vector<StatRow> rows;

    const StatRow* find(std::int64_t n, const std::string& statistic) const;
};

// Statistic names emitted by the runners.
inline constexpr const char* kStatTrimmedOverD = "trimmed_over_d";
inline constexpr const char* kStatTrimmedOverNLogN = "trimmed_over_nlogn";
inline constexpr const char* kStatTruncatedOverD = "truncated_over_d";
inline constexpr const char* kStatUntrimmedOverNLogN = "untrimmed_over_nlogn";
inline constexpr const char* kStatExceedOverA = "exceed_over_a";

// Draws `paths` sample paths up to max(n_grid) (one RNG stream per path,
// stream id = path index; grid statistics are prefix measurements, so a
// longer grid extends rather than changes earlier rows) and aggregates the
// trimming/truncation ratios. Work is spread over a worker pool; results
// are reduced in path order and do not depend on the worker count.
ConvergenceReport run_trimmed_law(const ExperimentConfig& config);

// Subset of the same engine: truncated-sum ratios Z_n / d_n only.
ConvergenceReport run_truncated_slln(const ExperimentConfig& config);

// Exceedance-count concentration: per grid point, the empirical frequency of
// |#{X_k > t_n} - A_n| >= eps * A_n across paths, against the Bernstein-type
// bound exp(-3 eps^2 A_n / (6 + 4 eps)); plus the fraction of paths whose
// count lands in the two-sided sandwich (1 +- eps) A_n.
struct CountingRow {
    std::int64_t n = 0;
    double eps = 0.0;
    double a_n = 0.0;
    double empirical_freq = 0.0;
    double bernstein_bound = 0.0;
    double sandwich_fraction = 0.0;
};
std::vector<CountingRow> run_counting_concentration(const ExperimentConfig& config, double eps);

// Distributional checks of the chain discretization at n = max(n_grid):
// (i) total variation against the exact digit law, (ii) lag-1 chi-square
// independence on binned consecutive (X_{n-1}, X_n), (iii) two-sample
// chi-square of chain X against iid X. Tests with undersized expected cell
// counts are skipped with a notice.
struct IndependenceReport {
    std::int64_t chain_n = 0;
    std::int64_t paths = 0;
    double tv = 0.0;
    bool lag1_valid = false;
    double lag1_p = 1.0;
    std::string lag1_note;
    bool two_sample_valid = false;
    double two_sample_p = 1.0;
    std::string two_sample_note;
};
IndependenceReport run_marginal_independence(const ExperimentConfig& config);

} // namespace oppsim
