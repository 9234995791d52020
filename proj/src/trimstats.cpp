#include "oppsim/trimstats.hpp"

#include "oppsim/digit_law.hpp"
#include "oppsim/kernels.hpp"
#include "oppsim/util.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace oppsim {

namespace {

// Partitions scratch so that the r largest values occupy [0, r).
void select_top(std::vector<double>& scratch, std::int64_t r) {
    const auto n = static_cast<std::int64_t>(scratch.size());
    if (r <= 0 || r >= n)
        return;
    std::nth_element(scratch.begin(), scratch.begin() + r, scratch.end(), std::greater<>());
}

} // namespace

double trimmed_sum(std::span<const double> values, std::int64_t r) {
    const auto n = static_cast<std::int64_t>(values.size());
    if (r < 0 || r > n)
        throw std::invalid_argument("trimmed_sum: r outside [0, n]");
    if (r == 0)
        return kernels::sum(values);
    if (r == n)
        return 0.0;
    std::vector<double> scratch(values.begin(), values.end());
    select_top(scratch, r);
    return kernels::sum(std::span<const double>(scratch).subspan(static_cast<std::size_t>(r)));
}

double truncated_sum(std::span<const double> values, double t) {
    return kernels::threshold_stats(values, t).sum_le;
}

std::pair<std::int64_t, std::int64_t> exceed_counts(std::span<const double> values, double t) {
    const auto st = kernels::threshold_stats(values, t);
    return {st.count_gt, st.count_ge};
}

TrimmedSumBreakdown breakdown(std::span<const double> values, std::int64_t r, double t,
                              std::vector<double>& scratch) {
    const auto n = static_cast<std::int64_t>(values.size());
    if (r < 0 || r > n)
        throw std::invalid_argument("breakdown: r outside [0, n]");
    TrimmedSumBreakdown out;
    const auto st = kernels::threshold_stats(values, t);
    out.truncated_sum = st.sum_le;
    out.over_t_sum = st.sum_gt;
    out.exceed_count = st.count_gt;
    out.geq_count = st.count_ge;
    out.total = st.sum_le + st.sum_gt;
    scratch.assign(values.begin(), values.end());
    select_top(scratch, r);
    const std::span<const double> sorted(scratch);
    out.top_r_sum = (r == n) ? out.total : kernels::sum(sorted.subspan(0, static_cast<std::size_t>(r)));
    out.trimmed_sum = (r == n) ? 0.0 : kernels::sum(sorted.subspan(static_cast<std::size_t>(r)));
    return out;
}

std::pair<double, double> residual_identity(std::span<const double> values, std::int64_t r,
                                            double t) {
    std::vector<double> scratch;
    const auto bd = breakdown(values, r, t, scratch);
    return {bd.truncated_sum - bd.trimmed_sum, bd.top_r_sum - bd.over_t_sum};
}

TrimResidualBound trim_residual_bound_check(std::span<const double> values, std::int64_t r,
                                            double t) {
    std::vector<double> scratch;
    const auto bd = breakdown(values, r, t, scratch);
    TrimResidualBound out;
    out.applicable = r >= bd.exceed_count;
    if (!out.applicable)
        return out;
    out.residual = bd.truncated_sum - bd.trimmed_sum;
    out.bound = static_cast<double>(r - bd.exceed_count) * t;
    // One-ulp slack: residual and bound come from different float routes.
    out.holds = out.residual <= out.bound + 1e-9 * std::max(1.0, std::fabs(out.bound));
    return out;
}

double expected_exceed_count(std::int64_t n, double t, const DistributionSpec& dist,
                             const GoodSequence& seq) {
    if (n < 0)
        throw std::invalid_argument("expected_exceed_count: n must be >= 0");
    if (!(t >= 1.0))
        throw std::invalid_argument("expected_exceed_count: t must be >= 1");
    const std::int64_t jt = seq.index_above(t);
    return static_cast<double>(n) * digit_tail(jt - 1, dist, seq);
}

double expected_geq_count(std::int64_t n, double t, const DistributionSpec& dist,
                          const GoodSequence& seq) {
    if (n < 0)
        throw std::invalid_argument("expected_geq_count: n must be >= 0");
    if (!(t >= 1.0))
        throw std::invalid_argument("expected_geq_count: t must be >= 1");
    std::int64_t jt = seq.index_above(t);
    // smallest s with lambda_s >= t: j_t unless t itself lies on the grid
    const std::int64_t s_star = (seq.value_at(jt - 1) == t) ? jt - 1 : jt;
    return static_cast<double>(n) * digit_tail(s_star - 1, dist, seq);
}

double expected_truncated_sum(std::int64_t n, double t, const DistributionSpec& dist,
                              const GoodSequence& seq) {
    if (n < 0)
        throw std::invalid_argument("expected_truncated_sum: n must be >= 0");
    if (!(t >= 1.0))
        throw std::invalid_argument("expected_truncated_sum: t must be >= 1");
    const std::int64_t jt = seq.index_above(t);
    if (jt <= 1)
        return 0.0; // no grid atom at or below t

    // Defining sum: sum_{s=1}^{jt-1} lambda_s (F(1/lambda_{s-1}) - F(1/lambda_s)).
    kernels::NeumaierAccumulator brute;
    for (std::int64_t s = 1; s <= jt - 1; ++s)
        brute.add(seq.value_at(s) * digit_mass(s, dist, seq));

    // Abel rearrangement:
    //   lambda_1 + sum_{j=2}^{jt-1} F(1/lambda_{j-1})(lambda_j - lambda_{j-1})
    //            - lambda_{jt-1} F(1/lambda_{jt-1}).
    kernels::NeumaierAccumulator abel;
    abel.add(seq.value_at(1));
    for (std::int64_t j = 2; j <= jt - 1; ++j)
        abel.add(digit_tail(j - 1, dist, seq) * (seq.value_at(j) - seq.value_at(j - 1)));
    abel.add(-seq.value_at(jt - 1) * digit_tail(jt - 1, dist, seq));

    const double b = brute.value(), a = abel.value();
    if (std::fabs(b - a) > 1e-12 * std::max({std::fabs(b), std::fabs(a), 1.0}))
        throw internal_consistency_error(
            "expected_truncated_sum: defining sum and Abel form disagree (" +
            std::to_string(b) + " vs " + std::to_string(a) + ")");
    return static_cast<double>(n) * b;
}

double choose_beta(const DistributionSpec& dist, const GoodSequence& seq, double gamma,
                   std::int64_t n_max, double eps0, double margin, std::int64_t n_min) {
    if (!(gamma > 0.0) || !(gamma < 0.5))
        throw std::invalid_argument("choose_beta: gamma must lie in (0, 1/2)");
    if (!(eps0 >= 0.0) || !(margin >= 1.0))
        throw std::invalid_argument("choose_beta: need eps0 >= 0 and margin >= 1");
    if (n_min < 1 || n_max < n_min)
        throw std::invalid_argument("choose_beta: bad horizon");

    const auto ratio_at = [&](std::int64_t n) {
        const double t = std::pow(static_cast<double>(n), gamma);
        return expected_exceed_count(n, t, dist, seq) /
               std::pow(static_cast<double>(n), 1.0 - gamma);
    };

    // A_n / n^(1-gamma) = n^gamma * F(1/lambda_{j-1}) grows within each block
    // of constant j = index_above(n^gamma), so the block-wise maximum sits at
    // the right endpoint n ~ lambda_j^(1/gamma). Evaluating a few candidates
    // around each endpoint absorbs pow() rounding at the boundaries.
    double best = std::max(ratio_at(n_min), ratio_at(n_max));
    const std::int64_t j_lo = seq.index_above(std::pow(static_cast<double>(n_min), gamma));
    const std::int64_t j_hi = seq.index_above(std::pow(static_cast<double>(n_max), gamma));
    for (std::int64_t j = j_lo; j <= j_hi; ++j) {
        const double edge = std::pow(seq.value_at(j), 1.0 / gamma);
        for (std::int64_t d = -2; d <= 2; ++d) {
            const double cand = std::floor(edge) + static_cast<double>(d);
            if (cand < static_cast<double>(n_min) || cand > static_cast<double>(n_max))
                continue;
            best = std::max(best, ratio_at(static_cast<std::int64_t>(cand)));
        }
    }
    return margin * (1.0 + eps0) * best;
}

} // namespace oppsim
