#include "oppsim/diagnostics.hpp"

#include "oppsim/digit_law.hpp"
#include "oppsim/kernels.hpp"
#include "oppsim/trimstats.hpp"
#include "oppsim/util.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace oppsim {

double bernstein_tail(double t, double m_bound, double var_z) {
    if (!(t > 0.0))
        throw std::invalid_argument("bernstein_tail: t must be positive");
    if (!(m_bound > 0.0) || var_z < 0.0)
        throw std::invalid_argument("bernstein_tail: need M > 0 and varZ >= 0");
    return 2.0 * std::exp(-t * t / (2.0 * var_z + (2.0 / 3.0) * m_bound * t));
}

PhiBoundsReport phi_bounds_check(const GoodSequence& seq, std::span<const double> u_grid,
                                 double eps) {
    if (u_grid.empty())
        throw std::invalid_argument("phi_bounds_check: empty grid");
    if (!(eps > 0.0))
        throw std::invalid_argument("phi_bounds_check: eps must be positive");
    const double log_l1 = std::log(seq.value_at(1));
    const double ell = seq.gap_bound();

    PhiBoundsReport rep;
    rep.points = static_cast<std::int64_t>(u_grid.size());
    rep.min_lower_margin = std::numeric_limits<double>::infinity();
    std::ptrdiff_t last_upper_violation = -1;
    for (std::size_t i = 0; i < u_grid.size(); ++i) {
        const double u = u_grid[i];
        const double phi = seq.relative_gap_sum(u);
        const double lower = std::log(u) - log_l1 - ell;
        const double margin = phi - lower;
        rep.min_lower_margin = std::min(rep.min_lower_margin, margin);
        if (margin < 0.0)
            ++rep.lower_violations;
        const double upper = (1.0 + eps) * (std::log(u) - log_l1);
        if (phi > upper)
            last_upper_violation = static_cast<std::ptrdiff_t>(i);
    }
    if (last_upper_violation + 1 < static_cast<std::ptrdiff_t>(u_grid.size())) {
        rep.upper_attained = true;
        rep.upper_threshold = u_grid[static_cast<std::size_t>(last_upper_violation + 1)];
    }
    return rep;
}

std::optional<double> phi_upper_crossing(const GoodSequence& seq, double eps, double u_max,
                                         int points_per_decade) {
    if (!seq.is_affine())
        return std::nullopt; // direct summation cannot reach the crossing scale
    if (!(eps > 0.0) || points_per_decade < 2)
        throw std::invalid_argument("phi_upper_crossing: bad parameters");
    const double lo = std::max(seq.value_at(2), 2.0);
    if (!(u_max > lo))
        throw std::invalid_argument("phi_upper_crossing: u_max too small");
    const double log_l1 = std::log(seq.value_at(1));
    const auto violates = [&](double u) {
        return seq.relative_gap_sum(u) > (1.0 + eps) * (std::log(u) - log_l1);
    };

    const auto decades = std::log10(u_max / lo);
    const std::size_t count =
        std::max<std::size_t>(16, static_cast<std::size_t>(decades * points_per_decade) + 2);
    const auto grid = logspace(lo, u_max, count);
    std::ptrdiff_t last_violation = -1;
    for (std::size_t i = 0; i < grid.size(); ++i)
        if (violates(grid[i]))
            last_violation = static_cast<std::ptrdiff_t>(i);
    if (last_violation + 1 >= static_cast<std::ptrdiff_t>(grid.size()))
        return std::nullopt; // still violated at the end of the scanned range
    if (last_violation < 0)
        return grid.front();
    // Tighten between the last violated point and the first clean one.
    double bad = grid[static_cast<std::size_t>(last_violation)];
    double good = grid[static_cast<std::size_t>(last_violation + 1)];
    for (int it = 0; it < 200 && good / bad > 1.0 + 1e-12; ++it) {
        const double mid = std::sqrt(bad * good);
        (violates(mid) ? bad : good) = mid;
    }
    return good;
}

namespace {

// Prefix tables over the grid index j, shared by the per-n sweeps:
//   tail_[j]   = P(X > lambda_j) = F(1/lambda_j)
//   unit_d_[j] = E[X 1{X <= lambda_j}] = sum_{s<=j} lambda_s * mass_s
struct MomentCache {
    const GoodSequence& seq;
    std::vector<double> tail_;
    std::vector<double> unit_d_;

    MomentCache(const DistributionSpec& dist, const GoodSequence& seq_, double t_max)
        : seq(seq_) {
        const std::int64_t j_max = seq.index_above(t_max);
        tail_.resize(static_cast<std::size_t>(j_max) + 1);
        unit_d_.resize(static_cast<std::size_t>(j_max) + 1);
        tail_[0] = 1.0;
        unit_d_[0] = 0.0;
        kernels::NeumaierAccumulator acc;
        for (std::int64_t j = 1; j <= j_max; ++j) {
            tail_[static_cast<std::size_t>(j)] = digit_tail(j, dist, seq);
            acc.add(seq.value_at(j) *
                    (tail_[static_cast<std::size_t>(j - 1)] - tail_[static_cast<std::size_t>(j)]));
            unit_d_[static_cast<std::size_t>(j)] = acc.value();
        }
    }

    double unit_a(double t) const { return tail_[static_cast<std::size_t>(seq.index_above(t) - 1)]; }
    double unit_d(double t) const { return unit_d_[static_cast<std::size_t>(seq.index_above(t) - 1)]; }
};

struct SeriesTracker {
    std::string label;
    kernels::NeumaierAccumulator partial;
    double last_summand = 0.0, prev_summand = 0.0;
    double prev_excess = -std::numeric_limits<double>::infinity();
    std::int64_t strong_cert_candidate = 1; // -log summand >= 2 log n & margin monotone from here
    std::int64_t n_seen = 0;
    // exponent checkpoints for the power-growth certificate
    std::vector<std::pair<std::int64_t, double>> checkpoints;

    explicit SeriesTracker(std::string lbl) : label(std::move(lbl)) {}

    void feed(std::int64_t n, double exponent /* g(n), summand = exp(-g) */) {
        const double summand = std::exp(-exponent);
        partial.add(summand);
        prev_summand = last_summand;
        last_summand = summand;
        const double excess = exponent - 2.0 * std::log(static_cast<double>(n));
        if (excess < 0.0 || excess < prev_excess - 1e-12)
            strong_cert_candidate = n + 1;
        prev_excess = excess;
        n_seen = n;
    }

    void checkpoint(std::int64_t n, double exponent) { checkpoints.emplace_back(n, exponent); }

    SeriesReport finish(std::int64_t n_max) const {
        SeriesReport rep;
        rep.label = label;
        rep.partial_sum = partial.value();
        rep.last_summand = last_summand;
        rep.last_ratio = (prev_summand > 0.0) ? last_summand / prev_summand : 0.0;
        if (last_summand >= 0.5) {
            rep.verdict = SeriesReport::Verdict::Divergent;
            rep.detail = "summands do not vanish on the horizon";
            return rep;
        }
        // Power-growth certificate: the exponent g(n) grows at least like
        // n^sigma with sigma bounded away from 0 across tested doublings,
        // so exp(-g) is eventually dominated by any polynomial tail.
        double sigma_min = std::numeric_limits<double>::infinity();
        bool usable = checkpoints.size() >= 2;
        for (std::size_t i = 1; i < checkpoints.size(); ++i) {
            const auto& [n0, g0] = checkpoints[i - 1];
            const auto& [n1, g1] = checkpoints[i];
            if (!(g0 > 0.0) || !(g1 > g0)) {
                usable = false;
                break;
            }
            sigma_min = std::min(sigma_min, std::log(g1 / g0) / std::log(static_cast<double>(n1) /
                                                                         static_cast<double>(n0)));
        }
        if (usable && sigma_min >= 0.05) {
            rep.verdict = SeriesReport::Verdict::ConvergentCertificate;
            rep.detail = "exponent grows like n^sigma, sigma >= " + std::to_string(sigma_min);
            if (strong_cert_candidate <= n_max) {
                rep.certificate_n = strong_cert_candidate;
                rep.detail += "; summand <= n^-2 for all tested n >= " +
                              std::to_string(strong_cert_candidate);
            }
        } else {
            rep.verdict = SeriesReport::Verdict::Inconclusive;
            rep.detail = "no growth certificate on the tested horizon";
        }
        return rep;
    }
};

} // namespace

SummabilityReport summability_check(const DistributionSpec& dist, const GoodSequence& seq,
                                    double gamma, double c, std::int64_t n_max) {
    if (!(gamma > 0.0) || !(gamma < 0.5))
        throw std::invalid_argument("summability_check: gamma must lie in (0, 1/2)");
    if (c < 0.0)
        throw std::invalid_argument("summability_check: c must be >= 0");
    if (n_max < 4)
        throw std::invalid_argument("summability_check: n_max too small");

    const double t_max = std::pow(static_cast<double>(n_max), gamma);
    const MomentCache cache(dist, seq, t_max);

    SeriesTracker exact_var("exp(-c d_n^2/(n t_n^2))");
    SeriesTracker exact_cnt("exp(-c A_n)");
    SeriesTracker sur_var("exp(-c n log^2 t_n / t_n^2)");
    SeriesTracker sur_cnt("exp(-c n / t_n)");

    std::vector<std::int64_t> marks;
    for (std::int64_t m = n_max; m >= 4 && marks.size() < 8; m /= 2)
        marks.push_back(m);
    std::sort(marks.begin(), marks.end());

    for (std::int64_t n = 1; n <= n_max; ++n) {
        const double nd = static_cast<double>(n);
        const double t = std::pow(nd, gamma);
        const double ua = cache.unit_a(t);
        const double ud = cache.unit_d(t);
        const double g_exact_var = c * nd * ud * ud / (t * t);
        const double g_exact_cnt = c * nd * ua;
        const double lt = std::log(t);
        const double g_sur_var = c * nd * lt * lt / (t * t);
        const double g_sur_cnt = c * nd / t;
        exact_var.feed(n, g_exact_var);
        exact_cnt.feed(n, g_exact_cnt);
        sur_var.feed(n, g_sur_var);
        sur_cnt.feed(n, g_sur_cnt);
        if (std::binary_search(marks.begin(), marks.end(), n)) {
            exact_var.checkpoint(n, g_exact_var);
            exact_cnt.checkpoint(n, g_exact_cnt);
            sur_var.checkpoint(n, g_sur_var);
            sur_cnt.checkpoint(n, g_sur_cnt);
        }
    }

    SummabilityReport rep;
    rep.gamma = gamma;
    rep.c = c;
    rep.n_max = n_max;
    rep.variance_series = exact_var.finish(n_max);
    rep.count_series = exact_cnt.finish(n_max);
    rep.variance_surrogate = sur_var.finish(n_max);
    rep.count_surrogate = sur_cnt.finish(n_max);
    return rep;
}

AssumptionReport assumption_report(const DistributionSpec& dist, const GoodSequence& seq,
                                   const TrimPlan& plan, std::span<const std::int64_t> n_grid,
                                   double eps0, double c) {
    if (n_grid.empty())
        throw std::invalid_argument("assumption_report: empty grid");
    for (std::size_t i = 1; i < n_grid.size(); ++i)
        if (n_grid[i] <= n_grid[i - 1])
            throw std::invalid_argument("assumption_report: grid must be increasing");

    const std::int64_t n_max = n_grid.back();
    const double t_max = plan.truncation_level(n_max);
    const MomentCache cache(dist, seq, t_max);

    AssumptionReport rep;
    rep.eps0 = eps0;
    rep.c = c;
    rep.rows.reserve(n_grid.size());

    kernels::NeumaierAccumulator ps1, ps2;
    std::size_t gi = 0;
    double prev_ratio2 = std::numeric_limits<double>::infinity();
    for (std::int64_t n = 1; n <= n_max && gi < n_grid.size(); ++n) {
        const double nd = static_cast<double>(n);
        const double t = std::pow(nd, plan.gamma);
        const double ua = cache.unit_a(t);
        const double ud = cache.unit_d(t);
        ps1.add(std::exp(-c * nd * ud * ud / (t * t)));
        ps2.add(std::exp(-c * nd * ua));
        if (n != n_grid[gi])
            continue;
        ++gi;

        const double a_n = nd * ua;
        const double d_n = nd * ud;
        const auto r_n = plan.trim_count(n);
        if (static_cast<double>(r_n) < std::ceil((1.0 + eps0) * a_n)) {
            rep.schedule_ok = false;
            throw config_error("assumption_report: trim schedule r_n < ceil((1+eps0) A_n) at n = " +
                               std::to_string(n));
        }
        // Cross-check the cached prefix against the dual-route evaluation.
        const double d_ref = expected_truncated_sum(n, t, dist, seq);
        if (std::fabs(d_n - d_ref) > 1e-9 * std::max(1.0, std::fabs(d_ref)))
            throw internal_consistency_error("assumption_report: cached d_n disagrees with oracle");

        AssumptionRow row;
        row.n = n;
        row.ratio1 = a_n * t / d_n;
        row.ratio2 = (static_cast<double>(r_n) - a_n) * t / d_n;
        row.summand1 = std::exp(-c * nd * ud * ud / (t * t));
        row.summand2 = std::exp(-c * nd * ua);
        row.partial_sum1 = ps1.value();
        row.partial_sum2 = ps2.value();
        rep.rows.push_back(row);
        rep.max_ratio1 = std::max(rep.max_ratio1, row.ratio1);
        if (row.ratio2 > prev_ratio2)
            rep.ratio2_decreasing = false;
        prev_ratio2 = row.ratio2;
    }
    return rep;
}

} // namespace oppsim
