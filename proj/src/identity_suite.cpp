#include "oppsim/identity_suite.hpp"

#include "oppsim/diagnostics.hpp"
#include "oppsim/distribution.hpp"
#include "oppsim/good_sequence.hpp"
#include "oppsim/rng.hpp"
#include "oppsim/trimstats.hpp"
#include "oppsim/util.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace oppsim {

namespace {

// Heavy-tailed integer values, capped so that every partial sum of 1000 of
// them stays below 2^53 and double arithmetic on them is exact.
std::vector<double> heavy_tailed_int_vector(RngStream& rng, std::int64_t n) {
    std::vector<double> v(static_cast<std::size_t>(n));
    for (double& slot : v) {
        const double raw = std::floor(1.0 / rng.next_unit()) + 1.0;
        slot = std::min(raw, 0x1.0p40);
    }
    return v;
}

IdentityCheckResult check_residual_identity() {
    IdentityCheckResult res{"residual identity (exact, 1000 integer vectors)", true, ""};
    RngStream rng(12345, 0);
    std::int64_t checked = 0;
    for (int vec = 0; vec < 1000 && res.pass; ++vec) {
        const std::int64_t n = 1 + static_cast<std::int64_t>(rng.next_unit() * 1000.0);
        const auto values = heavy_tailed_int_vector(rng, n);
        const double vmax = *std::max_element(values.begin(), values.end());
        const std::int64_t rs[] = {0, 1, n / 2, n - 1, n,
                                   static_cast<std::int64_t>(rng.next_unit() * static_cast<double>(n))};
        const double ts[] = {0.5, 1.0, vmax, vmax + 1.0,
                             std::floor(1.0 / rng.next_unit()) + 1.0};
        for (std::int64_t r : rs) {
            for (double t : ts) {
                const auto [lhs, rhs] = residual_identity(values, r, t);
                ++checked;
                if (lhs != rhs) {
                    res.pass = false;
                    res.detail = "lhs != rhs at n=" + std::to_string(n) +
                                 " r=" + std::to_string(r) + " t=" + std::to_string(t);
                    break;
                }
                const auto bound = trim_residual_bound_check(values, r, t);
                if (bound.applicable && !bound.holds) {
                    res.pass = false;
                    res.detail = "residual bound violated";
                    break;
                }
            }
            if (!res.pass)
                break;
        }
    }
    if (res.pass)
        res.detail = std::to_string(checked) + " (r,t) combinations";
    return res;
}

IdentityCheckResult check_selection_oracle() {
    IdentityCheckResult res{"trimmed sum vs full-sort oracle", true, ""};
    RngStream rng(54321, 0);
    for (int vec = 0; vec < 200 && res.pass; ++vec) {
        const std::int64_t n = 1 + static_cast<std::int64_t>(rng.next_unit() * 64.0);
        std::vector<double> values(static_cast<std::size_t>(n));
        for (double& v : values) // small alphabet forces ties
            v = std::floor(rng.next_unit() * 8.0);
        for (std::int64_t r = 0; r <= n; ++r) {
            std::vector<double> sorted = values;
            std::sort(sorted.begin(), sorted.end(), std::greater<>());
            const double oracle =
                std::accumulate(sorted.begin() + static_cast<std::ptrdiff_t>(r), sorted.end(), 0.0);
            if (trimmed_sum(values, r) != oracle) {
                res.pass = false;
                res.detail = "mismatch at n=" + std::to_string(n) + " r=" + std::to_string(r);
            }
        }
    }
    return res;
}

IdentityCheckResult check_truncated_moment_routes() {
    IdentityCheckResult res{"truncated moment: defining sum vs Abel form", true, ""};
    const DistributionSpec dists[] = {DistributionSpec::identity(), DistributionSpec::quadratic()};
    const GoodSequence seqs[] = {GoodSequence::integers(), GoodSequence::scaled_integers(2)};
    try {
        for (const auto& dist : dists)
            for (const auto& seq : seqs)
                for (std::int64_t n : {std::int64_t{1}, std::int64_t{10}, std::int64_t{100}})
                    for (double t : {3.0, 10.0, 100.0})
                        (void)expected_truncated_sum(n, t, dist, seq); // throws on mismatch
    } catch (const internal_consistency_error& e) {
        res.pass = false;
        res.detail = e.what();
        return res;
    }
    const double d13 = expected_truncated_sum(1, 3.0, DistributionSpec::identity(),
                                              GoodSequence::integers());
    if (std::fabs(d13 - 1.5) > 1e-12) {
        res.pass = false;
        res.detail = "d(1,3) != 3/2";
    }
    return res;
}

IdentityCheckResult check_counting_oracle() {
    IdentityCheckResult res{"exceed counts vs naive loop", true, ""};
    RngStream rng(777, 0);
    std::vector<double> values(10000);
    for (double& v : values)
        v = std::floor(1.0 / rng.next_unit()) + 1.0;
    for (double t : {1.0, 2.0, 3.5, 10.0, 1000.0}) {
        std::int64_t gt = 0, ge = 0;
        for (double v : values) {
            if (v > t)
                ++gt;
            if (v >= t)
                ++ge;
        }
        const auto [kgt, kge] = exceed_counts(values, t);
        if (kgt != gt || kge != ge) {
            res.pass = false;
            res.detail = "count mismatch at t=" + std::to_string(t);
        }
    }
    return res;
}

IdentityCheckResult check_gap_sum_envelope() {
    IdentityCheckResult res{"relative gap sum envelope", true, ""};
    const GoodSequence seqs[] = {GoodSequence::integers(), GoodSequence::scaled_integers(2)};
    for (const auto& seq : seqs) {
        const auto grid = logspace(seq.value_at(2), 1e7, 10000);
        const auto rep = phi_bounds_check(seq, grid, 0.01);
        if (rep.lower_violations != 0) {
            res.pass = false;
            res.detail = "lower bound violated on " + seq.name();
            break;
        }
        const auto crossing = phi_upper_crossing(seq, 0.01);
        if (!crossing) {
            res.pass = false;
            res.detail = "upper-bound onset not found for " + seq.name();
            break;
        }
        res.detail += seq.name() + ": upper bound from u ~ " + std::to_string(*crossing) + "  ";
    }
    return res;
}

} // namespace

std::vector<IdentityCheckResult> run_identity_suite() {
    return {
        check_residual_identity(),
        check_selection_oracle(),
        check_truncated_moment_routes(),
        check_counting_oracle(),
        check_gap_sum_envelope(),
    };
}

} // namespace oppsim
