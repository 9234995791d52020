#include "oppsim/experiments.hpp"

#include "oppsim/digit_law.hpp"
#include "oppsim/kernels.hpp"
#include "oppsim/rng.hpp"
#include "oppsim/sampler.hpp"
#include "oppsim/stats_tests.hpp"
#include "oppsim/trimstats.hpp"
#include "oppsim/util.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>

namespace oppsim {

namespace {

int effective_workers(int requested, std::int64_t tasks) {
    int w = requested > 0 ? requested
                          : static_cast<int>(std::thread::hardware_concurrency());
    if (w < 1)
        w = 1;
    return static_cast<int>(std::min<std::int64_t>(w, tasks));
}

// Runs fn(path) over a shared atomic work queue. Any worker exception is
// rethrown on the caller thread.
void parallel_paths(std::int64_t paths, int workers, const std::function<void(std::int64_t)>& fn) {
    const int w = effective_workers(workers, paths);
    if (w == 1) {
        for (std::int64_t p = 0; p < paths; ++p)
            fn(p);
        return;
    }
    std::atomic<std::int64_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto body = [&] {
        for (;;) {
            const std::int64_t p = next.fetch_add(1, std::memory_order_relaxed);
            if (p >= paths)
                return;
            try {
                fn(p);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error)
                    error = std::current_exception();
                next.store(paths, std::memory_order_relaxed);
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(w));
    for (int i = 0; i < w; ++i)
        pool.emplace_back(body);
    for (auto& th : pool)
        th.join();
    if (error)
        std::rethrow_exception(error);
}

struct Aggregate {
    double mean = 0.0, median = 0.0, stddev = 0.0, min = 0.0, max = 0.0;
};

Aggregate aggregate(std::vector<double> values) {
    Aggregate out;
    const std::size_t m = values.size();
    kernels::NeumaierAccumulator sum;
    out.min = values.front();
    out.max = values.front();
    for (double v : values) {
        sum.add(v);
        out.min = std::min(out.min, v);
        out.max = std::max(out.max, v);
    }
    out.mean = sum.value() / static_cast<double>(m);
    kernels::NeumaierAccumulator sq;
    for (double v : values)
        sq.add((v - out.mean) * (v - out.mean));
    out.stddev = m > 1 ? std::sqrt(sq.value() / static_cast<double>(m - 1)) : 0.0;
    std::sort(values.begin(), values.end());
    out.median = (m % 2 == 1) ? values[m / 2] : 0.5 * (values[m / 2 - 1] + values[m / 2]);
    return out;
}

// Raw per-(path, grid point) measurements; ratios are formed afterwards.
struct RawCell {
    double trimmed = 0.0;
    double truncated = 0.0;
    double total = 0.0;
    std::int64_t exceed = 0;
};

// Fills the per-path samples according to the configured mode.
void draw_path(const ExperimentConfig& cfg, std::int64_t path, std::vector<double>& buf) {
    const std::int64_t n_max = cfg.n_grid.back();
    buf.resize(static_cast<std::size_t>(n_max));
    RngStream rng(cfg.seed, static_cast<std::uint64_t>(path));
    if (cfg.mode == SampleMode::Chain) {
        const ChainPath chain =
            sample_chain(cfg.fam, cfg.dist, cfg.seq, n_max, rng, cfg.chain_cap);
        std::copy(chain.x.begin(), chain.x.end(), buf.begin());
    } else {
        sample_iid_x_into(buf, cfg.dist, cfg.seq, rng);
    }
}

std::vector<std::vector<RawCell>> measure_paths(const ExperimentConfig& cfg) {
    const std::size_t g = cfg.n_grid.size();
    std::vector<std::vector<RawCell>> cells(static_cast<std::size_t>(cfg.paths),
                                            std::vector<RawCell>(g));
    parallel_paths(cfg.paths, cfg.workers, [&](std::int64_t path) {
        thread_local std::vector<double> buf;
        thread_local std::vector<double> scratch;
        draw_path(cfg, path, buf);
        for (std::size_t gi = 0; gi < g; ++gi) {
            const std::int64_t n = cfg.n_grid[gi];
            const std::span<const double> prefix(buf.data(), static_cast<std::size_t>(n));
            const auto bd =
                breakdown(prefix, cfg.plan.trim_count(n), cfg.plan.truncation_level(n), scratch);
            auto& cell = cells[static_cast<std::size_t>(path)][gi];
            cell.trimmed = bd.trimmed_sum;
            cell.truncated = bd.truncated_sum;
            cell.total = bd.total;
            cell.exceed = bd.exceed_count;
        }
    });
    return cells;
}

ConvergenceReport build_report(const ExperimentConfig& cfg,
                               const std::vector<std::vector<RawCell>>& cells,
                               bool truncated_only) {
    ConvergenceReport rep;
    const std::size_t g = cfg.n_grid.size();
    const std::size_t m = static_cast<std::size_t>(cfg.paths);
    const double alpha_gamma = cfg.dist.alpha() ? *cfg.dist.alpha() * cfg.plan.gamma
                                                : std::numeric_limits<double>::quiet_NaN();
    for (std::size_t gi = 0; gi < g; ++gi) {
        const std::int64_t n = cfg.n_grid[gi];
        GridPointInfo info;
        info.n = n;
        info.t = cfg.plan.truncation_level(n);
        info.r = cfg.plan.trim_count(n);
        info.a_n = expected_exceed_count(n, info.t, cfg.dist, cfg.seq);
        info.d_n = expected_truncated_sum(n, info.t, cfg.dist, cfg.seq);
        rep.grid.push_back(info);

        const double nlogn = static_cast<double>(n) * std::log(static_cast<double>(n));
        std::vector<double> v(m);
        const auto emit = [&](const char* name, double target, auto&& extract) {
            for (std::size_t p = 0; p < m; ++p)
                v[p] = extract(cells[p][gi]);
            const auto agg = aggregate(v);
            rep.rows.push_back(StatRow{n, name, target, agg.mean, agg.median, agg.stddev, agg.min,
                                       agg.max, cfg.paths});
        };
        emit(kStatTruncatedOverD, 1.0, [&](const RawCell& c) { return c.truncated / info.d_n; });
        if (truncated_only)
            continue;
        emit(kStatTrimmedOverD, 1.0, [&](const RawCell& c) { return c.trimmed / info.d_n; });
        emit(kStatTrimmedOverNLogN, alpha_gamma,
             [&](const RawCell& c) { return c.trimmed / nlogn; });
        emit(kStatUntrimmedOverNLogN, 1.0, [&](const RawCell& c) { return c.total / nlogn; });
        emit(kStatExceedOverA, 1.0,
             [&](const RawCell& c) { return static_cast<double>(c.exceed) / info.a_n; });
    }
    return rep;
}

} // namespace

void ExperimentConfig::validate() const {
    if (n_grid.empty())
        throw config_error("experiment: empty n grid");
    for (std::size_t i = 0; i < n_grid.size(); ++i) {
        if (n_grid[i] < 2)
            throw config_error("experiment: grid points must be >= 2");
        if (i > 0 && n_grid[i] <= n_grid[i - 1])
            throw config_error("experiment: n grid must be strictly increasing");
    }
    if (n_grid.back() > 100'000'000)
        throw config_error("experiment: n grid max exceeds 1e8");
    if (mode != SampleMode::IidX && n_grid.back() > chain_cap)
        throw config_error("experiment: chain mode requires n <= " + std::to_string(chain_cap));
    if (paths < 1)
        throw config_error("experiment: paths must be >= 1");
    plan.validate_for_grid(n_grid);
}

const StatRow* ConvergenceReport::find(std::int64_t n, const std::string& statistic) const {
    for (const auto& row : rows)
        if (row.n == n && row.statistic == statistic)
            return &row;
    return nullptr;
}

ConvergenceReport run_trimmed_law(const ExperimentConfig& config) {
    config.validate();
    return build_report(config, measure_paths(config), /*truncated_only=*/false);
}

ConvergenceReport run_truncated_slln(const ExperimentConfig& config) {
    config.validate();
    return build_report(config, measure_paths(config), /*truncated_only=*/true);
}

std::vector<CountingRow> run_counting_concentration(const ExperimentConfig& config, double eps) {
    config.validate();
    if (!(eps > 0.0))
        throw std::invalid_argument("run_counting_concentration: eps must be positive");
    const auto cells = measure_paths(config);
    std::vector<CountingRow> rows;
    for (std::size_t gi = 0; gi < config.n_grid.size(); ++gi) {
        CountingRow row;
        row.n = config.n_grid[gi];
        row.eps = eps;
        const double t = config.plan.truncation_level(row.n);
        row.a_n = expected_exceed_count(row.n, t, config.dist, config.seq);
        std::int64_t big_dev = 0, inside = 0;
        for (std::int64_t p = 0; p < config.paths; ++p) {
            const double count =
                static_cast<double>(cells[static_cast<std::size_t>(p)][gi].exceed);
            if (std::fabs(count - row.a_n) >= eps * row.a_n)
                ++big_dev;
            if (count >= (1.0 - eps) * row.a_n && count <= (1.0 + eps) * row.a_n)
                ++inside;
        }
        row.empirical_freq = static_cast<double>(big_dev) / static_cast<double>(config.paths);
        row.sandwich_fraction = static_cast<double>(inside) / static_cast<double>(config.paths);
        row.bernstein_bound = std::exp(-3.0 * eps * eps * row.a_n / (6.0 + 4.0 * eps));
        rows.push_back(row);
    }
    return rows;
}

IndependenceReport run_marginal_independence(const ExperimentConfig& config) {
    config.validate();
    if (config.mode == SampleMode::IidX)
        throw config_error("run_marginal_independence: requires chain sampling (mode chain/both)");
    const std::int64_t n = config.n_grid.back();
    if (n < 2)
        throw config_error("run_marginal_independence: need chain length >= 2");

    IndependenceReport rep;
    rep.chain_n = n;
    rep.paths = config.paths;

    // Last two discretized values per chain, plus an equal-size iid sample.
    std::vector<double> x_last(static_cast<std::size_t>(config.paths));
    std::vector<double> x_prev(static_cast<std::size_t>(config.paths));
    std::vector<double> x_iid(static_cast<std::size_t>(config.paths));
    parallel_paths(config.paths, config.workers, [&](std::int64_t path) {
        RngStream rng(config.seed, static_cast<std::uint64_t>(path));
        const ChainPath chain =
            sample_chain(config.fam, config.dist, config.seq, n, rng, config.chain_cap);
        x_last[static_cast<std::size_t>(path)] = chain.x.back();
        x_prev[static_cast<std::size_t>(path)] = chain.x[static_cast<std::size_t>(n) - 2];
        // Independent draws on a disjoint stream block.
        RngStream rng_iid(config.seed, static_cast<std::uint64_t>(path) + 0x8000000000000000ULL);
        x_iid[static_cast<std::size_t>(path)] = sample_one_x(config.dist, config.seq,
                                                             rng_iid.next_unit());
    });

    // Atom index of a grid value (1-based); assumes v = value_at(s) exactly.
    const auto atom_of = [&](double v) {
        return config.seq.is_affine()
                   ? static_cast<std::int64_t>(v / static_cast<double>(config.seq.scale()))
                   : config.seq.index_above(v) - 1;
    };

    // (i) total variation against the exact digit law
    std::int64_t s_max = 1;
    for (double v : x_last)
        s_max = std::max(s_max, atom_of(v));
    std::vector<std::int64_t> counts(static_cast<std::size_t>(s_max), 0);
    for (double v : x_last)
        ++counts[static_cast<std::size_t>(atom_of(v)) - 1];
    std::vector<double> pmf(static_cast<std::size_t>(s_max));
    for (std::int64_t s = 1; s <= s_max; ++s)
        pmf[static_cast<std::size_t>(s) - 1] = digit_mass(s, config.dist, config.seq);
    rep.tv = total_variation_vs_pmf(counts, config.paths, pmf,
                                    digit_tail(s_max, config.dist, config.seq));

    // (ii) lag-1 independence on binned consecutive values. Atom bins
    // {1..cap-1, tail}; cap chosen so expected cell counts stay workable.
    {
        const std::int64_t cap = 6;
        const auto bin_of = [&](double v) {
            return std::min<std::int64_t>(atom_of(v), cap) - 1;
        };
        std::vector<std::vector<std::int64_t>> table(static_cast<std::size_t>(cap),
                                                     std::vector<std::int64_t>(
                                                         static_cast<std::size_t>(cap), 0));
        bool first_bin_empty_row = false;
        for (std::int64_t p = 0; p < config.paths; ++p)
            ++table[static_cast<std::size_t>(bin_of(x_prev[static_cast<std::size_t>(p)]))]
                   [static_cast<std::size_t>(bin_of(x_last[static_cast<std::size_t>(p)]))];
        // Drop all-zero rows/columns (atoms with zero mass, e.g. index 1).
        std::vector<std::vector<std::int64_t>> pruned;
        std::vector<bool> col_used(static_cast<std::size_t>(cap), false);
        for (std::size_t j = 0; j < static_cast<std::size_t>(cap); ++j)
            for (std::size_t i = 0; i < static_cast<std::size_t>(cap); ++i)
                if (table[i][j] > 0)
                    col_used[j] = true;
        for (std::size_t i = 0; i < static_cast<std::size_t>(cap); ++i) {
            std::int64_t row_total = 0;
            std::vector<std::int64_t> row;
            for (std::size_t j = 0; j < static_cast<std::size_t>(cap); ++j) {
                if (!col_used[j])
                    continue;
                row.push_back(table[i][j]);
                row_total += table[i][j];
            }
            if (row_total > 0)
                pruned.push_back(std::move(row));
            else
                first_bin_empty_row = true;
        }
        (void)first_bin_empty_row;
        const auto res = chi_square_independence(pruned);
        rep.lag1_valid = res.valid;
        rep.lag1_p = res.p_value;
        rep.lag1_note = res.note;
    }

    // (iii) two-sample chain-vs-iid on the first 50 atoms plus a tail bin.
    {
        const std::int64_t cap = 50;
        std::vector<std::int64_t> chain_counts(static_cast<std::size_t>(cap) + 1, 0);
        std::vector<std::int64_t> iid_counts(static_cast<std::size_t>(cap) + 1, 0);
        for (double v : x_last)
            ++chain_counts[static_cast<std::size_t>(std::min<std::int64_t>(atom_of(v), cap + 1)) - 1];
        for (double v : x_iid)
            ++iid_counts[static_cast<std::size_t>(std::min<std::int64_t>(atom_of(v), cap + 1)) - 1];
        // Merge leading zero-mass atoms into their successor.
        std::vector<std::int64_t> a, b;
        for (std::size_t i = 0; i < chain_counts.size(); ++i) {
            if (chain_counts[i] + iid_counts[i] == 0 && a.empty())
                continue;
            a.push_back(chain_counts[i]);
            b.push_back(iid_counts[i]);
        }
        const auto res = chi_square_two_sample(a, b);
        rep.two_sample_valid = res.valid;
        rep.two_sample_p = res.p_value;
        rep.two_sample_note = res.note;
    }
    return rep;
}

} // namespace oppsim
