// Command-line front end: wires JSON run configurations to the sampling,
// trimming and diagnostic machinery and emits reproducible CSV/JSON reports.

#include "CLI11.hpp"

#include "oppsim/config.hpp"
#include "oppsim/diagnostics.hpp"
#include "oppsim/experiments.hpp"
#include "oppsim/identity_suite.hpp"
#include "oppsim/report_io.hpp"
#include "oppsim/rng.hpp"
#include "oppsim/sampler.hpp"
#include "oppsim/trimstats.hpp"
#include "oppsim/util.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfigError = 1;
constexpr int kExitCheckFailure = 2;

struct CommonOpts {
    std::string config_path;
    std::vector<std::string> sets;
    std::uint64_t seed = 0;
    bool seed_given = false;
    std::int64_t paths = 0;
    bool paths_given = false;
    std::int64_t nmax = 0;
    bool nmax_given = false;
    int workers = 0;
    std::string out = "out";
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_path, "JSON run configuration (built-in default if omitted)");
    cmd->add_option("--set", opts.sets, "dotted-key override, e.g. plan.gamma=0.3")->take_all();
    cmd->add_option("--seed", opts.seed, "override the RNG seed")->each([&](const std::string&) {
        opts.seed_given = true;
    });
    cmd->add_option("--paths", opts.paths, "override the number of sample paths")
        ->each([&](const std::string&) { opts.paths_given = true; });
    cmd->add_option("--nmax", opts.nmax, "drop grid points above this n")
        ->each([&](const std::string&) { opts.nmax_given = true; });
    cmd->add_option("--workers", opts.workers, "worker threads (default: hardware concurrency)");
    cmd->add_option("--out", opts.out, "output directory");
}

oppsim::RunConfig resolve_config(const CommonOpts& opts) {
    std::vector<std::string> overrides = opts.sets;
    if (opts.seed_given)
        overrides.push_back("seed=" + std::to_string(opts.seed));
    if (opts.paths_given)
        overrides.push_back("paths=" + std::to_string(opts.paths));
    oppsim::RunConfig cfg = opts.config_path.empty()
                                ? oppsim::load_default_config(overrides)
                                : oppsim::load_config(opts.config_path, overrides);
    if (opts.nmax_given) {
        auto& grid = cfg.experiment.n_grid;
        std::erase_if(grid, [&](std::int64_t n) { return n > opts.nmax; });
        if (grid.empty())
            throw oppsim::config_error("nmax removes every grid point");
        if (cfg.beta_was_auto) {
            const double gamma = cfg.experiment.plan.gamma;
            cfg.experiment.plan = oppsim::TrimPlan(
                gamma, oppsim::choose_beta(cfg.experiment.dist, cfg.experiment.seq, gamma,
                                           grid.back(), 0.1, 1.0, grid.front()));
        }
        cfg.experiment.validate();
    }
    cfg.experiment.workers = opts.workers;
    return cfg;
}

void write_json_file(const fs::path& path, const json& doc) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open for writing: " + path.string());
    out << doc.dump(2) << '\n';
}

void write_text_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open for writing: " + path.string());
    out << text;
}

struct ToleranceOutcome {
    bool ok = true;
    std::string lines;
};

ToleranceOutcome evaluate_tolerances(const oppsim::RunConfig& cfg,
                                     const oppsim::ConvergenceReport& report) {
    ToleranceOutcome out;
    const std::int64_t n = cfg.experiment.n_grid.back();
    const auto judge = [&](const char* stat, double target, double tol, bool relative) {
        const auto* row = report.find(n, stat);
        if (!row || std::isnan(target))
            return;
        const double dev = std::fabs(row->median - target);
        const double limit = relative ? tol * std::fabs(target) : tol;
        const bool ok = dev <= limit;
        out.ok = out.ok && ok;
        out.lines += std::string(ok ? "pass" : "FAIL") + "  " + stat + " @ n=" +
                     std::to_string(n) + ": median=" + oppsim::format_double(row->median) +
                     " target=" + oppsim::format_double(target) +
                     " |dev|=" + oppsim::format_double(dev) +
                     " tol=" + oppsim::format_double(limit) + "\n";
    };
    judge(oppsim::kStatTrimmedOverD, 1.0, cfg.tol_trimmed_over_d, false);
    judge(oppsim::kStatTruncatedOverD, 1.0, cfg.tol_truncated_over_d, false);
    if (cfg.experiment.dist.alpha())
        judge(oppsim::kStatTrimmedOverNLogN, *cfg.experiment.dist.alpha() * cfg.experiment.plan.gamma,
              cfg.tol_trimmed_over_nlogn_rel, true);
    return out;
}

bool verify_pipeline(const oppsim::RunConfig& cfg, const fs::path& out_dir) {
    fs::create_directories(out_dir);
    const auto report = oppsim::run_trimmed_law(cfg.experiment);
    const auto truncated = oppsim::run_truncated_slln(cfg.experiment);
    (void)truncated; // same sample law; its rows are a subset of `report`
    const auto assumptions =
        oppsim::assumption_report(cfg.experiment.dist, cfg.experiment.seq, cfg.experiment.plan,
                                  cfg.experiment.n_grid);

    oppsim::write_csv(out_dir / "report.csv", oppsim::kReportCsvHeader,
                      oppsim::report_rows(report, cfg.experiment.seed));
    write_json_file(out_dir / "report.json", json{{"config", cfg.echo()},
                                                  {"report", oppsim::report_to_json(report)},
                                                  {"assumptions",
                                                   oppsim::assumptions_to_json(assumptions)}});
    const auto tol = evaluate_tolerances(cfg, report);
    std::string summary = oppsim::render_summary(report, &assumptions, cfg.summary_line());
    summary += "\ntolerance checks:\n" + tol.lines;
    write_text_file(out_dir / "summary.txt", summary);
    std::cout << summary;
    return tol.ok;
}

int cmd_verify(const CommonOpts& opts) {
    const auto cfg = resolve_config(opts);
    return verify_pipeline(cfg, opts.out) ? kExitOk : kExitCheckFailure;
}

int cmd_simulate(const CommonOpts& opts) {
    const auto cfg = resolve_config(opts);
    const auto& exp = cfg.experiment;
    if (exp.mode == oppsim::SampleMode::Both)
        throw oppsim::config_error("simulate: choose mode iid_X or chain");
    const std::int64_t n = exp.n_grid.back();
    if (exp.paths * (n + 1) > 10'000'000)
        throw oppsim::config_error(
            "simulate: dump would exceed 1e7 records; lower --paths or --nmax");
    fs::create_directories(opts.out);
    const fs::path path = fs::path(opts.out) / "samples.csv";
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open for writing: " + path.string());
    out << "path_id,step,value,ratio,seed\n";
    for (std::int64_t p = 0; p < exp.paths; ++p) {
        oppsim::RngStream rng(exp.seed, static_cast<std::uint64_t>(p));
        if (exp.mode == oppsim::SampleMode::Chain) {
            const auto chain = oppsim::sample_chain(exp.fam, exp.dist, exp.seq, n, rng,
                                                    exp.chain_cap);
            for (std::size_t j = 0; j < chain.digits.size(); ++j) {
                out << p << ',' << (j + 1) << ',' << chain.digits[j].get_str() << ',';
                if (j < chain.ratios.size())
                    out << oppsim::format_double(chain.ratios[j]);
                out << ',' << exp.seed << '\n';
            }
        } else {
            const auto xs = oppsim::sample_iid_x(exp.dist, exp.seq, n, rng);
            for (std::size_t j = 0; j < xs.size(); ++j)
                out << p << ',' << (j + 1) << ',' << oppsim::format_double(xs[j]) << ",,"
                    << exp.seed << '\n';
        }
    }
    std::cout << "wrote " << path.string() << "\n";
    return kExitOk;
}

int cmd_diagnostics(const CommonOpts& opts) {
    const auto cfg = resolve_config(opts);
    const auto& exp = cfg.experiment;
    const auto assumptions =
        oppsim::assumption_report(exp.dist, exp.seq, exp.plan, exp.n_grid);
    const auto summ = oppsim::summability_check(exp.dist, exp.seq, exp.plan.gamma, 0.01,
                                                exp.n_grid.back());
    fs::create_directories(opts.out);
    write_json_file(fs::path(opts.out) / "diagnostics.json",
                    json{{"config", cfg.echo()},
                         {"assumptions", oppsim::assumptions_to_json(assumptions)},
                         {"summability", oppsim::summability_to_json(summ)}});
    std::cout << "max ratio1 = " << oppsim::format_double(assumptions.max_ratio1)
              << ", ratio2 decreasing = " << (assumptions.ratio2_decreasing ? "yes" : "no")
              << ", trim schedule ok = " << (assumptions.schedule_ok ? "yes" : "no") << "\n"
              << "wrote " << (fs::path(opts.out) / "diagnostics.json").string() << "\n";
    return kExitOk;
}

int cmd_identity_check() {
    const auto results = oppsim::run_identity_suite();
    bool all = true;
    for (const auto& r : results) {
        std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << r.name
                  << (r.detail.empty() ? "" : "  -- " + r.detail) << "\n";
        all = all && r.pass;
    }
    return all ? kExitOk : kExitCheckFailure;
}

int cmd_report(const std::string& in_path) {
    std::cout << oppsim::render_csv_file(in_path);
    return kExitOk;
}

int cmd_sweep(const CommonOpts& opts, const std::vector<std::string>& axes) {
    if (axes.empty())
        throw oppsim::config_error("sweep: need at least one --sweep key=v1,v2,... axis");
    struct Axis {
        std::string key;
        std::vector<std::string> values;
    };
    std::vector<Axis> parsed;
    for (const auto& spec : axes) {
        const auto eq = spec.find('=');
        if (eq == std::string::npos || eq == 0)
            throw oppsim::config_error("sweep axis must look like key=v1,v2: " + spec);
        Axis axis;
        axis.key = spec.substr(0, eq);
        std::string rest = spec.substr(eq + 1);
        std::size_t start = 0;
        while (start <= rest.size()) {
            const auto comma = rest.find(',', start);
            axis.values.push_back(rest.substr(
                start, comma == std::string::npos ? std::string::npos : comma - start));
            if (comma == std::string::npos)
                break;
            start = comma + 1;
        }
        if (axis.values.empty())
            throw oppsim::config_error("sweep axis has no values: " + spec);
        parsed.push_back(std::move(axis));
    }

    std::vector<std::size_t> idx(parsed.size(), 0);
    bool all_ok = true;
    for (;;) {
        CommonOpts combo_opts = opts;
        std::string tag;
        for (std::size_t a = 0; a < parsed.size(); ++a) {
            const std::string assign = parsed[a].key + "=" + parsed[a].values[idx[a]];
            combo_opts.sets.push_back(assign);
            std::string clean = assign;
            for (char& c : clean)
                if (c == '/' || c == '.')
                    c = '_';
            tag += (tag.empty() ? "" : "__") + clean;
        }
        const auto cfg = resolve_config(combo_opts);
        std::cout << "=== sweep " << tag << " ===\n";
        all_ok = verify_pipeline(cfg, fs::path(opts.out) / tag) && all_ok;

        std::size_t a = 0;
        for (; a < parsed.size(); ++a) {
            if (++idx[a] < parsed[a].values.size())
                break;
            idx[a] = 0;
        }
        if (a == parsed.size())
            break;
    }
    return all_ok ? kExitOk : kExitCheckFailure;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"simulation and verification laboratory for intermediately trimmed sums of "
                 "generalized Oppenheim expansions"};
    app.require_subcommand(1);

    CommonOpts opts;
    std::vector<std::string> sweep_axes;
    std::string report_in;

    auto* simulate = app.add_subcommand("simulate", "dump raw samples to CSV");
    add_common(simulate, opts);
    auto* verify = app.add_subcommand("verify", "run the trimmed/truncated laws and write reports");
    add_common(verify, opts);
    auto* sweep = app.add_subcommand("sweep", "verify over a cartesian product of overrides");
    add_common(sweep, opts);
    sweep->add_option("--sweep", sweep_axes, "axis key=v1,v2,... (repeatable)")->take_all();
    auto* identity = app.add_subcommand("identity-check", "deterministic exact-identity suite");
    auto* diagnostics = app.add_subcommand("diagnostics", "assumption and summability report");
    add_common(diagnostics, opts);
    auto* report = app.add_subcommand("report", "render a report.csv as a table");
    report->add_option("--in", report_in, "report.csv path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (simulate->parsed())
            return cmd_simulate(opts);
        if (verify->parsed())
            return cmd_verify(opts);
        if (sweep->parsed())
            return cmd_sweep(opts, sweep_axes);
        if (identity->parsed())
            return cmd_identity_check();
        if (diagnostics->parsed())
            return cmd_diagnostics(opts);
        if (report->parsed())
            return cmd_report(report_in);
    } catch (const oppsim::config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfigError;
    }
    return kExitOk;
}
