#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "oppsim/experiments.hpp"

namespace oppsim {

// Fully resolved run configuration. Loaded from a JSON file with keys
//   distribution {kind}, sequence {kind, params}, family {kind},
//   plan {gamma, beta}, n_grid, paths, seed, mode, chain_cap, tolerances
// (unknown keys anywhere are rejected), then adjusted by dotted-key
// overrides. beta may be the string "auto": it resolves via choose_beta
// over the integer range [min(n_grid), max(n_grid)] with eps0 = 0.1,
// margin = 1.
struct RunConfig {
    ExperimentConfig experiment;
    bool beta_was_auto = false;

    // verify thresholds, checked at the largest grid point
    double tol_trimmed_over_d = 0.05;
    double tol_truncated_over_d = 0.05;
    double tol_trimmed_over_nlogn_rel = 0.15;

    // echo of the resolved configuration (includes the resolved beta and the
    // seed; excludes worker count, which must not affect any output)
    nlohmann::json echo() const;
    std::string summary_line() const;
};

nlohmann::json default_config_json();
RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config(const std::filesystem::path& path,
                      std::span<const std::string> overrides = {});
RunConfig load_default_config(std::span<const std::string> overrides = {});

// Applies one "dotted.key=value" override to a JSON document. Values parse
// as integer, real, bool, or string; comma-separated values become arrays.
void apply_override(nlohmann::json& doc, const std::string& spec);

} // namespace oppsim
