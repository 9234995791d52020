#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "oppsim/diagnostics.hpp"
#include "oppsim/experiments.hpp"

namespace oppsim {

// Shortest round-trip decimal rendering (std::to_chars); locale-free and
// byte-stable, which the reproducibility contract depends on.
std::string format_double(double v);

using CsvCell = std::variant<std::string, double, std::int64_t, std::uint64_t>;

// RFC-4180 quoting, LF line endings, header row first.
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<CsvCell>>& rows);

std::vector<std::vector<CsvCell>> report_rows(const ConvergenceReport& report, std::uint64_t seed);
extern const std::vector<std::string> kReportCsvHeader;

nlohmann::json report_to_json(const ConvergenceReport& report);
nlohmann::json assumptions_to_json(const AssumptionReport& report);
nlohmann::json independence_to_json(const IndependenceReport& report);
nlohmann::json summability_to_json(const SummabilityReport& report);

// Fixed-width human-readable table of a report plus the exact per-n model
// quantities; consumed by the `report` subcommand and summary.txt.
std::string render_summary(const ConvergenceReport& report, const AssumptionReport* assumptions,
                           const std::string& config_line);

// Renders rows parsed back from a report.csv file.
std::string render_csv_file(const std::filesystem::path& csv_path);

} // namespace oppsim
