#include "oppsim/report_io.hpp"

#include "oppsim/util.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace oppsim {

std::string format_double(double v) {
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

namespace {

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n\r") == std::string::npos)
        return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"')
            out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string cell_to_string(const CsvCell& cell) {
    if (std::holds_alternative<std::string>(cell))
        return csv_escape(std::get<std::string>(cell));
    if (std::holds_alternative<double>(cell))
        return format_double(std::get<double>(cell));
    if (std::holds_alternative<std::int64_t>(cell))
        return std::to_string(std::get<std::int64_t>(cell));
    return std::to_string(std::get<std::uint64_t>(cell));
}

} // namespace

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<CsvCell>>& rows) {
    std::ofstream out(path, std::ios::binary); // binary: LF endings everywhere
    if (!out)
        throw std::runtime_error("cannot open for writing: " + path.string());
    for (std::size_t i = 0; i < header.size(); ++i)
        out << (i ? "," : "") << csv_escape(header[i]);
    out << '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            out << (i ? "," : "") << cell_to_string(row[i]);
        out << '\n';
    }
    if (!out)
        throw std::runtime_error("write failed: " + path.string());
}

const std::vector<std::string> kReportCsvHeader = {
    "n", "statistic", "target", "mean", "median", "stddev", "min", "max", "paths", "seed"};

std::vector<std::vector<CsvCell>> report_rows(const ConvergenceReport& report,
                                              std::uint64_t seed) {
    std::vector<std::vector<CsvCell>> rows;
    rows.reserve(report.rows.size());
    for (const auto& r : report.rows)
        rows.push_back({r.n, r.statistic, r.target, r.mean, r.median, r.stddev, r.min, r.max,
                        r.paths, seed});
    return rows;
}

nlohmann::json report_to_json(const ConvergenceReport& report) {
    nlohmann::json grid = nlohmann::json::array();
    for (const auto& g : report.grid)
        grid.push_back({{"n", g.n},
                        {"t", g.t},
                        {"r", g.r},
                        {"a_n", g.a_n},
                        {"d_n", g.d_n}});
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : report.rows) {
        nlohmann::json row = {{"n", r.n},
                              {"statistic", r.statistic},
                              {"mean", r.mean},
                              {"median", r.median},
                              {"stddev", r.stddev},
                              {"min", r.min},
                              {"max", r.max},
                              {"paths", r.paths}};
        if (std::isnan(r.target))
            row["target"] = nullptr;
        else
            row["target"] = r.target;
        rows.push_back(row);
    }
    return {{"grid", grid}, {"rows", rows}};
}

nlohmann::json assumptions_to_json(const AssumptionReport& report) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : report.rows)
        rows.push_back({{"n", r.n},
                        {"ratio1", r.ratio1},
                        {"ratio2", r.ratio2},
                        {"summand1", r.summand1},
                        {"summand2", r.summand2},
                        {"partial_sum1", r.partial_sum1},
                        {"partial_sum2", r.partial_sum2}});
    return {{"eps0", report.eps0},
            {"c", report.c},
            {"rows", rows},
            {"max_ratio1", report.max_ratio1},
            {"ratio2_decreasing", report.ratio2_decreasing},
            {"schedule_ok", report.schedule_ok}};
}

nlohmann::json independence_to_json(const IndependenceReport& report) {
    return {{"chain_n", report.chain_n},
            {"paths", report.paths},
            {"tv", report.tv},
            {"lag1", {{"valid", report.lag1_valid}, {"p_value", report.lag1_p}, {"note", report.lag1_note}}},
            {"two_sample",
             {{"valid", report.two_sample_valid},
              {"p_value", report.two_sample_p},
              {"note", report.two_sample_note}}}};
}

namespace {

nlohmann::json series_to_json(const SeriesReport& s) {
    const char* verdict = s.verdict == SeriesReport::Verdict::ConvergentCertificate
                              ? "convergent-certificate"
                              : (s.verdict == SeriesReport::Verdict::Divergent ? "divergent"
                                                                               : "inconclusive");
    return {{"label", s.label},
            {"partial_sum", s.partial_sum},
            {"last_summand", s.last_summand},
            {"last_ratio", s.last_ratio},
            {"verdict", verdict},
            {"certificate_n", s.certificate_n},
            {"detail", s.detail}};
}

} // namespace

nlohmann::json summability_to_json(const SummabilityReport& report) {
    return {{"gamma", report.gamma},
            {"c", report.c},
            {"n_max", report.n_max},
            {"variance_series", series_to_json(report.variance_series)},
            {"count_series", series_to_json(report.count_series)},
            {"variance_surrogate", series_to_json(report.variance_surrogate)},
            {"count_surrogate", series_to_json(report.count_surrogate)}};
}

namespace {

std::string fixed(double v, int prec = 6) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(prec) << v;
    return os.str();
}

void render_rows(std::ostringstream& os,
                 const std::vector<std::array<std::string, 8>>& table) {
    std::array<std::size_t, 8> width{};
    for (const auto& row : table)
        for (std::size_t i = 0; i < row.size(); ++i)
            width[i] = std::max(width[i], row[i].size());
    for (const auto& row : table) {
        for (std::size_t i = 0; i < row.size(); ++i)
            os << (i ? "  " : "") << std::setw(static_cast<int>(width[i])) << row[i];
        os << '\n';
    }
}

} // namespace

std::string render_summary(const ConvergenceReport& report, const AssumptionReport* assumptions,
                           const std::string& config_line) {
    std::ostringstream os;
    os << config_line << '\n';
    os << '\n' << "grid quantities:" << '\n';
    {
        std::vector<std::array<std::string, 8>> table;
        table.push_back({"n", "t_n", "r_n", "A_n", "d_n", "", "", ""});
        for (const auto& g : report.grid)
            table.push_back({std::to_string(g.n), fixed(g.t, 4), std::to_string(g.r),
                             fixed(g.a_n, 4), fixed(g.d_n, 4), "", "", ""});
        render_rows(os, table);
    }
    os << '\n' << "statistics over paths:" << '\n';
    {
        std::vector<std::array<std::string, 8>> table;
        table.push_back({"n", "statistic", "target", "median", "mean", "stddev", "min", "max"});
        for (const auto& r : report.rows)
            table.push_back({std::to_string(r.n), r.statistic,
                             std::isnan(r.target) ? "-" : fixed(r.target, 4), fixed(r.median, 6),
                             fixed(r.mean, 6), fixed(r.stddev, 6), fixed(r.min, 4),
                             fixed(r.max, 4)});
        render_rows(os, table);
    }
    if (assumptions) {
        os << '\n' << "assumption ratios:" << '\n';
        std::vector<std::array<std::string, 8>> table;
        table.push_back(
            {"n", "ratio1", "ratio2", "summand1", "summand2", "psum1", "psum2", ""});
        for (const auto& r : assumptions->rows)
            table.push_back({std::to_string(r.n), fixed(r.ratio1, 6), fixed(r.ratio2, 6),
                             format_double(r.summand1), format_double(r.summand2),
                             fixed(r.partial_sum1, 4), fixed(r.partial_sum2, 4), ""});
        render_rows(os, table);
        os << "max ratio1 = " << fixed(assumptions->max_ratio1, 6)
           << ", ratio2 decreasing = " << (assumptions->ratio2_decreasing ? "yes" : "no")
           << ", trim schedule ok = " << (assumptions->schedule_ok ? "yes" : "no") << '\n';
    }
    return os.str();
}

std::string render_csv_file(const std::filesystem::path& csv_path) {
    std::ifstream in(csv_path);
    if (!in)
        throw std::runtime_error("cannot open: " + csv_path.string());
    std::ostringstream os;
    std::string line;
    std::vector<std::vector<std::string>> rows;
    std::size_t cols = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        std::vector<std::string> fields;
        std::string cur;
        bool quoted = false;
        for (std::size_t i = 0; i < line.size(); ++i) {
            const char c = line[i];
            if (quoted) {
                if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else if (c == '"') {
                    quoted = false;
                } else {
                    cur += c;
                }
            } else if (c == '"') {
                quoted = true;
            } else if (c == ',') {
                fields.push_back(cur);
                cur.clear();
            } else {
                cur += c;
            }
        }
        fields.push_back(cur);
        cols = std::max(cols, fields.size());
        rows.push_back(std::move(fields));
    }
    std::vector<std::size_t> width(cols, 0);
    for (const auto& r : rows)
        for (std::size_t i = 0; i < r.size(); ++i)
            width[i] = std::max(width[i], r[i].size());
    for (const auto& r : rows) {
        for (std::size_t i = 0; i < r.size(); ++i)
            os << (i ? "  " : "") << std::setw(static_cast<int>(width[i])) << r[i];
        os << '\n';
    }
    return os.str();
}

} // namespace oppsim
