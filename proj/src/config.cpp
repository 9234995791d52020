#include "oppsim/config.hpp"

#include "oppsim/report_io.hpp"
#include "oppsim/trimstats.hpp"
#include "oppsim/util.hpp"

#include <nlohmann/json.hpp>

#include <charconv>
#include <fstream>

namespace oppsim {

namespace {

using nlohmann::json;

void check_keys(const json& obj, std::initializer_list<const char*> allowed,
                const std::string& where) {
    if (!obj.is_object())
        throw config_error("config: " + where + " must be an object");
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        bool ok = false;
        for (const char* k : allowed)
            if (key == k)
                ok = true;
        if (!ok)
            throw config_error("config: unknown key '" + key + "' in " + where);
    }
}

DistributionSpec parse_distribution(const json& obj) {
    check_keys(obj, {"kind", "params"}, "distribution");
    const std::string kind = obj.at("kind").get<std::string>();
    if (obj.contains("params"))
        check_keys(obj.at("params"), {}, "distribution.params");
    if (kind == "identity")
        return DistributionSpec::identity();
    if (kind == "quadratic")
        return DistributionSpec::quadratic();
    throw config_error("config: unknown distribution kind '" + kind + "'");
}

GoodSequence parse_sequence(const json& obj) {
    check_keys(obj, {"kind", "params"}, "sequence");
    const std::string kind = obj.at("kind").get<std::string>();
    if (kind == "integers") {
        if (obj.contains("params"))
            check_keys(obj.at("params"), {}, "sequence.params");
        return GoodSequence::integers();
    }
    if (kind == "scaled_integers") {
        std::int64_t scale = 2;
        if (obj.contains("params")) {
            check_keys(obj.at("params"), {"scale"}, "sequence.params");
            scale = obj.at("params").at("scale").get<std::int64_t>();
        }
        return GoodSequence::scaled_integers(scale);
    }
    throw config_error("config: unknown sequence kind '" + kind + "'");
}

ExpansionFamily parse_family(const json& obj) {
    check_keys(obj, {"kind", "params"}, "family");
    const std::string kind = obj.at("kind").get<std::string>();
    if (obj.contains("params"))
        check_keys(obj.at("params"), {}, "family.params");
    if (kind == "engel")
        return ExpansionFamily::engel();
    if (kind == "luroth-type")
        return ExpansionFamily::luroth_type();
    throw config_error("config: unknown family kind '" + kind + "'");
}

SampleMode parse_mode(const std::string& mode) {
    if (mode == "iid_X")
        return SampleMode::IidX;
    if (mode == "chain")
        return SampleMode::Chain;
    if (mode == "both")
        return SampleMode::Both;
    throw config_error("config: unknown mode '" + mode + "'");
}

const char* mode_name(SampleMode mode) {
    switch (mode) {
    case SampleMode::IidX:
        return "iid_X";
    case SampleMode::Chain:
        return "chain";
    case SampleMode::Both:
    default:
        return "both";
    }
}

json parse_scalar(const std::string& text) {
    if (text == "true")
        return true;
    if (text == "false")
        return false;
    std::int64_t i = 0;
    auto r = std::from_chars(text.data(), text.data() + text.size(), i);
    if (r.ec == std::errc() && r.ptr == text.data() + text.size())
        return i;
    double d = 0.0;
    r = std::from_chars(text.data(), text.data() + text.size(), d);
    if (r.ec == std::errc() && r.ptr == text.data() + text.size())
        return d;
    return text;
}

} // namespace

json default_config_json() {
    return json{
        {"distribution", {{"kind", "identity"}}},
        {"sequence", {{"kind", "integers"}}},
        {"family", {{"kind", "engel"}}},
        {"plan", {{"gamma", 0.4}, {"beta", "auto"}}},
        {"n_grid", {1000, 10000, 100000, 1000000}},
        {"paths", 50},
        {"seed", 20260809},
        {"mode", "iid_X"},
        {"chain_cap", 1000},
        {"tolerances",
         {{"trimmed_over_d", 0.05}, {"truncated_over_d", 0.05}, {"trimmed_over_nlogn_rel", 0.15}}},
    };
}

RunConfig parse_config(const json& doc) {
    check_keys(doc,
               {"distribution", "sequence", "family", "plan", "n_grid", "paths", "seed", "mode",
                "chain_cap", "tolerances"},
               "top level");
    RunConfig cfg;
    auto& exp = cfg.experiment;
    exp.dist = parse_distribution(doc.at("distribution"));
    exp.seq = parse_sequence(doc.at("sequence"));
    exp.fam = parse_family(doc.at("family"));

    const json& plan = doc.at("plan");
    check_keys(plan, {"gamma", "beta"}, "plan");
    const double gamma = plan.at("gamma").get<double>();

    exp.n_grid = doc.at("n_grid").get<std::vector<std::int64_t>>();
    if (exp.n_grid.empty())
        throw config_error("config: n_grid must not be empty");
    exp.paths = doc.at("paths").get<std::int64_t>();
    exp.seed = doc.at("seed").get<std::uint64_t>();
    exp.mode = parse_mode(doc.at("mode").get<std::string>());
    if (doc.contains("chain_cap"))
        exp.chain_cap = doc.at("chain_cap").get<std::int64_t>();

    double beta = 0.0;
    if (plan.at("beta").is_string()) {
        if (plan.at("beta").get<std::string>() != "auto")
            throw config_error("config: plan.beta must be a number or \"auto\"");
        cfg.beta_was_auto = true;
        beta = choose_beta(exp.dist, exp.seq, gamma, exp.n_grid.back(), /*eps0=*/0.1,
                           /*margin=*/1.0, /*n_min=*/exp.n_grid.front());
    } else {
        beta = plan.at("beta").get<double>();
    }
    exp.plan = TrimPlan(gamma, beta);

    if (doc.contains("tolerances")) {
        const json& tol = doc.at("tolerances");
        check_keys(tol, {"trimmed_over_d", "truncated_over_d", "trimmed_over_nlogn_rel"},
                   "tolerances");
        if (tol.contains("trimmed_over_d"))
            cfg.tol_trimmed_over_d = tol.at("trimmed_over_d").get<double>();
        if (tol.contains("truncated_over_d"))
            cfg.tol_truncated_over_d = tol.at("truncated_over_d").get<double>();
        if (tol.contains("trimmed_over_nlogn_rel"))
            cfg.tol_trimmed_over_nlogn_rel = tol.at("trimmed_over_nlogn_rel").get<double>();
    }

    exp.validate();
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path, std::span<const std::string> overrides) {
    std::ifstream in(path);
    if (!in)
        throw config_error("config: cannot open " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw config_error("config: parse error in " + path.string() + ": " + e.what());
    }
    for (const auto& ov : overrides)
        apply_override(doc, ov);
    return parse_config(doc);
}

RunConfig load_default_config(std::span<const std::string> overrides) {
    json doc = default_config_json();
    for (const auto& ov : overrides)
        apply_override(doc, ov);
    return parse_config(doc);
}

void apply_override(json& doc, const std::string& spec) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos || eq == 0)
        throw config_error("override must look like dotted.key=value: " + spec);
    const std::string path = spec.substr(0, eq);
    const std::string value = spec.substr(eq + 1);

    json parsed;
    if (value.find(',') != std::string::npos) {
        parsed = json::array();
        std::size_t start = 0;
        while (start <= value.size()) {
            const auto comma = value.find(',', start);
            const std::string part =
                value.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
            parsed.push_back(parse_scalar(part));
            if (comma == std::string::npos)
                break;
            start = comma + 1;
        }
    } else {
        parsed = parse_scalar(value);
    }

    json* node = &doc;
    std::size_t start = 0;
    for (;;) {
        const auto dot = path.find('.', start);
        const std::string key = path.substr(start, dot == std::string::npos ? std::string::npos
                                                                            : dot - start);
        if (key.empty())
            throw config_error("override has an empty path segment: " + spec);
        if (dot == std::string::npos) {
            (*node)[key] = parsed;
            return;
        }
        node = &(*node)[key];
        start = dot + 1;
    }
}

nlohmann::json RunConfig::echo() const {
    const auto& exp = experiment;
    json seq_params = json::object();
    if (exp.seq.kind() == GoodSequence::Kind::ScaledIntegers)
        seq_params["scale"] = exp.seq.scale();
    return json{
        {"distribution", {{"kind", exp.dist.name()}}},
        {"sequence", {{"kind", exp.seq.name()}, {"params", seq_params}}},
        {"family", {{"kind", exp.fam.name()}}},
        {"plan",
         {{"gamma", exp.plan.gamma},
          {"beta", exp.plan.beta},
          {"beta_was_auto", beta_was_auto}}},
        {"n_grid", exp.n_grid},
        {"paths", exp.paths},
        {"seed", exp.seed},
        {"mode", mode_name(exp.mode)},
        {"chain_cap", exp.chain_cap},
        {"tolerances",
         {{"trimmed_over_d", tol_trimmed_over_d},
          {"truncated_over_d", tol_truncated_over_d},
          {"trimmed_over_nlogn_rel", tol_trimmed_over_nlogn_rel}}},
    };
}

std::string RunConfig::summary_line() const {
    const auto& exp = experiment;
    std::string line = "model: dist=" + exp.dist.name() + " seq=" + exp.seq.name() +
                       " family=" + exp.fam.name() + " gamma=" + format_double(exp.plan.gamma) +
                       " beta=" + format_double(exp.plan.beta) +
                       (beta_was_auto ? " (auto)" : "") + " paths=" + std::to_string(exp.paths) +
                       " seed=" + std::to_string(exp.seed) + " mode=" + mode_name(exp.mode);
    return line;
}

} // namespace oppsim
