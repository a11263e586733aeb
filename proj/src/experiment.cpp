// SPDX-License-Identifier: Apache-2.0
//
// crsim - compressive fronthaul simulation for uplink C-RAN
// Copyright (C) 2026 The crsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "crsim/experiment.hpp"

#include "crsim/error.hpp"
#include "crsim/parallel.hpp"

#include <boost/math/distributions/students_t.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#ifndef CRSIM_VERSION
#define CRSIM_VERSION "0.0.0"
#endif

namespace crsim {

std::string version_string() {
    return CRSIM_VERSION;
}

std::string_view sweep_variable_name(SweepVariable v) noexcept {
    switch (v) {
    case SweepVariable::fronthaul_bits: return "fronthaul_bits";
    case SweepVariable::transmit_snr: return "transmit_snr";
    case SweepVariable::transmit_snr_db: return "transmit_snr_db";
    case SweepVariable::num_active: return "num_active";
    case SweepVariable::compression_rate: return "compression_rate";
    }
    return "unknown";
}

// ---- config text ----------------------------------------------------------

namespace {

void flatten(const boost::property_tree::ptree& tree, const std::string& prefix, ConfigMap& out) {
    for (const auto& [key, child] : tree) {
        const std::string full = prefix.empty() ? key : prefix + "." + key;
        if (child.empty()) {
            out[full] = child.data();
        } else {
            flatten(child, full, out);
        }
    }
}

} // namespace

ConfigMap parse_config_text(std::string_view text) {
    std::istringstream in{std::string(text)};
    boost::property_tree::ptree tree;
    try {
        boost::property_tree::read_ini(in, tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    ConfigMap out;
    flatten(tree, "", out);
    return out;
}

ConfigMap load_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

// ---- typed access -----------------------------------------------------------

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(std::string_view s) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        const auto comma = s.find(',', start);
        const auto piece = trim(s.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
        if (!piece.empty()) out.push_back(piece);
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

double to_double(const std::string& key, const std::string& value) {
    const std::string v = trim(value);
    double out = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size() || v.empty())
        throw ConfigError("config key '" + key + "': expected a number, got '" + value + "'");
    return out;
}

std::uint64_t to_uint(const std::string& key, const std::string& value) {
    const std::string v = trim(value);
    std::uint64_t out = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size() || v.empty())
        throw ConfigError("config key '" + key + "': expected a non-negative integer, got '" + value + "'");
    return out;
}

bool to_bool(const std::string& key, const std::string& value) {
    const std::string v = trim(value);
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ConfigError("config key '" + key + "': expected true/false, got '" + value + "'");
}

std::size_t exact_count(const std::string& key, double v) {
    if (!(v >= 0) || std::floor(v) != v) throw ConfigError("config key '" + key + "': expected a non-negative integer");
    return static_cast<std::size_t>(v);
}

} // namespace

const std::vector<std::string>& known_config_keys() {
    static const std::vector<std::string> keys{
        "schema_version",
        "scenario.num_rrh",
        "scenario.users_per_carrier",
        "scenario.num_subcarriers",
        "scenario.num_active",
        "scenario.transmit_snr",
        "scenario.transmit_snr_db",
        "scenario.cell_radius",
        "scenario.pathloss_exponent",
        "scenario.master_seed",
        "compression.measurements",
        "compression.bits_per_dimension",
        "compression.quantize",
        "recovery.lambda",
        "recovery.adaptive_delta",
        "recovery.max_iter",
        "recovery.tolerance",
        "recovery.noise",
        "recovery.mmse_prior_scale",
        "experiment.name",
        "experiment.sweep_variable",
        "experiment.sweep_values",
        "experiment.n_trials",
        "experiment.schemes",
        "experiment.bound_overlays",
        "experiment.overlay_delta",
        "experiment.threads",
        "experiment.log_base",
        "output.directory",
        "output.wall_time",
    };
    return keys;
}

void check_config_structure(const ConfigMap& config) {
    const auto& known = known_config_keys();
    for (const auto& [key, value] : config)
        if (std::find(known.begin(), known.end(), key) == known.end()) throw ConfigError("unknown config key '" + key + "'");
    const auto it = config.find("schema_version");
    if (it == config.end()) throw ConfigError("missing required config key 'schema_version'");
    if (it->second != std::to_string(kSchemaVersion))
        throw ConfigError("unsupported schema_version '" + it->second + "' (expected " + std::to_string(kSchemaVersion) + ")");
}

ExperimentSpec build_experiment(const ConfigMap& config) {
    check_config_structure(config);

    auto get = [&](const std::string& key) -> const std::string* {
        const auto it = config.find(key);
        return it == config.end() ? nullptr : &it->second;
    };
    auto require = [&](const std::string& key) -> const std::string& {
        const std::string* v = get(key);
        if (!v) throw ConfigError("missing required config key '" + key + "'");
        return *v;
    };

    ExperimentSpec spec;
    TrialConfig& base = spec.base;
    ScenarioConfig& sc = base.scenario;

    if (auto v = get("scenario.num_rrh")) sc.num_rrh = to_uint("scenario.num_rrh", *v);
    if (auto v = get("scenario.users_per_carrier")) sc.users_per_carrier = to_uint("scenario.users_per_carrier", *v);
    if (auto v = get("scenario.num_subcarriers")) sc.num_subcarriers = to_uint("scenario.num_subcarriers", *v);
    if (auto v = get("scenario.num_active")) sc.num_active = to_uint("scenario.num_active", *v);
    const std::string* snr_lin = get("scenario.transmit_snr");
    const std::string* snr_db = get("scenario.transmit_snr_db");
    if (snr_lin && snr_db) throw ConfigError("give either scenario.transmit_snr or scenario.transmit_snr_db, not both");
    if (snr_lin) sc.transmit_snr = to_double("scenario.transmit_snr", *snr_lin);
    if (snr_db) sc.transmit_snr = std::pow(10.0, to_double("scenario.transmit_snr_db", *snr_db) / 10.0);
    if (auto v = get("scenario.cell_radius")) sc.cell_radius = to_double("scenario.cell_radius", *v);
    if (auto v = get("scenario.pathloss_exponent")) sc.pathloss_exponent = to_double("scenario.pathloss_exponent", *v);
    if (auto v = get("scenario.master_seed")) sc.master_seed = to_uint("scenario.master_seed", *v);

    base.measurements = sc.num_subcarriers;
    if (auto v = get("compression.measurements")) base.measurements = to_uint("compression.measurements", *v);
    if (auto v = get("compression.bits_per_dimension"))
        base.quantizer.bits_per_dimension = static_cast<unsigned>(to_uint("compression.bits_per_dimension", *v));
    if (auto v = get("compression.quantize")) base.quantizer.enabled = to_bool("compression.quantize", *v);

    if (auto v = get("recovery.lambda")) {
        const std::string mode = trim(*v);
        if (mode == "auto") {
            base.lambda = 0;
        } else if (mode == "adaptive") {
            const std::string* d = get("recovery.adaptive_delta");
            if (!d) throw ConfigError("recovery.lambda = adaptive needs recovery.adaptive_delta");
            base.lambda = 0;
            base.adaptive_delta = to_double("recovery.adaptive_delta", *d);
        } else {
            base.lambda = to_double("recovery.lambda", mode);
            if (!(base.lambda > 0)) throw ConfigError("recovery.lambda must be positive, 'auto' or 'adaptive'");
        }
    }
    if (auto v = get("recovery.max_iter")) base.bp.max_iter = static_cast<int>(to_uint("recovery.max_iter", *v));
    if (auto v = get("recovery.tolerance")) base.bp.tolerance = to_double("recovery.tolerance", *v);
    if (auto v = get("recovery.noise")) base.add_noise = to_bool("recovery.noise", *v);
    if (auto v = get("recovery.mmse_prior_scale")) base.mmse_prior_scale = to_double("recovery.mmse_prior_scale", *v);

    if (auto v = get("experiment.name")) spec.name = trim(*v);
    if (spec.name.empty() || spec.name.find_first_of("/\\") != std::string::npos)
        throw ConfigError("experiment.name must be a non-empty file stem");
    {
        const std::string var = trim(require("experiment.sweep_variable"));
        bool found = false;
        for (SweepVariable sv : {SweepVariable::fronthaul_bits, SweepVariable::transmit_snr, SweepVariable::transmit_snr_db,
                                 SweepVariable::num_active, SweepVariable::compression_rate}) {
            if (sweep_variable_name(sv) == var) {
                spec.sweep_variable = sv;
                found = true;
            }
        }
        if (!found) throw ConfigError("experiment.sweep_variable: unknown variable '" + var + "'");
    }
    for (const auto& item : split_list(require("experiment.sweep_values")))
        spec.sweep_values.push_back(to_double("experiment.sweep_values", item));
    spec.n_trials = to_uint("experiment.n_trials", require("experiment.n_trials"));
    if (auto v = get("experiment.schemes")) {
        for (const auto& item : split_list(*v)) {
            const auto s = parse_scheme(item);
            if (!s) throw ConfigError("experiment.schemes: unknown scheme '" + item + "'");
            if (std::find(spec.schemes.begin(), spec.schemes.end(), *s) != spec.schemes.end())
                throw ConfigError("experiment.schemes: duplicate scheme '" + item + "'");
            spec.schemes.push_back(*s);
        }
    } else {
        spec.schemes.assign(kAllSchemes.begin(), kAllSchemes.end());
    }
    if (auto v = get("experiment.bound_overlays")) {
        for (const auto& item : split_list(*v)) {
            if (item == "capacity") {
                spec.overlay_capacity_bounds = true;
            } else if (item == "rip_preset") {
                spec.overlay_rip_preset = true;
            } else if (item != "none") {
                throw ConfigError("experiment.bound_overlays: unknown overlay '" + item + "'");
            }
        }
    }
    if (auto v = get("experiment.overlay_delta")) spec.overlay_delta = to_double("experiment.overlay_delta", *v);
    if (auto v = get("experiment.threads")) spec.threads = static_cast<unsigned>(to_uint("experiment.threads", *v));
    if (auto v = get("experiment.log_base")) base.log_base = to_double("experiment.log_base", *v);

    if (auto v = get("output.directory")) spec.output_dir = trim(*v);
    if (const char* env = std::getenv("CRSIM_OUTPUT_DIR"); env && *env) spec.output_dir = env;
    if (auto v = get("output.wall_time")) spec.record_wall_time = to_bool("output.wall_time", *v);

    spec.validate();
    return spec;
}

TrialConfig ExperimentSpec::point_config(double value) const {
    TrialConfig cfg = base;
    switch (sweep_variable) {
    case SweepVariable::fronthaul_bits: {
        const unsigned b = cfg.quantizer.bits_per_dimension;
        if (!cfg.quantizer.enabled || b == 0)
            throw ConfigError("a fronthaul_bits sweep needs quantization enabled with bits_per_dimension > 0");
        const std::size_t total = exact_count("experiment.sweep_values", value);
        if (total % b != 0)
            throw ConfigError("fronthaul bits " + std::to_string(total) + " is not a multiple of bits_per_dimension " +
                              std::to_string(b));
        cfg.measurements = total / b;
        break;
    }
    case SweepVariable::transmit_snr:
        cfg.scenario.transmit_snr = value;
        break;
    case SweepVariable::transmit_snr_db:
        cfg.scenario.transmit_snr = std::pow(10.0, value / 10.0);
        break;
    case SweepVariable::num_active:
        cfg.scenario.num_active = exact_count("experiment.sweep_values", value);
        break;
    case SweepVariable::compression_rate: {
        const double r = std::round(value * static_cast<double>(cfg.scenario.num_subcarriers));
        if (!(value > 0 && value <= 1) || r < 1)
            throw ConfigError("compression rate must lie in (0, 1] and give at least one measurement");
        cfg.measurements = static_cast<std::size_t>(r);
        break;
    }
    }
    cfg.validate();
    return cfg;
}

void ExperimentSpec::validate() const {
    if (sweep_values.empty()) throw ConfigError("experiment.sweep_values must not be empty");
    for (std::size_t i = 1; i < sweep_values.size(); ++i)
        if (!(sweep_values[i] > sweep_values[i - 1]))
            throw ConfigError("experiment.sweep_values must be strictly increasing");
    if (n_trials < 1) throw ConfigError("experiment.n_trials must be at least 1");
    if (schemes.empty()) throw ConfigError("experiment.schemes must name at least one scheme");
    if ((overlay_capacity_bounds || overlay_rip_preset) && !(overlay_delta >= 0 && overlay_delta < kRicLimit))
        throw ConfigError("experiment.overlay_delta must lie in [0, sqrt(2)-1)");
    for (double v : sweep_values) (void)point_config(v);
}

// ---- running ------------------------------------------------------------------

double t_confidence_halfwidth(const std::vector<double>& samples) {
    const std::size_t n = samples.size();
    if (n < 2) return 0.0;
    const double mean = std::accumulate(samples.begin(), samples.end(), 0.0) / static_cast<double>(n);
    double ss = 0;
    for (double v : samples) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));
    const boost::math::students_t dist(static_cast<double>(n - 1));
    const double t = boost::math::quantile(boost::math::complement(dist, 0.025));
    return t * sd / std::sqrt(static_cast<double>(n));
}

namespace {

struct Cell {
    double rate = 0;
    bool correct = false;
    bool valid = false;
    double ms = 0;
};

nlohmann::json config_json(const ExperimentSpec& spec) {
    const TrialConfig& b = spec.base;
    nlohmann::json schemes = nlohmann::json::array();
    for (Scheme s : spec.schemes) schemes.push_back(std::string(scheme_name(s)));
    return {
        {"schema_version", kSchemaVersion},
        {"scenario",
         {{"num_rrh", b.scenario.num_rrh},
          {"users_per_carrier", b.scenario.users_per_carrier},
          {"num_subcarriers", b.scenario.num_subcarriers},
          {"num_active", b.scenario.num_active},
          {"transmit_snr", b.scenario.transmit_snr},
          {"cell_radius", b.scenario.cell_radius},
          {"pathloss_exponent", b.scenario.pathloss_exponent},
          {"master_seed", b.scenario.master_seed}}},
        {"compression",
         {{"measurements", b.measurements},
          {"bits_per_dimension", b.quantizer.bits_per_dimension},
          {"quantize", b.quantizer.enabled}}},
        {"recovery",
         {{"lambda", b.effective_lambda()},
          {"max_iter", b.bp.max_iter},
          {"tolerance", b.bp.tolerance},
          {"noise", b.add_noise},
          {"mmse_prior_scale", b.mmse_prior_scale}}},
        {"experiment",
         {{"name", spec.name},
          {"sweep_variable", std::string(sweep_variable_name(spec.sweep_variable))},
          {"sweep_values", spec.sweep_values},
          {"n_trials", spec.n_trials},
          {"schemes", schemes},
          {"log_base", b.log_base}}},
    };
}

} // namespace

ExperimentResult run_experiment(const ExperimentSpec& spec) {
    spec.validate();
    ExperimentResult result;
    nlohmann::json overlays = nlohmann::json::array();
    const std::size_t n_schemes = spec.schemes.size();

    for (std::size_t p = 0; p < spec.sweep_values.size(); ++p) {
        const double value = spec.sweep_values[p];
        const TrialConfig cfg = spec.point_config(value);
        std::vector<Cell> cells(spec.n_trials * n_schemes);

        parallel_for(spec.n_trials, spec.threads, [&](std::size_t trial) {
            std::optional<TrialRealization> realization;
            try {
                realization.emplace(realize_trial(cfg, trial_seed(cfg.scenario.master_seed, p, trial)));
            } catch (const std::exception&) {
                return;  // every scheme of this trial stays invalid
            }
            for (std::size_t j = 0; j < n_schemes; ++j) {
                Cell& cell = cells[trial * n_schemes + j];
                try {
                    const SchemeOutcome o = evaluate_scheme(spec.schemes[j], *realization, cfg);
                    cell = {o.sum_rate, o.detection_correct, o.valid && std::isfinite(o.sum_rate), o.elapsed_ms};
                } catch (const std::exception&) {
                    cell.valid = false;
                }
            }
        });

        const double s = static_cast<double>(cfg.scenario.num_active);
        for (std::size_t j = 0; j < n_schemes; ++j) {
            ResultRow row;
            row.sweep_value = value;
            row.scheme = std::string(scheme_name(spec.schemes[j]));
            row.measurements = cfg.measurements;
            row.bits_per_dimension = cfg.quantizer.enabled ? cfg.quantizer.bits_per_dimension : 0;
            std::vector<double> tput;
            std::size_t correct = 0;
            double ms = 0;
            for (std::size_t trial = 0; trial < spec.n_trials; ++trial) {
                const Cell& cell = cells[trial * n_schemes + j];
                ms += cell.ms;
                if (!cell.valid) {
                    ++row.invalid;
                    continue;
                }
                tput.push_back(s > 0 ? cell.rate / s : 0.0);
                if (cell.correct) ++correct;
            }
            row.valid_trials = tput.size();
            if (!tput.empty()) {
                row.mean_tput = std::accumulate(tput.begin(), tput.end(), 0.0) / static_cast<double>(tput.size());
                row.detection_rate = static_cast<double>(correct) / static_cast<double>(tput.size());
            }
            row.ci = t_confidence_halfwidth(tput);
            row.wall_ms = spec.record_wall_time ? ms : 0.0;
            result.rows.push_back(std::move(row));
        }

        if (spec.overlay_capacity_bounds || spec.overlay_rip_preset) {
            nlohmann::json o{{"sweep_value", value}};
            const std::size_t active = cfg.scenario.num_active;
            const double per_user = active > 0 ? 1.0 / static_cast<double>(active) : 0.0;
            if (spec.overlay_capacity_bounds) {
                const CapacityBounds cb = capacity_bounds(active, cfg.scenario.num_rrh, cfg.compression_rate(),
                                                          cfg.scenario.transmit_snr, spec.overlay_delta, 1.0, cfg.log_base);
                o["capacity_upper_per_user"] = cb.upper * per_user;
                o["capacity_lower_per_user"] = cb.lower * per_user;
            }
            if (spec.overlay_rip_preset) {
                const CapacityBounds cb = capacity_bounds_rip_preset(active, cfg.scenario.num_rrh, cfg.compression_rate(),
                                                                     cfg.scenario.transmit_snr, spec.overlay_delta,
                                                                     cfg.scenario.num_users(), cfg.log_base);
                o["rip_preset_upper_per_user"] = cb.upper * per_user;
                o["rip_preset_lower_per_user"] = cb.lower * per_user;
            }
            overlays.push_back(std::move(o));
        }
    }

    result.metadata = {
        {"schema_version", kSchemaVersion},
        {"code_version", version_string()},
        {"log_base", spec.base.log_base},
        {"ci_level", 0.95},
        {"seed_derivation", "trial_seed(master_seed, sweep_index, trial_index)"},
        {"config", config_json(spec)},
        {"bound_overlays", overlays},
        {"overlay_delta", spec.overlay_delta},
    };
    return result;
}

// ---- output --------------------------------------------------------------

namespace {

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

std::string format_csv(const std::vector<ResultRow>& rows) {
    std::string out(kCsvHeader);
    out += '\n';
    for (const auto& r : rows) {
        out += fmt_double(r.sweep_value) + ',' + r.scheme + ',' + fmt_double(r.mean_tput) + ',' + fmt_double(r.ci) + ',' +
               fmt_double(r.detection_rate) + ',' + std::to_string(r.invalid) + ',' + fmt_double(r.wall_ms) + '\n';
    }
    return out;
}

std::vector<ResultRow> parse_csv(std::string_view text) {
    std::vector<ResultRow> rows;
    std::istringstream in{std::string(text)};
    std::string line;
    if (!std::getline(in, line) || trim(line) != kCsvHeader) throw ConfigError("CSV header does not match");
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        std::vector<std::string> f;
        std::size_t start = 0;
        while (true) {
            const auto comma = line.find(',', start);
            f.push_back(line.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        if (f.size() != 7) throw ConfigError("CSV row has " + std::to_string(f.size()) + " fields, expected 7");
        ResultRow r;
        r.sweep_value = to_double("sweep_value", f[0]);
        r.scheme = f[1];
        r.mean_tput = to_double("mean_tput", f[2]);
        r.ci = to_double("ci", f[3]);
        r.detection_rate = to_double("detection_rate", f[4]);
        r.invalid = to_uint("invalid", f[5]);
        r.wall_ms = to_double("wall_ms", f[6]);
        rows.push_back(std::move(r));
    }
    return rows;
}

void write_csv(const std::vector<ResultRow>& rows, const std::filesystem::path& path) {
    if (rows.empty()) throw ConfigError("no result rows to write");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out << format_csv(rows);
    if (!out) throw IoError("write failed for " + path.string());
}

void write_json(const ExperimentResult& result, const std::filesystem::path& path) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : result.rows) {
        rows.push_back({{"sweep_value", r.sweep_value},
                        {"scheme", r.scheme},
                        {"mean_tput", r.mean_tput},
                        {"ci", r.ci},
                        {"detection_rate", r.detection_rate},
                        {"invalid", r.invalid},
                        {"wall_ms", r.wall_ms},
                        {"valid_trials", r.valid_trials},
                        {"measurements", r.measurements},
                        {"bits_per_dimension", r.bits_per_dimension}});
    }
    const nlohmann::json doc{{"metadata", result.metadata}, {"rows", rows}};
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out << doc.dump(2) << '\n';
    if (!out) throw IoError("write failed for " + path.string());
}

std::filesystem::path emit_results(const ExperimentResult& result, const std::filesystem::path& dir,
                                   const std::string& name, bool with_json) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
    const auto csv = dir / (name + ".csv");
    write_csv(result.rows, csv);
    if (with_json) write_json(result, dir / (name + ".json"));
    return csv;
}

} // namespace crsim
