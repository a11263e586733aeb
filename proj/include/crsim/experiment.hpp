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

#pragma once

#include "crsim/pipeline.hpp"

#include <json.hpp>

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace crsim {

inline constexpr int kSchemaVersion = 1;

enum class SweepVariable { fronthaul_bits, transmit_snr, transmit_snr_db, num_active, compression_rate };

std::string_view sweep_variable_name(SweepVariable v) noexcept;

// Flat "section.key" -> value view of a config file. Overrides go through
// the same map, so flags and file values are validated identically.
using ConfigMap = std::map<std::string, std::string>;

ConfigMap parse_config_text(std::string_view text);
ConfigMap load_config_file(const std::filesystem::path& path);

struct ExperimentSpec {
    std::string name = "experiment";
    TrialConfig base;
    SweepVariable sweep_variable = SweepVariable::num_active;
    std::vector<double> sweep_values;
    std::size_t n_trials = 1;
    std::vector<Scheme> schemes;
    bool overlay_capacity_bounds = false;
    bool overlay_rip_preset = false;
    double overlay_delta = 0.2;
    unsigned threads = 0;
    bool record_wall_time = true;
    std::string output_dir = ".";

    // Trial parameters at one sweep point.
    TrialConfig point_config(double sweep_value) const;
    void validate() const;
};

// Unknown keys and schema_version only; values are checked by build_experiment.
void check_config_structure(const ConfigMap& config);

// Builds and validates a spec. Unknown keys and malformed values throw
// ConfigError naming the key.
ExperimentSpec build_experiment(const ConfigMap& config);

// Keys accepted by build_experiment, for documentation and CLI help.
const std::vector<std::string>& known_config_keys();

struct ResultRow {
    double sweep_value = 0;
    std::string scheme;
    double mean_tput = 0;        // per active user, bits (or log_base units)
    double ci = 0;               // Student-t 95% half-width
    double detection_rate = 0;
    std::size_t invalid = 0;
    double wall_ms = 0;
    // Not part of the CSV.
    std::size_t measurements = 0;
    unsigned bits_per_dimension = 0;
    std::size_t valid_trials = 0;
};

struct ExperimentResult {
    std::vector<ResultRow> rows;
    nlohmann::json metadata;
};

ExperimentResult run_experiment(const ExperimentSpec& spec);

// Student-t 95% half-width of the mean; 0 for fewer than two samples.
double t_confidence_halfwidth(const std::vector<double>& samples);

inline constexpr std::string_view kCsvHeader = "sweep_value,scheme,mean_tput,ci,detection_rate,invalid,wall_ms";

std::string format_csv(const std::vector<ResultRow>& rows);
std::vector<ResultRow> parse_csv(std::string_view text);

void write_csv(const std::vector<ResultRow>& rows, const std::filesystem::path& path);
void write_json(const ExperimentResult& result, const std::filesystem::path& path);

// <dir>/<name>.csv and <dir>/<name>.json. Returns the CSV path.
std::filesystem::path emit_results(const ExperimentResult& result, const std::filesystem::path& dir,
                                   const std::string& name, bool with_json = true);

std::string version_string();

} // namespace crsim
