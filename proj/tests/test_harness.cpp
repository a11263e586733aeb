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

#include "crsim/error.hpp"
#include "crsim/experiment.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace crsim {
namespace {

const char* kSmallConfig = R"(schema_version = 1
[scenario]
num_rrh = 4
users_per_carrier = 3
num_subcarriers = 4
num_active = 2
transmit_snr_db = 20
master_seed = 11
[compression]
measurements = 3
[experiment]
name = unit
sweep_variable = num_active
sweep_values = 1, 2
n_trials = 6
threads = 2
[output]
wall_time = false
)";

ExperimentSpec small_spec(const std::string& extra = "") {
    return build_experiment(parse_config_text(std::string(kSmallConfig) + extra));
}

TEST(Config, ParsesSectionsIntoDottedKeys) {
    const auto cfg = parse_config_text(kSmallConfig);
    EXPECT_EQ(cfg.at("schema_version"), "1");
    EXPECT_EQ(cfg.at("scenario.num_rrh"), "4");
    EXPECT_EQ(cfg.at("experiment.sweep_values"), "1, 2");
}

TEST(Config, BuildsSpec) {
    const auto spec = small_spec();
    EXPECT_EQ(spec.base.scenario.num_rrh, 4u);
    EXPECT_EQ(spec.base.measurements, 3u);
    EXPECT_NEAR(spec.base.scenario.transmit_snr, 100.0, 1e-12);
    EXPECT_EQ(spec.sweep_values, (std::vector<double>{1, 2}));
    EXPECT_EQ(spec.schemes.size(), kAllSchemes.size());
    EXPECT_FALSE(spec.record_wall_time);
}

TEST(Config, RejectsBadInput) {
    auto bad = [](const std::string& text) { return build_experiment(parse_config_text(text)); };
    EXPECT_THROW(bad(std::string(kSmallConfig) + "[extra]\nkey = 1\n"), ConfigError);
    std::string no_version = kSmallConfig;
    no_version.erase(0, no_version.find('\n') + 1);
    EXPECT_THROW(bad(no_version), ConfigError);
    std::string v2 = kSmallConfig;
    v2.replace(0, 18, "schema_version = 2");
    EXPECT_THROW(bad(v2), ConfigError);
    auto with = [](const std::string& from, const std::string& to) {
        std::string t = kSmallConfig;
        t.replace(t.find(from), from.size(), to);
        return t;
    };
    EXPECT_THROW(bad(with("sweep_values = 1, 2", "sweep_values = 2, 1")), ConfigError);
    EXPECT_THROW(bad(with("sweep_values = 1, 2", "sweep_values =")), ConfigError);
    EXPECT_THROW(bad(with("n_trials = 6", "n_trials = 0")), ConfigError);
    EXPECT_THROW(bad(with("num_active", "num_actve")), ConfigError);
    EXPECT_THROW(bad(with("measurements = 3", "measurements = 5")), ConfigError);
    EXPECT_THROW(bad(with("num_rrh = 4", "num_rrh = four")), ConfigError);
    EXPECT_THROW(bad(with("sweep_values = 1, 2", "sweep_values = 1, 13")), ConfigError);
    EXPECT_THROW(bad(std::string(kSmallConfig) + "[experiment]\nschemes = proposed, magic\n"), ConfigError);
    EXPECT_THROW(parse_config_text("schema_version = 1\n[scenario\nnum_rrh = 2\n"), ConfigError);
}

TEST(Config, FronthaulBitsDecomposeIntoMeasurements) {
    auto spec = small_spec();
    spec.sweep_variable = SweepVariable::fronthaul_bits;
    EXPECT_EQ(spec.point_config(30).measurements, 3u);
    EXPECT_EQ(spec.point_config(10).measurements, 1u);
    EXPECT_THROW(spec.point_config(25), ConfigError);
    EXPECT_THROW(spec.point_config(50), ConfigError);
    spec.sweep_variable = SweepVariable::compression_rate;
    EXPECT_EQ(spec.point_config(0.5).measurements, 2u);
    spec.sweep_variable = SweepVariable::transmit_snr_db;
    EXPECT_NEAR(spec.point_config(30).scenario.transmit_snr, 1000.0, 1e-9);
}

TEST(Config, OutputDirectoryEnvironmentOverride) {
    ::setenv("CRSIM_OUTPUT_DIR", "/tmp/crsim-env-dir", 1);
    const auto spec = small_spec();
    ::unsetenv("CRSIM_OUTPUT_DIR");
    EXPECT_EQ(spec.output_dir, "/tmp/crsim-env-dir");
    EXPECT_NE(small_spec().output_dir, "/tmp/crsim-env-dir");
}

TEST(Run, SingleTrialSingleSchemeGivesOneRow) {
    auto spec = small_spec();
    spec.sweep_values = {2};
    spec.n_trials = 1;
    spec.schemes = {Scheme::genie_zf};
    const auto res = run_experiment(spec);
    ASSERT_EQ(res.rows.size(), 1u);
    EXPECT_EQ(res.rows[0].scheme, "genie_zf");
    EXPECT_EQ(res.rows[0].ci, 0.0);
    EXPECT_EQ(res.rows[0].detection_rate, 1.0);
    const std::string csv = format_csv(res.rows);
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 2);
    EXPECT_EQ(csv.back(), '\n');
}

TEST(Run, DeterministicAcrossRunsAndThreadCounts) {
    auto spec = small_spec();
    const std::string first = format_csv(run_experiment(spec).rows);
    const std::string second = format_csv(run_experiment(spec).rows);
    EXPECT_EQ(first, second);
    spec.threads = 1;
    EXPECT_EQ(format_csv(run_experiment(spec).rows), first);
}

TEST(Run, DroppingASchemeLeavesOthersUnchanged) {
    auto spec = small_spec();
    const auto all = run_experiment(spec).rows;
    spec.schemes = {Scheme::proposed, Scheme::genie_zf};
    const auto some = run_experiment(spec).rows;
    for (const auto& row : some) {
        const auto it = std::find_if(all.begin(), all.end(), [&](const ResultRow& r) {
            return r.scheme == row.scheme && r.sweep_value == row.sweep_value;
        });
        ASSERT_NE(it, all.end());
        EXPECT_EQ(it->mean_tput, row.mean_tput);
        EXPECT_EQ(it->detection_rate, row.detection_rate);
    }
}

TEST(Run, RowsAreWellFormed) {
    const auto res = run_experiment(small_spec());
    ASSERT_EQ(res.rows.size(), 2 * kAllSchemes.size());
    for (const auto& r : res.rows) {
        EXPECT_GE(r.detection_rate, 0.0);
        EXPECT_LE(r.detection_rate, 1.0);
        EXPECT_GE(r.ci, 0.0);
        EXPECT_EQ(r.invalid + r.valid_trials, 6u);
        EXPECT_EQ(r.wall_ms, 0.0);
    }
    EXPECT_EQ(res.metadata.at("schema_version"), kSchemaVersion);
    EXPECT_EQ(res.metadata.at("log_base"), 2.0);
    EXPECT_EQ(res.metadata.at("code_version"), version_string());
    EXPECT_TRUE(res.metadata.contains("config"));
}

TEST(Csv, HeaderAndRoundTrip) {
    std::vector<ResultRow> rows(2);
    rows[0] = {0.1, "proposed", 1.0 / 3.0, 2e-17, 0.75, 3, 12.5};
    rows[1] = {1e300, "genie_zf", -0.0, 1.2345678901234567, 1.0, 0, 0.0};
    const std::string csv = format_csv(rows);
    EXPECT_EQ(csv.substr(0, csv.find('\n')), kCsvHeader);
    const auto back = parse_csv(csv);
    ASSERT_EQ(back.size(), rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        EXPECT_EQ(back[i].scheme, rows[i].scheme);
        EXPECT_NEAR(back[i].sweep_value, rows[i].sweep_value, 1e-12 * std::abs(rows[i].sweep_value));
        EXPECT_NEAR(back[i].mean_tput, rows[i].mean_tput, 1e-12);
        EXPECT_NEAR(back[i].ci, rows[i].ci, 1e-12);
        EXPECT_NEAR(back[i].detection_rate, rows[i].detection_rate, 1e-12);
        EXPECT_EQ(back[i].invalid, rows[i].invalid);
        EXPECT_NEAR(back[i].wall_ms, rows[i].wall_ms, 1e-12);
    }
    EXPECT_THROW(parse_csv("a,b\n1,2\n"), ConfigError);
}

TEST(Csv, UnwritablePathIsAnIoError) {
    std::vector<ResultRow> rows(1);
    EXPECT_THROW(write_csv(rows, "/proc/crsim/no/such/dir/x.csv"), IoError);
}

TEST(Csv, EmitWritesCsvAndJson) {
    auto spec = small_spec();
    spec.n_trials = 2;
    spec.schemes = {Scheme::omp_zf};
    const auto res = run_experiment(spec);
    const auto dir = std::filesystem::temp_directory_path() / "crsim_emit_test";
    std::filesystem::remove_all(dir);
    const auto csv_path = emit_results(res, dir / "nested", "unit");
    EXPECT_TRUE(std::filesystem::exists(csv_path));
    EXPECT_TRUE(std::filesystem::exists(dir / "nested" / "unit.json"));
    std::ifstream in(csv_path);
    std::stringstream ss;
    ss << in.rdbuf();
    EXPECT_EQ(ss.str(), format_csv(res.rows));
    std::ifstream js(dir / "nested" / "unit.json");
    const auto doc = nlohmann::json::parse(js);
    EXPECT_EQ(doc.at("rows").size(), res.rows.size());
    std::filesystem::remove_all(dir);
}

TEST(Stats, StudentTHalfWidth) {
    EXPECT_EQ(t_confidence_halfwidth({}), 0.0);
    EXPECT_EQ(t_confidence_halfwidth({4.2}), 0.0);
    // sd = sqrt(2.5), t_{0.975,4} = 2.7764451051977987
    EXPECT_NEAR(t_confidence_halfwidth({1, 2, 3, 4, 5}), 2.7764451051977987 * std::sqrt(2.5) / std::sqrt(5.0), 1e-12);
    EXPECT_EQ(t_confidence_halfwidth({3, 3, 3}), 0.0);
}

} // namespace
} // namespace crsim
