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

// Batch front end. Talks to the library only through crsim.h.

#include "crsim/crsim.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;

int exit_code_for(crsim_status st) {
    switch (st) {
    case CRSIM_OK: return kExitOk;
    case CRSIM_ERR_CONFIG:
    case CRSIM_ERR_DOMAIN:
    case CRSIM_ERR_INVALID_ARGUMENT: return kExitConfig;
    default: return kExitRuntime;
    }
}

int report(crsim_status st, const char* context) {
    std::cerr << "crsim " << context << ": " << crsim_last_error() << '\n';
    return exit_code_for(st);
}

struct ExperimentHandle {
    crsim_experiment* ptr = nullptr;
    ~ExperimentHandle() { crsim_experiment_free(ptr); }
};

struct ResultsHandle {
    crsim_results* ptr = nullptr;
    ~ResultsHandle() { crsim_results_free(ptr); }
};

struct ExperimentArgs {
    std::string config;
    std::vector<std::string> sets;
    std::string seed;
    std::string trials;
    std::string threads;
    std::string output_dir;
    bool no_json = false;
    bool quiet = false;
};

void add_experiment_flags(CLI::App* cmd, ExperimentArgs& args) {
    cmd->add_option("config", args.config, "Experiment config file")->required();
    cmd->add_option("--set", args.sets, "Override a config value, section.key=value (repeatable)");
    cmd->add_option("--seed", args.seed, "Override scenario.master_seed");
    cmd->add_option("--trials", args.trials, "Override experiment.n_trials");
    cmd->add_option("--threads", args.threads, "Override experiment.threads (0 = all cores)");
    cmd->add_option("--output-dir", args.output_dir, "Override output.directory");
}

// Loads the config and applies flag overrides in order: --set, then named flags.
int load_experiment(const ExperimentArgs& args, ExperimentHandle& exp) {
    if (auto st = crsim_experiment_load(args.config.c_str(), &exp.ptr); st != CRSIM_OK) {
        report(st, "config");
        return kExitConfig;
    }
    std::vector<std::pair<std::string, std::string>> overrides;
    for (const auto& s : args.sets) {
        const auto eq = s.find('=');
        if (eq == std::string::npos || eq == 0) {
            std::cerr << "crsim config: --set expects section.key=value, got '" << s << "'\n";
            return kExitConfig;
        }
        overrides.emplace_back(s.substr(0, eq), s.substr(eq + 1));
    }
    if (!args.seed.empty()) overrides.emplace_back("scenario.master_seed", args.seed);
    if (!args.trials.empty()) overrides.emplace_back("experiment.n_trials", args.trials);
    if (!args.threads.empty()) overrides.emplace_back("experiment.threads", args.threads);
    if (!args.output_dir.empty()) overrides.emplace_back("output.directory", args.output_dir);
    for (const auto& [k, v] : overrides)
        if (auto st = crsim_experiment_set(exp.ptr, k.c_str(), v.c_str()); st != CRSIM_OK) return report(st, "config");
    if (auto st = crsim_experiment_validate(exp.ptr); st != CRSIM_OK) return report(st, "config");
    return kExitOk;
}

int cmd_validate(const ExperimentArgs& args) {
    ExperimentHandle exp;
    if (int rc = load_experiment(args, exp); rc != kExitOk) return rc;
    std::cout << "ok: " << args.config << '\n';
    return kExitOk;
}

int cmd_run(const ExperimentArgs& args) {
    ExperimentHandle exp;
    if (int rc = load_experiment(args, exp); rc != kExitOk) return rc;
    const char* name = nullptr;
    const char* dir = nullptr;
    if (auto st = crsim_experiment_name(exp.ptr, &name); st != CRSIM_OK) return report(st, "config");
    if (auto st = crsim_experiment_output_dir(exp.ptr, &dir); st != CRSIM_OK) return report(st, "config");
    // an explicit flag beats CRSIM_OUTPUT_DIR, which beats the file
    const std::string name_s = name, dir_s = args.output_dir.empty() ? std::string(dir) : args.output_dir;

    ResultsHandle res;
    if (auto st = crsim_experiment_run(exp.ptr, &res.ptr); st != CRSIM_OK) return report(st, "run");
    crsim_status st = CRSIM_OK;
    if (args.no_json) {
        std::error_code ec;
        std::filesystem::create_directories(dir_s, ec);
        if (ec) {
            std::cerr << "crsim output: cannot create " << dir_s << ": " << ec.message() << '\n';
            return kExitRuntime;
        }
        st = crsim_results_write_csv(res.ptr, (std::filesystem::path(dir_s) / (name_s + ".csv")).c_str());
    } else {
        st = crsim_results_emit(res.ptr, dir_s.c_str(), name_s.c_str());
    }
    if (st != CRSIM_OK) return report(st, "output");

    if (!args.quiet) {
        size_t n = 0;
        crsim_results_row_count(res.ptr, &n);
        std::printf("%-12s %-14s %12s %10s %10s %8s\n", "sweep", "scheme", "tput/user", "ci", "detect", "invalid");
        for (size_t i = 0; i < n; ++i) {
            crsim_result_row row{};
            crsim_results_get_row(res.ptr, i, &row);
            std::printf("%-12g %-14s %12.4f %10.4f %10.3f %8llu\n", row.sweep_value, row.scheme, row.mean_tput, row.ci,
                        row.detection_rate, static_cast<unsigned long long>(row.invalid));
        }
        std::printf("wrote %s/%s.csv\n", dir_s.c_str(), name_s.c_str());
    }
    return kExitOk;
}

struct RicArgs {
    std::uint64_t kn = 12;
    std::uint64_t k = 2;
    std::uint64_t nc = 4;
    std::uint64_t m = 4;
    std::uint64_t r = 0;
    std::uint64_t seed = 1;
    std::uint64_t samples = 0;
    double radius = 2000.0;
    double exponent = 2.5;
};

int cmd_ric(const RicArgs& a) {
    if (a.nc == 0 || a.kn % a.nc != 0) {
        std::cerr << "crsim ric: --kn must be a positive multiple of --nc\n";
        return kExitConfig;
    }
    crsim_ric_params p;
    crsim_ric_params_default(&p);
    p.num_rrh = a.m;
    p.num_subcarriers = a.nc;
    p.users_per_carrier = a.kn / a.nc;
    p.measurements = a.r == 0 ? a.nc : a.r;
    p.order = a.k;
    p.seed = a.seed;
    p.samples = a.samples;
    p.cell_radius = a.radius;
    p.pathloss_exponent = a.exponent;
    crsim_ric_result out{};
    if (auto st = crsim_estimate_ric(&p, &out); st != CRSIM_OK) return report(st, "ric");
    const nlohmann::json doc{{"delta", out.delta},
                             {"order", a.k},
                             {"supports_checked", out.supports_checked},
                             {"lower_bound_only", out.lower_bound_only != 0},
                             {"below_recovery_limit", out.delta < std::sqrt(2.0) - 1.0},
                             {"max_large_scale", out.max_large_scale}};
    std::cout << doc.dump(2) << '\n';
    return kExitOk;
}

struct BoundsArgs {
    double delta = 0;
    double pr_rip = 1;
    std::uint64_t s = 1;
    std::uint64_t m = 1;
    double alpha = 1;
    double p = 1;
    double log_base = 2;
    std::uint64_t kn = 0;
    std::uint64_t nc = 0;
    double lambda = 0;
    double p_min = 0;
};

int cmd_bounds(const BoundsArgs& a) {
    nlohmann::json doc;
    double lower = 0, upper = 0;
    if (auto st = crsim_capacity_bounds(a.s, a.m, a.alpha, a.p, a.delta, a.pr_rip, a.log_base, &lower, &upper); st != CRSIM_OK)
        return report(st, "bounds");
    doc["capacity_lower"] = lower;
    doc["capacity_upper"] = upper;
    doc["log_base"] = a.log_base;

    double c2 = 0;
    if (auto st = crsim_recovery_constant(a.delta, &c2); st != CRSIM_OK) return report(st, "bounds");
    doc["c2"] = c2;

    if (a.kn > 0) {
        if (auto st = crsim_capacity_bounds_rip_preset(a.s, a.m, a.alpha, a.p, a.delta, a.kn, a.log_base, &lower, &upper);
            st != CRSIM_OK)
            return report(st, "bounds");
        doc["rip_preset_lower"] = lower;
        doc["rip_preset_upper"] = upper;
    }
    if (a.nc > 0) {
        const double lambda = a.lambda > 0 ? a.lambda : std::sqrt(2.0 * static_cast<double>(a.nc));
        doc["lambda"] = lambda;
        doc["c1"] = (lambda * lambda - static_cast<double>(a.nc)) / (4.0 * static_cast<double>(a.nc));
        double bp = 0;
        if (auto st = crsim_bp_error_bound(lambda, a.delta, &bp); st != CRSIM_OK) return report(st, "bounds");
        doc["bp_error_bound"] = bp;
        double noise = 0;
        if (auto st = crsim_noise_containment_probability(lambda, a.nc, a.m, &noise); st != CRSIM_OK)
            return report(st, "bounds");
        doc["noise_containment"] = noise;
        double raw = 0, clipped = 0;
        const double p_min = a.p_min > 0 ? a.p_min : a.p;
        if (auto st = crsim_detection_probability_bound(a.s, a.m, a.nc, lambda, a.delta, p_min, a.pr_rip, &raw, &clipped);
            st != CRSIM_OK)
            return report(st, "bounds");
        doc["detection_lower_raw"] = raw;
        doc["detection_lower_clipped"] = clipped;
    }
    std::cout << doc.dump(2) << '\n';
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"crsim: compressive fronthaul simulation for uplink C-RAN"};
    app.set_version_flag("--version", std::string(crsim_version()));
    app.require_subcommand(1);

    ExperimentArgs run_args, validate_args;
    auto* run = app.add_subcommand("run", "Run an experiment sweep and write CSV/JSON results");
    add_experiment_flags(run, run_args);
    run->add_flag("--no-json", run_args.no_json, "Write only the CSV");
    run->add_flag("-q,--quiet", run_args.quiet, "Do not print the summary table");

    auto* validate = app.add_subcommand("validate", "Check a config file without running it");
    add_experiment_flags(validate, validate_args);

    RicArgs ric_args;
    auto* ric = app.add_subcommand("ric", "Brute-force restricted isometry constant of one random measurement matrix");
    ric->add_option("--kn", ric_args.kn, "Total users K*N_c")->capture_default_str();
    ric->add_option("--k", ric_args.k, "Sparsity order")->capture_default_str();
    ric->add_option("--nc", ric_args.nc, "Subcarriers N_c")->capture_default_str();
    ric->add_option("--m", ric_args.m, "RRHs M")->capture_default_str();
    ric->add_option("--r", ric_args.r, "Measurements per RRH (default N_c)");
    ric->add_option("--seed", ric_args.seed, "Seed")->capture_default_str();
    ric->add_option("--samples", ric_args.samples, "Random supports for a sampled lower bound (0 = exhaustive)");
    ric->add_option("--radius", ric_args.radius, "Cell radius in meters")->capture_default_str();
    ric->add_option("--pathloss-exponent", ric_args.exponent, "Path loss exponent")->capture_default_str();

    BoundsArgs b;
    auto* bounds = app.add_subcommand("bounds", "Evaluate the closed-form capacity and detection bounds");
    bounds->add_option("--delta", b.delta, "Restricted isometry constant")->capture_default_str();
    bounds->add_option("--pr-rip", b.pr_rip, "Probability that the RIP holds")->capture_default_str();
    bounds->add_option("--s", b.s, "Active users")->capture_default_str();
    bounds->add_option("--m", b.m, "RRHs")->capture_default_str();
    bounds->add_option("--alpha", b.alpha, "Compression rate R/N_c")->capture_default_str();
    bounds->add_option("--p", b.p, "Transmit SNR, linear")->capture_default_str();
    bounds->add_option("--log-base", b.log_base, "Logarithm base for rates")->capture_default_str();
    bounds->add_option("--kn", b.kn, "K*N_c; adds the RIP-preset bounds");
    bounds->add_option("--nc", b.nc, "N_c; adds noise-containment and detection bounds");
    bounds->add_option("--lambda", b.lambda, "Residual threshold (default sqrt(2 N_c))");
    bounds->add_option("--p-min", b.p_min, "Smallest active-user power (default --p)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        std::cerr << app.help();
        return kExitConfig;
    }

    if (*run) return cmd_run(run_args);
    if (*validate) return cmd_validate(validate_args);
    if (*ric) return cmd_ric(ric_args);
    if (*bounds) return cmd_bounds(b);
    return kExitConfig;
}
