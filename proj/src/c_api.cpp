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

#include "crsim/crsim.h"

#include "crsim/analysis.hpp"
#include "crsim/error.hpp"
#include "crsim/experiment.hpp"
#include "crsim/pipeline.hpp"

#include <algorithm>
#include <exception>
#include <memory>
#include <string>

struct crsim_experiment {
    crsim::ConfigMap config;
    std::string name;
    std::string output_dir;
};

struct crsim_results {
    crsim::ExperimentResult result;
};

namespace {

thread_local std::string g_last_error;

crsim_status fail(crsim_status code, const char* what) {
    g_last_error = what ? what : "unknown error";
    return code;
}

// Maps the library's exception types onto status codes.
template <typename Fn>
crsim_status guarded(Fn&& fn) {
    try {
        fn();
        return CRSIM_OK;
    } catch (const crsim::ConfigError& e) {
        return fail(CRSIM_ERR_CONFIG, e.what());
    } catch (const crsim::DomainError& e) {
        return fail(CRSIM_ERR_DOMAIN, e.what());
    } catch (const crsim::IoError& e) {
        return fail(CRSIM_ERR_IO, e.what());
    } catch (const std::bad_alloc&) {
        return fail(CRSIM_ERR_RUNTIME, "out of memory");
    } catch (const std::exception& e) {
        return fail(CRSIM_ERR_RUNTIME, e.what());
    } catch (...) {
        return fail(CRSIM_ERR_RUNTIME, "unknown exception");
    }
}

crsim_status null_arg(const char* what) {
    return fail(CRSIM_ERR_INVALID_ARGUMENT, what);
}

void refresh(crsim_experiment* exp) {
    const crsim::ExperimentSpec spec = crsim::build_experiment(exp->config);
    exp->name = spec.name;
    exp->output_dir = spec.output_dir;
}

} // namespace

extern "C" {

const char* crsim_version(void) {
    static const std::string v = crsim::version_string();
    return v.c_str();
}

const char* crsim_last_error(void) {
    return g_last_error.c_str();
}

crsim_status crsim_experiment_load(const char* path, crsim_experiment** out) {
    if (!path || !out) return null_arg("crsim_experiment_load: NULL argument");
    *out = nullptr;
    return guarded([&] {
        auto exp = std::make_unique<crsim_experiment>();
        exp->config = crsim::load_config_file(path);
        crsim::check_config_structure(exp->config);
        *out = exp.release();
    });
}

crsim_status crsim_experiment_parse(const char* text, crsim_experiment** out) {
    if (!text || !out) return null_arg("crsim_experiment_parse: NULL argument");
    *out = nullptr;
    return guarded([&] {
        auto exp = std::make_unique<crsim_experiment>();
        exp->config = crsim::parse_config_text(text);
        crsim::check_config_structure(exp->config);
        *out = exp.release();
    });
}

crsim_status crsim_experiment_set(crsim_experiment* exp, const char* key, const char* value) {
    if (!exp || !key || !value) return null_arg("crsim_experiment_set: NULL argument");
    return guarded([&] {
        const auto& known = crsim::known_config_keys();
        if (std::find(known.begin(), known.end(), key) == known.end())
            throw crsim::ConfigError(std::string("unknown config key '") + key + "'");
        exp->config[key] = value;
    });
}

crsim_status crsim_experiment_validate(const crsim_experiment* exp) {
    if (!exp) return null_arg("crsim_experiment_validate: NULL handle");
    return guarded([&] { (void)crsim::build_experiment(exp->config); });
}

crsim_status crsim_experiment_name(const crsim_experiment* exp, const char** name) {
    if (!exp || !name) return null_arg("crsim_experiment_name: NULL argument");
    return guarded([&] {
        refresh(const_cast<crsim_experiment*>(exp));
        *name = exp->name.c_str();
    });
}

crsim_status crsim_experiment_output_dir(const crsim_experiment* exp, const char** dir) {
    if (!exp || !dir) return null_arg("crsim_experiment_output_dir: NULL argument");
    return guarded([&] {
        refresh(const_cast<crsim_experiment*>(exp));
        *dir = exp->output_dir.c_str();
    });
}

crsim_status crsim_experiment_run(const crsim_experiment* exp, crsim_results** out) {
    if (!exp || !out) return null_arg("crsim_experiment_run: NULL argument");
    *out = nullptr;
    return guarded([&] {
        const crsim::ExperimentSpec spec = crsim::build_experiment(exp->config);
        auto res = std::make_unique<crsim_results>();
        res->result = crsim::run_experiment(spec);
        *out = res.release();
    });
}

void crsim_experiment_free(crsim_experiment* exp) {
    delete exp;
}

crsim_status crsim_results_row_count(const crsim_results* res, size_t* count) {
    if (!res || !count) return null_arg("crsim_results_row_count: NULL argument");
    *count = res->result.rows.size();
    return CRSIM_OK;
}

crsim_status crsim_results_get_row(const crsim_results* res, size_t index, crsim_result_row* row) {
    if (!res || !row) return null_arg("crsim_results_get_row: NULL argument");
    if (index >= res->result.rows.size()) return fail(CRSIM_ERR_INVALID_ARGUMENT, "crsim_results_get_row: index out of range");
    const crsim::ResultRow& r = res->result.rows[index];
    row->sweep_value = r.sweep_value;
    row->scheme = r.scheme.c_str();
    row->mean_tput = r.mean_tput;
    row->ci = r.ci;
    row->detection_rate = r.detection_rate;
    row->invalid = r.invalid;
    row->wall_ms = r.wall_ms;
    row->measurements = r.measurements;
    row->bits_per_dimension = r.bits_per_dimension;
    return CRSIM_OK;
}

crsim_status crsim_results_write_csv(const crsim_results* res, const char* path) {
    if (!res || !path) return null_arg("crsim_results_write_csv: NULL argument");
    return guarded([&] { crsim::write_csv(res->result.rows, path); });
}

crsim_status crsim_results_write_json(const crsim_results* res, const char* path) {
    if (!res || !path) return null_arg("crsim_results_write_json: NULL argument");
    return guarded([&] { crsim::write_json(res->result, path); });
}

crsim_status crsim_results_emit(const crsim_results* res, const char* dir, const char* name) {
    if (!res || !dir || !name) return null_arg("crsim_results_emit: NULL argument");
    return guarded([&] { crsim::emit_results(res->result, dir, name); });
}

void crsim_results_free(crsim_results* res) {
    delete res;
}

void crsim_ric_params_default(crsim_ric_params* params) {
    if (!params) return;
    params->num_rrh = 4;
    params->users_per_carrier = 3;
    params->num_subcarriers = 4;
    params->measurements = 4;
    params->order = 2;
    params->seed = 1;
    params->samples = 0;
    params->cell_radius = 2000.0;
    params->pathloss_exponent = 2.5;
}

crsim_status crsim_estimate_ric(const crsim_ric_params* params, crsim_ric_result* out) {
    if (!params || !out) return null_arg("crsim_estimate_ric: NULL argument");
    return guarded([&] {
        crsim::ScenarioConfig sc;
        sc.num_rrh = params->num_rrh;
        sc.users_per_carrier = params->users_per_carrier;
        sc.num_subcarriers = params->num_subcarriers;
        sc.num_active = 0;
        sc.cell_radius = params->cell_radius;
        sc.pathloss_exponent = params->pathloss_exponent;
        sc.master_seed = params->seed;
        sc.validate();
        crsim::Engine geo_rng = crsim::make_engine(params->seed, crsim::Stream::geometry);
        crsim::Engine ch_rng = crsim::make_engine(params->seed, crsim::Stream::channel);
        crsim::Engine comp_rng = crsim::make_engine(params->seed, crsim::Stream::compression);
        const auto geo = crsim::generate_geometry(sc, geo_rng);
        const auto ch = crsim::generate_channel(sc, geo, ch_rng);
        const auto comp = crsim::generate_compression_matrices(sc.num_rrh, params->measurements, sc.num_subcarriers, comp_rng);
        const crsim::CMatrix theta = crsim::assemble_theta(ch, comp);
        crsim::RicEstimate est;
        if (params->samples == 0) {
            est = crsim::estimate_ric(theta, params->order);
        } else {
            crsim::Engine aux = crsim::make_engine(params->seed, crsim::Stream::auxiliary);
            est = crsim::estimate_ric_sampled(theta, params->order, params->samples, aux);
        }
        out->delta = est.delta;
        out->supports_checked = est.supports_checked;
        out->lower_bound_only = est.lower_bound_only ? 1 : 0;
        out->max_large_scale = ch.large_scale_matrix().maxCoeff();
    });
}

crsim_status crsim_recovery_constant(double delta, double* c2) {
    if (!c2) return null_arg("crsim_recovery_constant: NULL output");
    return guarded([&] { *c2 = crsim::recovery_constant(delta); });
}

crsim_status crsim_bp_error_bound(double lambda, double delta, double* bound) {
    if (!bound) return null_arg("crsim_bp_error_bound: NULL output");
    return guarded([&] { *bound = crsim::bp_error_bound(lambda, delta); });
}

crsim_status crsim_noise_containment_probability(double lambda, uint64_t num_subcarriers, uint64_t num_rrh,
                                                 double* probability) {
    if (!probability) return null_arg("crsim_noise_containment_probability: NULL output");
    return guarded([&] { *probability = crsim::noise_containment_probability(lambda, num_subcarriers, num_rrh); });
}

crsim_status crsim_detection_probability_bound(uint64_t s, uint64_t num_rrh, uint64_t num_subcarriers, double lambda,
                                               double delta, double p_min, double pr_rip, double* raw, double* clipped) {
    if (!raw || !clipped) return null_arg("crsim_detection_probability_bound: NULL output");
    return guarded([&] {
        const auto b = crsim::detection_probability_bound(s, num_rrh, num_subcarriers, lambda, delta, p_min, pr_rip);
        *raw = b.raw;
        *clipped = b.clipped;
    });
}

crsim_status crsim_capacity_bounds(uint64_t s, uint64_t num_rrh, double alpha, double power, double delta,
                                   double pr_rip, double log_base, double* lower, double* upper) {
    if (!lower || !upper) return null_arg("crsim_capacity_bounds: NULL output");
    return guarded([&] {
        const auto b = crsim::capacity_bounds(s, num_rrh, alpha, power, delta, pr_rip, log_base);
        *lower = b.lower;
        *upper = b.upper;
    });
}

crsim_status crsim_capacity_bounds_rip_preset(uint64_t s, uint64_t num_rrh, double alpha, double power, double delta,
                                              uint64_t num_users, double log_base, double* lower, double* upper) {
    if (!lower || !upper) return null_arg("crsim_capacity_bounds_rip_preset: NULL output");
    return guarded([&] {
        const auto b = crsim::capacity_bounds_rip_preset(s, num_rrh, alpha, power, delta, num_users, log_base);
        *lower = b.lower;
        *upper = b.upper;
    });
}

} // extern "C"
