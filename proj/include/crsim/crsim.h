/*
 * SPDX-License-Identifier: Apache-2.0
 *
 * crsim - compressive fronthaul simulation for uplink C-RAN
 * Copyright (C) 2026 The crsim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/*
 * C interface of libcrsim.
 *
 * Every function returns a crsim_status. On failure the thread-local message
 * returned by crsim_last_error() describes the problem; it stays valid until
 * the next failing call on the same thread. Handles are opaque and owned by
 * the caller, who releases them with the matching *_free function (passing
 * NULL is allowed).
 */

#ifndef CRSIM_CRSIM_H
#define CRSIM_CRSIM_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(CRSIM_BUILDING_LIBRARY)
#    define CRSIM_API __declspec(dllexport)
#  else
#    define CRSIM_API __declspec(dllimport)
#  endif
#else
#  define CRSIM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum crsim_status {
    CRSIM_OK = 0,
    CRSIM_ERR_CONFIG = 1,          /* invalid parameter or config value */
    CRSIM_ERR_RUNTIME = 2,         /* numerical failure during a run */
    CRSIM_ERR_DOMAIN = 3,          /* formula evaluated outside its domain */
    CRSIM_ERR_IO = 4,
    CRSIM_ERR_INVALID_ARGUMENT = 5 /* NULL handle, index out of range */
} crsim_status;

typedef struct crsim_experiment crsim_experiment;
typedef struct crsim_results crsim_results;

CRSIM_API const char* crsim_version(void);
CRSIM_API const char* crsim_last_error(void);

/* ---- experiments ------------------------------------------------------ */

CRSIM_API crsim_status crsim_experiment_load(const char* path, crsim_experiment** out);
CRSIM_API crsim_status crsim_experiment_parse(const char* text, crsim_experiment** out);
/* Overrides one "section.key" value; validated together with the rest. */
CRSIM_API crsim_status crsim_experiment_set(crsim_experiment* exp, const char* key, const char* value);
CRSIM_API crsim_status crsim_experiment_validate(const crsim_experiment* exp);
/* Name and output directory after overrides; valid while exp lives. */
CRSIM_API crsim_status crsim_experiment_name(const crsim_experiment* exp, const char** name);
CRSIM_API crsim_status crsim_experiment_output_dir(const crsim_experiment* exp, const char** dir);
CRSIM_API crsim_status crsim_experiment_run(const crsim_experiment* exp, crsim_results** out);
CRSIM_API void crsim_experiment_free(crsim_experiment* exp);

typedef struct crsim_result_row {
    double sweep_value;
    const char* scheme; /* valid while the results handle lives */
    double mean_tput;
    double ci;
    double detection_rate;
    uint64_t invalid;
    double wall_ms;
    uint64_t measurements;
    uint32_t bits_per_dimension;
} crsim_result_row;

CRSIM_API crsim_status crsim_results_row_count(const crsim_results* res, size_t* count);
CRSIM_API crsim_status crsim_results_get_row(const crsim_results* res, size_t index, crsim_result_row* row);
CRSIM_API crsim_status crsim_results_write_csv(const crsim_results* res, const char* path);
CRSIM_API crsim_status crsim_results_write_json(const crsim_results* res, const char* path);
/* Writes <dir>/<name>.csv and <dir>/<name>.json, creating dir if needed. */
CRSIM_API crsim_status crsim_results_emit(const crsim_results* res, const char* dir, const char* name);
CRSIM_API void crsim_results_free(crsim_results* res);

/* ---- restricted isometry constant ------------------------------------------ */

typedef struct crsim_ric_params {
    uint64_t num_rrh;            /* M */
    uint64_t users_per_carrier;  /* K */
    uint64_t num_subcarriers;    /* N_c */
    uint64_t measurements;       /* R, 1..N_c */
    uint64_t order;              /* k */
    uint64_t seed;
    uint64_t samples;            /* 0: exhaustive; otherwise sampled lower bound */
    double cell_radius;
    double pathloss_exponent;
} crsim_ric_params;

typedef struct crsim_ric_result {
    double delta;
    uint64_t supports_checked;
    int lower_bound_only;
    double max_large_scale;      /* empirical g-bar of the drawn channel */
} crsim_ric_result;

CRSIM_API void crsim_ric_params_default(crsim_ric_params* params);
/* Draws one channel and compression realization and estimates its RIC. */
CRSIM_API crsim_status crsim_estimate_ric(const crsim_ric_params* params, crsim_ric_result* out);

/* ---- closed-form bounds ---------------------------------------------------- */

CRSIM_API crsim_status crsim_recovery_constant(double delta, double* c2);
CRSIM_API crsim_status crsim_bp_error_bound(double lambda, double delta, double* bound);
CRSIM_API crsim_status crsim_noise_containment_probability(double lambda, uint64_t num_subcarriers,
                                                           uint64_t num_rrh, double* probability);
CRSIM_API crsim_status crsim_detection_probability_bound(uint64_t s, uint64_t num_rrh, uint64_t num_subcarriers,
                                                         double lambda, double delta, double p_min, double pr_rip,
                                                         double* raw, double* clipped);
CRSIM_API crsim_status crsim_capacity_bounds(uint64_t s, uint64_t num_rrh, double alpha, double power, double delta,
                                             double pr_rip, double log_base, double* lower, double* upper);
/* Same with the RIP probability preset 1 - 4/(K N_c). */
CRSIM_API crsim_status crsim_capacity_bounds_rip_preset(uint64_t s, uint64_t num_rrh, double alpha, double power,
                                                        double delta, uint64_t num_users, double log_base,
                                                        double* lower, double* upper);

#ifdef __cplusplus
}
#endif

#endif /* CRSIM_CRSIM_H */
