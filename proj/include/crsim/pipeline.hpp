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

#include "crsim/analysis.hpp"
#include "crsim/compression.hpp"
#include "crsim/recovery.hpp"
#include "crsim/scenario.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

namespace crsim {

enum class Scheme { proposed, mmse_joint, mmse_separate, omp_zf, genie_zf };

inline constexpr std::array<Scheme, 5> kAllSchemes{Scheme::proposed, Scheme::mmse_joint, Scheme::mmse_separate,
                                                   Scheme::omp_zf, Scheme::genie_zf};

std::string_view scheme_name(Scheme s) noexcept;
std::optional<Scheme> parse_scheme(std::string_view name) noexcept;

// Everything one trial needs besides its seed.
struct TrialConfig {
    ScenarioConfig scenario;
    std::size_t measurements = 8;   // R per RRH
    QuantizerConfig quantizer;
    double lambda = 0;              // <= 0 selects sqrt(2 N_c)
    std::optional<double> adaptive_delta;  // when set, lambda = (P N_c / (4 c2^2))^(1/4)
    bool add_noise = true;
    double mmse_prior_scale = 1.0;  // joint MMSE prior power = scale * P
    double log_base = 2.0;
    BasisPursuitOptions bp;

    double effective_lambda() const;
    double compression_rate() const;
    void validate() const;
};

// All random draws of one trial. Every scheme evaluated on the same
// realization sees the same channel, signal, noise and compression matrices.
struct TrialRealization {
    ChannelRealization channel;
    SparseSignal signal;
    ReceivedSignals received;
    CompressionSet compression;
    CMatrix theta;
    CMatrix a_block;
    CVector z_clean;            // before quantization
    CVector z;                  // what the BBU sees
    CVector aggregate_noise;    // [A_i n_i]
    double quantization_error = 0;
    double lambda = 0;
};

TrialRealization realize_trial(const TrialConfig& cfg, std::uint64_t seed);

// Noise covariance used for rates: A A^H, plus white quantization noise at
// the realized per-sample error power when quantization is on.
CMatrix effective_noise_covariance(const TrialRealization& trial);

struct SchemeOutcome {
    double sum_rate = 0;
    bool detection_correct = false;
    bool valid = true;
    Support support;            // sorted; empty for schemes without detection
    CVector x_est;
    double elapsed_ms = 0;
};

SchemeOutcome evaluate_scheme(Scheme scheme, const TrialRealization& trial, const TrialConfig& cfg);

// Full proposed-scheme detail for diagnostics.
RecoveryResult run_proposed(const TrialRealization& trial, const TrialConfig& cfg);

// Empirical Pr(T_hat == T) of the proposed scheme over independent trials.
// Trials whose l1 solve failed are excluded and counted.
struct DetectionEstimate {
    Proportion rate;
    std::size_t invalid_trials = 0;
};

DetectionEstimate detection_probability_mc(const TrialConfig& cfg, std::size_t n_trials, unsigned threads = 0);

} // namespace crsim
