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

#include "crsim/pipeline.hpp"

#include "crsim/error.hpp"
#include "crsim/parallel.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

namespace crsim {

std::string_view scheme_name(Scheme s) noexcept {
    switch (s) {
    case Scheme::proposed: return "proposed";
    case Scheme::mmse_joint: return "mmse_joint";
    case Scheme::mmse_separate: return "mmse_separate";
    case Scheme::omp_zf: return "omp_zf";
    case Scheme::genie_zf: return "genie_zf";
    }
    return "unknown";
}

std::optional<Scheme> parse_scheme(std::string_view name) noexcept {
    for (Scheme s : kAllSchemes)
        if (scheme_name(s) == name) return s;
    return std::nullopt;
}

double TrialConfig::effective_lambda() const {
    if (adaptive_delta) return adaptive_lambda(scenario.transmit_snr, scenario.num_subcarriers, *adaptive_delta);
    return lambda > 0 ? lambda : default_lambda(scenario.num_subcarriers);
}

double TrialConfig::compression_rate() const {
    return static_cast<double>(measurements) / static_cast<double>(scenario.num_subcarriers);
}

void TrialConfig::validate() const {
    scenario.validate();
    quantizer.validate();
    if (measurements < 1 || measurements > scenario.num_subcarriers)
        throw ConfigError("measurements per RRH must lie in [1, N_c], got " + std::to_string(measurements));
    if (!(lambda >= 0) || !std::isfinite(lambda)) throw ConfigError("lambda must be finite and non-negative");
    if (!(mmse_prior_scale > 0)) throw ConfigError("mmse prior scale must be positive");
    if (!(log_base > 0) || log_base == 1.0) throw ConfigError("log base must be positive and != 1");
    if (adaptive_delta && !(*adaptive_delta >= 0 && *adaptive_delta < kRicLimit))
        throw ConfigError("adaptive lambda needs delta in [0, sqrt(2)-1)");
    if (bp.max_iter < 1) throw ConfigError("bp max_iter must be positive");
    if (!(bp.tolerance > 0)) throw ConfigError("bp tolerance must be positive");
}

TrialRealization realize_trial(const TrialConfig& cfg, std::uint64_t seed) {
    cfg.validate();
    const ScenarioConfig& sc = cfg.scenario;
    Engine geo_rng = make_engine(seed, Stream::geometry);
    Engine ch_rng = make_engine(seed, Stream::channel);
    Engine sig_rng = make_engine(seed, Stream::signal);
    Engine noise_rng = make_engine(seed, Stream::noise);
    Engine comp_rng = make_engine(seed, Stream::compression);

    TrialRealization t;
    const Geometry geo = generate_geometry(sc, geo_rng);
    t.channel = generate_channel(sc, geo, ch_rng);
    t.signal = generate_signal(sc, sig_rng);
    t.received = received_signals(t.channel, t.signal.x, noise_rng, cfg.add_noise);
    t.compression = generate_compression_matrices(sc.num_rrh, cfg.measurements, sc.num_subcarriers, comp_rng);

    std::vector<CVector> clean, sent, noise;
    double q_energy = 0;
    for (std::size_t i = 0; i < sc.num_rrh; ++i) {
        CVector zi = compress(t.compression[i], t.received.y[i]);
        QuantizedVector q = quantize(zi, cfg.quantizer);
        q_energy += q.error_norm * q.error_norm;
        noise.push_back(compress(t.compression[i], t.received.noise[i]));
        clean.push_back(std::move(zi));
        sent.push_back(std::move(q.values));
    }
    t.z_clean = stack(clean);
    t.z = stack(sent);
    t.aggregate_noise = stack(noise);
    t.quantization_error = std::sqrt(q_energy);
    t.theta = assemble_theta(t.channel, t.compression);
    t.a_block = block_diagonal(t.compression);
    t.lambda = cfg.effective_lambda();
    return t;
}

CMatrix effective_noise_covariance(const TrialRealization& trial) {
    CMatrix cov = trial.a_block * trial.a_block.adjoint();
    if (trial.quantization_error > 0 && trial.z.size() > 0) {
        const double per_sample = trial.quantization_error * trial.quantization_error / static_cast<double>(trial.z.size());
        cov.diagonal().array() += per_sample;
    }
    return cov;
}

RecoveryResult run_proposed(const TrialRealization& trial, const TrialConfig& cfg) {
    return recover_joint(trial.theta, trial.z, trial.lambda, cfg.bp);
}

namespace {

// Correct detection for s > 0 means the estimated support equals T. With no
// active user the detector still seeds one index; that case counts as
// correct when the residual already met lambda at the first step.
bool detection_matches(const Support& estimate, const SparseSignal& signal, double residual, double lambda) {
    if (signal.support.empty()) return estimate.size() <= 1 && residual <= lambda;
    return normalized(estimate) == signal.support;
}

double separate_mmse_sum_rate(const ChannelRealization& ch, const Support& truth, double power, double log_base) {
    const std::vector<std::size_t> serving = serving_rrh(ch);
    const double ln_base = std::log(log_base);
    double total = 0;
    for (std::size_t u : truth) {
        const std::size_t i = serving[u];
        const std::size_t c = ch.subcarrier_of(u);
        double interference = 0;
        for (std::size_t j : truth)
            if (j != u && ch.subcarrier_of(j) == c) interference += power * std::norm(ch.gain(i, j));
        total += std::log1p(power * std::norm(ch.gain(i, u)) / (interference + 1.0)) / ln_base;
    }
    return total;
}

} // namespace

SchemeOutcome evaluate_scheme(Scheme scheme, const TrialRealization& trial, const TrialConfig& cfg) {
    const auto start = std::chrono::steady_clock::now();
    const double power = cfg.scenario.transmit_snr;
    const Support& truth = trial.signal.support;
    const bool all_active = truth.size() == static_cast<std::size_t>(trial.theta.cols());

    SchemeOutcome out;
    switch (scheme) {
    case Scheme::proposed:
    case Scheme::omp_zf: {
        const RecoveryResult rec = scheme == Scheme::proposed ? run_proposed(trial, cfg)
                                                              : omp_zf_baseline(trial.theta, trial.z, trial.lambda);
        out.valid = rec.valid;
        out.support = rec.support_est;
        out.x_est = rec.x_final;
        out.detection_correct = detection_matches(rec.support_est, trial.signal, rec.residual_norm, trial.lambda);
        out.sum_rate = sum_capacity(trial.theta, truth, rec.support_est, power, effective_noise_covariance(trial),
                                    cfg.log_base).sum_rate;
        break;
    }
    case Scheme::genie_zf: {
        const ZeroForcingResult zf = genie_zf_baseline(trial.theta, truth, trial.z);
        out.support = truth;
        out.x_est = zf.x;
        out.detection_correct = true;
        out.sum_rate = sum_capacity(trial.theta, truth, truth, power, effective_noise_covariance(trial), cfg.log_base).sum_rate;
        break;
    }
    case Scheme::mmse_joint: {
        const CMatrix w = mmse_joint_filter(trial.theta, cfg.mmse_prior_scale * power, trial.a_block * trial.a_block.adjoint());
        out.x_est = w * trial.z;
        out.detection_correct = all_active;
        out.sum_rate = linear_filter_sum_rate(w, trial.theta, truth, power, effective_noise_covariance(trial), cfg.log_base);
        break;
    }
    case Scheme::mmse_separate: {
        out.x_est = mmse_separate_baseline(trial.channel, trial.received.y, power);
        out.detection_correct = all_active;
        out.sum_rate = separate_mmse_sum_rate(trial.channel, truth, power, cfg.log_base);
        break;
    }
    }
    out.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return out;
}

DetectionEstimate detection_probability_mc(const TrialConfig& cfg, std::size_t n_trials, unsigned threads) {
    cfg.validate();
    std::vector<int> outcome(n_trials, 0);  // 1 correct, 0 wrong, -1 invalid
    parallel_for(n_trials, threads, [&](std::size_t i) {
        const TrialRealization t = realize_trial(cfg, trial_seed(cfg.scenario.master_seed, 0, i));
        try {
            const RecoveryResult rec = run_proposed(t, cfg);
            if (!rec.valid) {
                outcome[i] = -1;
                return;
            }
            outcome[i] = detection_matches(rec.support_est, t.signal, rec.residual_norm, t.lambda) ? 1 : 0;
        } catch (const NumericalError&) {
            outcome[i] = -1;
        }
    });
    DetectionEstimate est;
    std::size_t ok = 0, counted = 0;
    for (int o : outcome) {
        if (o < 0) {
            ++est.invalid_trials;
            continue;
        }
        ++counted;
        ok += static_cast<std::size_t>(o);
    }
    est.rate = wilson_interval(ok, counted);
    return est;
}

} // namespace crsim
