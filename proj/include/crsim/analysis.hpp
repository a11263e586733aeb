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

#include "crsim/linalg.hpp"
#include "crsim/rng.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace crsim {

// ---- sum capacity with a linear receiver --------------------------------

struct CapacityReport {
    double sum_rate = 0;                  // in units of log_base
    std::vector<double> stream_power;     // P_l, one per detected index
    std::vector<double> psi_diag;         // alpha_l
    double log_base = 2;
    std::size_t dropped_streams = 0;      // alpha_l not finite or <= 0
    bool rank_deficient = false;
};

// Interference-plus-noise covariance seen after ZF on `detected`:
//   Psi = Theta_D^+ (P Theta_M Theta_M^H + C) (Theta_D^+)^H
// where M are the true users the detector missed and C the noise covariance.
CMatrix zf_interference_covariance(const CMatrix& theta, const Support& truth, const Support& detected,
                                   double power, const CMatrix& noise_covariance);

// Psi for a correct support, through the normal equations
//   (Theta^H Theta)^-1 Theta^H C Theta (Theta^H Theta)^-1.
// Algebraically equal to the general form when nothing is missed.
CMatrix zf_noise_covariance_normal_equations(const CMatrix& theta, const Support& support,
                                             const CMatrix& noise_covariance);

// R_sum = sum_l log(1 + P_l / alpha_l); P_l = P for detected indices in the
// true support and 0 otherwise.
CapacityReport sum_capacity(const CMatrix& theta, const Support& truth, const Support& detected, double power,
                            const CMatrix& noise_covariance, double log_base = 2.0);

// Sum rate of an arbitrary linear filter W (rows indexed by user) over the
// true active users, every other active user treated as interference.
double linear_filter_sum_rate(const CMatrix& filter, const CMatrix& theta, const Support& truth, double power,
                              const CMatrix& noise_covariance, double log_base = 2.0);

// ---- restricted isometry constant --------------------------------------

struct RicEstimate {
    double delta = 0;
    std::size_t order = 0;
    std::size_t supports_checked = 0;
    bool lower_bound_only = false;   // sampled mode
    Support worst_support;
};

// Number of k-subsets of n items, saturating at the largest double.
double binomial_count(std::size_t n, std::size_t k);

// ||Theta_S^H Theta_S - I||_2 for one support.
double support_distortion(const CMatrix& theta, const Support& support);

inline constexpr double kMaxExhaustiveSupports = 1e6;

// max over |S| = k of support_distortion; by eigenvalue interlacing this is
// also the max over |S| <= k. Throws DomainError when C(n, k) exceeds
// max_supports.
RicEstimate estimate_ric(const CMatrix& theta, std::size_t k, double max_supports = kMaxExhaustiveSupports,
                         unsigned threads = 1);

// Max over `samples` random k-supports; a lower bound on the true constant.
RicEstimate estimate_ric_sampled(const CMatrix& theta, std::size_t k, std::size_t samples, Engine& rng);

// ---- closed-form bounds --------------------------------------------------

inline constexpr double kRicLimit = 1.4142135623730951 - 1.0;  // sqrt(2) - 1

// (lambda^2 - N_c) / (4 N_c)
double noise_constant(double lambda, std::size_t num_subcarriers);

// 4 sqrt(1+delta) / (1 - (1+sqrt 2) delta); DomainError outside [0, sqrt2-1).
double recovery_constant(double delta);

// c2 * lambda. +infinity within 1e-12 below the pole.
double bp_error_bound(double lambda, double delta);

// 1 - exp(-c1 M), requires lambda >= sqrt(2 N_c).
double noise_containment_probability(double lambda, std::size_t num_subcarriers, std::size_t num_rrh);

struct DetectionBound {
    double raw = 0;
    double clipped = 0;
};

// pr_rip * (1 - exp(-c1 M) - s (1 - exp(-2 (c2 lambda)^2 / P_min)))
DetectionBound detection_probability_bound(std::size_t s, std::size_t num_rrh, std::size_t num_subcarriers,
                                           double lambda, double delta, double p_min, double pr_rip);

struct CapacityBounds {
    double lower = 0;
    double upper = 0;
};

// upper = s log(1 + M alpha P), lower = pr_rip * s log(1 + (1-delta) M alpha P).
CapacityBounds capacity_bounds(std::size_t s, std::size_t num_rrh, double alpha, double power, double delta,
                               double pr_rip, double log_base = 2.0);

// RIP probability preset 1 - 4/(K N_c).
double rip_probability_preset(std::size_t num_users);

CapacityBounds capacity_bounds_rip_preset(std::size_t s, std::size_t num_rrh, double alpha, double power,
                                          double delta, std::size_t num_users, double log_base = 2.0);

// High-SNR threshold (P N_c / (4 c2^2))^(1/4).
double adaptive_lambda(double power, std::size_t num_subcarriers, double delta);

// ---- Monte Carlo helpers ---------------------------------------------------

struct Proportion {
    std::size_t successes = 0;
    std::size_t trials = 0;
    double estimate = 0;
    double lower = 0;
    double upper = 0;
};

// Wilson score interval; z defaults to the two-sided 95% quantile.
Proportion wilson_interval(std::size_t successes, std::size_t trials, double z = 1.959963984540054);

// Empirical Pr(||n|| <= lambda) for the compressed aggregate noise
// n = [A_1 n_1; ...; A_M n_M], fresh compression matrices on every draw.
Proportion noise_containment_mc(std::size_t num_subcarriers, std::size_t num_rrh, std::size_t measurements,
                                double lambda, std::size_t draws, std::uint64_t seed);

} // namespace crsim
