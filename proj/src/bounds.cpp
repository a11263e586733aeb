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

#include "crsim/analysis.hpp"
#include "crsim/compression.hpp"
#include "crsim/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace crsim {

namespace {

void require_delta(double delta) {
    if (!(delta >= 0) || !(delta < kRicLimit))
        throw DomainError("delta must lie in [0, sqrt(2)-1), got " + std::to_string(delta));
}

void require_probability(double p, const char* what) {
    if (!(p >= 0 && p <= 1)) throw DomainError(std::string(what) + " must lie in [0, 1]");
}

} // namespace

double noise_constant(double lambda, std::size_t num_subcarriers) {
    if (num_subcarriers == 0) throw DomainError("N_c must be positive");
    const double nc = static_cast<double>(num_subcarriers);
    return (lambda * lambda - nc) / (4.0 * nc);
}

double recovery_constant(double delta) {
    require_delta(delta);
    return 4.0 * std::sqrt(1.0 + delta) / (1.0 - (1.0 + std::sqrt(2.0)) * delta);
}

double bp_error_bound(double lambda, double delta) {
    if (!(lambda >= 0)) throw DomainError("lambda must be non-negative");
    require_delta(delta);
    if (delta > kRicLimit - 1e-12) return std::numeric_limits<double>::infinity();
    return recovery_constant(delta) * lambda;
}

double noise_containment_probability(double lambda, std::size_t num_subcarriers, std::size_t num_rrh) {
    if (num_subcarriers == 0) throw DomainError("N_c must be positive");
    if (lambda < std::sqrt(2.0 * static_cast<double>(num_subcarriers)))
        throw DomainError("noise containment bound requires lambda >= sqrt(2 N_c)");
    return -std::expm1(-noise_constant(lambda, num_subcarriers) * static_cast<double>(num_rrh));
}

DetectionBound detection_probability_bound(std::size_t s, std::size_t num_rrh, std::size_t num_subcarriers,
                                           double lambda, double delta, double p_min, double pr_rip) {
    require_probability(pr_rip, "pr_rip");
    if (!(p_min > 0)) throw DomainError("P_min must be positive");
    const double noise_ok = noise_containment_probability(lambda, num_subcarriers, num_rrh);
    const double c2l = recovery_constant(delta) * lambda;
    // 1 - exp(-a) with a -> 0 as P_min -> infinity
    const double weak_user = -std::expm1(-2.0 * c2l * c2l / p_min);
    DetectionBound out;
    out.raw = pr_rip * (noise_ok - static_cast<double>(s) * weak_user);
    out.clipped = std::clamp(out.raw, 0.0, 1.0);
    return out;
}

CapacityBounds capacity_bounds(std::size_t s, std::size_t num_rrh, double alpha, double power, double delta,
                               double pr_rip, double log_base) {
    if (!(alpha > 0 && alpha <= 1)) throw DomainError("compression rate alpha must lie in (0, 1]");
    if (!(power >= 0)) throw DomainError("power must be non-negative");
    if (!(log_base > 0) || log_base == 1.0) throw DomainError("log base must be positive and != 1");
    require_delta(delta);
    require_probability(pr_rip, "pr_rip");
    const double ln_base = std::log(log_base);
    const double snr = static_cast<double>(num_rrh) * alpha * power;
    const double ss = static_cast<double>(s);
    CapacityBounds out;
    out.upper = ss * std::log1p(snr) / ln_base;
    out.lower = pr_rip * ss * std::log1p((1.0 - delta) * snr) / ln_base;
    return out;
}

double rip_probability_preset(std::size_t num_users) {
    if (num_users == 0) throw DomainError("K*N_c must be positive");
    return std::max(0.0, 1.0 - 4.0 / static_cast<double>(num_users));
}

CapacityBounds capacity_bounds_rip_preset(std::size_t s, std::size_t num_rrh, double alpha, double power,
                                          double delta, std::size_t num_users, double log_base) {
    return capacity_bounds(s, num_rrh, alpha, power, delta, rip_probability_preset(num_users), log_base);
}

double adaptive_lambda(double power, std::size_t num_subcarriers, double delta) {
    if (!(power > 0)) throw DomainError("power must be positive");
    const double c2 = recovery_constant(delta);
    return std::pow(power * static_cast<double>(num_subcarriers) / (4.0 * c2 * c2), 0.25);
}

Proportion wilson_interval(std::size_t successes, std::size_t trials, double z) {
    Proportion p;
    p.successes = successes;
    p.trials = trials;
    if (trials == 0) {
        p.upper = 1.0;
        return p;
    }
    const double n = static_cast<double>(trials);
    const double phat = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (phat + z2 / (2.0 * n)) / denom;
    const double half = z * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n)) / denom;
    p.estimate = phat;
    p.lower = std::max(0.0, center - half);
    p.upper = std::min(1.0, center + half);
    return p;
}

Proportion noise_containment_mc(std::size_t num_subcarriers, std::size_t num_rrh, std::size_t measurements,
                                double lambda, std::size_t draws, std::uint64_t seed) {
    Engine comp_rng = make_engine(seed, Stream::compression);
    Engine noise_rng = make_engine(seed, Stream::noise);
    const double lambda_sq = lambda * lambda;
    std::size_t inside = 0;
    CVector n_i(static_cast<Eigen::Index>(num_subcarriers));
    for (std::size_t d = 0; d < draws; ++d) {
        const CompressionSet set = generate_compression_matrices(num_rrh, measurements, num_subcarriers, comp_rng);
        double energy = 0;
        for (const auto& a : set) {
            for (Eigen::Index c = 0; c < n_i.size(); ++c) n_i(c) = circular_gaussian(noise_rng);
            energy += (a.a * n_i).squaredNorm();
        }
        if (energy <= lambda_sq) ++inside;
    }
    return wilson_interval(inside, draws);
}

} // namespace crsim
