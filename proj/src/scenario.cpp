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

#include "crsim/scenario.hpp"

#include "crsim/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

namespace crsim {

void ScenarioConfig::validate() const {
    if (num_rrh < 1) throw ConfigError("num_rrh must be at least 1");
    if (users_per_carrier < 1) throw ConfigError("users_per_carrier must be at least 1");
    if (num_subcarriers < 1) throw ConfigError("num_subcarriers must be at least 1");
    if (num_active > num_users())
        throw ConfigError("num_active (" + std::to_string(num_active) + ") exceeds K*N_c (" +
                          std::to_string(num_users()) + ")");
    if (!(transmit_snr > 0) || !std::isfinite(transmit_snr)) throw ConfigError("transmit_snr must be positive");
    if (!(cell_radius >= 0) || !std::isfinite(cell_radius)) throw ConfigError("cell_radius must be non-negative");
    if (!(pathloss_exponent > 0)) throw ConfigError("pathloss_exponent must be positive");
}

ChannelRealization::ChannelRealization(std::size_t num_rrh, std::size_t users_per_carrier, std::size_t num_subcarriers)
    : num_rrh_(num_rrh),
      users_per_carrier_(users_per_carrier),
      num_subcarriers_(num_subcarriers),
      g_(Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(num_rrh), static_cast<Eigen::Index>(users_per_carrier * num_subcarriers))),
      h_(CMatrix::Zero(static_cast<Eigen::Index>(num_rrh), static_cast<Eigen::Index>(users_per_carrier * num_subcarriers))) {}

CMatrix ChannelRealization::rrh_matrix(std::size_t rrh) const {
    CMatrix out = CMatrix::Zero(static_cast<Eigen::Index>(num_subcarriers_), static_cast<Eigen::Index>(num_users()));
    for (std::size_t u = 0; u < num_users(); ++u)
        out(static_cast<Eigen::Index>(subcarrier_of(u)), static_cast<Eigen::Index>(u)) = gain(rrh, u);
    return out;
}

CVector ChannelRealization::apply(std::size_t rrh, const CVector& x) const {
    CVector y = CVector::Zero(static_cast<Eigen::Index>(num_subcarriers_));
    for (std::size_t u = 0; u < num_users(); ++u)
        y(static_cast<Eigen::Index>(subcarrier_of(u))) += gain(rrh, u) * x(static_cast<Eigen::Index>(u));
    return y;
}

namespace {

Point uniform_in_disk(double radius, Engine& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    // sqrt of a uniform radius fraction gives uniform area density
    const double r = radius * std::sqrt(unit(rng));
    const double phi = 2.0 * std::numbers::pi * unit(rng);
    return {r * std::cos(phi), r * std::sin(phi)};
}

} // namespace

Geometry generate_geometry(const ScenarioConfig& cfg, Engine& rng) {
    cfg.validate();
    Geometry geo;
    geo.rrh.reserve(cfg.num_rrh);
    geo.ue.reserve(cfg.num_users());
    for (std::size_t i = 0; i < cfg.num_rrh; ++i) geo.rrh.push_back(uniform_in_disk(cfg.cell_radius, rng));
    for (std::size_t u = 0; u < cfg.num_users(); ++u) geo.ue.push_back(uniform_in_disk(cfg.cell_radius, rng));
    return geo;
}

ChannelRealization generate_channel(const ScenarioConfig& cfg, const Geometry& geometry, Engine& rng) {
    cfg.validate();
    if (geometry.rrh.size() != cfg.num_rrh || geometry.ue.size() != cfg.num_users())
        throw ConfigError("geometry does not match scenario dimensions");

    ChannelRealization ch(cfg.num_rrh, cfg.users_per_carrier, cfg.num_subcarriers);
    const double m = static_cast<double>(cfg.num_rrh);
    for (std::size_t u = 0; u < cfg.num_users(); ++u) {
        double energy = 0;
        for (std::size_t i = 0; i < cfg.num_rrh; ++i) {
            const double d = std::max(std::hypot(geometry.ue[u].x - geometry.rrh[i].x, geometry.ue[u].y - geometry.rrh[i].y),
                                      kReferenceDistance);
            // amplitude gain: power falls as (d/d0)^-n
            const double g = std::pow(d / kReferenceDistance, -0.5 * cfg.pathloss_exponent);
            ch.large_scale(i, u) = g;
            energy += g * g;
        }
        const double scale = std::sqrt(m / energy);
        for (std::size_t i = 0; i < cfg.num_rrh; ++i) ch.large_scale(i, u) *= scale;
    }
    // rrh-major draw order keeps the stream layout independent of K and N_c splits
    for (std::size_t i = 0; i < cfg.num_rrh; ++i)
        for (std::size_t u = 0; u < cfg.num_users(); ++u) ch.small_scale(i, u) = circular_gaussian(rng);
    return ch;
}

SparseSignal generate_signal(const ScenarioConfig& cfg, Engine& rng) {
    cfg.validate();
    const std::size_t n = cfg.num_users();
    SparseSignal sig;
    sig.x = CVector::Zero(static_cast<Eigen::Index>(n));

    // partial Fisher-Yates: the first s slots form a uniform s-subset
    std::vector<std::size_t> pool(n);
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    for (std::size_t j = 0; j < cfg.num_active; ++j) {
        std::uniform_int_distribution<std::size_t> pick(j, n - 1);
        std::swap(pool[j], pool[pick(rng)]);
    }
    sig.support.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(cfg.num_active));
    std::sort(sig.support.begin(), sig.support.end());

    const double amplitude = std::sqrt(cfg.transmit_snr);
    for (std::size_t idx : sig.support) {
        sig.x(static_cast<Eigen::Index>(idx)) = amplitude * circular_gaussian(rng);
        sig.powers.push_back(cfg.transmit_snr);
    }
    return sig;
}

ReceivedSignals received_signals(const ChannelRealization& ch, const CVector& x, Engine& rng, bool add_noise) {
    if (static_cast<std::size_t>(x.size()) != ch.num_users())
        throw ConfigError("signal length does not match K*N_c");
    ReceivedSignals rx;
    rx.y.reserve(ch.num_rrh());
    rx.noise.reserve(ch.num_rrh());
    const auto nc = static_cast<Eigen::Index>(ch.num_subcarriers());
    for (std::size_t i = 0; i < ch.num_rrh(); ++i) {
        CVector n = CVector::Zero(nc);
        if (add_noise)
            for (Eigen::Index c = 0; c < nc; ++c) n(c) = circular_gaussian(rng);
        rx.y.push_back(ch.apply(i, x) + n);
        rx.noise.push_back(std::move(n));
    }
    return rx;
}

} // namespace crsim
