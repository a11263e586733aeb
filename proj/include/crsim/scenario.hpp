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

// Network and traffic parameters of one uplink slot.
//
// Users are indexed (c, k): subcarrier c in [0, N_c), user k in [0, K). The
// stacked user axis is subcarrier-major, so the flat index is c*K + k.
struct ScenarioConfig {
    std::size_t num_rrh = 8;            // M
    std::size_t users_per_carrier = 8;  // K
    std::size_t num_subcarriers = 8;    // N_c
    std::size_t num_active = 4;         // s
    double transmit_snr = 100.0;        // P, linear, noise-normalized
    double cell_radius = 2000.0;        // meters
    double pathloss_exponent = 2.5;
    std::uint64_t master_seed = 1;

    std::size_t num_users() const noexcept { return users_per_carrier * num_subcarriers; }
    std::size_t user_index(std::size_t c, std::size_t k) const noexcept { return c * users_per_carrier + k; }

    // Throws ConfigError on the first violated invariant.
    void validate() const;
};

struct Point {
    double x = 0;
    double y = 0;
};

struct Geometry {
    std::vector<Point> rrh;  // M entries
    std::vector<Point> ue;   // K*N_c entries, flat user index
};

// Large-scale gains g, small-scale fading h and the per-RRH channel H = g*h.
//
// Storage is [rrh][flat user]. Each RRH sees user (c, k) only on subcarrier
// c, so H_i as an N_c x K*N_c matrix is block diagonal with 1 x K blocks.
class ChannelRealization {
public:
    ChannelRealization() = default;
    ChannelRealization(std::size_t num_rrh, std::size_t users_per_carrier, std::size_t num_subcarriers);

    std::size_t num_rrh() const noexcept { return num_rrh_; }
    std::size_t users_per_carrier() const noexcept { return users_per_carrier_; }
    std::size_t num_subcarriers() const noexcept { return num_subcarriers_; }
    std::size_t num_users() const noexcept { return users_per_carrier_ * num_subcarriers_; }
    std::size_t subcarrier_of(std::size_t user) const noexcept { return user / users_per_carrier_; }

    double& large_scale(std::size_t rrh, std::size_t user) { return g_(static_cast<Eigen::Index>(rrh), static_cast<Eigen::Index>(user)); }
    double large_scale(std::size_t rrh, std::size_t user) const { return g_(static_cast<Eigen::Index>(rrh), static_cast<Eigen::Index>(user)); }
    cplx& small_scale(std::size_t rrh, std::size_t user) { return h_(static_cast<Eigen::Index>(rrh), static_cast<Eigen::Index>(user)); }
    cplx small_scale(std::size_t rrh, std::size_t user) const { return h_(static_cast<Eigen::Index>(rrh), static_cast<Eigen::Index>(user)); }

    // H[i][k][c] = g * h for the flat user index.
    cplx gain(std::size_t rrh, std::size_t user) const { return large_scale(rrh, user) * small_scale(rrh, user); }

    // Dense N_c x K*N_c matrix H_i.
    CMatrix rrh_matrix(std::size_t rrh) const;

    // y_i = H_i x using the band structure only.
    CVector apply(std::size_t rrh, const CVector& x) const;

    const Eigen::MatrixXd& large_scale_matrix() const noexcept { return g_; }

private:
    std::size_t num_rrh_ = 0;
    std::size_t users_per_carrier_ = 0;
    std::size_t num_subcarriers_ = 0;
    Eigen::MatrixXd g_;
    CMatrix h_;
};

struct SparseSignal {
    CVector x;              // K*N_c
    Support support;        // sorted
    std::vector<double> powers;  // per support entry, same order as `support`
};

struct ReceivedSignals {
    std::vector<CVector> y;      // per RRH, length N_c
    std::vector<CVector> noise;  // per RRH, length N_c
};

// RRHs and UEs uniformly over the disk of radius cfg.cell_radius.
Geometry generate_geometry(const ScenarioConfig& cfg, Engine& rng);

// Distances below this clamp to it before the log-distance path loss is applied.
inline constexpr double kReferenceDistance = 1.0;

// Log-distance path loss with unit gain at the reference distance, each user's
// gain vector rescaled so that sum_i g_i^2 = M. Small-scale fading is i.i.d.
// standard circular Gaussian.
ChannelRealization generate_channel(const ScenarioConfig& cfg, const Geometry& geometry, Engine& rng);

// Support drawn uniformly among all s-subsets; active entries CN(0, P).
SparseSignal generate_signal(const ScenarioConfig& cfg, Engine& rng);

// y_i = H_i x + n_i with n_i ~ CN(0, I). With add_noise == false the
// returned noise vectors are zero.
ReceivedSignals received_signals(const ChannelRealization& ch, const CVector& x, Engine& rng, bool add_noise = true);

} // namespace crsim
