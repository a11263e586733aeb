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

#include "crsim/compression.hpp"
#include "crsim/linalg.hpp"
#include "crsim/scenario.hpp"

#include <cstddef>
#include <vector>

namespace crsim {

// Aggregate (M*R) x (K*N_c) measurement matrix: row block i is A_i H_i.
CMatrix assemble_theta(const ChannelRealization& ch, const CompressionSet& matrices);

// Stacked observations [z_1; ...; z_M].
CVector stack(const std::vector<CVector>& parts);

// Default residual threshold sqrt(2 N_c).
double default_lambda(std::size_t num_subcarriers);

// ---- l1 recovery -------------------------------------------------------

struct BasisPursuitOptions {
    int max_iter = 20000;
    double tolerance = 1e-7;   // relative primal/dual residual target
    double rho = 1.0;          // initial penalty relative to the least-squares entry scale
    bool polish = true;        // pull the iterate onto the feasible set at exit
};

struct SolverStats {
    int iterations = 0;
    double primal_residual = 0;
    double dual_residual = 0;
    double feasibility_gap = 0;  // max(0, ||Theta x - z|| - lambda)
    bool converged = false;
};

struct BasisPursuitResult {
    CVector x;
    SolverStats stats;
};

// min ||x||_1  s.t.  ||Theta x - z|| <= lambda, complex l1 (sum of moduli).
//
// ADMM on the split x = w, Theta x - z = v with w handled by complex soft
// thresholding and v by projection onto the lambda ball. The x-update system
// (I + Theta^H Theta) does not depend on the penalty, so it is factored once
// and the penalty is rebalanced freely.
BasisPursuitResult solve_basis_pursuit(const CMatrix& theta, const CVector& z, double lambda,
                                       const BasisPursuitOptions& options = {});

// ---- support detection and zero forcing -------------------------------

// Indices ordered by |x(i)| descending, ties to the lower index.
Support magnitude_order(const CVector& x);

struct DetectionResult {
    Support support;                        // detection order, not sorted
    std::vector<double> residual_history;   // projection residual after each growth step
    bool hit_cap = false;                   // stopped because |T| reached M*R
};

// Grows the support along magnitude_order(x_rough) until the projection
// residual ||(I - P_T) z|| drops to lambda, capped at theta.rows() entries.
// The projection is maintained with incremental Gram-Schmidt (with one
// re-orthogonalization pass); dependent columns keep their index but leave
// the basis unchanged.
DetectionResult detect_active_users(const CVector& x_rough, const CMatrix& theta, const CVector& z, double lambda);

// ||(I - Theta_T Theta_T^+) z|| computed from an SVD, independent of the
// incremental path above.
double projection_residual(const CMatrix& theta, const Support& support, const CVector& z);

struct ZeroForcingResult {
    CVector x;                 // full length, zero outside the support
    bool rank_deficient = false;
    double sigma_min = 0;      // of Theta_T
};

ZeroForcingResult zero_forcing(const CMatrix& theta, const Support& support, const CVector& z);

struct RecoveryResult {
    CVector x_rough;
    Support support_est;       // sorted
    CVector x_final;
    double residual_norm = 0;
    SolverStats solver_stats;
    bool rank_deficient = false;
    bool valid = true;         // false when the l1 solve did not converge
};

// BP rough estimate, greedy detection, zero forcing.
RecoveryResult recover_joint(const CMatrix& theta, const CVector& z, double lambda,
                             const BasisPursuitOptions& options = {});

// ---- baselines ---------------------------------------------------------

// Orthogonal matching pursuit on unit-normalized correlations, then ZF.
// Stops when the residual reaches lambda or after theta.rows() selections.
RecoveryResult omp_zf_baseline(const CMatrix& theta, const CVector& z, double lambda);

// ZF on the true support.
ZeroForcingResult genie_zf_baseline(const CMatrix& theta, const Support& true_support, const CVector& z);

// Linear MMSE filter W (n x m) treating every user as active with power
// prior_power:  W = p Theta^H (p Theta Theta^H + C)^-1.
CMatrix mmse_joint_filter(const CMatrix& theta, double prior_power, const CMatrix& noise_covariance);

// x = W z with C = A A^H.
CVector mmse_joint_baseline(const CMatrix& theta, const CVector& z, double prior_power, const CMatrix& a_block);

// Serving RRH per user: argmax_i g[i][user], ties to the lower index.
std::vector<std::size_t> serving_rrh(const ChannelRealization& ch);

// Each RRH estimates its served users from its own uncompressed y_i with a
// per-subcarrier scalar MMSE, all co-channel users assumed active at power P.
CVector mmse_separate_baseline(const ChannelRealization& ch, const std::vector<CVector>& y, double prior_power);

} // namespace crsim
