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

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <vector>

namespace crsim {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

// Ordered set of column indices into the K*N_c user axis.
using Support = std::vector<std::size_t>;

// Relative singular-value cutoff used for every pseudoinverse in the library.
inline constexpr double kRankTolerance = 1e-10;

struct PseudoInverse {
    CMatrix pinv;          // cols x rows
    std::size_t rank = 0;
    bool rank_deficient = false;
    double sigma_min = 0;  // smallest singular value (0 when the matrix is empty)
    double sigma_max = 0;
};

// Minimum-norm pseudoinverse through an SVD; singular values below
// kRankTolerance * sigma_max are treated as zero.
PseudoInverse pseudo_inverse(const CMatrix& a);

// Columns of `a` listed in `support`, in that order.
CMatrix select_columns(const CMatrix& a, const Support& support);

// Sum of complex magnitudes.
double l1_norm(const CVector& x);

// Sorted, deduplicated copy.
Support normalized(Support s);

} // namespace crsim
