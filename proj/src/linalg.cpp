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

#include "crsim/linalg.hpp"

#include <algorithm>

namespace crsim {

PseudoInverse pseudo_inverse(const CMatrix& a) {
    PseudoInverse out;
    if (a.rows() == 0 || a.cols() == 0) {
        out.pinv = CMatrix::Zero(a.cols(), a.rows());
        return out;
    }
    Eigen::JacobiSVD<CMatrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const RVector& sv = svd.singularValues();
    out.sigma_max = sv(0);
    const double cutoff = kRankTolerance * out.sigma_max;
    RVector inv = RVector::Zero(sv.size());
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        if (sv(i) > cutoff) {
            inv(i) = 1.0 / sv(i);
            ++out.rank;
        }
    }
    out.rank_deficient = out.rank < static_cast<std::size_t>(a.cols());
    // fewer rows than columns: no full column rank, sigma_min of the column space is 0
    out.sigma_min = a.rows() >= a.cols() ? sv(sv.size() - 1) : 0.0;
    out.pinv = svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();
    return out;
}

CMatrix select_columns(const CMatrix& a, const Support& support) {
    CMatrix out(a.rows(), static_cast<Eigen::Index>(support.size()));
    for (std::size_t j = 0; j < support.size(); ++j) out.col(static_cast<Eigen::Index>(j)) = a.col(static_cast<Eigen::Index>(support[j]));
    return out;
}

double l1_norm(const CVector& x) {
    return x.cwiseAbs().sum();
}

Support normalized(Support s) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    return s;
}

} // namespace crsim
