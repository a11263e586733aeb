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
#include "crsim/error.hpp"

#include <algorithm>
#include <cmath>

namespace crsim {

namespace {

Support difference(const Support& a, const Support& b) {
    const Support sa = normalized(a);
    const Support sb = normalized(b);
    Support out;
    std::set_difference(sa.begin(), sa.end(), sb.begin(), sb.end(), std::back_inserter(out));
    return out;
}

bool contains(const Support& sorted, std::size_t v) {
    return std::binary_search(sorted.begin(), sorted.end(), v);
}

void check_log_base(double log_base) {
    if (!(log_base > 0) || log_base == 1.0 || !std::isfinite(log_base))
        throw ConfigError("log base must be positive, finite and != 1");
}

} // namespace

CMatrix zf_interference_covariance(const CMatrix& theta, const Support& truth, const Support& detected,
                                   double power, const CMatrix& noise_covariance) {
    const CMatrix theta_d = select_columns(theta, detected);
    const PseudoInverse p = pseudo_inverse(theta_d);
    CMatrix inner = noise_covariance;
    const Support missed = difference(truth, detected);
    if (!missed.empty()) {
        const CMatrix theta_m = select_columns(theta, missed);
        inner += power * theta_m * theta_m.adjoint();
    }
    return p.pinv * inner * p.pinv.adjoint();
}

CMatrix zf_noise_covariance_normal_equations(const CMatrix& theta, const Support& support,
                                             const CMatrix& noise_covariance) {
    const CMatrix sub = select_columns(theta, support);
    const CMatrix gram = sub.adjoint() * sub;
    Eigen::LDLT<CMatrix> ldlt(gram);
    if (ldlt.info() != Eigen::Success) throw NumericalError("normal equations: Gram matrix is singular");
    const CMatrix left = ldlt.solve(sub.adjoint());  // (S^H S)^-1 S^H
    return left * noise_covariance * left.adjoint();
}

CapacityReport sum_capacity(const CMatrix& theta, const Support& truth, const Support& detected, double power,
                            const CMatrix& noise_covariance, double log_base) {
    check_log_base(log_base);
    CapacityReport report;
    report.log_base = log_base;
    const Support det = normalized(detected);
    if (det.empty()) return report;

    const Support tru = normalized(truth);
    const CMatrix psi = zf_interference_covariance(theta, tru, det, power, noise_covariance);
    report.rank_deficient = pseudo_inverse(select_columns(theta, det)).rank_deficient;
    const double ln_base = std::log(log_base);
    for (std::size_t l = 0; l < det.size(); ++l) {
        const double alpha = psi(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(l)).real();
        const double pl = contains(tru, det[l]) ? power : 0.0;
        report.stream_power.push_back(pl);
        report.psi_diag.push_back(alpha);
        if (!(alpha > 0) || !std::isfinite(alpha)) {
            ++report.dropped_streams;
            continue;
        }
        report.sum_rate += std::log1p(pl / alpha) / ln_base;
    }
    return report;
}

double linear_filter_sum_rate(const CMatrix& filter, const CMatrix& theta, const Support& truth, double power,
                              const CMatrix& noise_covariance, double log_base) {
    check_log_base(log_base);
    if (filter.cols() != theta.rows() || filter.rows() != theta.cols())
        throw ConfigError("linear_filter_sum_rate: filter shape does not match Theta^H");
    const double ln_base = std::log(log_base);
    const Support tru = normalized(truth);
    double total = 0;
    for (std::size_t l : tru) {
        const auto row = filter.row(static_cast<Eigen::Index>(l));
        const double signal = power * std::norm((row * theta.col(static_cast<Eigen::Index>(l)))(0));
        double interference = 0;
        for (std::size_t j : tru)
            if (j != l) interference += power * std::norm((row * theta.col(static_cast<Eigen::Index>(j)))(0));
        const double noise = (row * noise_covariance * row.adjoint())(0).real();
        const double denom = interference + noise;
        if (!(denom > 0)) continue;
        total += std::log1p(signal / denom) / ln_base;
    }
    return total;
}

} // namespace crsim
