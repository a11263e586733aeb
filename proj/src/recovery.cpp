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

#include "crsim/recovery.hpp"

#include "crsim/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace crsim {

CMatrix assemble_theta(const ChannelRealization& ch, const CompressionSet& matrices) {
    if (matrices.size() != ch.num_rrh()) throw ConfigError("assemble_theta: one compression matrix per RRH required");
    const Eigen::Index r = matrices.empty() ? 0 : matrices.front().a.rows();
    for (const auto& m : matrices)
        if (m.a.rows() != r || m.a.cols() != static_cast<Eigen::Index>(ch.num_subcarriers()))
            throw ConfigError("assemble_theta: compression matrix shape mismatch");

    const auto n = static_cast<Eigen::Index>(ch.num_users());
    CMatrix theta(static_cast<Eigen::Index>(ch.num_rrh()) * r, n);
    for (std::size_t i = 0; i < ch.num_rrh(); ++i) {
        const CMatrix& a = matrices[i].a;
        const Eigen::Index row0 = static_cast<Eigen::Index>(i) * r;
        for (Eigen::Index u = 0; u < n; ++u) {
            const auto c = static_cast<Eigen::Index>(ch.subcarrier_of(static_cast<std::size_t>(u)));
            theta.block(row0, u, r, 1) = ch.gain(i, static_cast<std::size_t>(u)) * a.col(c);
        }
    }
    return theta;
}

CVector stack(const std::vector<CVector>& parts) {
    Eigen::Index total = 0;
    for (const auto& p : parts) total += p.size();
    CVector out(total);
    Eigen::Index at = 0;
    for (const auto& p : parts) {
        out.segment(at, p.size()) = p;
        at += p.size();
    }
    return out;
}

double default_lambda(std::size_t num_subcarriers) {
    return std::sqrt(2.0 * static_cast<double>(num_subcarriers));
}

Support magnitude_order(const CVector& x) {
    Support order(static_cast<std::size_t>(x.size()));
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return std::abs(x(static_cast<Eigen::Index>(a))) > std::abs(x(static_cast<Eigen::Index>(b)));
    });
    return order;
}

namespace {

// Orthonormal basis of a growing column set, with the residual of z kept
// orthogonal to it.
class IncrementalProjector {
public:
    IncrementalProjector(Eigen::Index rows, Eigen::Index capacity, const CVector& z)
        : basis_(rows, capacity), residual_(z) {}

    // Adds column `col`; returns false when it lies in the current span.
    bool add(const CVector& col) {
        CVector q = col;
        const double col_norm = col.norm();
        for (int pass = 0; pass < 2; ++pass) {
            if (size_ == 0) break;
            const auto qb = basis_.leftCols(size_);
            q -= qb * (qb.adjoint() * q);
        }
        const double q_norm = q.norm();
        if (!(q_norm > kRankTolerance * std::max(col_norm, 1e-300))) return false;
        q /= q_norm;
        basis_.col(size_++) = q;
        residual_ -= q * q.dot(residual_);
        return true;
    }

    double residual_norm() const { return residual_.norm(); }
    const CVector& residual() const { return residual_; }

private:
    CMatrix basis_;
    Eigen::Index size_ = 0;
    CVector residual_;
};

} // namespace

DetectionResult detect_active_users(const CVector& x_rough, const CMatrix& theta, const CVector& z, double lambda) {
    if (x_rough.size() != theta.cols() || z.size() != theta.rows())
        throw ConfigError("detect_active_users: dimension mismatch");
    DetectionResult out;
    const Support order = magnitude_order(x_rough);
    const auto cap = static_cast<std::size_t>(std::min(theta.rows(), theta.cols()));
    if (cap == 0) return out;

    IncrementalProjector proj(theta.rows(), static_cast<Eigen::Index>(cap), z);
    for (std::size_t k = 0; k < cap; ++k) {
        const std::size_t idx = order[k];
        out.support.push_back(idx);
        proj.add(theta.col(static_cast<Eigen::Index>(idx)));
        const double res = proj.residual_norm();
        out.residual_history.push_back(res);
        if (res <= lambda) return out;
    }
    out.hit_cap = true;
    return out;
}

double projection_residual(const CMatrix& theta, const Support& support, const CVector& z) {
    if (support.empty()) return z.norm();
    const CMatrix sub = select_columns(theta, support);
    const PseudoInverse p = pseudo_inverse(sub);
    return (z - sub * (p.pinv * z)).norm();
}

ZeroForcingResult zero_forcing(const CMatrix& theta, const Support& support, const CVector& z) {
    if (z.size() != theta.rows()) throw ConfigError("zero_forcing: z length does not match Theta rows");
    ZeroForcingResult out;
    out.x = CVector::Zero(theta.cols());
    if (support.empty()) return out;
    for (std::size_t idx : support)
        if (idx >= static_cast<std::size_t>(theta.cols())) throw ConfigError("zero_forcing: support index out of range");

    const CMatrix sub = select_columns(theta, support);
    const PseudoInverse p = pseudo_inverse(sub);
    const CVector xs = p.pinv * z;
    for (std::size_t j = 0; j < support.size(); ++j) out.x(static_cast<Eigen::Index>(support[j])) = xs(static_cast<Eigen::Index>(j));
    out.rank_deficient = p.rank_deficient;
    out.sigma_min = p.sigma_min;
    return out;
}

RecoveryResult recover_joint(const CMatrix& theta, const CVector& z, double lambda, const BasisPursuitOptions& options) {
    RecoveryResult out;
    BasisPursuitResult bp = solve_basis_pursuit(theta, z, lambda, options);
    out.x_rough = std::move(bp.x);
    out.solver_stats = bp.stats;
    out.valid = bp.stats.converged;

    const DetectionResult det = detect_active_users(out.x_rough, theta, z, lambda);
    out.support_est = normalized(det.support);
    out.residual_norm = det.residual_history.empty() ? z.norm() : det.residual_history.back();

    ZeroForcingResult zf = zero_forcing(theta, out.support_est, z);
    out.x_final = std::move(zf.x);
    out.rank_deficient = zf.rank_deficient;
    return out;
}

RecoveryResult omp_zf_baseline(const CMatrix& theta, const CVector& z, double lambda) {
    if (z.size() != theta.rows()) throw ConfigError("omp: z length does not match Theta rows");
    RecoveryResult out;
    out.x_rough = CVector::Zero(theta.cols());

    const auto cap = static_cast<std::size_t>(std::min(theta.rows(), theta.cols()));
    RVector inv_norm(theta.cols());
    for (Eigen::Index j = 0; j < theta.cols(); ++j) {
        const double nj = theta.col(j).norm();
        inv_norm(j) = nj > 0 ? 1.0 / nj : 0.0;
    }

    std::vector<bool> chosen(static_cast<std::size_t>(theta.cols()), false);
    Support selected;
    IncrementalProjector proj(theta.rows(), static_cast<Eigen::Index>(std::max<std::size_t>(cap, 1)), z);
    double res = z.norm();
    while (res > lambda && selected.size() < cap) {
        const CVector corr = theta.adjoint() * proj.residual();
        Eigen::Index best = -1;
        double best_val = -1.0;
        for (Eigen::Index j = 0; j < theta.cols(); ++j) {
            if (chosen[static_cast<std::size_t>(j)]) continue;
            const double v = std::abs(corr(j)) * inv_norm(j);
            if (v > best_val) {
                best_val = v;
                best = j;
            }
        }
        if (best < 0) break;
        chosen[static_cast<std::size_t>(best)] = true;
        selected.push_back(static_cast<std::size_t>(best));
        proj.add(theta.col(best));
        res = proj.residual_norm();
    }
    out.solver_stats.iterations = static_cast<int>(selected.size());
    out.solver_stats.converged = true;
    out.support_est = normalized(selected);
    out.residual_norm = res;

    ZeroForcingResult zf = zero_forcing(theta, out.support_est, z);
    out.x_final = std::move(zf.x);
    out.rank_deficient = zf.rank_deficient;
    return out;
}

ZeroForcingResult genie_zf_baseline(const CMatrix& theta, const Support& true_support, const CVector& z) {
    return zero_forcing(theta, normalized(true_support), z);
}

CMatrix mmse_joint_filter(const CMatrix& theta, double prior_power, const CMatrix& noise_covariance) {
    if (noise_covariance.rows() != theta.rows() || noise_covariance.cols() != theta.rows())
        throw ConfigError("mmse: noise covariance must be square with Theta's row count");
    const Eigen::Index m = theta.rows();
    CMatrix cov = prior_power * theta * theta.adjoint() + noise_covariance;
    const double reg = 1e-12 * cov.trace().real() / static_cast<double>(std::max<Eigen::Index>(m, 1));
    cov.diagonal().array() += reg;
    Eigen::LDLT<CMatrix> ldlt(cov);
    if (ldlt.info() != Eigen::Success) throw NumericalError("mmse: covariance factorization failed");
    // cov is Hermitian, so Theta^H cov^-1 = (cov^-1 Theta)^H
    return prior_power * ldlt.solve(theta).adjoint();
}

CVector mmse_joint_baseline(const CMatrix& theta, const CVector& z, double prior_power, const CMatrix& a_block) {
    if (z.size() != theta.rows()) throw ConfigError("mmse: z length does not match Theta rows");
    const CMatrix noise_cov = a_block * a_block.adjoint();
    return mmse_joint_filter(theta, prior_power, noise_cov) * z;
}

std::vector<std::size_t> serving_rrh(const ChannelRealization& ch) {
    std::vector<std::size_t> out(ch.num_users(), 0);
    for (std::size_t u = 0; u < ch.num_users(); ++u) {
        double best = ch.large_scale(0, u);
        for (std::size_t i = 1; i < ch.num_rrh(); ++i) {
            if (ch.large_scale(i, u) > best) {
                best = ch.large_scale(i, u);
                out[u] = i;
            }
        }
    }
    return out;
}

CVector mmse_separate_baseline(const ChannelRealization& ch, const std::vector<CVector>& y, double prior_power) {
    if (y.size() != ch.num_rrh()) throw ConfigError("mmse_separate: one received vector per RRH required");
    const std::size_t k_per = ch.users_per_carrier();
    const std::vector<std::size_t> serving = serving_rrh(ch);
    CVector x = CVector::Zero(static_cast<Eigen::Index>(ch.num_users()));
    for (std::size_t u = 0; u < ch.num_users(); ++u) {
        const std::size_t i = serving[u];
        const std::size_t c = ch.subcarrier_of(u);
        double load = 0;
        for (std::size_t k = 0; k < k_per; ++k) load += std::norm(ch.gain(i, c * k_per + k));
        const cplx h = ch.gain(i, u);
        x(static_cast<Eigen::Index>(u)) = prior_power * std::conj(h) / (prior_power * load + 1.0) * y[i](static_cast<Eigen::Index>(c));
    }
    return x;
}

} // namespace crsim
