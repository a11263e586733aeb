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

#include "crsim/error.hpp"
#include "crsim/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace crsim {

namespace {

// rho is frozen afterwards so the fixed-penalty convergence guarantee applies
constexpr int kAdaptiveIterations = 4000;

// Complex soft threshold: shrink each modulus by tau, keep the phase.
void soft_threshold(const CVector& in, double tau, CVector& out) {
    for (Eigen::Index i = 0; i < in.size(); ++i) {
        const double mag = std::abs(in(i));
        out(i) = mag > tau ? in(i) * ((mag - tau) / mag) : cplx(0.0, 0.0);
    }
}

void project_ball(const CVector& in, double radius, CVector& out) {
    const double norm = in.norm();
    if (norm <= radius) {
        out = in;
    } else {
        out = in * (radius / norm);
    }
}

// Smallest t in [0, 1] with ||(1-t) a + t b|| <= lambda, given ||b|| < lambda.
double blend_to_ball(const CVector& a, const CVector& b, double lambda) {
    // ||a + t (b - a)||^2 = lambda^2, take the root in [0, 1]
    const CVector d = b - a;
    const double qa = d.squaredNorm();
    const double qb = 2.0 * a.dot(d).real();
    const double qc = a.squaredNorm() - lambda * lambda;
    if (qc <= 0) return 0.0;
    if (qa == 0) return 1.0;
    const double disc = std::max(0.0, qb * qb - 4.0 * qa * qc);
    const double t = (-qb - std::sqrt(disc)) / (2.0 * qa);
    return std::clamp(t, 0.0, 1.0);
}

} // namespace

BasisPursuitResult solve_basis_pursuit(const CMatrix& theta, const CVector& z, double lambda,
                                       const BasisPursuitOptions& options) {
    if (!(lambda >= 0) || !std::isfinite(lambda)) throw ConfigError("basis pursuit: lambda must be finite and >= 0");
    if (theta.rows() != z.size()) throw ConfigError("basis pursuit: Theta rows do not match z");

    const Eigen::Index m = theta.rows();
    const Eigen::Index n = theta.cols();
    BasisPursuitResult result;
    result.x = CVector::Zero(n);

    const double z_norm = z.norm();
    if (z_norm <= lambda) {
        result.stats.converged = true;
        return result;
    }

    // (I + Theta^H Theta)^-1 via Woodbury on the smaller side
    CMatrix solve_w;  // n x n
    CMatrix solve_v;  // n x m, applied to (z + v - e)
    {
        if (m < n) {
            CMatrix small = CMatrix::Identity(m, m) + theta * theta.adjoint();
            Eigen::LLT<CMatrix> llt(small);
            const CMatrix inner = llt.solve(theta);  // (I + T T^H)^-1 T
            solve_w = CMatrix::Identity(n, n) - theta.adjoint() * inner;
        } else {
            CMatrix big = CMatrix::Identity(n, n) + theta.adjoint() * theta;
            Eigen::LLT<CMatrix> llt(big);
            solve_w = llt.solve(CMatrix::Identity(n, n));
        }
        solve_v = solve_w * theta.adjoint();
    }

    // feasible reference point for the exit polish: least-squares fit
    const CVector x_ls = Eigen::CompleteOrthogonalDecomposition<CMatrix>(theta).solve(z);
    const CVector ls_residual = theta * x_ls - z;
    if (ls_residual.norm() > lambda)
        throw NumericalError("basis pursuit: feasible set is empty (least-squares residual exceeds lambda)");

    // scale-free start: the threshold 1/rho tracks the size of the entries
    const double ls_scale = x_ls.norm() / std::sqrt(static_cast<double>(n));
    double rho = ls_scale > 0 ? options.rho / ls_scale : options.rho;
    CVector x = x_ls;
    CVector w = x_ls;
    CVector t = ls_residual;
    CVector v = ls_residual;
    CVector d = CVector::Zero(n);
    CVector e = CVector::Zero(m);
    CVector w_old(n), v_old(m);

    const double tol = options.tolerance;
    SolverStats& stats = result.stats;

    for (int it = 1; it <= options.max_iter; ++it) {
        x.noalias() = solve_w * (w - d);
        x.noalias() += solve_v * (z + v - e);
        t.noalias() = theta * x;
        t -= z;

        w_old = w;
        v_old = v;
        soft_threshold(x + d, 1.0 / rho, w);
        project_ball(t + e, lambda, v);

        const CVector rx = x - w;
        const CVector rt = t - v;
        d += rx;
        e += rt;

        stats.iterations = it;
        stats.primal_residual = std::sqrt(rx.squaredNorm() + rt.squaredNorm());
        const CVector dual_vec = (w - w_old) + theta.adjoint() * (v - v_old);
        stats.dual_residual = rho * dual_vec.norm();

        const double primal_scale =
            std::max({std::sqrt(x.squaredNorm() + (t + z).squaredNorm()), std::sqrt(w.squaredNorm() + v.squaredNorm()), z_norm, 1.0});
        const double dual_scale = std::max(rho * (d + theta.adjoint() * e).norm(), 1.0);
        const double eps_primal = tol * primal_scale;
        const double eps_dual = tol * dual_scale;
        if (stats.primal_residual <= eps_primal && stats.dual_residual <= eps_dual) {
            stats.converged = true;
            break;
        }

        // residual balancing; the x-system is independent of rho
        if (it % 10 == 0 && it <= kAdaptiveIterations) {
            const double pr = stats.primal_residual / eps_primal;
            const double du = stats.dual_residual / eps_dual;
            if (pr > 10.0 * du) {
                rho *= 2.0;
                d *= 0.5;
                e *= 0.5;
            } else if (du > 10.0 * pr) {
                rho *= 0.5;
                d *= 2.0;
                e *= 2.0;
            }
        }
    }

    // w is the sparse iterate; pull it onto the ball along a segment towards a
    // feasible point, preferring the least-squares fit on w's own support
    CVector out = w;
    if (options.polish) {
        const CVector a = theta * w - z;
        if (a.norm() > lambda) {
            CVector target = x_ls;
            CVector target_residual = ls_residual;
            Support active;
            for (Eigen::Index i = 0; i < n; ++i)
                if (w(i) != cplx(0.0, 0.0)) active.push_back(static_cast<std::size_t>(i));
            if (!active.empty() && static_cast<Eigen::Index>(active.size()) <= m) {
                const CMatrix sub = select_columns(theta, active);
                const CVector coef = sub.colPivHouseholderQr().solve(z);
                CVector on_support = CVector::Zero(n);
                for (std::size_t j = 0; j < active.size(); ++j)
                    on_support(static_cast<Eigen::Index>(active[j])) = coef(static_cast<Eigen::Index>(j));
                const CVector r = theta * on_support - z;
                if (r.norm() < lambda) {
                    target = std::move(on_support);
                    target_residual = r;
                }
            }
            const double blend = blend_to_ball(a, target_residual, lambda);
            if (blend > 0) out = (1.0 - blend) * w + blend * target;
        }
    }
    result.x = out;
    stats.feasibility_gap = std::max(0.0, (theta * out - z).norm() - lambda);
    return result;
}

} // namespace crsim
