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
#include "crsim/recovery.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

namespace crsim {
namespace {

CMatrix random_matrix(Eigen::Index m, Eigen::Index n, Engine& rng, double scale = 1.0) {
    CMatrix a(m, n);
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j < n; ++j) a(i, j) = scale * circular_gaussian(rng);
    return a;
}

CMatrix orthonormal_columns(Eigen::Index m, Eigen::Index n, Engine& rng) {
    const CMatrix q = random_matrix(m, m, rng).householderQr().householderQ();
    return q.leftCols(n);
}

TEST(Capacity, EmptyDetectionGivesZero) {
    Engine rng = make_engine(1, Stream::auxiliary);
    const CMatrix theta = random_matrix(6, 8, rng);
    const auto rep = sum_capacity(theta, {1, 2}, {}, 10.0, CMatrix::Identity(6, 6));
    EXPECT_EQ(rep.sum_rate, 0.0);
}

TEST(Capacity, OrthonormalColumnsGiveUnitPsi) {
    Engine rng = make_engine(2, Stream::auxiliary);
    const CMatrix theta = orthonormal_columns(8, 6, rng);
    const Support t{0, 3, 5};
    const double p = 15.0;
    const auto rep = sum_capacity(theta, t, t, p, CMatrix::Identity(8, 8));
    for (double a : rep.psi_diag) EXPECT_NEAR(a, 1.0, 1e-12);
    EXPECT_NEAR(rep.sum_rate, 3.0 * std::log2(1.0 + p), 1e-12);
    const auto nat = sum_capacity(theta, t, t, p, CMatrix::Identity(8, 8), std::exp(1.0));
    EXPECT_NEAR(nat.sum_rate, 3.0 * std::log(1.0 + p), 1e-12);
}

TEST(Capacity, FalseAlarmCarriesNoRateAndMissAddsInterference) {
    Engine rng = make_engine(3, Stream::auxiliary);
    const CMatrix theta = random_matrix(8, 10, rng);
    const CMatrix c = CMatrix::Identity(8, 8);
    const auto exact = sum_capacity(theta, {1, 4}, {1, 4}, 20.0, c);
    const auto extra = sum_capacity(theta, {1, 4}, {1, 4, 7}, 20.0, c);
    ASSERT_EQ(extra.stream_power.size(), 3u);
    EXPECT_EQ(extra.stream_power[2], 0.0);
    EXPECT_EQ(extra.stream_power[0], 20.0);
    const auto missed = sum_capacity(theta, {1, 4, 7}, {1, 4}, 20.0, c);
    for (std::size_t l = 0; l < 2; ++l) EXPECT_GT(missed.psi_diag[l], exact.psi_diag[l]);
}

TEST(Capacity, PseudoInverseAndNormalEquationsAgree) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Engine rng = make_engine(seed, Stream::auxiliary);
        const CMatrix theta = random_matrix(16, 24, rng, 0.25);
        const CMatrix b = random_matrix(16, 16, rng, 0.25);
        const CMatrix c = b * b.adjoint();
        const Support t{2, 5, 11, 19};
        const CMatrix via_pinv = zf_interference_covariance(theta, t, t, 100.0, c);
        const CMatrix via_normal = zf_noise_covariance_normal_equations(theta, t, c);
        EXPECT_LT((via_pinv - via_normal).norm(), 1e-8 * via_normal.norm()) << "seed " << seed;
    }
}

TEST(Capacity, LinearFilterWithIdentityChannel) {
    const CMatrix theta = CMatrix::Identity(3, 3);
    const double sinr = 4.0;
    const double rate = linear_filter_sum_rate(CMatrix::Identity(3, 3), theta, {0, 2}, sinr, CMatrix::Identity(3, 3));
    EXPECT_NEAR(rate, 2.0 * std::log2(5.0), 1e-12);
}

// closed-form eigenvalues of a 2x2 Hermitian block
double pair_distortion(const CMatrix& theta, Eigen::Index i, Eigen::Index j) {
    const double a = theta.col(i).squaredNorm();
    const double d = theta.col(j).squaredNorm();
    const double b = std::abs(theta.col(i).dot(theta.col(j)));
    const double mid = 0.5 * (a + d);
    const double rad = std::sqrt(0.25 * (a - d) * (a - d) + b * b);
    return std::max(std::abs(mid + rad - 1.0), std::abs(mid - rad - 1.0));
}

TEST(Ric, OrthonormalColumnsGiveZero) {
    Engine rng = make_engine(4, Stream::auxiliary);
    const CMatrix theta = orthonormal_columns(10, 7, rng);
    for (std::size_t k = 1; k <= 3; ++k) EXPECT_LT(estimate_ric(theta, k).delta, 1e-12);
}

TEST(Ric, OrderOneIsColumnNormSpread) {
    Engine rng = make_engine(5, Stream::auxiliary);
    const CMatrix theta = random_matrix(6, 9, rng, 0.4);
    double expected = 0;
    for (Eigen::Index j = 0; j < 9; ++j) expected = std::max(expected, std::abs(theta.col(j).squaredNorm() - 1.0));
    EXPECT_NEAR(estimate_ric(theta, 1).delta, expected, 1e-12);
}

TEST(Ric, UnitColumnsHaveZeroFirstOrderConstant) {
    Engine rng = make_engine(6, Stream::auxiliary);
    CMatrix theta = random_matrix(6, 9, rng);
    theta.colwise().normalize();
    EXPECT_LE(estimate_ric(theta, 1).delta, 1e-10);
}

TEST(Ric, PairsMatchClosedFormEigenvalues) {
    Engine rng = make_engine(7, Stream::auxiliary);
    const CMatrix theta = random_matrix(8, 12, rng, 1.0 / std::sqrt(8.0));
    double expected = 0;
    int pairs = 0;
    for (Eigen::Index i = 0; i < 12; ++i)
        for (Eigen::Index j = i + 1; j < 12; ++j, ++pairs) expected = std::max(expected, pair_distortion(theta, i, j));
    ASSERT_EQ(pairs, 66);
    const auto est = estimate_ric(theta, 2);
    EXPECT_EQ(est.supports_checked, 66u);
    EXPECT_FALSE(est.lower_bound_only);
    EXPECT_NEAR(est.delta, expected, 1e-12);
    EXPECT_NEAR(est.delta, estimate_ric(theta, 2, kMaxExhaustiveSupports, 3).delta, 0.0);
}

TEST(Ric, NestedSupportsInterlace) {
    for (std::uint64_t seed = 10; seed < 15; ++seed) {
        Engine rng = make_engine(seed, Stream::auxiliary);
        const CMatrix theta = random_matrix(7, 10, rng, 1.0 / std::sqrt(7.0));
        double prev = 0;
        for (std::size_t k = 1; k <= 4; ++k) {
            const auto est = estimate_ric(theta, k);
            EXPECT_GE(est.delta, prev - 1e-14);
            // every subset of the worst support is dominated
            const Support& w = est.worst_support;
            for (std::size_t drop = 0; k > 1 && drop < w.size(); ++drop) {
                Support sub = w;
                sub.erase(sub.begin() + static_cast<std::ptrdiff_t>(drop));
                EXPECT_LE(support_distortion(theta, sub), est.delta + 1e-14);
            }
            prev = est.delta;
        }
    }
}

TEST(Ric, GuardAndSampledMode) {
    Engine rng = make_engine(8, Stream::auxiliary);
    const CMatrix theta = random_matrix(10, 60, rng, 1.0 / std::sqrt(10.0));
    EXPECT_THROW(estimate_ric(theta, 6), DomainError);
    EXPECT_THROW(estimate_ric(theta, 61), std::exception);
    const auto exact = estimate_ric(theta, 2);
    Engine srng = make_engine(9, Stream::auxiliary);
    const auto sampled = estimate_ric_sampled(theta, 2, 200, srng);
    EXPECT_TRUE(sampled.lower_bound_only);
    EXPECT_LE(sampled.delta, exact.delta + 1e-14);
}

TEST(Ric, BinomialCount) {
    EXPECT_EQ(binomial_count(12, 2), 66.0);
    EXPECT_EQ(binomial_count(64, 0), 1.0);
    EXPECT_EQ(binomial_count(5, 7), 0.0);
}

TEST(Bounds, RecoveryConstantAtZeroAndInterior) {
    EXPECT_DOUBLE_EQ(recovery_constant(0.0), 4.0);
    EXPECT_DOUBLE_EQ(bp_error_bound(2.5, 0.0), 10.0);
    const long double d = 0.2L;
    const long double ref = 4.0L * std::sqrt(1.0L + d) / (1.0L - (1.0L + std::sqrt(2.0L)) * d);
    EXPECT_NEAR(recovery_constant(0.2), static_cast<double>(ref), 1e-12);
}

TEST(Bounds, PoleAndDomain) {
    const double edge = std::sqrt(2.0) - 1.0;
    EXPECT_TRUE(std::isinf(bp_error_bound(1.0, edge - 5e-13)));
    EXPECT_TRUE(std::isfinite(bp_error_bound(1.0, edge - 1e-6)));
    EXPECT_THROW(bp_error_bound(1.0, edge), DomainError);
    EXPECT_THROW(bp_error_bound(1.0, 0.5), DomainError);
    EXPECT_THROW(recovery_constant(-0.1), DomainError);
}

TEST(Bounds, NoiseContainment) {
    EXPECT_DOUBLE_EQ(noise_constant(4.0, 8), 0.25);
    EXPECT_NEAR(noise_containment_probability(4.0, 8, 8), 1.0 - std::exp(-2.0), 1e-15);
    EXPECT_NEAR(noise_containment_probability(std::sqrt(12.0), 6, 4), 1.0 - std::exp(-1.0), 1e-15);
    EXPECT_THROW(noise_containment_probability(3.9, 8, 8), DomainError);
}

TEST(Bounds, DetectionBoundExtendedPrecision) {
    const long double sqrt2 = std::sqrt(2.0L);
    const long double c2 = 4.0L * std::sqrt(1.2L) / (1.0L - (1.0L + sqrt2) * 0.2L);
    const long double c1 = (16.0L - 8.0L) / 32.0L;
    const long double c2l = c2 * 4.0L;
    const long double raw = 1.0L - std::exp(-c1 * 8.0L) - 4.0L * (1.0L - std::exp(-2.0L * c2l * c2l / 100.0L));
    const auto got = detection_probability_bound(4, 8, 8, 4.0, 0.2, 100.0, 1.0);
    EXPECT_NEAR(got.raw, static_cast<double>(raw), 1e-12);
    EXPECT_EQ(got.clipped, std::clamp(got.raw, 0.0, 1.0));
    EXPECT_LT(got.raw, 0.0);
    const auto strong = detection_probability_bound(1, 8, 8, 4.0, 0.0, 1e9, 0.5);
    EXPECT_GT(strong.raw, 0.0);
    EXPECT_EQ(strong.raw, strong.clipped);
}

TEST(Bounds, CapacityCoincidentCase) {
    const auto b = capacity_bounds(1, 1, 1.0, 1.0, 0.0, 1.0);
    EXPECT_DOUBLE_EQ(b.lower, 1.0);
    EXPECT_DOUBLE_EQ(b.upper, 1.0);
}

TEST(Bounds, CapacityOrderingAndPreset) {
    Engine rng = make_engine(11, Stream::auxiliary);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int t = 0; t < 200; ++t) {
        const double delta = u(rng) * (kRicLimit - 1e-6);
        const double pr = u(rng);
        const auto b = capacity_bounds(1 + t % 7, 1 + t % 5, 0.05 + 0.95 * u(rng), 1e3 * u(rng), delta, pr);
        EXPECT_LE(b.lower, b.upper);
    }
    EXPECT_DOUBLE_EQ(rip_probability_preset(64), 1.0 - 4.0 / 64.0);
    const auto preset = capacity_bounds_rip_preset(4, 8, 1.0, 100.0, 0.2, 64);
    const auto direct = capacity_bounds(4, 8, 1.0, 100.0, 0.2, 1.0 - 4.0 / 64.0);
    EXPECT_DOUBLE_EQ(preset.lower, direct.lower);
    EXPECT_DOUBLE_EQ(preset.upper, 4.0 * std::log2(801.0));
}

TEST(Bounds, AdaptiveLambda) {
    const long double c2 = 4.0L * std::sqrt(1.1L) / (1.0L - (1.0L + std::sqrt(2.0L)) * 0.1L);
    const long double ref = std::pow(1000.0L * 8.0L / (4.0L * c2 * c2), 0.25L);
    EXPECT_NEAR(adaptive_lambda(1000.0, 8, 0.1), static_cast<double>(ref), 1e-12);
}

TEST(Bounds, NoiseContainmentMonteCarloDominatesFormula) {
    const auto est = noise_containment_mc(8, 8, 8, 4.0, 20000, 5);
    const double formula = noise_containment_probability(4.0, 8, 8);
    const double se = std::sqrt(formula * (1 - formula) / 20000.0);
    EXPECT_GE(est.estimate, formula - 3 * se);
    const auto again = noise_containment_mc(8, 8, 8, 4.0, 20000, 5);
    EXPECT_EQ(again.successes, est.successes);
}

TEST(Bounds, WilsonInterval) {
    const auto p = wilson_interval(8, 10);
    EXPECT_NEAR(p.lower, 0.4902, 1e-4);
    EXPECT_NEAR(p.upper, 0.9433, 1e-4);
    const auto all = wilson_interval(50, 50);
    EXPECT_DOUBLE_EQ(all.upper, 1.0);
    EXPECT_LT(all.lower, 1.0);
}

} // namespace
} // namespace crsim
