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
#include "crsim/pipeline.hpp"
#include "crsim/recovery.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

namespace crsim {
namespace {

CMatrix random_matrix(Eigen::Index m, Eigen::Index n, Engine& rng) {
    CMatrix a(m, n);
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j < n; ++j) a(i, j) = circular_gaussian(rng);
    return a;
}

CVector random_vector(Eigen::Index n, Engine& rng) {
    CVector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = circular_gaussian(rng);
    return v;
}

// Least-squares residual through a QR of the selected columns.
double qr_residual(const CMatrix& theta, const Support& s, const CVector& z) {
    if (s.empty()) return z.norm();
    CMatrix sub(theta.rows(), static_cast<Eigen::Index>(s.size()));
    for (std::size_t j = 0; j < s.size(); ++j) sub.col(static_cast<Eigen::Index>(j)) = theta.col(static_cast<Eigen::Index>(s[j]));
    const CVector coef = sub.colPivHouseholderQr().solve(z);
    return (z - sub * coef).norm();
}

struct SmallSystem {
    ScenarioConfig cfg;
    ChannelRealization ch;
    CompressionSet a;
};

SmallSystem small_system(std::uint64_t seed) {
    SmallSystem s;
    s.cfg.num_rrh = 3;
    s.cfg.users_per_carrier = 2;
    s.cfg.num_subcarriers = 4;
    s.cfg.num_active = 2;
    Engine geo = make_engine(seed, Stream::geometry);
    Engine ch = make_engine(seed, Stream::channel);
    Engine comp = make_engine(seed, Stream::compression);
    s.ch = generate_channel(s.cfg, generate_geometry(s.cfg, geo), ch);
    s.a = generate_compression_matrices(3, 3, 4, comp);
    return s;
}

TEST(Assemble, ThetaBlocksEqualCompressedChannels) {
    const auto sys = small_system(1);
    const CMatrix theta = assemble_theta(sys.ch, sys.a);
    ASSERT_EQ(theta.rows(), 9);
    ASSERT_EQ(theta.cols(), 8);
    for (std::size_t i = 0; i < 3; ++i) {
        const CMatrix expected = sys.a[i].a * sys.ch.rrh_matrix(i);
        EXPECT_LT((theta.middleRows(static_cast<Eigen::Index>(3 * i), 3) - expected).norm(), 1e-12);
    }
}

TEST(Assemble, AggregateModelHoldsWithoutQuantization) {
    auto sys = small_system(2);
    Engine sig = make_engine(2, Stream::signal);
    Engine noise = make_engine(2, Stream::noise);
    const auto x = generate_signal(sys.cfg, sig);
    const auto rx = received_signals(sys.ch, x.x, noise);
    std::vector<CVector> zs, ns;
    for (std::size_t i = 0; i < 3; ++i) {
        zs.push_back(compress(sys.a[i], rx.y[i]));
        ns.push_back(compress(sys.a[i], rx.noise[i]));
    }
    const CMatrix theta = assemble_theta(sys.ch, sys.a);
    EXPECT_LT((stack(zs) - theta * x.x - stack(ns)).norm(), 1e-12);
}

TEST(Detection, MagnitudeOrderBreaksTiesByIndex) {
    CVector x(5);
    x << cplx(1, 0), cplx(0, 2), cplx(-2, 0), cplx(0.5, 0), cplx(0, -1);
    EXPECT_EQ(magnitude_order(x), (Support{1, 2, 0, 4, 3}));
}

TEST(Detection, MatchesExhaustivePrefixOracle) {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        Engine rng = make_engine(seed, Stream::auxiliary);
        const CMatrix theta = random_matrix(6, 10, rng);
        const CVector x_rough = random_vector(10, rng);
        const CVector z = random_vector(6, rng) * 2.0;
        const double lambda = 0.5 + 0.1 * static_cast<double>(seed % 10);

        std::vector<std::pair<double, std::size_t>> keyed;
        for (std::size_t j = 0; j < 10; ++j) keyed.push_back({-std::abs(x_rough(static_cast<Eigen::Index>(j))), j});
        std::sort(keyed.begin(), keyed.end());
        Support expected;
        for (const auto& [neg_mag, j] : keyed) {
            expected.push_back(j);
            if (qr_residual(theta, expected, z) <= lambda || expected.size() == 6) break;
        }
        const auto got = detect_active_users(x_rough, theta, z, lambda);
        EXPECT_EQ(got.support, expected) << "seed " << seed;
    }
}

TEST(Detection, IncrementalResidualMatchesSvdRoute) {
    Engine rng = make_engine(40, Stream::auxiliary);
    const CMatrix theta = random_matrix(12, 20, rng);
    const CVector x_rough = random_vector(20, rng);
    const CVector z = random_vector(12, rng) * 3.0;
    const auto got = detect_active_users(x_rough, theta, z, 0.0);
    ASSERT_EQ(got.residual_history.size(), got.support.size());
    Support prefix;
    for (std::size_t k = 0; k < got.support.size(); ++k) {
        prefix.push_back(got.support[k]);
        EXPECT_NEAR(got.residual_history[k], projection_residual(theta, prefix, z), 1e-10 * z.norm());
        if (k > 0) EXPECT_LE(got.residual_history[k], got.residual_history[k - 1] + 1e-12);
    }
}

TEST(Detection, StopsAtFirstPrefixInsideBall) {
    CMatrix theta = CMatrix::Identity(4, 6);
    CVector x_rough = CVector::Zero(6);
    x_rough(2) = 3.0;
    x_rough(0) = 1.0;
    CVector z = CVector::Zero(4);
    z(2) = 3.0;
    z(0) = 0.1;
    const auto got = detect_active_users(x_rough, theta, z, 0.5);
    EXPECT_EQ(got.support, (Support{2}));
    EXPECT_FALSE(got.hit_cap);
}

TEST(Detection, CapWhenResidualNeverFits) {
    // all columns parallel, z orthogonal to them
    CMatrix theta = CMatrix::Zero(4, 6);
    for (Eigen::Index j = 0; j < 6; ++j) theta(0, j) = cplx(1.0 + static_cast<double>(j), 0);
    CVector z = CVector::Zero(4);
    z(1) = 5.0;
    Engine rng = make_engine(41, Stream::auxiliary);
    const auto got = detect_active_users(random_vector(6, rng), theta, z, 1.0);
    EXPECT_EQ(got.support.size(), 4u);
    EXPECT_TRUE(got.hit_cap);
}

TEST(ZeroForcing, RestrictedPseudoInverse) {
    Engine rng = make_engine(42, Stream::auxiliary);
    const CMatrix theta = random_matrix(8, 12, rng);
    const CVector z = random_vector(8, rng);
    const Support s{1, 4, 9};
    const auto got = zero_forcing(theta, s, z);
    CMatrix sub(8, 3);
    for (int j = 0; j < 3; ++j) sub.col(j) = theta.col(static_cast<Eigen::Index>(s[static_cast<std::size_t>(j)]));
    const CVector ref = sub.colPivHouseholderQr().solve(z);
    for (Eigen::Index j = 0; j < 12; ++j) {
        const auto it = std::find(s.begin(), s.end(), static_cast<std::size_t>(j));
        const cplx expected = it == s.end() ? cplx(0, 0) : ref(it - s.begin());
        EXPECT_NEAR(std::abs(got.x(j) - expected), 0.0, 1e-10);
    }
    EXPECT_FALSE(got.rank_deficient);
    EXPECT_NEAR(got.sigma_min, Eigen::JacobiSVD<CMatrix>(sub).singularValues()(2), 1e-12);
}

TEST(ZeroForcing, NoiselessExactRecovery) {
    Engine rng = make_engine(43, Stream::auxiliary);
    const CMatrix theta = random_matrix(8, 12, rng);
    CVector x = CVector::Zero(12);
    x(3) = cplx(1, 2);
    x(7) = cplx(-0.5, 0.25);
    const auto got = zero_forcing(theta, {3, 7}, theta * x);
    EXPECT_LT((got.x - x).norm(), 1e-12);
}

TEST(ZeroForcing, EmptySupportAndRankDeficiency) {
    Engine rng = make_engine(44, Stream::auxiliary);
    CMatrix theta = random_matrix(5, 6, rng);
    EXPECT_EQ(zero_forcing(theta, {}, random_vector(5, rng)).x.norm(), 0.0);
    theta.col(2) = theta.col(0) * cplx(0, 2);
    EXPECT_TRUE(zero_forcing(theta, {0, 2}, random_vector(5, rng)).rank_deficient);
    EXPECT_THROW(zero_forcing(theta, {7}, random_vector(5, rng)), ConfigError);
}

TEST(Omp, OrthonormalDictionaryRecoversSupport) {
    Engine rng = make_engine(45, Stream::auxiliary);
    const CMatrix q = random_matrix(10, 10, rng).householderQr().householderQ();
    CVector x = CVector::Zero(10);
    x(2) = 4.0;
    x(6) = cplx(0, -3);
    const auto got = omp_zf_baseline(q, q * x, 1e-9);
    EXPECT_EQ(got.support_est, (Support{2, 6}));
    EXPECT_LT((got.x_final - x).norm(), 1e-10);
}

TEST(Omp, InsideBallSelectsNothing) {
    Engine rng = make_engine(46, Stream::auxiliary);
    const CMatrix theta = random_matrix(6, 8, rng);
    const CVector z = random_vector(6, rng) * 0.01;
    const auto got = omp_zf_baseline(theta, z, 1.0);
    EXPECT_TRUE(got.support_est.empty());
    EXPECT_EQ(got.x_final.norm(), 0.0);
}

TEST(Omp, ResidualEndsInsideBall) {
    Engine rng = make_engine(47, Stream::auxiliary);
    const CMatrix theta = random_matrix(10, 20, rng);
    const CVector z = random_vector(10, rng) * 4.0;
    const auto got = omp_zf_baseline(theta, z, 1.5);
    EXPECT_LE(got.residual_norm, 1.5);
    EXPECT_NEAR(got.residual_norm, qr_residual(theta, got.support_est, z), 1e-10);
}

TEST(RecoverJoint, NoiselessSingleUser) {
    Engine rng = make_engine(48, Stream::auxiliary);
    const CMatrix theta = random_matrix(16, 24, rng) / 4.0;
    CVector x = CVector::Zero(24);
    x(11) = cplx(10, -5);
    const auto got = recover_joint(theta, theta * x, 1e-3);
    EXPECT_TRUE(got.valid);
    EXPECT_EQ(got.support_est, (Support{11}));
    EXPECT_LT((got.x_final - x).norm(), 1e-9);
}

TEST(Mmse, IdentityChannelScalesByShrinkage) {
    const CMatrix theta = CMatrix::Identity(4, 4);
    const CMatrix w = mmse_joint_filter(theta, 3.0, CMatrix::Identity(4, 4));
    EXPECT_LT((w - 0.75 * CMatrix::Identity(4, 4)).norm(), 1e-10);
}

TEST(Mmse, MatchesInformationForm) {
    Engine rng = make_engine(49, Stream::auxiliary);
    const CMatrix theta = random_matrix(6, 9, rng);
    const CMatrix b = random_matrix(6, 6, rng);
    const CMatrix c = b * b.adjoint() + CMatrix::Identity(6, 6);
    const double p = 2.5;
    // (I/p + Theta^H C^-1 Theta)^-1 Theta^H C^-1
    const CMatrix c_inv = c.inverse();
    const CMatrix info = (CMatrix::Identity(9, 9) / p + theta.adjoint() * c_inv * theta).inverse() * theta.adjoint() * c_inv;
    EXPECT_LT((mmse_joint_filter(theta, p, c) - info).norm(), 1e-8 * info.norm());
}

TEST(Mmse, VanishingPriorGivesZero) {
    Engine rng = make_engine(50, Stream::auxiliary);
    const CMatrix theta = random_matrix(6, 9, rng);
    const CVector z = random_vector(6, rng);
    const CMatrix a = CMatrix::Identity(6, 6);
    EXPECT_LT(mmse_joint_baseline(theta, z, 1e-12, a).norm(), 1e-10);
}

TEST(Mmse, SeparateScalarCase) {
    ScenarioConfig cfg;
    cfg.num_rrh = 1;
    cfg.users_per_carrier = 1;
    cfg.num_subcarriers = 3;
    cfg.num_active = 1;
    Engine geo = make_engine(51, Stream::geometry);
    Engine chr = make_engine(51, Stream::channel);
    const auto ch = generate_channel(cfg, generate_geometry(cfg, geo), chr);
    Engine rng = make_engine(51, Stream::auxiliary);
    const CVector y = random_vector(3, rng);
    const double p = 7.0;
    const CVector got = mmse_separate_baseline(ch, {y}, p);
    for (Eigen::Index c = 0; c < 3; ++c) {
        const cplx h = ch.gain(0, static_cast<std::size_t>(c));
        EXPECT_NEAR(std::abs(got(c) - p * std::conj(h) * y(c) / (p * std::norm(h) + 1.0)), 0.0, 1e-12);
    }
}

TEST(Mmse, ServingRrhIsStrongestLargeScale) {
    ScenarioConfig cfg;
    cfg.num_rrh = 1;
    Engine geo = make_engine(52, Stream::geometry);
    Engine chr = make_engine(52, Stream::channel);
    auto ch = generate_channel(cfg, generate_geometry(cfg, geo), chr);
    for (auto i : serving_rrh(ch)) EXPECT_EQ(i, 0u);

    cfg.num_rrh = 5;
    Engine geo2 = make_engine(53, Stream::geometry);
    ch = generate_channel(cfg, generate_geometry(cfg, geo2), chr);
    const auto serving = serving_rrh(ch);
    for (std::size_t u = 0; u < ch.num_users(); ++u)
        for (std::size_t i = 0; i < 5; ++i) EXPECT_GE(ch.large_scale(serving[u], u), ch.large_scale(i, u));
}

TEST(Pipeline, NoiselessSingleUserDetectedAlmostAlways) {
    TrialConfig cfg;
    cfg.scenario.num_active = 1;
    cfg.add_noise = false;
    cfg.quantizer.enabled = false;
    cfg.lambda = 1e-6;
    const auto est = detection_probability_mc(cfg, 100, 1);
    EXPECT_GE(est.rate.estimate, 0.99);
}

TEST(Pipeline, SchemesShareRealization) {
    TrialConfig cfg;
    cfg.scenario.num_active = 3;
    const auto a = realize_trial(cfg, 77);
    const auto b = realize_trial(cfg, 77);
    EXPECT_EQ((a.theta - b.theta).norm(), 0.0);
    EXPECT_EQ((a.z - b.z).norm(), 0.0);
    const auto genie = evaluate_scheme(Scheme::genie_zf, a, cfg);
    EXPECT_TRUE(genie.detection_correct);
    EXPECT_GT(genie.sum_rate, 0.0);
}

} // namespace
} // namespace crsim
