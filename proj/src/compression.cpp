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

#include "crsim/compression.hpp"

#include "crsim/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace crsim {

CompressionSet generate_compression_matrices(std::size_t num_rrh, std::size_t measurements,
                                             std::size_t num_subcarriers, Engine& rng) {
    if (num_rrh < 1) throw ConfigError("need at least one RRH");
    if (measurements < 1) throw ConfigError("measurements per RRH must be at least 1");
    if (measurements > num_subcarriers)
        throw ConfigError("measurements per RRH (" + std::to_string(measurements) + ") exceed N_c (" +
                          std::to_string(num_subcarriers) + "); compression rate must be <= 1");

    const double magnitude = 1.0 / std::sqrt(static_cast<double>(num_rrh * measurements));
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    CompressionSet set;
    set.reserve(num_rrh);
    for (std::size_t i = 0; i < num_rrh; ++i) {
        CompressionMatrix m;
        m.rrh_index = i;
        m.a.resize(static_cast<Eigen::Index>(measurements), static_cast<Eigen::Index>(num_subcarriers));
        for (Eigen::Index r = 0; r < m.a.rows(); ++r)
            for (Eigen::Index c = 0; c < m.a.cols(); ++c) m.a(r, c) = std::polar(magnitude, phase(rng));
        set.push_back(std::move(m));
    }
    return set;
}

CVector compress(const CompressionMatrix& a, const CVector& y) {
    if (a.a.cols() != y.size())
        throw ConfigError("compress: A is " + std::to_string(a.a.rows()) + "x" + std::to_string(a.a.cols()) +
                          " but y has length " + std::to_string(y.size()));
    return a.a * y;
}

CMatrix block_diagonal(const CompressionSet& set) {
    Eigen::Index rows = 0, cols = 0;
    for (const auto& m : set) {
        rows += m.a.rows();
        cols += m.a.cols();
    }
    CMatrix out = CMatrix::Zero(rows, cols);
    Eigen::Index r0 = 0, c0 = 0;
    for (const auto& m : set) {
        out.block(r0, c0, m.a.rows(), m.a.cols()) = m.a;
        r0 += m.a.rows();
        c0 += m.a.cols();
    }
    return out;
}

void QuantizerConfig::validate() const {
    if (!enabled || bits_per_dimension == 0) return;
    if (bits_per_dimension % 2 != 0)
        throw ConfigError("bits_per_dimension must be even (split between real and imaginary parts), got " +
                          std::to_string(bits_per_dimension));
    if (bits_per_dimension > 62) throw ConfigError("bits_per_dimension must be at most 62");
}

double quantize_scalar(double v, double range, unsigned bits_per_part) {
    const double levels = std::ldexp(1.0, static_cast<int>(bits_per_part));
    const double step = 2.0 * range / levels;
    const double half = levels / 2.0;
    const double cell = std::clamp(std::floor(v / step), -half, half - 1.0);
    return (cell + 0.5) * step;
}

double quantizer_range(const CVector& z) {
    if (z.size() == 0) return 0.0;
    // 2n real parts, ||z||^2 of total energy
    const double rms = std::sqrt(z.squaredNorm() / (2.0 * static_cast<double>(z.size())));
    return 4.0 * rms;
}

QuantizedVector quantize_with_range(const CVector& z, const QuantizerConfig& cfg, double range) {
    cfg.validate();
    QuantizedVector out{z, 0.0, range};
    if (!cfg.enabled || cfg.bits_per_dimension == 0 || !(range > 0)) return out;

    const unsigned bits = cfg.bits_per_dimension / 2;
    for (Eigen::Index i = 0; i < z.size(); ++i)
        out.values(i) = {quantize_scalar(z(i).real(), range, bits), quantize_scalar(z(i).imag(), range, bits)};
    out.error_norm = (out.values - z).norm();
    return out;
}

QuantizedVector quantize(const CVector& z, const QuantizerConfig& cfg) {
    return quantize_with_range(z, cfg, quantizer_range(z));
}

} // namespace crsim
