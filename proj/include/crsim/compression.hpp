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
#include <vector>

namespace crsim {

// R x N_c random-phase matrix of one RRH. Every entry has magnitude
// 1/sqrt(M*R) and an independent uniform phase.
struct CompressionMatrix {
    CMatrix a;
    std::size_t rrh_index = 0;
};

using CompressionSet = std::vector<CompressionMatrix>;

CompressionSet generate_compression_matrices(std::size_t num_rrh, std::size_t measurements,
                                             std::size_t num_subcarriers, Engine& rng);

// z_i = A_i y_i.
CVector compress(const CompressionMatrix& a, const CVector& y);

// diag(A_1, ..., A_M) as a dense (M*R) x (M*N_c) matrix.
CMatrix block_diagonal(const CompressionSet& set);

// b bits per complex sample, b/2 for each of the real and imaginary parts.
struct QuantizerConfig {
    unsigned bits_per_dimension = 10;
    bool enabled = true;

    void validate() const;
};

struct QuantizedVector {
    CVector values;
    double error_norm = 0;  // ||zhat - z||
    double range = 0;       // clip level used for both parts
};

// Uniform mid-rise quantizer on [-range, range] with 2^(b/2) cells. Values
// outside the range are clipped to the outermost reconstruction level.
double quantize_scalar(double v, double range, unsigned bits_per_part);

// Range used for a vector: 4 * RMS over all real and imaginary parts.
double quantizer_range(const CVector& z);

// Quantizes z with its own range. Disabled or zero-bit configs, and the
// all-zero vector, pass through unchanged.
QuantizedVector quantize(const CVector& z, const QuantizerConfig& cfg);

// Same, with the range supplied by the caller (the scale is side information).
QuantizedVector quantize_with_range(const CVector& z, const QuantizerConfig& cfg, double range);

} // namespace crsim
