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

#include <complex>
#include <cstdint>
#include <random>
#include <string_view>

namespace crsim {

// Named sub-streams derived from a master seed. Each component draws from its
// own stream so it can be regenerated without replaying the others.
enum class Stream : std::uint64_t {
    geometry = 1,
    channel = 2,
    signal = 3,
    noise = 4,
    compression = 5,
    quantizer = 6,
    auxiliary = 7,
};

using Engine = std::mt19937_64;

// splitmix64 finalizer; bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Folds an arbitrary list of keys into one seed. Order matters.
constexpr std::uint64_t derive_seed(std::uint64_t master) noexcept { return mix64(master); }

template <typename... Keys>
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t key, Keys... rest) noexcept {
    return derive_seed(mix64(master ^ mix64(key + 0x632be59bd9b4e019ULL)), static_cast<std::uint64_t>(rest)...);
}

// Seed for one trial of one sweep point.
constexpr std::uint64_t trial_seed(std::uint64_t master, std::uint64_t sweep_index, std::uint64_t trial_index) noexcept {
    return derive_seed(master, 0x7472ULL, sweep_index, trial_index);
}

inline Engine make_engine(std::uint64_t seed, Stream stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream)};
    return Engine(seq);
}

// Standard circular complex Gaussian, E|w|^2 = 1.
template <typename Urbg>
std::complex<double> circular_gaussian(Urbg& rng) {
    std::normal_distribution<double> half(0.0, 0.7071067811865476);
    const double re = half(rng);
    const double im = half(rng);
    return {re, im};
}

} // namespace crsim
