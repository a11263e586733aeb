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
#include "crsim/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace crsim {

double binomial_count(std::size_t n, std::size_t k) {
    if (k > n) return 0.0;
    k = std::min(k, n - k);
    double acc = 1.0;
    for (std::size_t i = 1; i <= k; ++i) {
        acc = acc * static_cast<double>(n - k + i) / static_cast<double>(i);
        if (!std::isfinite(acc)) return std::numeric_limits<double>::max();
    }
    return std::round(acc);
}

namespace {

double gram_distortion(const CMatrix& gram, const Support& support) {
    const auto k = static_cast<Eigen::Index>(support.size());
    if (k == 1) {
        const auto j = static_cast<Eigen::Index>(support[0]);
        return std::abs(gram(j, j).real() - 1.0);
    }
    CMatrix sub(k, k);
    for (Eigen::Index a = 0; a < k; ++a)
        for (Eigen::Index b = 0; b < k; ++b)
            sub(a, b) = gram(static_cast<Eigen::Index>(support[static_cast<std::size_t>(a)]),
                             static_cast<Eigen::Index>(support[static_cast<std::size_t>(b)]));
    sub.diagonal().array() -= 1.0;
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(sub, Eigen::EigenvaluesOnly);
    const RVector& ev = eig.eigenvalues();
    return std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
}

// Advances `comb` (strictly increasing, values < n) to the next k-subset in
// lexicographic order; false after the last one.
bool next_combination(Support& comb, std::size_t n) {
    const std::size_t k = comb.size();
    for (std::size_t pos = k; pos-- > 0;) {
        if (comb[pos] < n - k + pos) {
            ++comb[pos];
            for (std::size_t j = pos + 1; j < k; ++j) comb[j] = comb[j - 1] + 1;
            return true;
        }
    }
    return false;
}

} // namespace

double support_distortion(const CMatrix& theta, const Support& support) {
    if (support.empty()) return 0.0;
    const CMatrix sub = select_columns(theta, support);
    Support local(support.size());
    std::iota(local.begin(), local.end(), std::size_t{0});
    return gram_distortion(sub.adjoint() * sub, local);
}

RicEstimate estimate_ric(const CMatrix& theta, std::size_t k, double max_supports, unsigned threads) {
    const auto n = static_cast<std::size_t>(theta.cols());
    if (k == 0) throw DomainError("RIC order must be at least 1");
    if (k > n) throw DomainError("RIC order exceeds the number of columns");
    const double count = binomial_count(n, k);
    if (count > max_supports) {
        std::ostringstream msg;
        msg << "exhaustive RIC needs C(" << n << ", " << k << ") = " << count << " supports, above the limit of "
            << max_supports << "; use the sampled estimator";
        throw DomainError(msg.str());
    }

    const CMatrix gram = theta.adjoint() * theta;

    // one task per leading index; each walks the subsets that start with it
    std::vector<RicEstimate> partial(n - k + 1);
    parallel_for(partial.size(), threads, [&](std::size_t first) {
        RicEstimate& best = partial[first];
        best.order = k;
        Support tail(k - 1);
        std::iota(tail.begin(), tail.end(), first + 1);
        Support full(k);
        do {
            full[0] = first;
            std::copy(tail.begin(), tail.end(), full.begin() + 1);
            const double d = gram_distortion(gram, full);
            ++best.supports_checked;
            if (d > best.delta || best.worst_support.empty()) {
                best.delta = d;
                best.worst_support = full;
            }
            if (tail.empty()) break;
            // the tail ranges over (k-1)-subsets of {first+1, ..., n-1}
            Support shifted(tail);
            for (auto& v : shifted) v -= first + 1;
            if (!next_combination(shifted, n - first - 1)) break;
            for (std::size_t j = 0; j < tail.size(); ++j) tail[j] = shifted[j] + first + 1;
        } while (true);
    });

    RicEstimate out;
    out.order = k;
    for (const auto& p : partial) {
        out.supports_checked += p.supports_checked;
        if (p.delta > out.delta || out.worst_support.empty()) {
            out.delta = p.delta;
            out.worst_support = p.worst_support;
        }
    }
    return out;
}

RicEstimate estimate_ric_sampled(const CMatrix& theta, std::size_t k, std::size_t samples, Engine& rng) {
    const auto n = static_cast<std::size_t>(theta.cols());
    if (k == 0 || k > n) throw DomainError("RIC order must be in [1, number of columns]");
    const CMatrix gram = theta.adjoint() * theta;
    RicEstimate out;
    out.order = k;
    out.lower_bound_only = true;
    std::vector<std::size_t> pool(n);
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    for (std::size_t s = 0; s < samples; ++s) {
        for (std::size_t j = 0; j < k; ++j) {
            std::uniform_int_distribution<std::size_t> pick(j, n - 1);
            std::swap(pool[j], pool[pick(rng)]);
        }
        Support support(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(k));
        std::sort(support.begin(), support.end());
        const double d = gram_distortion(gram, support);
        ++out.supports_checked;
        if (d > out.delta || out.worst_support.empty()) {
            out.delta = d;
            out.worst_support = support;
        }
    }
    return out;
}

} // namespace crsim
