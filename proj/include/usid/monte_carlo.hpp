/*
 * Copyright 2026 The usid authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <Eigen/Dense>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <thread>
#include <vector>

#include "usid/haar.hpp"
#include "usid/povm.hpp"

namespace usid {

/// Monte Carlo estimate with its statistical uncertainty.
struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::int64_t samples = 0;
    std::uint64_t seed = 0;
};

/// Single-pass mean/variance accumulator (Welford), with associative merge.
struct RunningStat {
    std::int64_t count = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) {
        ++count;
        const double delta = x - mean;
        mean += delta / static_cast<double>(count);
        m2 += delta * (x - mean);
    }

    void merge(const RunningStat& o) {
        if (o.count == 0) return;
        if (count == 0) {
            *this = o;
            return;
        }
        const double delta = o.mean - mean;
        const std::int64_t n = count + o.count;
        mean += delta * static_cast<double>(o.count) / static_cast<double>(n);
        m2 += o.m2 + delta * delta * static_cast<double>(count) *
                         static_cast<double>(o.count) / static_cast<double>(n);
        count = n;
    }

    double std_error() const {
        if (count < 2) return 0.0;
        return std::sqrt(m2 / static_cast<double>(count - 1) / static_cast<double>(count));
    }
};

namespace detail {

inline constexpr std::int64_t kMcChunk = 4096;

/// Chunked sampling loop; sample k always draws from stream (seed, k) and
/// chunks merge in index order, so the estimate is bit-identical for any
/// worker count.
template <typename ValueFn>
McEstimate run_mc(std::int64_t samples, std::uint64_t seed, int workers, ValueFn&& value) {
    if (samples < 1) throw std::domain_error("run_mc: samples must be >= 1");
    if (workers <= 0) {
        const unsigned hc = std::thread::hardware_concurrency();
        workers = static_cast<int>(hc ? hc : 1);
    }
    const std::int64_t nchunks = (samples + kMcChunk - 1) / kMcChunk;
    std::vector<RunningStat> chunk_stats(static_cast<std::size_t>(nchunks));

    std::atomic<std::int64_t> next_chunk{0};
    auto worker = [&]() {
        for (;;) {
            const std::int64_t c = next_chunk.fetch_add(1);
            if (c >= nchunks) return;
            RunningStat stat;
            const std::int64_t lo = c * kMcChunk;
            const std::int64_t hi = std::min(samples, lo + kMcChunk);
            for (std::int64_t k = lo; k < hi; ++k) {
                StreamRng rng(seed, static_cast<std::uint64_t>(k));
                stat.add(value(rng));
            }
            chunk_stats[static_cast<std::size_t>(c)] = stat;
        }
    };

    if (workers == 1 || nchunks == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        const int n = static_cast<int>(std::min<std::int64_t>(workers, nchunks));
        pool.reserve(static_cast<std::size_t>(n));
        for (int t = 0; t < n; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    RunningStat total;
    for (const auto& s : chunk_stats) total.merge(s);
    return McEstimate{total.mean, total.std_error(), samples, seed};
}

}  // namespace detail

/// Frobenius distance between the empirical mean of rho^(x n) over Haar samples
/// and the exact S_n/d_n, computed in the Sym^n occupation basis where
/// S_n/d_n = I/d_n.
inline double haar_moment_check(int d, int n, std::int64_t samples, std::uint64_t seed) {
    const auto basis = enumerate_occupation_basis(d, n);
    const auto dn = basis.size();
    if (dn > 4096) throw std::domain_error("haar_moment_check: Sym^n dimension guard exceeded");
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(dn, dn);
    for (std::int64_t k = 0; k < samples; ++k) {
        StreamRng rng(seed, static_cast<std::uint64_t>(k));
        const PureState phi = sample_haar_state(d, rng);
        const Eigen::VectorXcd v = product_state_coordinates(phi.amplitudes, basis);
        acc += v * v.adjoint();
    }
    acc /= static_cast<double>(samples);
    acc -= Eigen::MatrixXcd::Identity(dn, dn) / static_cast<double>(dn);
    return acc.norm();
}

/// Outcome probabilities for one reference pair, averaged over the two
/// equiprobable inputs.
struct OutcomeProbabilities {
    double correct = 0.0;
    double error = 0.0;
    double inconclusive = 0.0;
};

inline OutcomeProbabilities conditional_probabilities(const Povm& p, const SymBasis& basis,
                                                      const PureState& phi1,
                                                      const PureState& phi2) {
    if (phi1.d() != p.d || phi2.d() != p.d)
        throw std::invalid_argument("conditional_probabilities: dimension mismatch");
    const Eigen::VectorXcd v1 = product_state_coordinates(phi1.amplitudes, basis);
    const Eigen::VectorXcd v2 = product_state_coordinates(phi2.amplitudes, basis);
    const Eigen::VectorXcd psi1 = embed_input_state(phi1.amplitudes, v1, v2);
    const Eigen::VectorXcd psi2 = embed_input_state(phi2.amplitudes, v1, v2);
    OutcomeProbabilities out;
    out.correct = 0.5 * (real_quadratic_form(p.e1.entries, psi1) +
                         real_quadratic_form(p.e2.entries, psi2));
    out.error = 0.5 * (real_quadratic_form(p.e2.entries, psi1) +
                       real_quadratic_form(p.e1.entries, psi2));
    out.inconclusive = 0.5 * (real_quadratic_form(p.e0.entries, psi1) +
                              real_quadratic_form(p.e0.entries, psi2));
    return out;
}

inline OutcomeProbabilities conditional_probabilities(const Povm& p, const PureState& phi1,
                                                      const PureState& phi2) {
    return conditional_probabilities(p, enumerate_occupation_basis(p.d, p.N), phi1, phi2);
}

/// Monte Carlo estimate of the mean identification success probability of the
/// optimal POVM over Haar-random reference pairs.
inline McEstimate mc_mean_identification(int d, int N, std::int64_t samples,
                                         std::uint64_t seed, int workers = 0) {
    const Povm povm = build_optimal_povm(d, N);
    const SymBasis basis = enumerate_occupation_basis(d, N);
    return detail::run_mc(samples, seed, workers, [&](StreamRng& rng) {
        const PureState phi1 = sample_haar_state(d, rng);
        const PureState phi2 = sample_haar_state(d, rng);
        return conditional_probabilities(povm, basis, phi1, phi2).correct;
    });
}

/// Monte Carlo estimate of the mean unambiguous discrimination probability,
/// the average of 1 - |<phi1|phi2>|.
inline McEstimate mc_mean_discrimination(int d, std::int64_t samples, std::uint64_t seed,
                                         int workers = 0) {
    return detail::run_mc(samples, seed, workers, [&](StreamRng& rng) {
        const PureState phi1 = sample_haar_state(d, rng);
        const PureState phi2 = sample_haar_state(d, rng);
        return 1.0 - std::abs(phi1.amplitudes.dot(phi2.amplitudes));
    });
}

}  // namespace usid
