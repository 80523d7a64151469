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
#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "usid/occupation.hpp"

namespace usid {

/// Largest full-tensor-space dimension the oracle path will materialize.
inline constexpr std::int64_t kMaxFullDim = 4096;

namespace detail {

inline std::int64_t ipow(std::int64_t base, int exp) {
    std::int64_t r = 1;
    for (int k = 0; k < exp; ++k) {
        r *= base;
        if (r > (std::int64_t{1} << 40)) throw std::overflow_error("ipow: too large");
    }
    return r;
}

inline void require_full_dim(std::int64_t dim) {
    if (dim > kMaxFullDim)
        throw std::domain_error("full tensor space dimension " + std::to_string(dim) +
                                " exceeds guard " + std::to_string(kMaxFullDim));
}

/// Digits of a full-space basis index, slot 0 most significant.
inline void index_to_digits(std::int64_t idx, int d, int n, std::vector<int>& digits) {
    digits.resize(static_cast<std::size_t>(n));
    for (int s = n - 1; s >= 0; --s) {
        digits[static_cast<std::size_t>(s)] = static_cast<int>(idx % d);
        idx /= d;
    }
}

inline std::int64_t digits_to_index(const std::vector<int>& digits, int d) {
    std::int64_t idx = 0;
    for (int t : digits) idx = idx * d + t;
    return idx;
}

}  // namespace detail

/// Average of sigma over all permutations of `systems` (identity elsewhere) on (C^d)^(x n).
inline Eigen::MatrixXd subset_symmetrizer(int d, int n, std::vector<int> systems) {
    if (d < 1) throw std::domain_error("subset_symmetrizer: d must be >= 1");
    for (int s : systems)
        if (s < 0 || s >= n) throw std::invalid_argument("subset_symmetrizer: bad system index");
    const std::int64_t dim = detail::ipow(d, n);
    detail::require_full_dim(dim);

    std::sort(systems.begin(), systems.end());
    std::vector<int> order(systems.size());
    std::iota(order.begin(), order.end(), 0);

    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(dim, dim);
    std::vector<int> digits, image(static_cast<std::size_t>(n));
    std::int64_t nperm = 0;
    do {
        ++nperm;
        for (std::int64_t j = 0; j < dim; ++j) {
            detail::index_to_digits(j, d, n, digits);
            image = digits;
            for (std::size_t k = 0; k < systems.size(); ++k)
                image[static_cast<std::size_t>(systems[k])] =
                    digits[static_cast<std::size_t>(systems[static_cast<std::size_t>(
                        order[k])])];
            out(detail::digits_to_index(image, d), j) += 1.0;
        }
    } while (std::next_permutation(order.begin(), order.end()));
    return out / static_cast<double>(nperm);
}

/// Projector S_n onto Sym^n(C^d) as the average of all n! permutation operators.
inline Eigen::MatrixXd full_space_symmetrizer(int d, int n) {
    if (n < 1) throw std::domain_error("full_space_symmetrizer: n must be >= 1");
    std::vector<int> all(static_cast<std::size_t>(n));
    std::iota(all.begin(), all.end(), 0);
    return subset_symmetrizer(d, n, all);
}

/// Isometry from Sym^n occupation coordinates into (C^d)^(x n).
inline Eigen::MatrixXd sym_embedding(int d, int n) {
    const std::int64_t dim = detail::ipow(d, n);
    detail::require_full_dim(dim);
    const auto basis = enumerate_occupation_basis(d, n);
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(dim, basis.size());
    std::vector<int> digits;
    std::vector<int> counts(static_cast<std::size_t>(d));
    for (std::int64_t j = 0; j < dim; ++j) {
        detail::index_to_digits(j, d, n, digits);
        std::fill(counts.begin(), counts.end(), 0);
        for (int t : digits) ++counts[static_cast<std::size_t>(t)];
        const int col = basis.index_of(counts);
        // each distinct arrangement of m carries weight sqrt(prod m!/n!)
        b(j, col) = 1.0 / detail::sqrt_multinomial(n, counts);
    }
    return b;
}

/// Isometry from V_sym = C^d (x) Sym^N (x) Sym^N into (C^d)^(x (2N+1)),
/// system order 0, 1_1..1_N, 2_1..2_N.
inline Eigen::MatrixXd embed_compressed(int d, int N) {
    const std::int64_t full = detail::ipow(d, 2 * N + 1);
    detail::require_full_dim(full);
    const Eigen::MatrixXd bs = sym_embedding(d, N);
    const auto dn = bs.cols();
    const std::int64_t dblock = detail::ipow(d, N);
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(full, d * dn * dn);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index m1 = 0; m1 < dn; ++m1)
            for (Eigen::Index m2 = 0; m2 < dn; ++m2) {
                const Eigen::Index col = (i * dn + m1) * dn + m2;
                for (std::int64_t r1 = 0; r1 < dblock; ++r1) {
                    const double w1 = bs(r1, m1);
                    if (w1 == 0.0) continue;
                    for (std::int64_t r2 = 0; r2 < dblock; ++r2) {
                        const double w2 = bs(r2, m2);
                        if (w2 == 0.0) continue;
                        b((i * dblock + r1) * dblock + r2, col) = w1 * w2;
                    }
                }
            }
    return b;
}

/// Systems of the (0, a) pair inside the 2N+1 chain, a = 1 or 2.
inline std::vector<int> pair_systems(int N, int a) {
    std::vector<int> systems{0};
    const int offset = (a == 1) ? 1 : N + 1;
    for (int k = 0; k < N; ++k) systems.push_back(offset + k);
    return systems;
}

/// Full-space permutation swapping the two reference blocks of the 2N+1 chain.
inline Eigen::MatrixXd full_space_exchange(int d, int N) {
    const std::int64_t dim = detail::ipow(d, 2 * N + 1);
    detail::require_full_dim(dim);
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(dim, dim);
    std::vector<int> digits, image;
    for (std::int64_t j = 0; j < dim; ++j) {
        detail::index_to_digits(j, d, 2 * N + 1, digits);
        image = digits;
        for (int k = 0; k < N; ++k)
            std::swap(image[static_cast<std::size_t>(1 + k)],
                      image[static_cast<std::size_t>(1 + N + k)]);
        out(detail::digits_to_index(image, d), j) = 1.0;
    }
    return out;
}

}  // namespace usid
