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

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "usid/occupation.hpp"

namespace usid {

/// Young diagram labeling a spectral block of the identification problem:
/// [2N+1], [lambda1, 2N+1-lambda1], or [lambda1, 2N-lambda1, 1].
struct PartitionLabel {
    std::vector<int> rows;

    explicit PartitionLabel(std::vector<int> r) : rows(std::move(r)) {
        if (rows.empty() || rows.size() > 3)
            throw std::invalid_argument("PartitionLabel: 1 to 3 rows expected");
        for (std::size_t k = 1; k < rows.size(); ++k)
            if (rows[k] > rows[k - 1]) throw std::invalid_argument("PartitionLabel: rows not sorted");
        if (rows.back() < 1) throw std::invalid_argument("PartitionLabel: rows must be positive");
        if (rows.size() == 3 && rows[2] != 1)
            throw std::invalid_argument("PartitionLabel: third row must have length 1");
    }

    int cells() const {
        int s = 0;
        for (int r : rows) s += r;
        return s;
    }

    std::string str() const {
        std::string s = "[";
        for (std::size_t k = 0; k < rows.size(); ++k)
            s += (k ? "," : "") + std::to_string(rows[k]);
        return s + "]";
    }

    bool operator==(const PartitionLabel& o) const { return rows == o.rows; }
};

/// One predicted eigenvalue block of the operator A.
struct SpectralBlock {
    PartitionLabel label;
    double eigenvalue = 0.0;
    std::int64_t multiplicity = 0;
};

namespace detail {

inline std::int64_t checked_int128_to_64(__int128 v, const char* what) {
    if (v > static_cast<__int128>(INT64_MAX) || v < -static_cast<__int128>(INT64_MAX))
        throw std::overflow_error(std::string(what) + ": exceeds int64");
    return static_cast<std::int64_t>(v);
}

inline __int128 gcd128(__int128 a, __int128 b) {
    while (b != 0) {
        const __int128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

inline __int128 checked_mul(__int128 a, __int128 b, const char* what) {
    __int128 r;
    if (__builtin_mul_overflow(a, b, &r))
        throw std::overflow_error(std::string(what) + ": intermediate overflow");
    return r;
}

/// binomial with stepwise-exact division; __int128 range.
inline __int128 binomial128(std::int64_t n, std::int64_t k, const char* what) {
    if (k < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    __int128 r = 1;
    for (std::int64_t i = 1; i <= k; ++i) r = checked_mul(r, n - k + i, what) / i;
    return r;
}

}  // namespace detail

/// Multiplicity of the two-row S_(2N+1) irrep [lambda1, lambda2] on (C^d)^(x (2N+1)):
/// (lambda1+d-1)!(lambda2+d-2)!(lambda1-lambda2+1) / ((d-1)!(d-2)!(lambda1+1)!lambda2!),
/// evaluated as C(lambda1+d-1, d-2) C(lambda2+d-2, d-2) (lambda1-lambda2+1)/(d-1)
/// to keep intermediates near the result.
inline std::int64_t partition_multiplicity(int lambda1, int lambda2, int d) {
    if (d < 2) throw std::domain_error("partition_multiplicity: d must be >= 2");
    if (lambda2 < 0 || lambda1 < lambda2)
        throw std::invalid_argument("partition_multiplicity: need lambda1 >= lambda2 >= 0");
    const char* what = "partition_multiplicity";
    __int128 num = detail::checked_mul(detail::binomial128(lambda1 + d - 1, d - 2, what),
                                       detail::binomial128(lambda2 + d - 2, d - 2, what), what);
    num = detail::checked_mul(num, lambda1 - lambda2 + 1, what);
    return detail::checked_int128_to_64(num / (d - 1), what);
}

/// Dimension of the U(d) irrep with the given highest weight (Weyl formula);
/// zero when the partition has more rows than d. Independent oracle for the
/// two- and three-row multiplicities. The running fraction is gcd-reduced at
/// every factor pair, so intermediates stay near the result.
inline std::int64_t weyl_dimension(const std::vector<int>& partition, int d) {
    if (d < 1) throw std::domain_error("weyl_dimension: d must be >= 1");
    const int rows = static_cast<int>(partition.size());
    if (rows > d) return 0;
    std::vector<std::int64_t> lam(static_cast<std::size_t>(d), 0);
    for (std::size_t k = 0; k < partition.size(); ++k) lam[k] = partition[k];
    __int128 num = 1, den = 1;
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j) {
            if (i >= rows) break;  // lam[i] == lam[j] == 0: the pair cancels
            num = detail::checked_mul(
                num, lam[static_cast<std::size_t>(i)] - lam[static_cast<std::size_t>(j)] + j - i,
                "weyl_dimension");
            den = detail::checked_mul(den, j - i, "weyl_dimension");
            const __int128 g = detail::gcd128(num, den);
            if (g > 1) {
                num /= g;
                den /= g;
            }
        }
    return detail::checked_int128_to_64(num / den, "weyl_dimension");
}

/// Predicted spectrum of A on V_sym, ascending in eigenvalue: -1 on the
/// three-row blocks, -(lambda1-N)/(N+1) and +(lambda1-N)/(N+1) on the two-row
/// blocks, +1 on the totally symmetric block. Multiplicities sum to d*d_N^2.
inline std::vector<SpectralBlock> predicted_spectrum(int d, int N) {
    if (d < 1) throw std::domain_error("predicted_spectrum: d must be >= 1");
    if (N < 1) throw std::domain_error("predicted_spectrum: N must be >= 1");
    std::vector<SpectralBlock> blocks;
    if (d == 1) {
        // V_sym is one-dimensional and totally symmetric; A = 1.
        blocks.push_back({PartitionLabel({2 * N + 1}), 1.0, 1});
        return blocks;
    }

    const std::int64_t dim = d * sym_dim(d, N) * sym_dim(d, N);
    const std::int64_t dim_v1 = sym_dim(d, 2 * N + 1);
    std::int64_t dim_v2 = 0;
    for (int lambda1 = N + 1; lambda1 <= 2 * N; ++lambda1)
        dim_v2 += 2 * partition_multiplicity(lambda1, 2 * N + 1 - lambda1, d);
    const std::int64_t dim_v3 = dim - dim_v1 - dim_v2;
    if (dim_v3 < 0) throw std::logic_error("predicted_spectrum: negative V3 dimension");

    // V3, eigenvalue -1: per-diagram sizes from the Weyl oracle, cross-checked
    // against the subtraction total.
    std::int64_t v3_sum = 0;
    for (int lambda1 = N; lambda1 <= 2 * N - 1; ++lambda1) {
        const int lambda2 = 2 * N - lambda1;  // >= 1, and <= lambda1 since lambda1 >= N
        const std::int64_t mult = weyl_dimension({lambda1, lambda2, 1}, d);
        if (mult == 0) continue;
        blocks.push_back({PartitionLabel({lambda1, lambda2, 1}), -1.0, mult});
        v3_sum += mult;
    }
    if (v3_sum != dim_v3)
        throw std::logic_error("predicted_spectrum: V3 sizes disagree with subtraction");

    for (int lambda1 = 2 * N; lambda1 >= N + 1; --lambda1)
        blocks.push_back({PartitionLabel({lambda1, 2 * N + 1 - lambda1}),
                          -(lambda1 - N) / (N + 1.0),
                          partition_multiplicity(lambda1, 2 * N + 1 - lambda1, d)});
    for (int lambda1 = N + 1; lambda1 <= 2 * N; ++lambda1)
        blocks.push_back({PartitionLabel({lambda1, 2 * N + 1 - lambda1}),
                          (lambda1 - N) / (N + 1.0),
                          partition_multiplicity(lambda1, 2 * N + 1 - lambda1, d)});
    blocks.push_back({PartitionLabel({2 * N + 1}), 1.0, dim_v1});
    return blocks;
}

}  // namespace usid
