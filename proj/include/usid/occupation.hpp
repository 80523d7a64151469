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
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

namespace usid {

using Complex = std::complex<double>;

/// Exact binomial coefficient; throws on int64 overflow.
inline std::int64_t binomial(int n, int k) {
    if (n < 0) throw std::domain_error("binomial: negative n");
    if (k < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    unsigned __int128 r = 1;
    for (int i = 1; i <= k; ++i) {
        r = r * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
        if (r > static_cast<unsigned __int128>(INT64_MAX))
            throw std::overflow_error("binomial: result exceeds int64");
    }
    return static_cast<std::int64_t>(r);
}

/// Dimension d_n of the totally symmetric subspace of n d-level systems.
inline std::int64_t sym_dim(int d, int n) {
    if (d < 1) throw std::domain_error("sym_dim: d must be >= 1");
    if (n < 0) throw std::domain_error("sym_dim: n must be >= 0");
    return binomial(n + d - 1, d - 1);
}

/// Multiset of n single-system levels: counts[i] = how many systems sit in level i.
struct OccupationVector {
    std::vector<int> counts;
    int total = 0;

    OccupationVector() = default;
    explicit OccupationVector(std::vector<int> c) : counts(std::move(c)) {
        for (int x : counts) {
            if (x < 0) throw std::invalid_argument("occupation counts must be non-negative");
            total += x;
        }
    }

    int d() const { return static_cast<int>(counts.size()); }
    bool operator==(const OccupationVector& o) const { return counts == o.counts; }
};

/// Ordered occupation-number basis of Sym^n(C^d), colexicographic on counts.
struct SymBasis {
    int d = 0;
    int n = 0;
    std::vector<OccupationVector> vectors;
    std::map<std::vector<int>, int> index;

    std::int64_t size() const { return static_cast<std::int64_t>(vectors.size()); }

    int index_of(const std::vector<int>& counts) const {
        auto it = index.find(counts);
        if (it == index.end()) throw std::out_of_range("occupation vector not in basis");
        return it->second;
    }
};

namespace detail {

inline void emit_colex(int d, int n, std::vector<int>& tail, std::vector<OccupationVector>& out) {
    if (d == 1) {
        std::vector<int> counts;
        counts.reserve(1 + tail.size());
        counts.push_back(n);
        counts.insert(counts.end(), tail.rbegin(), tail.rend());
        out.emplace_back(std::move(counts));
        return;
    }
    for (int last = 0; last <= n; ++last) {
        tail.push_back(last);
        emit_colex(d - 1, n - last, tail, out);
        tail.pop_back();
    }
}

/// sqrt(n!/prod(m_i!)) for the occupation m; multinomial weights of symmetric states.
inline double sqrt_multinomial(int n, const std::vector<int>& counts) {
    double logm = std::lgamma(n + 1.0);
    for (int c : counts) logm -= std::lgamma(c + 1.0);
    return std::exp(0.5 * logm);
}

inline Complex cpow_int(Complex base, int e) {
    Complex r{1.0, 0.0};
    for (int k = 0; k < e; ++k) r *= base;
    return r;
}

}  // namespace detail

/// All occupation vectors with d levels and n particles, in colex order.
inline SymBasis enumerate_occupation_basis(int d, int n) {
    if (d < 1) throw std::domain_error("enumerate_occupation_basis: d must be >= 1");
    if (n < 0) throw std::domain_error("enumerate_occupation_basis: n must be >= 0");
    SymBasis basis;
    basis.d = d;
    basis.n = n;
    basis.vectors.reserve(static_cast<std::size_t>(sym_dim(d, n)));
    std::vector<int> tail;
    detail::emit_colex(d, n, tail, basis.vectors);
    for (std::size_t k = 0; k < basis.vectors.size(); ++k)
        basis.index.emplace(basis.vectors[k].counts, static_cast<int>(k));
    return basis;
}

/// Coordinates of |phi>^(x n) in the given Sym^n occupation basis.
/// Component on m is sqrt(n!/prod m_i!) * prod_i c_i^{m_i}.
inline Eigen::VectorXcd product_state_coordinates(const Eigen::VectorXcd& state,
                                                  const SymBasis& basis) {
    if (state.size() != basis.d)
        throw std::invalid_argument("product_state_coordinates: dimension mismatch");
    if (std::abs(state.norm() - 1.0) > 1e-12)
        throw std::invalid_argument("product_state_coordinates: state is not normalized");
    Eigen::VectorXcd out(basis.size());
    for (std::int64_t k = 0; k < basis.size(); ++k) {
        const auto& m = basis.vectors[static_cast<std::size_t>(k)].counts;
        Complex amp{detail::sqrt_multinomial(basis.n, m), 0.0};
        for (int i = 0; i < basis.d; ++i)
            if (m[static_cast<std::size_t>(i)] > 0)
                amp *= detail::cpow_int(state(i), m[static_cast<std::size_t>(i)]);
        out(k) = amp;
    }
    return out;
}

inline Eigen::VectorXcd product_state_coordinates(const Eigen::VectorXcd& state, int n) {
    return product_state_coordinates(state, enumerate_occupation_basis(
                                                static_cast<int>(state.size()), n));
}

}  // namespace usid
