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
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "usid/occupation.hpp"

namespace usid {

/// Largest operator dimension the compressed path will materialize.
inline constexpr std::int64_t kMaxCompressedDim = 20000;

/// Dense operator on V_sym = C^d (x) Sym^N (x) Sym^N, stored in the occupation
/// basis with flat index (i * d_N + m1) * d_N + m2. Every operator built here
/// (symmetrizers, exchange, A, D, POVM elements) is real in this basis.
struct CompressedOperator {
    int d = 0;
    int N = 0;
    Eigen::MatrixXd entries;
    bool hermitian = false;

    Eigen::Index dim() const { return entries.rows(); }
};

inline std::int64_t compressed_dim(int d, int N) {
    if (d < 1) throw std::domain_error("compressed_dim: d must be >= 1");
    if (N < 1) throw std::domain_error("compressed_dim: N must be >= 1");
    const std::int64_t dn = sym_dim(d, N);
    const std::int64_t dim = d * dn * dn;
    if (dim > kMaxCompressedDim)
        throw std::domain_error("compressed dimension " + std::to_string(dim) +
                                " exceeds guard " + std::to_string(kMaxCompressedDim));
    return dim;
}

/// max |entries - entries^T|; the Hermiticity residual of a real-stored operator.
inline double hermiticity_residual(const CompressedOperator& op) {
    return (op.entries - op.entries.transpose()).cwiseAbs().maxCoeff();
}

inline CompressedOperator compressed_identity(int d, int N) {
    const auto dim = compressed_dim(d, N);
    return CompressedOperator{d, N, Eigen::MatrixXd::Identity(dim, dim), true};
}

/// Projector onto the totally symmetric subspace of systems (0, a), a = 1 or 2,
/// acting on V_sym. Matrix elements between |i,m> and |i',m'> on the active pair
/// are sqrt((m_i+1)(m'_i'+1))/(N+1) when m + e_i == m' + e_i', zero otherwise;
/// the other reference block is a spectator.
inline CompressedOperator symmetrizer_0a(int d, int N, int a) {
    if (a != 1 && a != 2) throw std::invalid_argument("symmetrizer_0a: a must be 1 or 2");
    const auto dim = compressed_dim(d, N);
    const auto basis = enumerate_occupation_basis(d, N);
    const int dn = static_cast<int>(basis.size());

    // Pair block on C^d (x) Sym^N, indexed by i * d_N + m.
    Eigen::MatrixXd block = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(d) * dn,
                                                  static_cast<Eigen::Index>(d) * dn);
    for (int m = 0; m < dn; ++m) {
        const auto& counts = basis.vectors[static_cast<std::size_t>(m)].counts;
        for (int i = 0; i < d; ++i) {
            const Eigen::Index row = static_cast<Eigen::Index>(i) * dn + m;
            block(row, row) = (counts[static_cast<std::size_t>(i)] + 1.0) / (N + 1.0);
            for (int ip = 0; ip < d; ++ip) {
                if (ip == i || counts[static_cast<std::size_t>(ip)] == 0) continue;
                auto shifted = counts;
                ++shifted[static_cast<std::size_t>(i)];
                --shifted[static_cast<std::size_t>(ip)];
                const int mp = basis.index_of(shifted);
                const Eigen::Index col = static_cast<Eigen::Index>(ip) * dn + mp;
                block(row, col) = std::sqrt((counts[static_cast<std::size_t>(i)] + 1.0) *
                                            counts[static_cast<std::size_t>(ip)]) /
                                  (N + 1.0);
            }
        }
    }

    CompressedOperator op{d, N, Eigen::MatrixXd::Zero(dim, dim), true};
    // Spread the pair block over V_sym with the spectator block diagonal.
    for (int i = 0; i < d; ++i)
        for (int m = 0; m < dn; ++m)
            for (int ip = 0; ip < d; ++ip)
                for (int mp = 0; mp < dn; ++mp) {
                    const double v = block(static_cast<Eigen::Index>(i) * dn + m,
                                           static_cast<Eigen::Index>(ip) * dn + mp);
                    if (v == 0.0) continue;
                    for (int s = 0; s < dn; ++s) {
                        Eigen::Index row, col;
                        if (a == 1) {
                            row = (static_cast<Eigen::Index>(i) * dn + m) * dn + s;
                            col = (static_cast<Eigen::Index>(ip) * dn + mp) * dn + s;
                        } else {
                            row = (static_cast<Eigen::Index>(i) * dn + s) * dn + m;
                            col = (static_cast<Eigen::Index>(ip) * dn + s) * dn + mp;
                        }
                        op.entries(row, col) = v;
                    }
                }
    return op;
}

/// Index permutation of the 1 <-> 2 reference-block swap.
inline std::vector<Eigen::Index> exchange_permutation(int d, int N) {
    const auto dim = compressed_dim(d, N);
    const auto dn = sym_dim(d, N);
    std::vector<Eigen::Index> perm(static_cast<std::size_t>(dim));
    for (std::int64_t i = 0; i < d; ++i)
        for (std::int64_t m1 = 0; m1 < dn; ++m1)
            for (std::int64_t m2 = 0; m2 < dn; ++m2)
                perm[static_cast<std::size_t>((i * dn + m1) * dn + m2)] =
                    (i * dn + m2) * dn + m1;
    return perm;
}

/// The exchange operator T swapping the two reference blocks; T^2 = 1.
inline CompressedOperator exchange_12(int d, int N) {
    const auto dim = compressed_dim(d, N);
    const auto perm = exchange_permutation(d, N);
    CompressedOperator op{d, N, Eigen::MatrixXd::Zero(dim, dim), true};
    for (Eigen::Index j = 0; j < dim; ++j) op.entries(perm[static_cast<std::size_t>(j)], j) = 1.0;
    return op;
}

/// T * M * T without materializing T.
inline Eigen::MatrixXd conjugate_by_exchange(const Eigen::MatrixXd& m, int d, int N) {
    const auto perm = exchange_permutation(d, N);
    Eigen::MatrixXd out(m.rows(), m.cols());
    for (Eigen::Index c = 0; c < m.cols(); ++c)
        for (Eigen::Index r = 0; r < m.rows(); ++r)
            out(perm[static_cast<std::size_t>(r)], perm[static_cast<std::size_t>(c)]) = m(r, c);
    return out;
}

namespace detail {

/// Permanent by Ryser's formula; fine at the sizes occupation bases need.
inline Complex permanent(const Eigen::MatrixXcd& a) {
    const int n = static_cast<int>(a.rows());
    if (n == 0) return Complex{1.0, 0.0};
    if (n > 20) throw std::domain_error("permanent: matrix too large");
    Complex total{0.0, 0.0};
    const unsigned full = 1u << n;
    for (unsigned s = 1; s < full; ++s) {
        Complex prod{1.0, 0.0};
        for (int r = 0; r < n; ++r) {
            Complex rowsum{0.0, 0.0};
            for (int c = 0; c < n; ++c)
                if (s & (1u << c)) rowsum += a(r, c);
            prod *= rowsum;
        }
        const int bits = __builtin_popcount(s);
        total += ((n - bits) % 2 == 0 ? 1.0 : -1.0) * prod;
    }
    return total;
}

inline std::vector<int> occupation_to_levels(const std::vector<int>& counts) {
    std::vector<int> levels;
    for (std::size_t i = 0; i < counts.size(); ++i)
        levels.insert(levels.end(), static_cast<std::size_t>(counts[i]), static_cast<int>(i));
    return levels;
}

}  // namespace detail

/// Matrix of U^(x n) restricted to Sym^n(C^d) in the occupation basis:
/// <m'|U^(x n)|m> = per(U[w', w]) / sqrt(prod m'! prod m!).
inline Eigen::MatrixXcd sym_power_matrix(const Eigen::MatrixXcd& u, int n) {
    if (u.rows() != u.cols()) throw std::invalid_argument("sym_power_matrix: U not square");
    const int d = static_cast<int>(u.rows());
    const auto basis = enumerate_occupation_basis(d, n);
    const auto dn = basis.size();
    Eigen::MatrixXcd out(dn, dn);
    for (std::int64_t col = 0; col < dn; ++col) {
        const auto& mc = basis.vectors[static_cast<std::size_t>(col)].counts;
        const auto wc = detail::occupation_to_levels(mc);
        const double sc = detail::sqrt_multinomial(n, mc);
        for (std::int64_t row = 0; row < dn; ++row) {
            const auto& mr = basis.vectors[static_cast<std::size_t>(row)].counts;
            const auto wr = detail::occupation_to_levels(mr);
            const double sr = detail::sqrt_multinomial(n, mr);
            Eigen::MatrixXcd sub(n, n);
            for (int r = 0; r < n; ++r)
                for (int c = 0; c < n; ++c)
                    sub(r, c) = u(wr[static_cast<std::size_t>(r)], wc[static_cast<std::size_t>(c)]);
            // sqrt(mult_r * mult_c) / n! == 1 / sqrt(prod mr! prod mc!)
            out(row, col) = detail::permanent(sub) * (sr * sc) / std::tgamma(n + 1.0);
        }
    }
    return out;
}

/// Compressed representation of U^(x (2N+1)) on V_sym: U (x) Sym^N(U) (x) Sym^N(U).
inline Eigen::MatrixXcd compressed_unitary_rep(const Eigen::MatrixXcd& u, int N) {
    const int d = static_cast<int>(u.rows());
    const auto su = sym_power_matrix(u, N);
    const auto dn = su.rows();
    const Eigen::Index dim = d * dn * dn;
    if (dim > kMaxCompressedDim) throw std::domain_error("compressed_unitary_rep: guard exceeded");
    Eigen::MatrixXcd out(dim, dim);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index ip = 0; ip < d; ++ip)
            for (Eigen::Index m1 = 0; m1 < dn; ++m1)
                for (Eigen::Index m1p = 0; m1p < dn; ++m1p)
                    for (Eigen::Index m2 = 0; m2 < dn; ++m2)
                        for (Eigen::Index m2p = 0; m2p < dn; ++m2p)
                            out((i * dn + m1) * dn + m2, (ip * dn + m1p) * dn + m2p) =
                                u(i, ip) * su(m1, m1p) * su(m2, m2p);
    return out;
}

}  // namespace usid
