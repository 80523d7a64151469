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
#include <stdexcept>
#include <vector>

#include "usid/compressed.hpp"
#include "usid/linalg.hpp"
#include "usid/partitions.hpp"

namespace usid {

/// Spectral data of a Hermitian compressed operator. `blocks` carries the
/// Young-diagram assignment of each distinct eigenvalue when known (filled for
/// the operator A by decompose_A; empty for generic input).
struct SpectralDecomposition {
    Eigen::VectorXd eigenvalues;   // ascending
    Eigen::MatrixXd eigenvectors;  // orthonormal columns
    std::vector<SpectralBlock> blocks;
    std::vector<int> block_of;  // eigenvalue index -> position in blocks
};

/// A = S_(N+1)(01) + S_(N+1)(02) - 1 on V_sym.
inline CompressedOperator build_A(int d, int N) {
    CompressedOperator op = symmetrizer_0a(d, N, 1);
    op.entries += symmetrizer_0a(d, N, 2).entries;
    op.entries -= Eigen::MatrixXd::Identity(op.dim(), op.dim());
    return op;
}

/// D = S_(N+1)(01) - S_(N+1)(02) on V_sym; traceless by exchange symmetry.
inline CompressedOperator build_D(int d, int N) {
    CompressedOperator op = symmetrizer_0a(d, N, 1);
    op.entries -= symmetrizer_0a(d, N, 2).entries;
    return op;
}

/// Symmetric eigendecomposition with a Hermiticity gate; blocks left empty.
inline SpectralDecomposition eigh(const CompressedOperator& op) {
    if (hermiticity_residual(op) > 1e-12)
        throw std::invalid_argument("eigh: operator is not Hermitian");
    auto r = eigh_sym(op.entries);
    return SpectralDecomposition{std::move(r.eigenvalues), std::move(r.eigenvectors), {}};
}

/// Diagonalize A and label each eigenvalue with its predicted block (nearest
/// predicted value; distinct predicted values are >= 1/(N+1) apart, far above
/// the 1e-8 matching tolerance). All three-row diagrams share the eigenvalue
/// -1, so those are matched as one cluster and block_of points at the first of
/// them. Throws if the counts disagree with the prediction.
inline SpectralDecomposition decompose_A(const CompressedOperator& a) {
    SpectralDecomposition dec = eigh(a);
    dec.blocks = predicted_spectrum(a.d, a.N);
    dec.block_of.resize(static_cast<std::size_t>(dec.eigenvalues.size()));

    // distinct predicted values -> (first block of that value, total multiplicity)
    std::vector<std::size_t> first_of_value;
    std::vector<std::int64_t> cluster_mult;
    std::vector<double> values;
    for (std::size_t b = 0; b < dec.blocks.size(); ++b) {
        if (!values.empty() && std::abs(values.back() - dec.blocks[b].eigenvalue) < 1e-9) {
            cluster_mult.back() += dec.blocks[b].multiplicity;
            continue;
        }
        values.push_back(dec.blocks[b].eigenvalue);
        first_of_value.push_back(b);
        cluster_mult.push_back(dec.blocks[b].multiplicity);
    }

    std::vector<std::int64_t> counts(values.size(), 0);
    for (Eigen::Index k = 0; k < dec.eigenvalues.size(); ++k) {
        const double v = dec.eigenvalues(k);
        std::size_t best = 0;
        double bestdist = 2.0;
        for (std::size_t c = 0; c < values.size(); ++c) {
            const double dist = std::abs(values[c] - v);
            if (dist < bestdist) {
                bestdist = dist;
                best = c;
            }
        }
        if (bestdist > 1e-8) throw std::logic_error("decompose_A: eigenvalue far from prediction");
        dec.block_of[static_cast<std::size_t>(k)] = static_cast<int>(first_of_value[best]);
        ++counts[best];
    }
    for (std::size_t c = 0; c < values.size(); ++c)
        if (counts[c] != cluster_mult[c])
            throw std::logic_error(
                "decompose_A: multiplicity mismatch at eigenvalue cluster " +
                std::to_string(values[c]));
    return dec;
}

inline SpectralDecomposition decompose_A(int d, int N) { return decompose_A(build_A(d, N)); }

/// Eigenvalue list expanded with multiplicities, ascending; what eigh(build_A)
/// must reproduce.
inline Eigen::VectorXd expand_predicted_eigenvalues(const std::vector<SpectralBlock>& blocks) {
    std::int64_t total = 0;
    for (const auto& b : blocks) total += b.multiplicity;
    Eigen::VectorXd v(total);
    Eigen::Index at = 0;
    for (const auto& b : blocks)
        for (std::int64_t k = 0; k < b.multiplicity; ++k) v(at++) = b.eigenvalue;
    return v;
}

}  // namespace usid
