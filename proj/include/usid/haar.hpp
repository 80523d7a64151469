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
#include <stdexcept>

#include "usid/occupation.hpp"
#include "usid/rng.hpp"

namespace usid {

/// Pure state on C^d; unit norm.
struct PureState {
    Eigen::VectorXcd amplitudes;

    int d() const { return static_cast<int>(amplitudes.size()); }
};

/// Unitary-invariant (Haar) sample: a vector of iid standard complex Gaussians,
/// normalized.
inline PureState sample_haar_state(int d, StreamRng& rng) {
    if (d < 1) throw std::domain_error("sample_haar_state: d must be >= 1");
    Eigen::VectorXcd v(d);
    for (int i = 0; i < d; ++i) {
        double re, im;
        rng.next_gaussian_pair(re, im);
        v(i) = Complex{re, im};
    }
    v /= v.norm();
    return PureState{std::move(v)};
}

/// Haar-random unitary: QR of a complex Ginibre matrix with the phase of the
/// R diagonal folded into Q.
inline Eigen::MatrixXcd sample_haar_unitary(int d, StreamRng& rng) {
    Eigen::MatrixXcd g(d, d);
    for (int c = 0; c < d; ++c)
        for (int r = 0; r < d; ++r) {
            double re, im;
            rng.next_gaussian_pair(re, im);
            g(r, c) = Complex{re, im};
        }
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
    Eigen::MatrixXcd q = qr.householderQ();
    const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int c = 0; c < d; ++c) {
        const Complex rc = r(c, c);
        q.col(c) *= (std::abs(rc) > 0) ? rc / std::abs(rc) : Complex{1.0, 0.0};
    }
    return q;
}

}  // namespace usid
