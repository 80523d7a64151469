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

#ifdef USID_USE_LAPACKE
#include <lapacke.h>
#endif

namespace usid {

/// Eigen-decomposition of a real symmetric matrix, eigenvalues ascending.
struct EighResult {
    Eigen::VectorXd eigenvalues;
    Eigen::MatrixXd eigenvectors;  // columns, orthonormal
};

namespace detail {

inline void require_square(const Eigen::MatrixXd& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("matrix is not square");
}

}  // namespace detail

/// Full symmetric eigendecomposition (values + orthonormal vectors).
inline EighResult eigh_sym(const Eigen::MatrixXd& m) {
    detail::require_square(m);
    const auto n = m.rows();
    EighResult r;
#ifdef USID_USE_LAPACKE
    r.eigenvectors = m;
    r.eigenvalues.resize(n);
    lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', static_cast<lapack_int>(n),
                                     r.eigenvectors.data(), static_cast<lapack_int>(n),
                                     r.eigenvalues.data());
    if (info != 0) throw std::runtime_error("dsyevd failed, info=" + std::to_string(info));
#else
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
    if (solver.info() != Eigen::Success) throw std::runtime_error("eigensolver failed");
    r.eigenvalues = solver.eigenvalues();
    r.eigenvectors = solver.eigenvectors();
#endif
    return r;
}

/// Eigenvalues only, ascending.
inline Eigen::VectorXd eigvals_sym(const Eigen::MatrixXd& m) {
    detail::require_square(m);
    const auto n = m.rows();
#ifdef USID_USE_LAPACKE
    Eigen::MatrixXd work = m;
    Eigen::VectorXd w(n);
    lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'N', 'L', static_cast<lapack_int>(n),
                                     work.data(), static_cast<lapack_int>(n), w.data());
    if (info != 0) throw std::runtime_error("dsyevd failed, info=" + std::to_string(info));
    return w;
#else
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw std::runtime_error("eigensolver failed");
    return solver.eigenvalues();
#endif
}

/// Smallest eigenvalue of a real symmetric matrix.
inline double min_eigenvalue(const Eigen::MatrixXd& m) { return eigvals_sym(m)(0); }

}  // namespace usid
