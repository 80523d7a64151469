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
#include <cmath>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "usid/haar.hpp"
#include "usid/linalg.hpp"
#include "usid/spectral.hpp"

namespace usid {

/// Identification POVM (E0 inconclusive, E1 "input is state 1", E2 symmetric).
struct Povm {
    CompressedOperator e0, e1, e2;
    int d = 0;
    int N = 0;
};

struct ValidationReport {
    double min_eigenvalue_e0 = 0.0;
    double min_eigenvalue_e1 = 0.0;
    double min_eigenvalue_e2 = 0.0;
    double completeness_residual = 0.0;       // |E0+E1+E2 - 1|_F
    double noerror_residual_max = 0.0;        // max over sampled reference pairs
    double noerror_operator_residual = 0.0;   // max(|E1 S02|_F, |E2 S01|_F)
    int pairs_tested = 0;
    double tol = 0.0;
    bool passed = false;
};

/// The operators the POVM construction runs on; built once per (d, N) and shared.
struct ProblemOperators {
    int d = 0;
    int N = 0;
    CompressedOperator s01, s02;
    CompressedOperator a;
    SpectralDecomposition dec;  // of A, with Young-diagram blocks
};

inline ProblemOperators build_problem_operators(int d, int N) {
    ProblemOperators ops;
    ops.d = d;
    ops.N = N;
    ops.s01 = symmetrizer_0a(d, N, 1);
    ops.s02 = symmetrizer_0a(d, N, 2);
    ops.a = CompressedOperator{d, N, ops.s01.entries + ops.s02.entries, true};
    ops.a.entries -= Eigen::MatrixXd::Identity(ops.a.dim(), ops.a.dim());
    ops.dec = decompose_A(ops.a);
    return ops;
}

namespace detail {

/// U f(lambda) U^T with eigenvalues clamped to [-1, 1].
inline Eigen::MatrixXd spectral_function(const SpectralDecomposition& dec,
                                         const std::function<double(double)>& f) {
    Eigen::VectorXd fv(dec.eigenvalues.size());
    for (Eigen::Index k = 0; k < dec.eigenvalues.size(); ++k)
        fv(k) = f(std::clamp(dec.eigenvalues(k), -1.0, 1.0));
    return dec.eigenvectors * fv.asDiagonal() * dec.eigenvectors.transpose();
}

inline double abs_zero_snapped(double lambda) {
    // below 1e-12 the modulus is noise around an exact zero
    return std::abs(lambda) < 1e-12 ? 0.0 : std::abs(lambda);
}

inline void symmetrize(Eigen::MatrixXd& m) { m = ((m + m.transpose()) * 0.5).eval(); }

}  // namespace detail

/// Optimal POVM: E1 = (1+|A|)^-1 (1 - S02), E2 = T E1 T, E0 = (A+|A|)/(1+|A|).
inline Povm build_optimal_povm(const ProblemOperators& ops) {
    const auto dim = ops.a.dim();
    const Eigen::MatrixXd inv_one_plus_abs = detail::spectral_function(
        ops.dec, [](double x) { return 1.0 / (1.0 + detail::abs_zero_snapped(x)); });

    Povm p;
    p.d = ops.d;
    p.N = ops.N;
    Eigen::MatrixXd e1 =
        inv_one_plus_abs * (Eigen::MatrixXd::Identity(dim, dim) - ops.s02.entries);
    detail::symmetrize(e1);
    Eigen::MatrixXd e2 = conjugate_by_exchange(e1, ops.d, ops.N);
    Eigen::MatrixXd e0 = detail::spectral_function(ops.dec, [](double x) {
        const double ax = detail::abs_zero_snapped(x);
        return (x + ax) / (1.0 + ax);
    });
    p.e1 = CompressedOperator{ops.d, ops.N, std::move(e1), true};
    p.e2 = CompressedOperator{ops.d, ops.N, std::move(e2), true};
    p.e0 = CompressedOperator{ops.d, ops.N, std::move(e0), true};
    return p;
}

inline Povm build_optimal_povm(int d, int N) {
    return build_optimal_povm(build_problem_operators(d, N));
}

/// Re <psi| M |psi> for a real symmetric M and complex psi.
inline double real_quadratic_form(const Eigen::MatrixXd& m, const Eigen::VectorXcd& psi) {
    const Eigen::VectorXd re = psi.real();
    const Eigen::VectorXd im = psi.imag();
    return re.dot(m * re) + im.dot(m * im);
}

/// |phi_0> (x) |v1> (x) |v2> in the flat V_sym index convention.
inline Eigen::VectorXcd embed_input_state(const Eigen::VectorXcd& phi0,
                                          const Eigen::VectorXcd& v1,
                                          const Eigen::VectorXcd& v2) {
    const auto d = phi0.size();
    const auto dn = v1.size();
    if (v2.size() != dn) throw std::invalid_argument("embed_input_state: block size mismatch");
    Eigen::VectorXcd psi(d * dn * dn);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index m1 = 0; m1 < dn; ++m1)
            for (Eigen::Index m2 = 0; m2 < dn; ++m2)
                psi((i * dn + m1) * dn + m2) = phi0(i) * v1(m1) * v2(m2);
    return psi;
}

/// POVM axioms plus the no-error conditions, checked both at operator level and
/// against `pairs` Haar-random reference pairs.
inline ValidationReport validate_povm(const Povm& p, const ProblemOperators& ops, int pairs,
                                      double tol, std::uint64_t seed) {
    if (tol <= 0) throw std::domain_error("validate_povm: tol must be positive");
    const auto dim = p.e0.dim();
    ValidationReport rep;
    rep.tol = tol;
    rep.pairs_tested = pairs;
    rep.min_eigenvalue_e0 = min_eigenvalue(p.e0.entries);
    rep.min_eigenvalue_e1 = min_eigenvalue(p.e1.entries);
    rep.min_eigenvalue_e2 = min_eigenvalue(p.e2.entries);
    rep.completeness_residual = (p.e0.entries + p.e1.entries + p.e2.entries -
                                 Eigen::MatrixXd::Identity(dim, dim))
                                    .norm();
    rep.noerror_operator_residual = std::max((p.e1.entries * ops.s02.entries).norm(),
                                             (p.e2.entries * ops.s01.entries).norm());

    const auto basis = enumerate_occupation_basis(p.d, p.N);
    for (int k = 0; k < pairs; ++k) {
        StreamRng rng(seed, static_cast<std::uint64_t>(k));
        const PureState phi1 = sample_haar_state(p.d, rng);
        const PureState phi2 = sample_haar_state(p.d, rng);
        const Eigen::VectorXcd v1 = product_state_coordinates(phi1.amplitudes, basis);
        const Eigen::VectorXcd v2 = product_state_coordinates(phi2.amplitudes, basis);
        const Eigen::VectorXcd psi1 = embed_input_state(phi1.amplitudes, v1, v2);
        const Eigen::VectorXcd psi2 = embed_input_state(phi2.amplitudes, v1, v2);
        // claiming "1" on input 2 (and vice versa) must have zero probability
        const double r = std::max(real_quadratic_form(p.e1.entries, psi2),
                                  real_quadratic_form(p.e2.entries, psi1));
        rep.noerror_residual_max = std::max(rep.noerror_residual_max, r);
    }

    const double mineig = std::min({rep.min_eigenvalue_e0, rep.min_eigenvalue_e1,
                                    rep.min_eigenvalue_e2});
    rep.passed = mineig >= -tol && rep.completeness_residual <= tol &&
                 rep.noerror_residual_max <= tol && rep.noerror_operator_residual <= tol;
    return rep;
}

inline ValidationReport validate_povm(const Povm& p, int pairs, double tol,
                                      std::uint64_t seed) {
    ProblemOperators ops;
    ops.d = p.d;
    ops.N = p.N;
    ops.s01 = symmetrizer_0a(p.d, p.N, 1);
    ops.s02 = symmetrizer_0a(p.d, p.N, 2);
    return validate_povm(p, ops, pairs, tol, seed);
}

/// Mean identification success probability of a POVM:
/// (tr[E1 S01] + tr[E2 S02]) / (2 d_(N+1) d_N).
inline double mean_success_from_povm(const Povm& p, const ProblemOperators& ops) {
    const double t1 = p.e1.entries.cwiseProduct(ops.s01.entries).sum();
    const double t2 = p.e2.entries.cwiseProduct(ops.s02.entries).sum();
    return (t1 + t2) / (2.0 * static_cast<double>(sym_dim(p.d, p.N + 1)) *
                        static_cast<double>(sym_dim(p.d, p.N)));
}

inline double mean_success_from_povm(const Povm& p) {
    ProblemOperators ops;
    ops.s01 = symmetrizer_0a(p.d, p.N, 1);
    ops.s02 = symmetrizer_0a(p.d, p.N, 2);
    return mean_success_from_povm(p, ops);
}

/// Optimal success probability straight from the spectrum: tr[1 - |A|] / (2 d_(N+1) d_N).
inline double mean_success_optimal_spectral(int d, int N) {
    if (d == 1) return 0.0;
    const CompressedOperator a = build_A(d, N);
    const Eigen::VectorXd ev = eigvals_sym(a.entries);
    double sum = 0.0;
    for (Eigen::Index k = 0; k < ev.size(); ++k) sum += 1.0 - std::abs(ev(k));
    return sum / (2.0 * static_cast<double>(sym_dim(d, N + 1)) *
                  static_cast<double>(sym_dim(d, N)));
}

/// Upper bound of the block coefficient e_lambda: 1/(1+|A|) on the two- and
/// three-row blocks; zero on the totally symmetric block, where E1 = e(1-S02)
/// vanishes identically.
inline std::vector<double> feasible_coefficient_bounds(const SpectralDecomposition& dec) {
    std::vector<double> bounds(dec.blocks.size(), 0.0);
    for (std::size_t b = 0; b < dec.blocks.size(); ++b) {
        const auto& blk = dec.blocks[b];
        if (blk.label.rows.size() == 1) continue;  // V1
        bounds[b] = 1.0 / (1.0 + std::abs(blk.eigenvalue));
    }
    return bounds;
}

/// POVM of the structural family E1 = e (1 - S02), e = sum_lambda c_lambda Gamma_lambda.
/// Coefficients are per spectral block. The two signed blocks of one two-row
/// diagram must carry the same value (e would not commute with the
/// symmetrizers otherwise), and the three-row blocks share one value since the
/// spectrum of A cannot separate them.
inline Povm build_feasible_povm(const ProblemOperators& ops, const std::vector<double>& coeffs) {
    if (coeffs.size() != ops.dec.blocks.size())
        throw std::invalid_argument("build_feasible_povm: one coefficient per block expected");
    for (std::size_t b = 0; b < ops.dec.blocks.size(); ++b)
        for (std::size_t b2 = b + 1; b2 < ops.dec.blocks.size(); ++b2) {
            const bool same_label = ops.dec.blocks[b].label == ops.dec.blocks[b2].label;
            const bool both_v3 = ops.dec.blocks[b].label.rows.size() == 3 &&
                                 ops.dec.blocks[b2].label.rows.size() == 3;
            if ((same_label || both_v3) && coeffs[b] != coeffs[b2])
                throw std::invalid_argument(
                    "build_feasible_povm: blocks that share a diagram or the three-row "
                    "family must carry equal coefficients");
        }
    const auto dim = ops.a.dim();
    Eigen::VectorXd c(ops.dec.eigenvalues.size());
    for (Eigen::Index k = 0; k < c.size(); ++k)
        c(k) = coeffs[static_cast<std::size_t>(ops.dec.block_of[static_cast<std::size_t>(k)])];
    const Eigen::MatrixXd e =
        ops.dec.eigenvectors * c.asDiagonal() * ops.dec.eigenvectors.transpose();

    Povm p;
    p.d = ops.d;
    p.N = ops.N;
    Eigen::MatrixXd e1 = e * (Eigen::MatrixXd::Identity(dim, dim) - ops.s02.entries);
    detail::symmetrize(e1);
    Eigen::MatrixXd e2 = conjugate_by_exchange(e1, ops.d, ops.N);
    Eigen::MatrixXd e0 = Eigen::MatrixXd::Identity(dim, dim) - e1 - e2;
    p.e1 = CompressedOperator{ops.d, ops.N, std::move(e1), true};
    p.e2 = CompressedOperator{ops.d, ops.N, std::move(e2), true};
    p.e0 = CompressedOperator{ops.d, ops.N, std::move(e0), true};
    return p;
}

/// Coefficients drawn uniformly on [0, bound] per diagram: one draw shared by
/// the two signed blocks of each two-row diagram, one draw for the whole
/// three-row family.
inline std::vector<double> random_feasible_coefficients(const SpectralDecomposition& dec,
                                                        StreamRng& rng) {
    const auto bounds = feasible_coefficient_bounds(dec);
    std::vector<double> coeffs(dec.blocks.size(), 0.0);
    std::map<std::string, double> drawn;
    for (std::size_t b = 0; b < dec.blocks.size(); ++b) {
        const std::string key =
            dec.blocks[b].label.rows.size() == 3 ? "V3" : dec.blocks[b].label.str();
        auto it = drawn.find(key);
        if (it == drawn.end()) it = drawn.emplace(key, rng.next_uniform()).first;
        coeffs[b] = bounds[b] * it->second;
    }
    return coeffs;
}

inline Povm random_feasible_povm(const ProblemOperators& ops, StreamRng& rng) {
    return build_feasible_povm(ops, random_feasible_coefficients(ops.dec, rng));
}

inline Povm random_feasible_povm(int d, int N, StreamRng& rng) {
    return random_feasible_povm(build_problem_operators(d, N), rng);
}

/// Success probability of a feasible coefficient set without materializing the
/// POVM: sum_k c(k) (1 - lambda_k^2) / (2 d_(N+1) d_N).
inline double feasible_success(const ProblemOperators& ops, const std::vector<double>& coeffs) {
    double sum = 0.0;
    for (Eigen::Index k = 0; k < ops.dec.eigenvalues.size(); ++k) {
        const double lam = std::clamp(ops.dec.eigenvalues(k), -1.0, 1.0);
        sum += coeffs[static_cast<std::size_t>(ops.dec.block_of[static_cast<std::size_t>(k)])] *
               (1.0 - lam * lam);
    }
    return sum / (2.0 * static_cast<double>(sym_dim(ops.d, ops.N + 1)) *
                  static_cast<double>(sym_dim(ops.d, ops.N)));
}

}  // namespace usid
