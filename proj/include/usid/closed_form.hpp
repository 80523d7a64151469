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
#include <cstdint>
#include <stdexcept>

#include "usid/occupation.hpp"
#include "usid/partitions.hpp"

namespace usid {

namespace detail {

// Exact integer evaluation is used through d = 12; log-space floats beyond.
// The crossover loses nothing observable: both routes agree to ~1e-15 relative.
inline constexpr int kExactFactorialMaxD = 12;

inline double log_double_factorial_odd(int m) {  // m!!, m odd
    double s = 0.0;
    for (int k = 1; k <= m; k += 2) s += std::log(static_cast<double>(k));
    return s;
}

/// Rational with exact gcd-reduced __int128 arithmetic.
struct Rat {
    __int128 num = 0;
    __int128 den = 1;

    static unsigned __int128 gcd_u(unsigned __int128 a, unsigned __int128 b) {
        while (b != 0) {
            const unsigned __int128 t = a % b;
            a = b;
            b = t;
        }
        return a;
    }

    void reduce() {
        if (den < 0) {
            num = -num;
            den = -den;
        }
        const unsigned __int128 g =
            gcd_u(num < 0 ? static_cast<unsigned __int128>(-num)
                          : static_cast<unsigned __int128>(num),
                  static_cast<unsigned __int128>(den));
        if (g > 1) {
            num /= static_cast<__int128>(g);
            den /= static_cast<__int128>(g);
        }
    }

    Rat& add(__int128 n, __int128 d) {
        num = num * d + n * den;
        den *= d;
        reduce();
        return *this;
    }

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

}  // namespace detail

/// Mean unambiguous discrimination probability of two Haar-random pure states:
/// 1 - 2^(d-1) (d-1)! / (2d-1)!!.
inline double pmax_discrimination(int d) {
    if (d < 1) throw std::domain_error("pmax_discrimination: d must be >= 1");
    if (d <= detail::kExactFactorialMaxD) {
        __int128 num = 1;
        for (int k = 2; k <= d - 1; ++k) num *= k;
        num <<= (d - 1);
        __int128 den = 1;
        for (int k = 1; k <= 2 * d - 1; k += 2) den *= k;
        // (den-num)/den is the exact rational, so the result rounds correctly
        return static_cast<double>(den - num) / static_cast<double>(den);
    }
    const double logterm = (d - 1) * std::log(2.0) + std::lgamma(static_cast<double>(d)) -
                           detail::log_double_factorial_odd(2 * d - 1);
    return 1.0 - std::exp(logterm);
}

/// Mean minimum-error discrimination probability: 1/2 + (d-1)/(2d-1).
inline double pmean_minerror_discrimination(int d) {
    if (d < 1) throw std::domain_error("pmean_minerror_discrimination: d must be >= 1");
    return 0.5 + (d - 1.0) / (2.0 * d - 1.0);
}

/// Optimal mean unambiguous identification probability for N copies in dimension d:
/// sum over two-row diagrams of m_[l1,l2](d) (1 - (l1-N)/(N+1)) / (d_(N+1) d_N).
inline double pmax_identification(int d, int N) {
    if (d < 1) throw std::domain_error("pmax_identification: d must be >= 1");
    if (N < 1) throw std::domain_error("pmax_identification: N must be >= 1");
    if (d == 1) return 0.0;
    double sum = 0.0;
    for (int lambda1 = N + 1; lambda1 <= 2 * N; ++lambda1) {
        const int lambda2 = 2 * N + 1 - lambda1;
        sum += static_cast<double>(partition_multiplicity(lambda1, lambda2, d)) *
               (1.0 - (lambda1 - N) / (N + 1.0));
    }
    return sum / (static_cast<double>(sym_dim(d, N + 1)) * static_cast<double>(sym_dim(d, N)));
}

/// Qubit special case, N/(3(N+1)).
inline double pmax_identification_qubit(int N) {
    if (N < 1) throw std::domain_error("pmax_identification_qubit: N must be >= 1");
    return N / (3.0 * (N + 1));
}

/// Recoupling matrix between the (01)-first and (02)-first coupling schemes of
/// three angular momenta (j, 1/2, j), j = N/2, at total angular momentum J.
/// Rows and columns are indexed by the intermediate momentum in descending
/// order (j+1/2 then j-1/2); the matrix is real orthogonal.
struct RacahMatrix {
    int N = 0;
    int twoJ = 0;  // doubled total angular momentum; exact half-integer bookkeeping
    Eigen::Matrix2d entries;
};

inline RacahMatrix racah_matrix(int N, int twoJ) {
    if (N < 1) throw std::domain_error("racah_matrix: N must be >= 1");
    if (twoJ < 1 || twoJ > 2 * N - 1 || twoJ % 2 == 0)
        throw std::domain_error("racah_matrix: require J in {1/2, 3/2, ..., N - 1/2}");
    // 2j+1 = N+1;  J+1/2 = (twoJ+1)/2
    const double diag = (twoJ + 1) / (2.0 * (N + 1));
    const double off =
        std::sqrt((2.0 * N + twoJ + 3) * (2.0 * N - twoJ + 1)) / (2.0 * (N + 1));
    RacahMatrix r{N, twoJ, {}};
    r.entries << diag, off, off, -diag;
    return r;
}

/// Qubit optimal identification probability assembled from the recoupling
/// matrices: sum_J (2J+1)(1 - |R^J_(j-,j-)|) / (d_(N+1) d_N) at d = 2.
inline double qubit_pmax_via_racah(int N) {
    if (N < 1) throw std::domain_error("qubit_pmax_via_racah: N must be >= 1");
    double sum = 0.0;
    for (int twoJ = 1; twoJ <= 2 * N - 1; twoJ += 2) {
        const RacahMatrix r = racah_matrix(N, twoJ);
        sum += (twoJ + 1.0) * (1.0 - std::abs(r.entries(1, 1)));
    }
    return sum / (static_cast<double>(sym_dim(2, N + 1)) * static_cast<double>(sym_dim(2, N)));
}

/// Large-N limit of the identification probability,
/// 2(d-1) * integral_0^1 x (1+x)^(d-2) (1-x)^(d-1) dx,
/// integrated exactly by polynomial expansion in rational arithmetic.
inline double asymptotic_pmax(int d) {
    if (d < 2) throw std::domain_error("asymptotic_pmax: d must be >= 2");
    if (d > 20) throw std::domain_error("asymptotic_pmax: exact arithmetic capped at d = 20");
    detail::Rat acc;
    for (int a = 0; a <= d - 2; ++a)
        for (int b = 0; b <= d - 1; ++b) {
            const __int128 coeff = static_cast<__int128>(binomial(d - 2, a)) *
                                   static_cast<__int128>(binomial(d - 1, b)) *
                                   (b % 2 == 0 ? 1 : -1);
            acc.add(coeff, 2 + a + b);  // integral of x^(1+a+b)
        }
    acc.num *= 2 * (d - 1);
    acc.reduce();
    return acc.value();
}

}  // namespace usid
