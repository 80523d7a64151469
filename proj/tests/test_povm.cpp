#include <catch2/catch_amalgamated.hpp>

#include <utility>
#include <vector>

#include "usid/povm.hpp"

using namespace usid;

namespace {

const std::vector<std::pair<int, int>> kSmallGrid{{2, 1}, {2, 2}, {2, 3}, {3, 1}, {3, 2}, {4, 1}};

Povm all_inconclusive_povm(int d, int N) {
    const auto dim = compressed_dim(d, N);
    Povm p;
    p.d = d;
    p.N = N;
    p.e0 = compressed_identity(d, N);
    p.e1 = CompressedOperator{d, N, Eigen::MatrixXd::Zero(dim, dim), true};
    p.e2 = CompressedOperator{d, N, Eigen::MatrixXd::Zero(dim, dim), true};
    return p;
}

}  // namespace

TEST_CASE("optimal POVM satisfies the axioms") {
    for (auto [d, N] : kSmallGrid) {
        CAPTURE(d, N);
        const auto ops = build_problem_operators(d, N);
        const auto p = build_optimal_povm(ops);
        const auto dim = p.e0.dim();

        CHECK(hermiticity_residual(p.e0) < 1e-12);
        CHECK(hermiticity_residual(p.e1) < 1e-12);
        CHECK(hermiticity_residual(p.e2) < 1e-12);
        CHECK(min_eigenvalue(p.e0.entries) > -1e-12);
        CHECK(min_eigenvalue(p.e1.entries) > -1e-12);
        CHECK(min_eigenvalue(p.e2.entries) > -1e-12);
        CHECK((p.e0.entries + p.e1.entries + p.e2.entries -
               Eigen::MatrixXd::Identity(dim, dim))
                  .norm() < 1e-12);
        // exchange covariance
        CHECK((p.e2.entries - conjugate_by_exchange(p.e1.entries, d, N)).norm() < 1e-12);
        // no-error at operator level
        CHECK((p.e1.entries * ops.s02.entries).norm() < 1e-12);
        CHECK((p.e2.entries * ops.s01.entries).norm() < 1e-12);
    }
}

TEST_CASE("N=1 qubit POVM reproduces the two-thirds forms") {
    const auto ops = build_problem_operators(2, 1);
    const auto p = build_optimal_povm(ops);

    SECTION("E1 = (2/3)(1 - S_2(02))") {
        const Eigen::MatrixXd expected =
            (2.0 / 3.0) * (Eigen::MatrixXd::Identity(8, 8) - ops.s02.entries);
        CHECK((p.e1.entries - expected).cwiseAbs().maxCoeff() < 1e-12);
        const Eigen::MatrixXd expected2 =
            (2.0 / 3.0) * (Eigen::MatrixXd::Identity(8, 8) - ops.s01.entries);
        CHECK((p.e2.entries - expected2).cwiseAbs().maxCoeff() < 1e-12);
    }

    SECTION("E1 = (2/3) singlet(02) dyad, identity on system 1") {
        // flat index (i*2 + m1)*2 + m2; the singlet on systems 0 and 2 is
        // (|0,1> - |1,0>)/sqrt(2) for each value of m1
        Eigen::MatrixXd expected = Eigen::MatrixXd::Zero(8, 8);
        for (int m1 = 0; m1 < 2; ++m1) {
            Eigen::VectorXd singlet = Eigen::VectorXd::Zero(8);
            singlet((0 * 2 + m1) * 2 + 1) = 1.0 / std::sqrt(2.0);
            singlet((1 * 2 + m1) * 2 + 0) = -1.0 / std::sqrt(2.0);
            expected += (2.0 / 3.0) * singlet * singlet.transpose();
        }
        CHECK((p.e1.entries - expected).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("validate_povm") {
    SECTION("optimal POVM at (2,1), 100 pairs") {
        const auto ops = build_problem_operators(2, 1);
        const auto rep = validate_povm(build_optimal_povm(ops), ops, 100, 1e-12, 11);
        CHECK(rep.pairs_tested == 100);
        CHECK(rep.noerror_residual_max <= 1e-12);
        CHECK(rep.noerror_operator_residual <= 1e-12);
        CHECK(rep.completeness_residual <= 1e-12);
        CHECK(rep.passed);
    }
    SECTION("all-inconclusive strategy is valid with zero residuals") {
        const auto p = all_inconclusive_povm(2, 2);
        const auto rep = validate_povm(p, 50, 1e-12, 3);
        CHECK(rep.noerror_residual_max == 0.0);
        CHECK(rep.noerror_operator_residual == 0.0);
        CHECK(rep.completeness_residual == 0.0);
        CHECK(rep.passed);
    }
    SECTION("injected fault is flagged") {
        const auto ops = build_problem_operators(2, 1);
        auto p = build_optimal_povm(ops);
        p.e1.entries += 0.1 * ops.s02.entries;
        const auto rep = validate_povm(p, ops, 100, 1e-12, 7);
        CHECK(rep.noerror_operator_residual > 0.05);  // 0.1 * sqrt(tr S02) scale
        CHECK(rep.noerror_residual_max > 1e-3);
        CHECK_FALSE(rep.passed);
    }
}

TEST_CASE("mean success probabilities") {
    SECTION("frozen closed-form values") {
        const auto ops21 = build_problem_operators(2, 1);
        CHECK(mean_success_from_povm(build_optimal_povm(ops21), ops21) ==
              Catch::Approx(1.0 / 6.0).margin(1e-12));
        const auto ops31 = build_problem_operators(3, 1);
        CHECK(mean_success_from_povm(build_optimal_povm(ops31), ops31) ==
              Catch::Approx(2.0 / 9.0).margin(1e-12));
        CHECK(mean_success_from_povm(all_inconclusive_povm(2, 2)) == 0.0);
    }
    SECTION("spectral route") {
        CHECK(mean_success_optimal_spectral(2, 4) == Catch::Approx(4.0 / 15.0).margin(1e-12));
        CHECK(mean_success_optimal_spectral(3, 1) == Catch::Approx(2.0 / 9.0).margin(1e-12));
        CHECK(mean_success_optimal_spectral(1, 3) == 0.0);
        for (int N = 1; N <= 6; ++N) {
            CAPTURE(N);
            CHECK(mean_success_optimal_spectral(2, N) < 1.0 / 3.0);
        }
    }
    SECTION("spectral equals POVM trace route") {
        for (auto [d, N] : kSmallGrid) {
            CAPTURE(d, N);
            const auto ops = build_problem_operators(d, N);
            CHECK(std::abs(mean_success_from_povm(build_optimal_povm(ops), ops) -
                           mean_success_optimal_spectral(d, N)) < 1e-12);
        }
    }
}

TEST_CASE("random feasible POVMs") {
    SECTION("validity and dominance") {
        for (auto [d, N] : std::vector<std::pair<int, int>>{{2, 2}, {3, 1}}) {
            CAPTURE(d, N);
            const auto ops = build_problem_operators(d, N);
            const double popt = mean_success_optimal_spectral(d, N);
            StreamRng rng(2024, 0);
            for (int rep = 0; rep < 25; ++rep) {
                const auto p = random_feasible_povm(ops, rng);
                const auto report = validate_povm(p, ops, 10, 1e-10, 5);
                CHECK(report.passed);
                CHECK(mean_success_from_povm(p, ops) <= popt + 1e-10);
            }
        }
    }
    SECTION("coefficient success shortcut equals the trace route") {
        const auto ops = build_problem_operators(3, 2);
        StreamRng rng(5, 9);
        for (int rep = 0; rep < 10; ++rep) {
            const auto coeffs = random_feasible_coefficients(ops.dec, rng);
            const auto p = build_feasible_povm(ops, coeffs);
            CHECK(std::abs(feasible_success(ops, coeffs) - mean_success_from_povm(p, ops)) <
                  1e-12);
        }
    }
    SECTION("coefficients at the bound reproduce the optimal POVM") {
        for (auto [d, N] : std::vector<std::pair<int, int>>{{2, 2}, {3, 1}, {3, 2}}) {
            CAPTURE(d, N);
            const auto ops = build_problem_operators(d, N);
            const auto at_bound = build_feasible_povm(ops, feasible_coefficient_bounds(ops.dec));
            const auto opt = build_optimal_povm(ops);
            CHECK((at_bound.e1.entries - opt.e1.entries).cwiseAbs().maxCoeff() < 1e-12);
            CHECK((at_bound.e2.entries - opt.e2.entries).cwiseAbs().maxCoeff() < 1e-12);
            CHECK((at_bound.e0.entries - opt.e0.entries).cwiseAbs().maxCoeff() < 1e-12);
        }
    }
    SECTION("all-zero coefficients give the all-inconclusive POVM") {
        const auto ops = build_problem_operators(2, 2);
        const std::vector<double> zeros(ops.dec.blocks.size(), 0.0);
        const auto p = build_feasible_povm(ops, zeros);
        CHECK(p.e1.entries.norm() < 1e-14);
        CHECK(p.e2.entries.norm() < 1e-14);
        CHECK((p.e0.entries - Eigen::MatrixXd::Identity(p.e0.dim(), p.e0.dim())).norm() <
              1e-14);
    }
    SECTION("mismatched signed-block coefficients rejected") {
        const auto ops = build_problem_operators(2, 2);
        auto coeffs = feasible_coefficient_bounds(ops.dec);
        coeffs[0] *= 0.5;  // break the pairing of one two-row diagram
        CHECK_THROWS_AS(build_feasible_povm(ops, coeffs), std::invalid_argument);
    }
}

TEST_CASE("POVM elements are U(d) scalars") {
    for (auto [d, N] : std::vector<std::pair<int, int>>{{2, 2}, {3, 1}}) {
        CAPTURE(d, N);
        const auto p = build_optimal_povm(d, N);
        StreamRng rng(31, static_cast<std::uint64_t>(d));
        for (int rep = 0; rep < 20; ++rep) {
            const auto u = sample_haar_unitary(d, rng);
            const Eigen::MatrixXcd urep = compressed_unitary_rep(u, N);
            for (const auto* e : {&p.e0, &p.e1, &p.e2}) {
                const Eigen::MatrixXcd ec = e->entries.cast<Complex>();
                CHECK((urep * ec - ec * urep).cwiseAbs().maxCoeff() < 1e-10);
            }
        }
    }
}
