#include <catch2/catch_amalgamated.hpp>

#include <utility>
#include <vector>

#include "usid/compressed.hpp"
#include "usid/haar.hpp"
#include "usid/linalg.hpp"

using namespace usid;

namespace {

double projector_residual(const Eigen::MatrixXd& s) { return (s * s - s).norm(); }

}  // namespace

TEST_CASE("compressed symmetrizer basics") {
    SECTION("d=2 N=1 ladder element and eigenvalues") {
        const auto s = symmetrizer_0a(2, 1, 1);
        REQUIRE(s.dim() == 8);
        // <i=0, m=(1,0)| S |i=0, m=(1,0)> = (m_0+1)/(N+1) = 1
        CHECK(s.entries(0, 0) == Catch::Approx(1.0).margin(1e-14));
        // pair block eigenvalues {1,1,1,0}, identity on the spectator block
        auto ev = eigvals_sym(s.entries);
        REQUIRE(ev.size() == 8);
        for (int k = 0; k < 2; ++k) CHECK(std::abs(ev(k)) < 1e-13);
        for (int k = 2; k < 8; ++k) CHECK(ev(k) == Catch::Approx(1.0).margin(1e-13));
        CHECK(s.entries.trace() == Catch::Approx(6.0).margin(1e-9));  // d_2 * d_1 = 3*2
    }

    SECTION("idempotent Hermitian projectors with the right trace") {
        for (auto [d, N] : std::vector<std::pair<int, int>>{
                 {2, 1}, {2, 2}, {2, 3}, {3, 1}, {3, 2}, {4, 1}, {4, 2}}) {
            for (int a : {1, 2}) {
                const auto s = symmetrizer_0a(d, N, a);
                CAPTURE(d, N, a);
                CHECK(hermiticity_residual(s) < 1e-12);
                CHECK(projector_residual(s.entries) < 1e-12);
                const double tr = s.entries.trace();
                const double expected =
                    static_cast<double>(sym_dim(d, N + 1)) * static_cast<double>(sym_dim(d, N));
                CHECK(std::abs(tr - expected) < 1e-9);
            }
        }
    }

    SECTION("a=2 symmetrizer commutes with its own square (projector property)") {
        const auto s = symmetrizer_0a(2, 2, 2);
        CHECK(projector_residual(s.entries) < 1e-12);
    }

    SECTION("guards") {
        CHECK_THROWS_AS(symmetrizer_0a(0, 1, 1), std::domain_error);
        CHECK_THROWS_AS(symmetrizer_0a(2, 1, 3), std::invalid_argument);
        // d=3, N=12: 3 * 91^2 = 24843 > 20000
        CHECK_THROWS_AS(symmetrizer_0a(3, 12, 1), std::domain_error);
    }
}

TEST_CASE("exchange operator") {
    SECTION("involution and trace") {
        for (auto [d, N] : std::vector<std::pair<int, int>>{{2, 1}, {2, 2}, {3, 1}, {3, 2}}) {
            const auto t = exchange_12(d, N);
            CAPTURE(d, N);
            const auto dim = t.dim();
            CHECK((t.entries * t.entries - Eigen::MatrixXd::Identity(dim, dim)).norm() < 1e-14);
            // fixed points are the m1 == m2 configurations
            CHECK(t.entries.trace() ==
                  Catch::Approx(static_cast<double>(d * sym_dim(d, N))).margin(1e-12));
        }
    }

    SECTION("d=2 N=1 is an 8x8 permutation matrix") {
        const auto t = exchange_12(2, 1);
        REQUIRE(t.dim() == 8);
        for (Eigen::Index c = 0; c < 8; ++c) {
            CHECK(t.entries.col(c).sum() == Catch::Approx(1.0));
            CHECK(t.entries.col(c).maxCoeff() == Catch::Approx(1.0));
        }
    }

    SECTION("conjugation maps the a=1 symmetrizer to a=2") {
        for (auto [d, N] : std::vector<std::pair<int, int>>{
                 {2, 1}, {2, 2}, {2, 3}, {3, 1}, {3, 2}, {4, 1}}) {
            const auto s1 = symmetrizer_0a(d, N, 1);
            const auto s2 = symmetrizer_0a(d, N, 2);
            const auto t = exchange_12(d, N);
            CAPTURE(d, N);
            CHECK((t.entries * s1.entries * t.entries - s2.entries).cwiseAbs().maxCoeff() <
                  1e-14);
            CHECK((conjugate_by_exchange(s1.entries, d, N) - s2.entries).cwiseAbs().maxCoeff() <
                  1e-14);
        }
    }
}

TEST_CASE("symmetric power of a unitary") {
    StreamRng rng(7, 0);
    SECTION("identity maps to identity") {
        const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(3, 3);
        const auto s = sym_power_matrix(id, 3);
        CHECK((s - Eigen::MatrixXcd::Identity(s.rows(), s.cols())).norm() < 1e-12);
    }
    SECTION("unitarity is preserved") {
        for (auto [d, n] : std::vector<std::pair<int, int>>{{2, 3}, {3, 2}, {4, 2}}) {
            const auto u = sample_haar_unitary(d, rng);
            const auto s = sym_power_matrix(u, n);
            CAPTURE(d, n);
            CHECK((s.adjoint() * s - Eigen::MatrixXcd::Identity(s.rows(), s.cols())).norm() <
                  1e-12);
        }
    }
    SECTION("product-state covariance: Sym^n(U) v(phi) = v(U phi)") {
        const int d = 3, n = 3;
        const auto u = sample_haar_unitary(d, rng);
        const auto phi = sample_haar_state(d, rng);
        const Eigen::VectorXcd lhs = sym_power_matrix(u, n) *
                                     product_state_coordinates(phi.amplitudes, n);
        const Eigen::VectorXcd rhs =
            product_state_coordinates((u * phi.amplitudes).eval(), n);
        CHECK((lhs - rhs).norm() < 1e-12);
    }
}
