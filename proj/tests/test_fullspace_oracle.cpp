#include <catch2/catch_amalgamated.hpp>

#include <utility>
#include <vector>

#include "usid/compressed.hpp"
#include "usid/fullspace.hpp"
#include "usid/linalg.hpp"

using namespace usid;

TEST_CASE("full-space symmetrizer") {
    SECTION("n=2 is (identity + swap)/2") {
        const auto s = full_space_symmetrizer(2, 2);
        Eigen::MatrixXd swap = Eigen::MatrixXd::Zero(4, 4);
        swap(0, 0) = swap(3, 3) = 1.0;
        swap(1, 2) = swap(2, 1) = 1.0;
        CHECK((s - (Eigen::MatrixXd::Identity(4, 4) + swap) / 2.0).norm() < 1e-15);
    }
    SECTION("projector with trace d_n") {
        for (auto [d, n] : std::vector<std::pair<int, int>>{{2, 2}, {2, 3}, {2, 4}, {3, 2}, {3, 3}}) {
            const auto s = full_space_symmetrizer(d, n);
            CAPTURE(d, n);
            CHECK((s * s - s).norm() < 1e-13);
            CHECK((s - s.transpose()).norm() < 1e-14);
            CHECK(s.trace() == Catch::Approx(static_cast<double>(sym_dim(d, n))).margin(1e-10));
        }
        CHECK(full_space_symmetrizer(2, 3).trace() == Catch::Approx(4.0).margin(1e-12));
    }
    SECTION("size guard refuses") {
        CHECK_THROWS_AS(full_space_symmetrizer(2, 13), std::domain_error);  // 8192 > 4096
        CHECK_THROWS_AS(embed_compressed(3, 4), std::domain_error);         // 3^9 > 4096
    }
}

TEST_CASE("subset symmetrizer commutes with in-pair transpositions") {
    // the (0,2)-pair symmetrizer at d=2, N=2 lives on systems {0,3,4} of five
    const Eigen::MatrixXd s = subset_symmetrizer(2, 5, {0, 3, 4});
    const Eigen::MatrixXd swap03 = subset_symmetrizer(2, 5, {0, 3}) * 2.0 -
                                   Eigen::MatrixXd::Identity(32, 32);  // the transposition
    CHECK((s * swap03 - swap03 * s).norm() < 1e-12);
    CHECK((s * s - s).norm() < 1e-12);
}

TEST_CASE("embedding isometry") {
    SECTION("d=2 N=1: square unitary (Sym^1 = C^d)") {
        const auto b = embed_compressed(2, 1);
        REQUIRE(b.rows() == 8);
        REQUIRE(b.cols() == 8);
        CHECK((b.transpose() * b - Eigen::MatrixXd::Identity(8, 8)).norm() < 1e-13);
        CHECK((b * b.transpose() - Eigen::MatrixXd::Identity(8, 8)).norm() < 1e-13);
    }
    SECTION("d=2 N=2: 18 orthonormal columns in the 32-dim full space") {
        const auto b = embed_compressed(2, 2);
        REQUIRE(b.rows() == 32);
        REQUIRE(b.cols() == 18);
        CHECK((b.transpose() * b - Eigen::MatrixXd::Identity(18, 18)).norm() < 1e-13);
    }
}

TEST_CASE("compressed operators match the permutation-average oracle") {
    // pull the full-space partial symmetrizers back through the embedding
    for (auto [d, N] : std::vector<std::pair<int, int>>{{2, 1}, {2, 2}, {2, 3}, {3, 1}, {3, 2}}) {
        CAPTURE(d, N);
        const auto b = embed_compressed(d, N);
        for (int a : {1, 2}) {
            const auto full = subset_symmetrizer(d, 2 * N + 1, pair_systems(N, a));
            const Eigen::MatrixXd pulled = b.transpose() * full * b;
            const auto compressed = symmetrizer_0a(d, N, a);
            CAPTURE(a);
            CHECK((pulled - compressed.entries).cwiseAbs().maxCoeff() < 1e-12);
        }
    }
}

TEST_CASE("embedding carries product states onto tensor products") {
    // |i> (x) exp(m1) (x) exp(m2) written the long way equals the embedded column
    const int d = 2, N = 2;
    const auto b = embed_compressed(d, N);
    const auto bs = sym_embedding(d, N);
    const auto basis = enumerate_occupation_basis(d, N);
    Eigen::VectorXcd phi(2);
    phi << Complex{0.6, 0.0}, Complex{0.0, 0.8};
    const Eigen::VectorXcd v = product_state_coordinates(phi, basis);
    // embedded coordinates of phi^(x2) must be the full-space tensor square
    const Eigen::VectorXcd lifted = bs.cast<Complex>() * v;
    Eigen::VectorXcd direct(4);
    for (int s1 = 0; s1 < 2; ++s1)
        for (int s2 = 0; s2 < 2; ++s2) direct(2 * s1 + s2) = phi(s1) * phi(s2);
    CHECK((lifted - direct).norm() < 1e-13);
    CHECK(b.cols() == 18);
}
