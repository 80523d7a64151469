#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <set>

#include "usid/occupation.hpp"
#include "usid/rng.hpp"
#include "usid/haar.hpp"

using namespace usid;

TEST_CASE("binomial and symmetric dimensions") {
    CHECK(binomial(3, 1) == 3);
    CHECK(binomial(5, 2) == 10);
    CHECK(sym_dim(2, 1) == 2);
    CHECK(sym_dim(2, 2) == 3);
    CHECK(sym_dim(3, 3) == 10);
    CHECK(sym_dim(1, 7) == 1);
    CHECK_THROWS_AS(sym_dim(0, 1), std::domain_error);
}

TEST_CASE("occupation basis enumeration") {
    SECTION("d=2 n=1 order") {
        const auto b = enumerate_occupation_basis(2, 1);
        REQUIRE(b.size() == 2);
        CHECK(b.vectors[0].counts == std::vector<int>{1, 0});
        CHECK(b.vectors[1].counts == std::vector<int>{0, 1});
    }
    SECTION("d=2 n=2 size") {
        CHECK(enumerate_occupation_basis(2, 2).size() == 3);
    }
    SECTION("d=3 n=3: size against direct multiset enumeration") {
        // oracle: count distinct sorted triples of levels 0..2
        std::set<std::vector<int>> multisets;
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b)
                for (int c = 0; c < 3; ++c) {
                    std::vector<int> t{a, b, c};
                    std::sort(t.begin(), t.end());
                    multisets.insert(t);
                }
        const auto basis = enumerate_occupation_basis(3, 3);
        CHECK(static_cast<std::size_t>(basis.size()) == multisets.size());
        CHECK(basis.size() == 10);
    }
    SECTION("index map inverts the ordering") {
        const auto b = enumerate_occupation_basis(3, 4);
        for (std::size_t k = 0; k < b.vectors.size(); ++k)
            CHECK(b.index_of(b.vectors[k].counts) == static_cast<int>(k));
    }
    SECTION("invariants of the vectors") {
        const auto b = enumerate_occupation_basis(4, 3);
        CHECK(b.size() == sym_dim(4, 3));
        for (const auto& v : b.vectors) {
            CHECK(v.d() == 4);
            CHECK(v.total == 3);
        }
    }
    SECTION("d=0 rejected") {
        CHECK_THROWS_AS(enumerate_occupation_basis(0, 2), std::domain_error);
    }
}

TEST_CASE("product state coordinates") {
    SECTION("basis state power") {
        Eigen::VectorXcd phi(2);
        phi << 1.0, 0.0;
        const auto v = product_state_coordinates(phi, 2);
        REQUIRE(v.size() == 3);
        CHECK(std::abs(v(0) - Complex{1.0, 0.0}) < 1e-14);
        CHECK(std::abs(v(1)) < 1e-14);
        CHECK(std::abs(v(2)) < 1e-14);
    }
    SECTION("two-level expansion against hand-symmetrized tensor square") {
        // (a|0> + b|1>)^(x2) = a^2|00> + ab(|01>+|10>) + b^2|11>
        // components on {(2,0),(1,1),(0,2)} are (a^2, sqrt(2) a b, b^2)
        const Complex a{0.6, 0.16};
        const Complex b = std::sqrt(1.0 - std::norm(a));
        Eigen::VectorXcd phi(2);
        phi << a, b;
        const auto v = product_state_coordinates(phi, 2);
        CHECK(std::abs(v(0) - a * a) < 1e-13);
        CHECK(std::abs(v(1) - std::sqrt(2.0) * a * b) < 1e-13);
        CHECK(std::abs(v(2) - b * b) < 1e-13);
    }
    SECTION("norm preserved and overlap power identity") {
        StreamRng rng(42, 0);
        for (int rep = 0; rep < 20; ++rep) {
            const int d = 2 + rep % 3;
            const int n = 1 + rep % 4;
            const auto phi = sample_haar_state(d, rng);
            const auto psi = sample_haar_state(d, rng);
            const auto vphi = product_state_coordinates(phi.amplitudes, n);
            const auto vpsi = product_state_coordinates(psi.amplitudes, n);
            CHECK(std::abs(vphi.norm() - 1.0) < 1e-12);
            const Complex overlap = phi.amplitudes.dot(psi.amplitudes);
            Complex pw{1.0, 0.0};
            for (int k = 0; k < n; ++k) pw *= overlap;
            CHECK(std::abs(vphi.dot(vpsi) - pw) < 1e-12);
        }
    }
    SECTION("non-normalized input rejected") {
        Eigen::VectorXcd bad(2);
        bad << 1.0, 0.5;
        CHECK_THROWS_AS(product_state_coordinates(bad, 2), std::invalid_argument);
    }
}
