#include <doctest.h>

#include "drs/pmatrix.hpp"
#include "support.hpp"

using namespace drs;
using drs::test::Random;

TEST_SUITE("pmatrix") {

TEST_CASE("P-matrix examples") {
    CHECK(is_p_matrix(Matrix::identity(3)).is_p);

    const PMatrixReport bad = is_p_matrix(Matrix{{1, 2}, {2, 1}});
    CHECK_FALSE(bad.is_p);
    CHECK(bad.failing_subset == std::vector<std::size_t>{0, 1});
    CHECK(bad.failing_minor == doctest::Approx(-3.0));
    CHECK_FALSE(bad.marginal);

    CHECK(is_p_matrix(Matrix{{2, -1}, {-1, 2}}).is_p);
}

TEST_CASE("smallest failing subset is reported first") {
    const PMatrixReport r = is_p_matrix(Matrix{{1, 0, 0}, {0, -1, 0}, {0, 0, 1}});
    CHECK(r.failing_subset == std::vector<std::size_t>{1});
    CHECK(r.failing_minor == doctest::Approx(-1.0));
}

TEST_CASE("zero minors are failing and marginal") {
    const PMatrixReport r = is_p_matrix(Matrix{{1, 1}, {1, 1}});
    CHECK_FALSE(r.is_p);
    CHECK(r.marginal);
}

TEST_CASE("order limit") {
    CHECK_THROWS_AS(is_p_matrix(Matrix::identity(kMaxPMatrixOrder + 1)), SizeError);
    CHECK(is_p_matrix(Matrix::identity(kMaxPMatrixOrder)).is_p);
}

TEST_CASE("sign witness examples") {
    const std::vector<double> e0{1, 0};
    CHECK(p_sign_witness(Matrix::identity(2), e0) == std::size_t{0});
    CHECK_FALSE(p_sign_witness(-1.0 * Matrix::identity(2), std::vector<double>{0.3, -2}).has_value());
    CHECK_FALSE(p_sign_witness(Matrix{{1, 2}, {2, 1}}, std::vector<double>{1, -1}).has_value());
    CHECK_THROWS_AS(p_sign_witness(Matrix::identity(2), std::vector<double>{0, 0}), ContractError);
}

TEST_CASE("DMD conjugation examples") {
    const Matrix m{{2, -1}, {-1, 2}};
    CHECK(dpd_conjugate(m, DiagonalMatrix::identity(2)) == m);
    CHECK(is_p_matrix(dpd_conjugate(m, DiagonalMatrix{2, 3})).is_p);
    CHECK_FALSE(is_p_matrix(dpd_conjugate(Matrix{{1, 2}, {2, 1}}, DiagonalMatrix{1, 2})).is_p);
    CHECK_THROWS_AS(dpd_conjugate(m, DiagonalMatrix{1, -1}), ContractError);
}

TEST_CASE("P-matrices reverse no sign: every nonzero x has a witness index") {
    Random rng(21);
    int p_count = 0;
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n = 1 + rng.index(5);
        Matrix m = rng.matrix(n, n, -1.0, 1.0);
        for (std::size_t i = 0; i < n; ++i) {
            m(i, i) = rng.uniform(0.5, 3.0);
        }
        if (!is_p_matrix(m).is_p) {
            continue;
        }
        ++p_count;
        for (int k = 0; k < 1000; ++k) {
            std::vector<double> x(n);
            for (double& v : x) {
                v = rng.gaussian();
            }
            CHECK(p_sign_witness(m, x).has_value());
        }
    }
    CHECK(p_count > 10);
}

TEST_CASE("non-P matrices admit a sign-reversing vector") {
    Random rng(22);
    int non_p = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 1 + rng.index(5);
        const Matrix m = rng.matrix(n, n);
        const PMatrixReport r = is_p_matrix(m);
        if (r.is_p) {
            continue;
        }
        ++non_p;
        const std::vector<double> x = sign_reversal_vector(m, r);
        REQUIRE(x.size() == n);
        CHECK_FALSE(p_sign_witness(m, x, 1e-9 * std::max(1.0, m.max_abs())).has_value());
    }
    CHECK(non_p > 50);
}

TEST_CASE("P status is invariant under positive diagonal conjugation") {
    Random rng(23);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 1 + rng.index(5);
        const Matrix m = rng.matrix(n, n, -1.0, 2.0);
        const DiagonalMatrix d = rng.positive_diagonal(n, 0.1, 5.0);
        CHECK(is_p_matrix(m).is_p == is_p_matrix(dpd_conjugate(m, d)).is_p);
    }
}

}  // TEST_SUITE
