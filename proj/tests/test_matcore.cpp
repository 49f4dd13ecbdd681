#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "drs/matcore.hpp"
#include "support.hpp"

using namespace drs;
using drs::test::near;
using drs::test::Random;

namespace {

double eigen_abscissa(const Matrix& m) {
    Eigen::MatrixXd e(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            e(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m(i, j);
        }
    }
    Eigen::EigenSolver<Eigen::MatrixXd> solver(e, false);
    return solver.eigenvalues().real().maxCoeff();
}

}  // namespace

TEST_SUITE("matcore") {

TEST_CASE("matrix construction rejects bad shapes") {
    CHECK_THROWS_AS(Matrix(0, 3), DimensionError);
    CHECK_THROWS_AS(Matrix::from_rows({{1.0, 2.0}, {3.0}}), DimensionError);
    CHECK_THROWS_AS(Matrix({{1.0}}) + Matrix({{1.0, 2.0}}), DimensionError);
    CHECK_THROWS_AS(Matrix({{1.0, 2.0}}) * Matrix({{1.0, 2.0}}), DimensionError);
}

TEST_CASE("hadamard examples") {
    const Matrix m{{1, 2}, {3, 4}};
    CHECK(hadamard(Matrix::identity(2), m) == Matrix{{1, 0}, {0, 4}});
    CHECK(hadamard(Matrix::ones(2, 2), m) == m);
    CHECK(hadamard(m, Matrix{{2, 0}, {0, 2}}) == Matrix{{2, 0}, {0, 8}});
}

TEST_CASE("hadamard is commutative, associative and distributive") {
    Random rng(11);
    for (int i = 0; i < 50; ++i) {
        const std::size_t n = 1 + rng.index(6);
        const Matrix x = rng.matrix(n, n);
        const Matrix y = rng.matrix(n, n);
        const Matrix z = rng.matrix(n, n);
        CHECK(near(hadamard(x, y), hadamard(y, x), 1e-12));
        CHECK(near(hadamard(hadamard(x, y), z), hadamard(x, hadamard(y, z)), 1e-12));
        CHECK(near(hadamard(x, y + z), hadamard(x, y) + hadamard(x, z), 1e-12));
    }
}

TEST_CASE("hat_bar examples and invariants") {
    const auto [hat, bar] = hat_bar(Matrix{{-1, -2}, {3, -4}});
    CHECK(hat == Matrix{{-1, 2}, {3, -4}});
    CHECK(bar == Matrix{{1, 2}, {3, 4}});

    const Matrix metzler{{-1, 0.5}, {2, -3}};
    CHECK(hat_bar(metzler).first == metzler);
    const auto zero = hat_bar(Matrix(3, 3));
    CHECK(zero.first == Matrix(3, 3));
    CHECK(zero.second == Matrix(3, 3));

    Random rng(12);
    for (int i = 0; i < 50; ++i) {
        const Matrix c = rng.matrix(4, 4);
        const auto [h, b] = hat_bar(c);
        CHECK(is_metzler(h));
        CHECK(is_nonnegative(b));
        for (std::size_t r = 0; r < 4; ++r) {
            for (std::size_t s = 0; s < 4; ++s) {
                CHECK(b(r, s) >= h(r, s));
            }
        }
    }
}

TEST_CASE("metzler and nonnegative predicates") {
    CHECK(is_metzler(Matrix{{-1, 0.5}, {0, -2}}));
    CHECK_FALSE(is_metzler(Matrix{{-1, -0.1}, {0, -2}}));
    CHECK(is_nonnegative(Matrix{{0, 1}, {2, 0}}));
    CHECK_FALSE(is_nonnegative(Matrix{{0, -1}, {2, 0}}));
}

TEST_CASE("symmetric spectrum examples") {
    const SymEigen d = sym_eigen(DiagonalMatrix{3, 1, 2}.to_dense());
    CHECK(d.values == std::vector<double>{1, 2, 3});

    const SymEigen swap = sym_eigen(Matrix{{0, 1}, {1, 0}});
    CHECK(swap.values[0] == doctest::Approx(-1.0));
    CHECK(swap.values[1] == doctest::Approx(1.0));

    const Matrix m{{-3, 1}, {1, -1}};
    const SymEigen e = sym_eigen(m);
    CHECK(e.values[0] == doctest::Approx(-2 - std::sqrt(2.0)));
    CHECK(e.values[1] == doctest::Approx(-2 + std::sqrt(2.0)));
    CHECK(is_negative_definite(m));
    CHECK_FALSE(is_negative_definite(Matrix{{0, 1}, {1, 0}}));

    CHECK_THROWS_AS(sym_eigen(Matrix{{0, 1}, {2, 0}}), ContractError);
}

TEST_CASE("Jacobi eigenpairs have small residuals up to n = 12") {
    Random rng(13);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n = 1 + rng.index(12);
        const Matrix m = rng.symmetric(n);
        const SymEigen e = sym_eigen(m);
        REQUIRE(e.values.size() == n);
        CHECK(std::is_sorted(e.values.begin(), e.values.end()));
        for (std::size_t k = 0; k < n; ++k) {
            std::vector<double> v(n);
            for (std::size_t i = 0; i < n; ++i) {
                v[i] = e.vectors(i, k);
            }
            const std::vector<double> mv = m.apply(v);
            double residual = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                residual += (mv[i] - e.values[k] * v[i]) * (mv[i] - e.values[k] * v[i]);
            }
            CHECK(std::sqrt(residual) <= 1e-9 * std::max(1.0, m.frobenius_norm()));
        }
    }
}

TEST_CASE("Hurwitz examples") {
    for (std::size_t n = 1; n <= 6; ++n) {
        CHECK(is_hurwitz(-1.0 * Matrix::identity(n)) == Stability::Stable);
    }
    CHECK(is_hurwitz(Matrix{{0, 1}, {-1, -1}}) == Stability::Stable);
    CHECK(is_hurwitz(Matrix{{1}}) == Stability::Unstable);
    CHECK(is_hurwitz(Matrix{{0}}) == Stability::Marginal);
    CHECK(is_hurwitz(Matrix{{0, 1}, {-1, 0}}) == Stability::Marginal);

    const std::vector<double> p = characteristic_polynomial(Matrix{{0, 1}, {-1, -1}});
    REQUIRE(p.size() == 3);
    CHECK(p[0] == doctest::Approx(1.0));
    CHECK(p[1] == doctest::Approx(1.0));
    CHECK(p[2] == doctest::Approx(1.0));
}

TEST_CASE("Routh-Hurwitz agrees with an independent eigenvalue solver") {
    Random rng(14);
    int compared = 0;
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t n = 1 + rng.index(6);
        Matrix m = rng.matrix(n, n);
        // Shift toward the imaginary axis so both outcomes are common.
        const double shift = rng.uniform(-1.0, 1.0) - m.trace() / static_cast<double>(n);
        m += shift * Matrix::identity(n);
        const Stability s = is_hurwitz(m);
        if (s == Stability::Marginal) {
            continue;
        }
        const double mu = eigen_abscissa(m);
        if (std::abs(mu) < 1e-6) {
            continue;
        }
        ++compared;
        CHECK_MESSAGE((s == Stability::Stable) == (mu < 0.0), "abscissa ", mu);
    }
    CHECK(compared > 450);
}

TEST_CASE("symmetric Hurwitz matches the Jacobi spectrum") {
    Random rng(15);
    for (int trial = 0; trial < 100; ++trial) {
        const Matrix m = rng.symmetric(1 + rng.index(6));
        const double top = max_eigenvalue(m);
        if (std::abs(top) < 1e-6) {
            continue;
        }
        CHECK((is_hurwitz(m) == Stability::Stable) == (top < 0.0));
    }
}

TEST_CASE("determinant and linear solve") {
    CHECK(determinant(Matrix{{1, 2}, {3, 4}}) == doctest::Approx(-2.0));
    const std::vector<double> x = solve_linear(Matrix{{2, 1}, {1, 3}}, {3, 5});
    CHECK(x[0] == doctest::Approx(0.8));
    CHECK(x[1] == doctest::Approx(1.4));
}

TEST_CASE("block symmetric validation") {
    CHECK_THROWS_AS(BlockSymmetric(Matrix(3, 3)), DimensionError);
    CHECK_THROWS(BlockSymmetric(Matrix{{1, 2}, {0, 1}}));
    const BlockSymmetric s = BlockSymmetric::from_blocks(Matrix{{1}}, Matrix{{0.5}}, Matrix{{2}});
    CHECK(s.n() == 1);
    CHECK(s.full() == Matrix{{1, 0.5}, {0.5, 2}});
}

TEST_CASE("diagonal matrix algebra") {
    const DiagonalMatrix d{2, -1};
    CHECK(d.is_signature() == false);
    CHECK(DiagonalMatrix{1, -1}.is_signature());
    CHECK_FALSE(d.is_positive());
    CHECK(d.inverse() == DiagonalMatrix{0.5, -1});
    CHECK(d * Matrix{{1, 1}, {1, 1}} == Matrix{{2, 2}, {-1, -1}});
    CHECK(Matrix{{1, 1}, {1, 1}} * d == Matrix{{2, -1}, {2, -1}});
}

}  // TEST_SUITE
