#pragma once

#include <cstdint>
#include <random>

#include "drs/matcore.hpp"

namespace drs::test {

class Random {
public:
    explicit Random(std::uint64_t seed) : gen_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }
    std::size_t index(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(gen_); }
    double gaussian() { return std::normal_distribution<double>()(gen_); }

    Matrix matrix(std::size_t rows, std::size_t cols, double lo = -3.0, double hi = 3.0) {
        Matrix m(rows, cols);
        for (double& v : m.data()) {
            v = uniform(lo, hi);
        }
        return m;
    }

    Matrix symmetric(std::size_t n) {
        Matrix m = matrix(n, n);
        return 0.5 * (m + m.transpose());
    }

    DiagonalMatrix positive_diagonal(std::size_t n, double lo = 0.2, double hi = 3.0) {
        std::vector<double> d(n);
        for (double& v : d) {
            v = uniform(lo, hi);
        }
        return DiagonalMatrix(std::move(d));
    }

private:
    std::mt19937_64 gen_;
};

inline bool near(const Matrix& x, const Matrix& y, double tol) {
    if (x.rows() != y.rows() || x.cols() != y.cols()) {
        return false;
    }
    return (x - y).max_abs() <= tol;
}

}  // namespace drs::test
