#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace drs {

// Error hierarchy shared by every module.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DimensionError : Error {
    using Error::Error;
};
struct ContractError : Error {
    using Error::Error;
};
struct NumericError : Error {
    using Error::Error;
};
struct SizeError : Error {
    using Error::Error;
};
struct ClassError : Error {
    using Error::Error;
};

/// Dense real matrix, row-major, finite entries only.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
    Matrix(std::initializer_list<std::initializer_list<double>> rows);

    static Matrix identity(std::size_t n);
    static Matrix ones(std::size_t rows, std::size_t cols);
    static Matrix from_rows(const std::vector<std::vector<double>>& rows);

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
    [[nodiscard]] bool is_square() const noexcept { return rows_ == cols_; }
    [[nodiscard]] bool empty() const noexcept { return data_.empty(); }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    [[nodiscard]] std::span<const double> data() const noexcept { return data_; }
    [[nodiscard]] std::span<double> data() noexcept { return data_; }

    [[nodiscard]] Matrix transpose() const;
    [[nodiscard]] double frobenius_norm() const;
    [[nodiscard]] double max_abs() const;
    [[nodiscard]] double trace() const;
    [[nodiscard]] std::vector<double> diagonal() const;
    [[nodiscard]] std::vector<std::vector<double>> to_rows() const;
    [[nodiscard]] Matrix submatrix(std::span<const std::size_t> rows,
                                   std::span<const std::size_t> cols) const;
    [[nodiscard]] Matrix block(std::size_t r0, std::size_t c0, std::size_t nr,
                               std::size_t nc) const;
    [[nodiscard]] std::vector<double> apply(std::span<const double> x) const;

    Matrix& operator+=(const Matrix& other);
    Matrix& operator-=(const Matrix& other);
    Matrix& operator*=(double s);

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

Matrix operator+(Matrix lhs, const Matrix& rhs);
Matrix operator-(Matrix lhs, const Matrix& rhs);
Matrix operator-(Matrix m);
Matrix operator*(Matrix m, double s);
Matrix operator*(double s, Matrix m);
Matrix operator*(const Matrix& lhs, const Matrix& rhs);

/// diag(d_1, ..., d_n).
class DiagonalMatrix {
public:
    DiagonalMatrix() = default;
    explicit DiagonalMatrix(std::vector<double> diag);
    DiagonalMatrix(std::initializer_list<double> diag) : DiagonalMatrix(std::vector<double>(diag)) {}

    static DiagonalMatrix identity(std::size_t n) { return DiagonalMatrix(std::vector<double>(n, 1.0)); }

    [[nodiscard]] std::size_t size() const noexcept { return diag_.size(); }
    [[nodiscard]] double operator[](std::size_t i) const { return diag_[i]; }
    [[nodiscard]] const std::vector<double>& values() const noexcept { return diag_; }
    [[nodiscard]] bool is_positive() const noexcept;
    [[nodiscard]] bool is_signature() const noexcept;
    [[nodiscard]] DiagonalMatrix inverse() const;
    [[nodiscard]] DiagonalMatrix squared() const;
    [[nodiscard]] Matrix to_dense() const;

    friend bool operator==(const DiagonalMatrix&, const DiagonalMatrix&) = default;

private:
    std::vector<double> diag_;
};

DiagonalMatrix operator*(const DiagonalMatrix& lhs, const DiagonalMatrix& rhs);
/// D·M (row scaling).
Matrix operator*(const DiagonalMatrix& d, const Matrix& m);
/// M·D (column scaling).
Matrix operator*(const Matrix& m, const DiagonalMatrix& d);

/// Symmetric 2n×2n matrix viewed as the block form [[B11, B12], [B12ᵀ, B22]].
class BlockSymmetric {
public:
    BlockSymmetric() = default;
    explicit BlockSymmetric(Matrix full);
    static BlockSymmetric from_blocks(const Matrix& b11, const Matrix& b12, const Matrix& b22);

    [[nodiscard]] std::size_t n() const noexcept { return n_; }
    [[nodiscard]] const Matrix& full() const noexcept { return full_; }
    [[nodiscard]] Matrix b11() const { return full_.block(0, 0, n_, n_); }
    [[nodiscard]] Matrix b12() const { return full_.block(0, n_, n_, n_); }
    [[nodiscard]] Matrix b22() const { return full_.block(n_, n_, n_, n_); }

private:
    std::size_t n_ = 0;
    Matrix full_;
};

struct Spectrum {
    std::vector<std::complex<double>> eigenvalues;
    double abscissa = 0.0;
};

/// Eigen-decomposition of a symmetric matrix; values ascending, vectors stored as columns.
struct SymEigen {
    std::vector<double> values;
    Matrix vectors;
};

enum class Stability { Stable, Unstable, Marginal };

const char* to_string(Stability s) noexcept;

struct HurwitzReport {
    Stability status = Stability::Marginal;
    /// Monic characteristic polynomial of the scaled matrix, highest degree first.
    std::vector<double> char_poly;
    /// First column of the Routh array (as far as it was built).
    std::vector<double> routh_column;
    /// Scale ρ with the polynomial belonging to A/ρ.
    double scale = 1.0;
};

inline constexpr double kHurwitzMargin = 1e-9;
inline constexpr double kDefiniteTol = 1e-10;

Matrix hadamard(const Matrix& x, const Matrix& y);

/// (Ĉ, C̄): Ĉ keeps the diagonal and takes |c_ij| off it, C̄ = |C| entrywise.
std::pair<Matrix, Matrix> hat_bar(const Matrix& c);

bool is_metzler(const Matrix& a);
bool is_nonnegative(const Matrix& b);

/// +1 for x ≥ 0, -1 otherwise.
inline double sign(double x) noexcept { return x >= 0.0 ? 1.0 : -1.0; }

/// Cyclic Jacobi eigensolver. Throws ContractError on asymmetric input and
/// NumericError when 50 sweeps do not reduce the off-diagonal mass.
SymEigen sym_eigen(const Matrix& m);
Spectrum sym_spectrum(const Matrix& m);
double max_eigenvalue(const Matrix& m);
double min_eigenvalue(const Matrix& m);

bool is_negative_definite(const Matrix& m, double tol = kDefiniteTol);
bool is_positive_semidefinite(const Matrix& m, double tol = kDefiniteTol);

/// Characteristic polynomial coefficients (monic, highest degree first) via Faddeev–LeVerrier.
std::vector<double> characteristic_polynomial(const Matrix& a);

/// Routh–Hurwitz decision on the characteristic polynomial of A.
HurwitzReport routh_hurwitz(const Matrix& a, double margin = kHurwitzMargin);
Stability is_hurwitz(const Matrix& a, double margin = kHurwitzMargin);

double determinant(Matrix m);
/// Solves M x = rhs by Gaussian elimination with partial pivoting.
std::vector<double> solve_linear(Matrix m, std::vector<double> rhs);

void require_square(const Matrix& m, const char* what);
void require_same_shape(const Matrix& x, const Matrix& y, const char* what);

}  // namespace drs
