#include "drs/matcore.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace drs {

namespace {

void require_finite(std::span<const double> values) {
    for (double v : values) {
        if (!std::isfinite(v)) {
            throw ContractError("matrix entries must be finite");
        }
    }
}

std::string shape(const Matrix& m) {
    std::ostringstream os;
    os << m.rows() << "x" << m.cols();
    return os.str();
}

double off_diagonal_norm(const Matrix& m) {
    double s = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (i != j) {
                s += m(i, j) * m(i, j);
            }
        }
    }
    return std::sqrt(s);
}

}  // namespace

// ---------------------------------------------------------------- Matrix

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {
    if (rows == 0 || cols == 0) {
        throw DimensionError("matrix dimensions must be positive");
    }
    require_finite(data_);
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
    std::vector<std::vector<double>> r;
    for (const auto& row : rows) {
        r.emplace_back(row);
    }
    *this = from_rows(r);
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = 1.0;
    }
    return m;
}

Matrix Matrix::ones(std::size_t rows, std::size_t cols) { return Matrix(rows, cols, 1.0); }

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty() || rows.front().empty()) {
        throw DimensionError("matrix literal must be non-empty");
    }
    Matrix m(rows.size(), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != m.cols_) {
            throw DimensionError("ragged matrix literal");
        }
        std::copy(rows[i].begin(), rows[i].end(), m.data_.begin() + static_cast<std::ptrdiff_t>(i * m.cols_));
    }
    require_finite(m.data_);
    return m;
}

Matrix Matrix::transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) {
            t(j, i) = (*this)(i, j);
        }
    }
    return t;
}

double Matrix::frobenius_norm() const {
    double s = 0.0;
    for (double v : data_) {
        s += v * v;
    }
    return std::sqrt(s);
}

double Matrix::max_abs() const {
    double m = 0.0;
    for (double v : data_) {
        m = std::max(m, std::abs(v));
    }
    return m;
}

double Matrix::trace() const {
    require_square(*this, "trace");
    double t = 0.0;
    for (std::size_t i = 0; i < rows_; ++i) {
        t += (*this)(i, i);
    }
    return t;
}

std::vector<double> Matrix::diagonal() const {
    std::vector<double> d(std::min(rows_, cols_));
    for (std::size_t i = 0; i < d.size(); ++i) {
        d[i] = (*this)(i, i);
    }
    return d;
}

std::vector<std::vector<double>> Matrix::to_rows() const {
    std::vector<std::vector<double>> r(rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
        r[i].assign(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                    data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
    }
    return r;
}

Matrix Matrix::submatrix(std::span<const std::size_t> rows, std::span<const std::size_t> cols) const {
    Matrix s(rows.size(), cols.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < cols.size(); ++j) {
            s(i, j) = (*this)(rows[i], cols[j]);
        }
    }
    return s;
}

Matrix Matrix::block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    if (r0 + nr > rows_ || c0 + nc > cols_) {
        throw DimensionError("block out of range");
    }
    Matrix b(nr, nc);
    for (std::size_t i = 0; i < nr; ++i) {
        for (std::size_t j = 0; j < nc; ++j) {
            b(i, j) = (*this)(r0 + i, c0 + j);
        }
    }
    return b;
}

std::vector<double> Matrix::apply(std::span<const double> x) const {
    if (x.size() != cols_) {
        throw DimensionError("vector length does not match matrix columns");
    }
    std::vector<double> y(rows_, 0.0);
    for (std::size_t i = 0; i < rows_; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < cols_; ++j) {
            s += (*this)(i, j) * x[j];
        }
        y[i] = s;
    }
    return y;
}

Matrix& Matrix::operator+=(const Matrix& other) {
    require_same_shape(*this, other, "matrix sum");
    for (std::size_t k = 0; k < data_.size(); ++k) {
        data_[k] += other.data_[k];
    }
    return *this;
}

Matrix& Matrix::operator-=(const Matrix& other) {
    require_same_shape(*this, other, "matrix difference");
    for (std::size_t k = 0; k < data_.size(); ++k) {
        data_[k] -= other.data_[k];
    }
    return *this;
}

Matrix& Matrix::operator*=(double s) {
    for (double& v : data_) {
        v *= s;
    }
    return *this;
}

Matrix operator+(Matrix lhs, const Matrix& rhs) { return lhs += rhs; }
Matrix operator-(Matrix lhs, const Matrix& rhs) { return lhs -= rhs; }
Matrix operator-(Matrix m) { return m *= -1.0; }
Matrix operator*(Matrix m, double s) { return m *= s; }
Matrix operator*(double s, Matrix m) { return m *= s; }

Matrix operator*(const Matrix& lhs, const Matrix& rhs) {
    if (lhs.cols() != rhs.rows()) {
        throw DimensionError("matrix product: " + shape(lhs) + " * " + shape(rhs));
    }
    Matrix out(lhs.rows(), rhs.cols());
    for (std::size_t i = 0; i < lhs.rows(); ++i) {
        for (std::size_t k = 0; k < lhs.cols(); ++k) {
            const double a = lhs(i, k);
            if (a == 0.0) {
                continue;
            }
            for (std::size_t j = 0; j < rhs.cols(); ++j) {
                out(i, j) += a * rhs(k, j);
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------- DiagonalMatrix

DiagonalMatrix::DiagonalMatrix(std::vector<double> diag) : diag_(std::move(diag)) {
    if (diag_.empty()) {
        throw DimensionError("diagonal matrix must be non-empty");
    }
    require_finite(diag_);
}

bool DiagonalMatrix::is_positive() const noexcept {
    return std::all_of(diag_.begin(), diag_.end(), [](double d) { return d > 0.0; });
}

bool DiagonalMatrix::is_signature() const noexcept {
    return std::all_of(diag_.begin(), diag_.end(), [](double d) { return d == 1.0 || d == -1.0; });
}

DiagonalMatrix DiagonalMatrix::inverse() const {
    std::vector<double> inv(diag_.size());
    for (std::size_t i = 0; i < diag_.size(); ++i) {
        if (diag_[i] == 0.0) {
            throw ContractError("singular diagonal matrix");
        }
        inv[i] = 1.0 / diag_[i];
    }
    return DiagonalMatrix(std::move(inv));
}

DiagonalMatrix DiagonalMatrix::squared() const { return *this * *this; }

Matrix DiagonalMatrix::to_dense() const {
    Matrix m(diag_.size(), diag_.size());
    for (std::size_t i = 0; i < diag_.size(); ++i) {
        m(i, i) = diag_[i];
    }
    return m;
}

DiagonalMatrix operator*(const DiagonalMatrix& lhs, const DiagonalMatrix& rhs) {
    if (lhs.size() != rhs.size()) {
        throw DimensionError("diagonal product size mismatch");
    }
    std::vector<double> d(lhs.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
        d[i] = lhs[i] * rhs[i];
    }
    return DiagonalMatrix(std::move(d));
}

Matrix operator*(const DiagonalMatrix& d, const Matrix& m) {
    if (d.size() != m.rows()) {
        throw DimensionError("diagonal row scaling size mismatch");
    }
    Matrix out = m;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            out(i, j) *= d[i];
        }
    }
    return out;
}

Matrix operator*(const Matrix& m, const DiagonalMatrix& d) {
    if (d.size() != m.cols()) {
        throw DimensionError("diagonal column scaling size mismatch");
    }
    Matrix out = m;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            out(i, j) *= d[j];
        }
    }
    return out;
}

// ---------------------------------------------------------------- BlockSymmetric

BlockSymmetric::BlockSymmetric(Matrix full) : full_(std::move(full)) {
    if (!full_.is_square() || full_.rows() % 2 != 0) {
        throw DimensionError("block symmetric matrix must be 2n x 2n");
    }
    n_ = full_.rows() / 2;
    const double asym = (full_ - full_.transpose()).frobenius_norm();
    if (asym > 1e-12 * full_.frobenius_norm()) {
        throw ContractError("block matrix is not symmetric");
    }
}

BlockSymmetric BlockSymmetric::from_blocks(const Matrix& b11, const Matrix& b12, const Matrix& b22) {
    require_square(b11, "B11");
    const std::size_t n = b11.rows();
    if (b12.rows() != n || b12.cols() != n || b22.rows() != n || b22.cols() != n) {
        throw DimensionError("block sizes differ");
    }
    Matrix full(2 * n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            full(i, j) = b11(i, j);
            full(i, n + j) = b12(i, j);
            full(n + j, i) = b12(i, j);
            full(n + i, n + j) = b22(i, j);
        }
    }
    return BlockSymmetric(std::move(full));
}

// ---------------------------------------------------------------- predicates

const char* to_string(Stability s) noexcept {
    switch (s) {
        case Stability::Stable:
            return "Stable";
        case Stability::Unstable:
            return "Unstable";
        case Stability::Marginal:
            return "Marginal";
    }
    return "?";
}

void require_square(const Matrix& m, const char* what) {
    if (!m.is_square()) {
        throw DimensionError(std::string(what) + ": square matrix required, got " + shape(m));
    }
}

void require_same_shape(const Matrix& x, const Matrix& y, const char* what) {
    if (x.rows() != y.rows() || x.cols() != y.cols()) {
        throw DimensionError(std::string(what) + ": shape mismatch " + shape(x) + " vs " + shape(y));
    }
}

Matrix hadamard(const Matrix& x, const Matrix& y) {
    require_same_shape(x, y, "hadamard");
    Matrix out = x;
    auto o = out.data();
    auto yd = y.data();
    for (std::size_t k = 0; k < o.size(); ++k) {
        o[k] *= yd[k];
    }
    return out;
}

std::pair<Matrix, Matrix> hat_bar(const Matrix& c) {
    require_square(c, "hat_bar");
    Matrix bar = c;
    for (double& v : bar.data()) {
        v = std::abs(v);
    }
    Matrix hat = bar;
    for (std::size_t i = 0; i < c.rows(); ++i) {
        hat(i, i) = c(i, i);
    }
    return {std::move(hat), std::move(bar)};
}

bool is_metzler(const Matrix& a) {
    require_square(a, "is_metzler");
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            if (i != j && a(i, j) < 0.0) {
                return false;
            }
        }
    }
    return true;
}

bool is_nonnegative(const Matrix& b) {
    const auto d = b.data();
    return std::all_of(d.begin(), d.end(), [](double v) { return v >= 0.0; });
}

// ---------------------------------------------------------------- symmetric eigensolver

SymEigen sym_eigen(const Matrix& m) {
    require_square(m, "sym_eigen");
    const std::size_t n = m.rows();
    const double norm = m.frobenius_norm();
    if ((m - m.transpose()).frobenius_norm() > 1e-12 * norm) {
        throw ContractError("sym_eigen: matrix is not symmetric");
    }

    Matrix a = m;
    Matrix v = Matrix::identity(n);
    constexpr int kMaxSweeps = 50;
    const double target = 1e-12 * norm;
    double last_off = std::numeric_limits<double>::infinity();
    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        const double off = off_diagonal_norm(a);
        // Stop once well below the acceptance level, or when rounding stalls progress.
        if (off <= 1e-2 * target || (off <= target && off >= 0.5 * last_off)) {
            break;
        }
        last_off = off;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) {
                    continue;
                }
                // Rotation annihilating a(p, q), Rutishauser's stable form.
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a(k, p);
                    const double akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a(p, k);
                    const double aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v(k, p);
                    const double vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }
    if (off_diagonal_norm(a) > target) {
        throw NumericError("sym_eigen: Jacobi iteration did not converge");
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });

    SymEigen out;
    out.values.resize(n);
    out.vectors = Matrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        out.values[k] = a(order[k], order[k]);
        for (std::size_t i = 0; i < n; ++i) {
            out.vectors(i, k) = v(i, order[k]);
        }
    }
    return out;
}

Spectrum sym_spectrum(const Matrix& m) {
    const SymEigen e = sym_eigen(m);
    Spectrum s;
    s.eigenvalues.reserve(e.values.size());
    for (double l : e.values) {
        s.eigenvalues.emplace_back(l, 0.0);
    }
    s.abscissa = e.values.back();
    return s;
}

double max_eigenvalue(const Matrix& m) { return sym_eigen(m).values.back(); }
double min_eigenvalue(const Matrix& m) { return sym_eigen(m).values.front(); }

bool is_negative_definite(const Matrix& m, double tol) { return max_eigenvalue(m) < -tol; }
bool is_positive_semidefinite(const Matrix& m, double tol) { return min_eigenvalue(m) >= -tol; }

// ---------------------------------------------------------------- Hurwitz test

std::vector<double> characteristic_polynomial(const Matrix& a) {
    require_square(a, "characteristic_polynomial");
    const std::size_t n = a.rows();
    // p(λ) = λⁿ + c[1] λⁿ⁻¹ + ... + c[n]
    std::vector<double> c(n + 1, 0.0);
    c[0] = 1.0;
    Matrix mk(n, n);  // M_0 = 0
    const Matrix eye = Matrix::identity(n);
    for (std::size_t k = 1; k <= n; ++k) {
        mk = a * mk + c[k - 1] * eye;
        c[k] = -(a * mk).trace() / static_cast<double>(k);
    }
    return c;
}

HurwitzReport routh_hurwitz(const Matrix& a, double margin) {
    require_square(a, "is_hurwitz");
    HurwitzReport rep;
    const double rho = a.max_abs();
    if (rho == 0.0) {
        rep.char_poly = characteristic_polynomial(a);
        rep.status = Stability::Marginal;
        return rep;
    }
    rep.scale = rho;
    rep.char_poly = characteristic_polynomial((1.0 / rho) * a);
    const auto& c = rep.char_poly;
    const std::size_t n = c.size() - 1;
    const std::size_t width = n / 2 + 1;

    std::vector<double> prev(width, 0.0);
    std::vector<double> cur(width, 0.0);
    for (std::size_t j = 0; 2 * j <= n; ++j) {
        prev[j] = c[2 * j];
    }
    for (std::size_t j = 0; 2 * j + 1 <= n; ++j) {
        cur[j] = c[2 * j + 1];
    }
    rep.routh_column.push_back(prev[0]);

    for (std::size_t row = 1; row <= n; ++row) {
        const double pivot = cur[0];
        rep.routh_column.push_back(pivot);
        if (std::abs(pivot) <= margin) {
            rep.status = Stability::Marginal;
            return rep;
        }
        if (pivot < 0.0) {
            rep.status = Stability::Unstable;
            return rep;
        }
        std::vector<double> next(width, 0.0);
        for (std::size_t j = 0; j + 1 < width; ++j) {
            next[j] = (pivot * prev[j + 1] - prev[0] * cur[j + 1]) / pivot;
        }
        prev = std::move(cur);
        cur = std::move(next);
    }
    rep.status = Stability::Stable;
    return rep;
}

Stability is_hurwitz(const Matrix& a, double margin) { return routh_hurwitz(a, margin).status; }

// ---------------------------------------------------------------- dense solves

double determinant(Matrix m) {
    require_square(m, "determinant");
    const std::size_t n = m.rows();
    double det = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < n; ++i) {
            if (std::abs(m(i, k)) > std::abs(m(piv, k))) {
                piv = i;
            }
        }
        if (m(piv, k) == 0.0) {
            return 0.0;
        }
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(m(k, j), m(piv, j));
            }
            det = -det;
        }
        const double d = m(k, k);
        det *= d;
        for (std::size_t i = k + 1; i < n; ++i) {
            const double f = m(i, k) / d;
            if (f == 0.0) {
                continue;
            }
            for (std::size_t j = k + 1; j < n; ++j) {
                m(i, j) -= f * m(k, j);
            }
        }
    }
    return det;
}

std::vector<double> solve_linear(Matrix m, std::vector<double> rhs) {
    require_square(m, "solve_linear");
    const std::size_t n = m.rows();
    if (rhs.size() != n) {
        throw DimensionError("solve_linear: rhs length mismatch");
    }
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < n; ++i) {
            if (std::abs(m(i, k)) > std::abs(m(piv, k))) {
                piv = i;
            }
        }
        if (m(piv, k) == 0.0) {
            throw NumericError("solve_linear: singular matrix");
        }
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(m(k, j), m(piv, j));
            }
            std::swap(rhs[k], rhs[piv]);
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            const double f = m(i, k) / m(k, k);
            for (std::size_t j = k; j < n; ++j) {
                m(i, j) -= f * m(k, j);
            }
            rhs[i] -= f * rhs[k];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        double s = rhs[i];
        for (std::size_t j = i + 1; j < n; ++j) {
            s -= m(i, j) * x[j];
        }
        x[i] = s / m(i, i);
    }
    return x;
}

}  // namespace drs
