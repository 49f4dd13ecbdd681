#include "drs/pmatrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace drs {

namespace {

// Calls visit(subset) for every k-subset of {0..n-1} in lexicographic order,
// stopping early when visit returns false.
template <typename Visit>
bool for_each_subset(std::size_t n, std::size_t k, Visit&& visit) {
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) {
        idx[i] = i;
    }
    while (true) {
        if (!visit(std::span<const std::size_t>(idx))) {
            return false;
        }
        std::size_t i = k;
        while (i > 0 && idx[i - 1] == n - k + (i - 1)) {
            --i;
        }
        if (i == 0) {
            return true;
        }
        ++idx[i - 1];
        for (std::size_t j = i; j < k; ++j) {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

}  // namespace

PMatrixReport is_p_matrix(const Matrix& m) {
    require_square(m, "is_p_matrix");
    const std::size_t n = m.rows();
    if (n > kMaxPMatrixOrder) {
        throw SizeError("is_p_matrix: order " + std::to_string(n) + " exceeds enumeration guard of " +
                        std::to_string(kMaxPMatrixOrder));
    }
    PMatrixReport report;
    for (std::size_t k = 1; k <= n && report.is_p; ++k) {
        for_each_subset(n, k, [&](std::span<const std::size_t> subset) {
            const Matrix sub = m.submatrix(subset, subset);
            const double minor = determinant(sub);
            const double band = kMinorBand * std::pow(sub.max_abs(), static_cast<double>(k));
            if (minor > band) {
                return true;
            }
            report.is_p = false;
            report.failing_subset.assign(subset.begin(), subset.end());
            report.failing_minor = minor;
            report.marginal = minor >= -band;
            return false;
        });
    }
    return report;
}

std::optional<std::size_t> p_sign_witness(const Matrix& m, std::span<const double> x, double tol) {
    require_square(m, "p_sign_witness");
    if (std::all_of(x.begin(), x.end(), [](double v) { return v == 0.0; })) {
        throw ContractError("p_sign_witness: x must be nonzero");
    }
    const std::vector<double> mx = m.apply(x);
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] * mx[i] > tol) {
            return i;
        }
    }
    return std::nullopt;
}

Matrix dpd_conjugate(const Matrix& m, const DiagonalMatrix& d) {
    require_square(m, "dpd_conjugate");
    if (!d.is_positive()) {
        throw ContractError("dpd_conjugate: D must be positive definite");
    }
    return d * m * d;
}

std::vector<double> sign_reversal_vector(const Matrix& m, const PMatrixReport& report) {
    if (report.is_p || report.failing_subset.empty()) {
        throw ContractError("sign_reversal_vector: report must be failing");
    }
    const auto& subset = report.failing_subset;
    const std::size_t k = subset.size();
    const Matrix sub = m.submatrix(subset, subset);
    std::vector<double> local(k, 0.0);

    if (std::abs(report.failing_minor) > kMinorBand * std::pow(sub.max_abs(), static_cast<double>(k))) {
        // All proper principal minors of `sub` are positive and det(sub) < 0, so
        // (sub⁻¹)₀₀ = det(sub without row/col 0) / det(sub) < 0 and x = sub⁻¹e₀
        // gives products (0, ..., 0) except x₀·1 < 0.
        std::vector<double> e(k, 0.0);
        e[0] = 1.0;
        local = solve_linear(sub, e);
    } else {
        // Singular: take a null vector from the smallest-magnitude eigen-direction of subᵀsub.
        const SymEigen eig = sym_eigen(sub.transpose() * sub);
        for (std::size_t i = 0; i < k; ++i) {
            local[i] = eig.vectors(i, 0);
        }
    }
    std::vector<double> x(m.rows(), 0.0);
    for (std::size_t i = 0; i < k; ++i) {
        x[subset[i]] = local[i];
    }
    return x;
}

}  // namespace drs
