#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "drs/matcore.hpp"

namespace drs {

/// Outcome of the principal-minor enumeration.
///
/// `failing_subset` holds 0-based indices of the first principal submatrix
/// (ordered by size, then lexicographically) whose determinant is not
/// positive. `marginal` is set when that determinant lies inside the
/// relative band around zero instead of being clearly negative.
struct PMatrixReport {
    bool is_p = true;
    std::vector<std::size_t> failing_subset;
    double failing_minor = 0.0;
    bool marginal = false;
};

inline constexpr std::size_t kMaxPMatrixOrder = 14;
inline constexpr double kMinorBand = 1e-12;

/// Enumerates all 2ⁿ-1 principal minors. Throws SizeError above order 14.
PMatrixReport is_p_matrix(const Matrix& m);

/// Some index i with xᵢ(Mx)ᵢ > tol, if any. Throws ContractError on x = 0.
std::optional<std::size_t> p_sign_witness(const Matrix& m, std::span<const double> x, double tol = 0.0);

/// D M D for diagonal D ≻ 0.
Matrix dpd_conjugate(const Matrix& m, const DiagonalMatrix& d);

/// Vector x ≠ 0 with xᵢ(Mx)ᵢ ≤ 0 for all i, built from the failing principal
/// submatrix of a report (zero-padded). Requires a failing report.
std::vector<double> sign_reversal_vector(const Matrix& m, const PMatrixReport& report);

}  // namespace drs
