#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "drs/matcore.hpp"
#include "drs/riccati.hpp"

namespace drs {

/// Structured classes with closed-form conditions, in detection order.
enum class ClassKind {
    MetzlerNonneg,      ///< A Metzler, B ≥ 0
    MetzlerRankOneRow,  ///< A Metzler, B = e_k bᵀ
    TridiagSignSym,     ///< A tridiagonal with lᵢuᵢ ≥ 0, B = e_k bᵀ
    LastRowForm,        ///< A diagonal plus last row, B = b e_kᵀ
    SuperdiagB,         ///< A in one of the above families, B on the first superdiagonal
    ThreeByThree_3AB1,
    ThreeByThree_3AB2,
    Unstructured,
};

/// Which sign-symmetric family A was matched against.
enum class AFamily { None, Metzler, Tridiagonal, LastRow };

const char* to_string(ClassKind k) noexcept;
const char* to_string(AFamily f) noexcept;

struct ClassTag {
    ClassKind kind = ClassKind::Unstructured;
    AFamily a_family = AFamily::None;
    std::optional<std::size_t> k;  ///< row/column carrying B (0-based)
    std::vector<double> a;         ///< diagonal of A
    std::vector<double> b;         ///< parameters of B
    std::vector<double> c;         ///< off-diagonal parameters of A (last row, or subdiagonal for 3×3 forms)
    std::vector<double> l;         ///< tridiagonal subdiagonal
    std::vector<double> u;         ///< tridiagonal superdiagonal
};

struct ClassVerdict {
    ClassTag tag;
    Stability stable = Stability::Marginal;
    /// Named slack values; each is positive when its strict inequality holds.
    std::vector<std::pair<std::string, double>> conditions;
    /// Signature matrices used for the sign-structured classes.
    std::optional<DiagonalMatrix> D;
    std::optional<DiagonalMatrix> E;
};

inline constexpr double kConditionBand = 1e-9;

ClassTag classify(const MatrixPair& pair);

/// A Metzler, B ≥ 0: stable ⇔ A + B Hurwitz. Throws ClassError otherwise.
ClassVerdict metzler_nonneg_condition(const MatrixPair& pair);

/// Sign-structured classes: builds signatures D, E with DAD = Â and DBE = B̄
/// and decides by the Hurwitz test of Â + B̄. Throws ClassError when the pair
/// is not in `kind`.
ClassVerdict structured_condition(const MatrixPair& pair, ClassKind kind);
ClassVerdict structured_condition(const MatrixPair& pair);

ClassVerdict thm5_check(const MatrixPair& pair);
ClassVerdict thm6_check(const MatrixPair& pair);

/// Dispatches on classify(); empty for Unstructured pairs.
std::optional<ClassVerdict> evaluate_class(const MatrixPair& pair);

/// max{|C|, |C + D|} bounds |Cx + Dyz| on the 3×3 correlation region.
double lag_bound(double C, double D);

/// Brute-force maximum of |Cx + Dyz| over a grid of [-1, 1]³ restricted to
/// 1 - (x² + y² + z²) + 2xyz ≥ 0.
double lag_bound_oracle(double C, double D, double grid_step);

/// Tri-state from slack values using the ±kConditionBand equality band.
Stability decide_strict(const std::vector<std::pair<std::string, double>>& conditions);

}  // namespace drs
