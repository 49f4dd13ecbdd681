#include "drs/classes.hpp"

#include <algorithm>
#include <cmath>

namespace drs {

const char* to_string(ClassKind k) noexcept {
    switch (k) {
        case ClassKind::MetzlerNonneg:
            return "MetzlerNonneg";
        case ClassKind::MetzlerRankOneRow:
            return "MetzlerRankOneRow";
        case ClassKind::TridiagSignSym:
            return "TridiagSignSym";
        case ClassKind::LastRowForm:
            return "LastRowForm";
        case ClassKind::SuperdiagB:
            return "SuperdiagB";
        case ClassKind::ThreeByThree_3AB1:
            return "ThreeByThree_3AB1";
        case ClassKind::ThreeByThree_3AB2:
            return "ThreeByThree_3AB2";
        case ClassKind::Unstructured:
            return "Unstructured";
    }
    return "?";
}

const char* to_string(AFamily f) noexcept {
    switch (f) {
        case AFamily::None:
            return "None";
        case AFamily::Metzler:
            return "Metzler";
        case AFamily::Tridiagonal:
            return "Tridiagonal";
        case AFamily::LastRow:
            return "LastRow";
    }
    return "?";
}

namespace {

bool zero_outside(const Matrix& m, auto&& allowed) {
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (!allowed(i, j) && m(i, j) != 0.0) {
                return false;
            }
        }
    }
    return true;
}

// B = e_k bᵀ: every nonzero sits in one row. Zero B reports row 0.
std::optional<std::size_t> row_form(const Matrix& b) {
    std::optional<std::size_t> row;
    for (std::size_t i = 0; i < b.rows(); ++i) {
        for (std::size_t j = 0; j < b.cols(); ++j) {
            if (b(i, j) != 0.0) {
                if (row && *row != i) {
                    return std::nullopt;
                }
                row = i;
            }
        }
    }
    return row.value_or(0);
}

std::optional<std::size_t> column_form(const Matrix& b) {
    return row_form(b.transpose());
}

bool superdiag_form(const Matrix& b) {
    return zero_outside(b, [](std::size_t i, std::size_t j) { return j == i + 1; });
}

bool tridiagonal_sign_symmetric(const Matrix& a) {
    if (!zero_outside(a, [](std::size_t i, std::size_t j) { return i == j || i == j + 1 || j == i + 1; })) {
        return false;
    }
    for (std::size_t i = 0; i + 1 < a.rows(); ++i) {
        if (a(i + 1, i) * a(i, i + 1) < 0.0) {
            return false;
        }
    }
    return true;
}

bool last_row_form(const Matrix& a) {
    const std::size_t last = a.rows() - 1;
    return zero_outside(a, [last](std::size_t i, std::size_t j) { return i == j || i == last; });
}

// D for Â = DAD, per family of A.
DiagonalMatrix a_signature(const Matrix& a, AFamily family) {
    const std::size_t n = a.rows();
    std::vector<double> d(n, 1.0);
    switch (family) {
        case AFamily::Metzler:
        case AFamily::None:
            break;
        case AFamily::Tridiagonal:
            // dᵢdᵢ₋₁ = sign of the (i, i-1)/(i-1, i) pair; l and u share a sign, so their sum carries it.
            for (std::size_t i = 1; i < n; ++i) {
                d[i] = sign(a(i, i - 1) + a(i - 1, i)) * d[i - 1];
            }
            break;
        case AFamily::LastRow:
            // (DAD)_{n,i} = dₙdᵢcᵢ, so dᵢ = sign(cᵢ) with dₙ = 1.
            for (std::size_t i = 0; i + 1 < n; ++i) {
                d[i] = sign(a(n - 1, i));
            }
            break;
    }
    return DiagonalMatrix(std::move(d));
}

// E for B̄ = DBE, or nullopt when no signature achieves it for this B shape.
std::optional<DiagonalMatrix> b_signature(const Matrix& b, const DiagonalMatrix& d, ClassKind kind,
                                          std::optional<std::size_t> k) {
    const std::size_t n = b.rows();
    std::vector<double> e(n, 1.0);
    switch (kind) {
        case ClassKind::MetzlerRankOneRow:
        case ClassKind::TridiagSignSym:
            for (std::size_t j = 0; j < n; ++j) {
                e[j] = sign(d[*k] * b(*k, j));
            }
            break;
        case ClassKind::LastRowForm: {
            // Column k of DBE is (dᵢbᵢ eₖ)ᵢ: one eₖ must fix every sign.
            std::optional<double> s;
            for (std::size_t i = 0; i < n; ++i) {
                const double v = d[i] * b(i, *k);
                if (v == 0.0) {
                    continue;
                }
                if (s && *s != sign(v)) {
                    return std::nullopt;
                }
                s = sign(v);
            }
            e[*k] = s.value_or(1.0);
            break;
        }
        case ClassKind::SuperdiagB:
            for (std::size_t i = 1; i < n; ++i) {
                e[i] = sign(d[i - 1] * b(i - 1, i));
            }
            break;
        default:
            break;
    }
    return DiagonalMatrix(std::move(e));
}

void fill_parameters(ClassTag& tag, const MatrixPair& pair) {
    const Matrix& A = pair.A;
    const Matrix& B = pair.B;
    const std::size_t n = pair.n();
    tag.a = A.diagonal();
    switch (tag.a_family) {
        case AFamily::Tridiagonal:
            for (std::size_t i = 0; i + 1 < n; ++i) {
                tag.l.push_back(A(i + 1, i));
                tag.u.push_back(A(i, i + 1));
            }
            break;
        case AFamily::LastRow:
            for (std::size_t i = 0; i + 1 < n; ++i) {
                tag.c.push_back(A(n - 1, i));
            }
            break;
        default:
            break;
    }
    switch (tag.kind) {
        case ClassKind::MetzlerRankOneRow:
        case ClassKind::TridiagSignSym:
            for (std::size_t j = 0; j < n; ++j) {
                tag.b.push_back(B(*tag.k, j));
            }
            break;
        case ClassKind::LastRowForm:
            for (std::size_t i = 0; i < n; ++i) {
                tag.b.push_back(B(i, *tag.k));
            }
            break;
        case ClassKind::SuperdiagB:
            for (std::size_t i = 0; i + 1 < n; ++i) {
                tag.b.push_back(B(i, i + 1));
            }
            break;
        case ClassKind::ThreeByThree_3AB1:
            tag.c = {A(1, 0), A(2, 1)};
            tag.b = {B(0, 2), B(1, 2)};
            break;
        case ClassKind::ThreeByThree_3AB2:
            tag.c = {A(2, 0), A(2, 1)};
            tag.b = {B(0, 2), B(1, 2)};
            break;
        default:
            break;
    }
}

bool matches_3ab1(const MatrixPair& pair) {
    if (pair.n() != 3) {
        return false;
    }
    const Matrix& A = pair.A;
    return A(0, 1) == 0.0 && A(0, 2) == 0.0 && A(1, 2) == 0.0 && A(2, 0) == 0.0 &&
           zero_outside(pair.B, [](std::size_t i, std::size_t j) { return j == 2 && i < 2; });
}

bool matches_3ab2(const MatrixPair& pair) {
    if (pair.n() != 3) {
        return false;
    }
    const Matrix& A = pair.A;
    return A(0, 1) == 0.0 && A(0, 2) == 0.0 && A(1, 0) == 0.0 && A(1, 2) == 0.0 &&
           zero_outside(pair.B, [](std::size_t i, std::size_t j) { return j == 2 && i < 2; });
}

// Structured match for one sign-structured kind; fills family and k.
bool match_kind(const MatrixPair& pair, ClassKind kind, ClassTag& tag) {
    const Matrix& A = pair.A;
    const Matrix& B = pair.B;
    tag = ClassTag{};
    tag.kind = kind;
    switch (kind) {
        case ClassKind::MetzlerNonneg:
            tag.a_family = AFamily::Metzler;
            return is_metzler(A) && is_nonnegative(B);
        case ClassKind::MetzlerRankOneRow:
            tag.a_family = AFamily::Metzler;
            tag.k = row_form(B);
            return is_metzler(A) && tag.k.has_value();
        case ClassKind::TridiagSignSym:
            tag.a_family = AFamily::Tridiagonal;
            tag.k = row_form(B);
            return tridiagonal_sign_symmetric(A) && tag.k.has_value();
        case ClassKind::LastRowForm: {
            tag.a_family = AFamily::LastRow;
            tag.k = column_form(B);
            if (!last_row_form(A) || !tag.k) {
                return false;
            }
            return b_signature(B, a_signature(A, AFamily::LastRow), kind, tag.k).has_value();
        }
        case ClassKind::SuperdiagB:
            if (!superdiag_form(B)) {
                return false;
            }
            if (is_metzler(A)) {
                tag.a_family = AFamily::Metzler;
            } else if (tridiagonal_sign_symmetric(A)) {
                tag.a_family = AFamily::Tridiagonal;
            } else if (last_row_form(A)) {
                tag.a_family = AFamily::LastRow;
            } else {
                return false;
            }
            return true;
        case ClassKind::ThreeByThree_3AB1:
            return matches_3ab1(pair);
        case ClassKind::ThreeByThree_3AB2:
            return matches_3ab2(pair);
        case ClassKind::Unstructured:
            return true;
    }
    return false;
}

ClassVerdict hurwitz_verdict(const ClassTag& tag, const Matrix& m) {
    ClassVerdict v;
    v.tag = tag;
    const HurwitzReport rep = routh_hurwitz(m);
    v.stable = rep.status;
    double min_pivot = rep.routh_column.empty()
                           ? 0.0
                           : *std::min_element(rep.routh_column.begin(), rep.routh_column.end());
    v.conditions.emplace_back("min_routh_pivot", min_pivot);
    return v;
}

}  // namespace

ClassTag classify(const MatrixPair& pair) {
    ClassTag tag;
    for (ClassKind kind : {ClassKind::MetzlerNonneg, ClassKind::MetzlerRankOneRow, ClassKind::TridiagSignSym,
                           ClassKind::LastRowForm, ClassKind::SuperdiagB, ClassKind::ThreeByThree_3AB1,
                           ClassKind::ThreeByThree_3AB2}) {
        if (match_kind(pair, kind, tag)) {
            fill_parameters(tag, pair);
            return tag;
        }
    }
    tag = ClassTag{};
    tag.a = pair.A.diagonal();
    return tag;
}

Stability decide_strict(const std::vector<std::pair<std::string, double>>& conditions) {
    bool marginal = false;
    for (const auto& [name, slack] : conditions) {
        if (slack < -kConditionBand) {
            return Stability::Unstable;
        }
        if (slack <= kConditionBand) {
            marginal = true;
        }
    }
    return marginal ? Stability::Marginal : Stability::Stable;
}

ClassVerdict metzler_nonneg_condition(const MatrixPair& pair) {
    ClassTag tag;
    if (!match_kind(pair, ClassKind::MetzlerNonneg, tag)) {
        throw ClassError("metzler_nonneg_condition: A must be Metzler and B nonnegative");
    }
    fill_parameters(tag, pair);
    return hurwitz_verdict(tag, pair.A + pair.B);
}

ClassVerdict structured_condition(const MatrixPair& pair, ClassKind kind) {
    if (kind != ClassKind::MetzlerRankOneRow && kind != ClassKind::TridiagSignSym &&
        kind != ClassKind::LastRowForm && kind != ClassKind::SuperdiagB) {
        throw ClassError(std::string("structured_condition: unsupported class ") + to_string(kind));
    }
    ClassTag tag;
    if (!match_kind(pair, kind, tag)) {
        throw ClassError(std::string("structured_condition: pair violates the ") + to_string(kind) +
                         " pattern or sign constraints");
    }
    fill_parameters(tag, pair);

    const DiagonalMatrix D = a_signature(pair.A, tag.a_family);
    const std::optional<DiagonalMatrix> E = b_signature(pair.B, D, kind, tag.k);
    if (!E) {
        throw ClassError("structured_condition: no signature E maps B to |B|");
    }
    const auto [a_hat, a_bar] = hat_bar(pair.A);
    const auto [b_hat, b_bar] = hat_bar(pair.B);
    if (!D.is_signature() || !E->is_signature() || D * pair.A * D != a_hat || D * pair.B * *E != b_bar) {
        throw ClassError("structured_condition: signature construction failed to produce DAD = Â, DBE = B̄");
    }
    ClassVerdict v = hurwitz_verdict(tag, a_hat + b_bar);
    v.D = D;
    v.E = *E;
    return v;
}

ClassVerdict structured_condition(const MatrixPair& pair) {
    return structured_condition(pair, classify(pair).kind);
}

ClassVerdict thm5_check(const MatrixPair& pair) {
    if (!matches_3ab1(pair)) {
        throw ClassError("thm5_check: pair does not have the 3AB1 zero pattern");
    }
    ClassVerdict v;
    v.tag.kind = ClassKind::ThreeByThree_3AB1;
    fill_parameters(v.tag, pair);
    const auto& a = v.tag.a;
    const double c1 = v.tag.c[0];
    const double c2 = v.tag.c[1];
    const double b1 = v.tag.b[0];
    const double b2 = v.tag.b[1];
    v.conditions = {
        {"i_negative_diagonal", -std::max({a[0], a[1], a[2]})},
        {"ii_a2a3_minus_abs_b2c2", a[1] * a[2] - std::abs(b2 * c2)},
        {"iii_det_gap", std::abs(a[0] * a[1] * a[2]) - std::abs(c2 * (b1 * c1 - a[0] * b2))},
    };
    v.stable = decide_strict(v.conditions);
    return v;
}

ClassVerdict thm6_check(const MatrixPair& pair) {
    if (!matches_3ab2(pair)) {
        throw ClassError("thm6_check: pair does not have the 3AB2 zero pattern");
    }
    ClassVerdict v;
    v.tag.kind = ClassKind::ThreeByThree_3AB2;
    fill_parameters(v.tag, pair);
    const auto& a = v.tag.a;
    const double c1 = v.tag.c[0];
    const double c2 = v.tag.c[1];
    const double b1 = v.tag.b[0];
    const double b2 = v.tag.b[1];
    v.conditions = {
        {"i_negative_diagonal", -std::max({a[0], a[1], a[2]})},
        {"ii_a1a3_minus_abs_c1b1", a[0] * a[2] - std::abs(c1 * b1)},
        {"ii_a2a3_minus_abs_b2c2", a[1] * a[2] - std::abs(b2 * c2)},
        {"iii_det_gap", std::abs(a[0] * a[1] * a[2]) - std::abs(a[0] * b2 * c2 + b1 * c1 * a[1])},
    };
    v.stable = decide_strict(v.conditions);
    return v;
}

std::optional<ClassVerdict> evaluate_class(const MatrixPair& pair) {
    const ClassTag tag = classify(pair);
    switch (tag.kind) {
        case ClassKind::MetzlerNonneg:
            return metzler_nonneg_condition(pair);
        case ClassKind::MetzlerRankOneRow:
        case ClassKind::TridiagSignSym:
        case ClassKind::LastRowForm:
        case ClassKind::SuperdiagB:
            return structured_condition(pair, tag.kind);
        case ClassKind::ThreeByThree_3AB1:
            return thm5_check(pair);
        case ClassKind::ThreeByThree_3AB2:
            return thm6_check(pair);
        case ClassKind::Unstructured:
            return std::nullopt;
    }
    return std::nullopt;
}

double lag_bound(double C, double D) {
    if (C == 0.0 || D == 0.0) {
        throw ContractError("lag_bound: C and D must be nonzero");
    }
    return std::max(std::abs(C), std::abs(C + D));
}

double lag_bound_oracle(double C, double D, double grid_step) {
    if (!(grid_step > 0.0 && grid_step <= 0.1)) {
        throw ContractError("lag_bound_oracle: grid_step must lie in (0, 0.1]");
    }
    // Integer-indexed grid so that -1, 0 and 1 are hit exactly.
    const auto half = static_cast<long>(std::ceil(1.0 / grid_step - 1e-9));
    auto coord = [half](long i) { return static_cast<double>(i) / static_cast<double>(half); };
    double best = 0.0;
    for (long i = -half; i <= half; ++i) {
        const double x = coord(i);
        for (long j = -half; j <= half; ++j) {
            const double y = coord(j);
            for (long k = -half; k <= half; ++k) {
                const double z = coord(k);
                if (1.0 - (x * x + y * y + z * z) + 2.0 * x * y * z < -1e-12) {
                    continue;
                }
                best = std::max(best, std::abs(C * x + D * y * z));
            }
        }
    }
    return best;
}

}  // namespace drs
