#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <variant>

#include "drs/matcore.hpp"
#include "drs/pmatrix.hpp"

namespace drs {

/// The pair (A, B) of the delay system ẋ(t) = A x(t) + B x(t - τ).
struct MatrixPair {
    Matrix A;
    Matrix B;

    MatrixPair() = default;
    MatrixPair(Matrix a, Matrix b);

    [[nodiscard]] std::size_t n() const noexcept { return A.rows(); }
};

/// Diagonal P, Q ≻ 0 solving AᵀP + PA + Q + PBQ⁻¹BᵀP ≺ 0.
/// `margin` is -λ_max of the block form at exactly these P, Q.
struct RiccatiCertificate {
    DiagonalMatrix P;
    DiagonalMatrix Q;
    double margin = 0.0;
};

/// Unit-diagonal-block S ⪰ 0 whose Hadamard image -(A∘S11 + B∘S12) is not a
/// P-matrix. Its existence proves the pair is not diagonally Riccati stable.
struct CorrelationWitness {
    BlockSymmetric S;
    PMatrixReport p_report;
    double min_eigenvalue = 0.0;
};

struct Undecided {
    double best_margin = 0.0;
};

enum class VerdictStatus { Feasible, Refuted, Unknown };

const char* to_string(VerdictStatus s) noexcept;

struct Verdict {
    std::variant<RiccatiCertificate, CorrelationWitness, Undecided> outcome;
    std::size_t samples_tried = 0;

    [[nodiscard]] VerdictStatus status() const noexcept;
    [[nodiscard]] const RiccatiCertificate* certificate() const noexcept {
        return std::get_if<RiccatiCertificate>(&outcome);
    }
    [[nodiscard]] const CorrelationWitness* witness() const noexcept {
        return std::get_if<CorrelationWitness>(&outcome);
    }
};

struct SolverOptions {
    double tol = 1e-7;           ///< required -λ_max of the block form
    double psd_tol = 1e-10;      ///< witness PSD tolerance
    double simplex_tol = 1e-12;  ///< Nelder–Mead parameter spread
    std::size_t max_iter = 5000; ///< Nelder–Mead iterations per start
    std::size_t starts = 8;
    std::size_t samples = 256;   ///< random correlation samples for the refuter
    std::uint64_t seed = 0;
};

struct CertificateCheck {
    bool accepted = false;
    double riccati_max = 0.0;  ///< λ_max(AᵀP + PA + Q + PBQ⁻¹BᵀP)
    double block_max = 0.0;    ///< λ_max of the 2n×2n block form
    [[nodiscard]] double margin() const noexcept { return -block_max; }
};

/// [[AᵀP + PA + Q, PB], [BᵀP, -Q]].
BlockSymmetric block_lmi(const MatrixPair& pair, const DiagonalMatrix& P, const DiagonalMatrix& Q);

/// AᵀP + PA + Q + PBQ⁻¹BᵀP.
Matrix riccati_expression(const MatrixPair& pair, const DiagonalMatrix& P, const DiagonalMatrix& Q);

/// Accepts iff both the quadratic form and its block form have λ_max < -margin_req.
/// Throws ContractError when P or Q is not positive.
CertificateCheck verify_certificate(const MatrixPair& pair, const DiagonalMatrix& P, const DiagonalMatrix& Q,
                                    double margin_req);

/// Builds a certificate from P, Q, recomputing the margin. Throws if it does not verify.
RiccatiCertificate make_certificate(const MatrixPair& pair, const DiagonalMatrix& P, const DiagonalMatrix& Q,
                                    double margin_req = 0.0);

Verdict solve_diagonal(const MatrixPair& pair, const SolverOptions& options = {});

/// -(A∘S11 + B∘S12).
Matrix hadamard_image(const MatrixPair& pair, const BlockSymmetric& S);

/// Correlation matrix with all blocks 𝟙𝟙ᵀ (sign = +1) or with S12 = -𝟙𝟙ᵀ (sign = -1).
BlockSymmetric extreme_correlation(std::size_t n, double sign);

/// Sign vectors v are enumerated exhaustively while 2n - 1 is at most this.
inline constexpr std::size_t kExhaustiveSignBits = 11;

/// Tries both extremes. With `n_samples` > 0 it continues with rank-one sign
/// correlations vvᵀ (all of them for small n, `n_samples` random ones otherwise)
/// and then `n_samples` random unit-diagonal Gram matrices.
/// An empty result says nothing about feasibility.
std::optional<CorrelationWitness> refute_by_sampling(const MatrixPair& pair, std::size_t n_samples,
                                                     std::uint64_t seed, double psd_tol = 1e-10,
                                                     std::size_t* samples_tried = nullptr);

/// Re-checks every property a witness must have for (A, B).
bool witness_is_valid(const MatrixPair& pair, const CorrelationWitness& w, double psd_tol = 1e-10);

}  // namespace drs
