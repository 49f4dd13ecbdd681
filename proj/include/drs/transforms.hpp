#pragma once

#include "drs/matcore.hpp"
#include "drs/riccati.hpp"

namespace drs {

/// Diagonal scalings (D, E) acting on a pair as (DAD, DBE).
struct ScalingPair {
    DiagonalMatrix D;
    DiagonalMatrix E;
};

/// Result of (A, B) ↦ (DAD, DBE) together with the certificate map (P, Q) ↦ (P, DQD).
class DadTransform {
public:
    DadTransform(MatrixPair pair, DiagonalMatrix d) : pair_(std::move(pair)), d_(std::move(d)) {}

    [[nodiscard]] const MatrixPair& pair() const noexcept { return pair_; }

    /// Maps a certificate of the source pair to one of the transformed pair.
    /// The margin is recomputed on the transformed pair.
    [[nodiscard]] RiccatiCertificate map(const RiccatiCertificate& cert) const;

private:
    MatrixPair pair_;
    DiagonalMatrix d_;
};

/// Requires 0 < eᵢᵢ² ≤ dᵢᵢ²; throws ContractError otherwise.
DadTransform dad_transform(const MatrixPair& pair, const ScalingPair& scaling);

/// Conjugation by signature matrices; an involution preserving diagonal
/// Riccati stability in both directions. Throws ContractError unless D, E ∈ {±1}.
MatrixPair signature_transform(const MatrixPair& pair, const DiagonalMatrix& D, const DiagonalMatrix& E);

/// (A∘S11, B∘S12) for S ⪰ 0 with diag(S11) = diag(S22) ≫ 0.
MatrixPair hadamard_congruence(const MatrixPair& pair, const BlockSymmetric& S, double psd_tol = 1e-10);

/// TST with T = diag(S)^{-1/2}: unit diagonal, PSD preserved. Block diagonals must agree to 1e-12 relative.
BlockSymmetric normalize_correlation(const BlockSymmetric& S);

struct ScaledPair {
    MatrixPair pair;
    RiccatiCertificate certificate;
};

/// (DA, DB) with certificate (PD⁻¹, Q). Throws ContractError when `cert` does
/// not verify for `pair` or D is not positive.
ScaledPair dscale_with_certificate(const MatrixPair& pair, const DiagonalMatrix& D, const RiccatiCertificate& cert);

}  // namespace drs
