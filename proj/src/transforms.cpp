#include "drs/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace drs {

namespace {

void require_size(const DiagonalMatrix& d, std::size_t n, const char* what) {
    if (d.size() != n) {
        throw DimensionError(std::string(what) + ": scaling size does not match the pair");
    }
}

constexpr double kDiagonalMatchTol = 1e-12;

void require_matching_diagonals(const Matrix& s, std::size_t n, const char* what) {
    for (std::size_t i = 0; i < n; ++i) {
        const double a = s(i, i);
        const double b = s(n + i, n + i);
        if (!(a > 0.0) || !(b > 0.0) || std::abs(a - b) > kDiagonalMatchTol * std::max(a, b)) {
            throw ContractError(std::string(what) + ": need diag(S11) = diag(S22) with positive entries");
        }
    }
}

void require_correlation_shape(const BlockSymmetric& S, double psd_tol) {
    const Matrix& s = S.full();
    require_matching_diagonals(s, S.n(), "correlation matrix");
    if (min_eigenvalue(s) < -psd_tol) {
        throw ContractError("correlation matrix is not positive semidefinite");
    }
}

}  // namespace

RiccatiCertificate DadTransform::map(const RiccatiCertificate& cert) const {
    const DiagonalMatrix q = d_ * cert.Q * d_;
    const CertificateCheck check = verify_certificate(pair_, cert.P, q, 0.0);
    return RiccatiCertificate{cert.P, q, check.margin()};
}

DadTransform dad_transform(const MatrixPair& pair, const ScalingPair& scaling) {
    const std::size_t n = pair.n();
    require_size(scaling.D, n, "dad_transform");
    require_size(scaling.E, n, "dad_transform");
    for (std::size_t i = 0; i < n; ++i) {
        const double e2 = scaling.E[i] * scaling.E[i];
        if (!(e2 > 0.0 && e2 <= scaling.D[i] * scaling.D[i])) {
            throw ContractError("dad_transform: need 0 < e_ii^2 <= d_ii^2");
        }
    }
    MatrixPair out(scaling.D * pair.A * scaling.D, scaling.D * pair.B * scaling.E);
    return DadTransform(std::move(out), scaling.D);
}

MatrixPair signature_transform(const MatrixPair& pair, const DiagonalMatrix& D, const DiagonalMatrix& E) {
    if (!D.is_signature() || !E.is_signature()) {
        throw ContractError("signature_transform: D and E must have entries in {-1, +1}");
    }
    return dad_transform(pair, ScalingPair{D, E}).pair();
}

MatrixPair hadamard_congruence(const MatrixPair& pair, const BlockSymmetric& S, double psd_tol) {
    if (S.n() != pair.n()) {
        throw DimensionError("hadamard_congruence: correlation size does not match the pair");
    }
    require_correlation_shape(S, psd_tol);
    return MatrixPair(hadamard(pair.A, S.b11()), hadamard(pair.B, S.b12()));
}

BlockSymmetric normalize_correlation(const BlockSymmetric& S) {
    const std::size_t n = S.n();
    const Matrix& s = S.full();
    std::vector<double> t(2 * n);
    require_matching_diagonals(s, n, "normalize_correlation");
    for (std::size_t i = 0; i < 2 * n; ++i) {
        t[i] = 1.0 / std::sqrt(s(i, i));
    }
    const DiagonalMatrix T(std::move(t));
    Matrix out = T * s * T;
    for (std::size_t i = 0; i < 2 * n; ++i) {
        out(i, i) = 1.0;
    }
    return BlockSymmetric(0.5 * (out + out.transpose()));
}

ScaledPair dscale_with_certificate(const MatrixPair& pair, const DiagonalMatrix& D, const RiccatiCertificate& cert) {
    require_size(D, pair.n(), "dscale_with_certificate");
    if (!D.is_positive()) {
        throw ContractError("dscale_with_certificate: D must be positive definite");
    }
    if (!verify_certificate(pair, cert.P, cert.Q, 0.0).accepted) {
        throw ContractError("dscale_with_certificate: certificate does not verify for the pair");
    }
    MatrixPair scaled(D * pair.A, D * pair.B);
    RiccatiCertificate mapped = make_certificate(scaled, cert.P * D.inverse(), cert.Q);
    return ScaledPair{std::move(scaled), std::move(mapped)};
}

}  // namespace drs
