#include "drs/riccati.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <numbers>
#include <random>

namespace drs {

MatrixPair::MatrixPair(Matrix a, Matrix b) : A(std::move(a)), B(std::move(b)) {
    require_square(A, "pair A");
    require_square(B, "pair B");
    if (A.rows() != B.rows()) {
        throw DimensionError("A and B must have the same size");
    }
}

const char* to_string(VerdictStatus s) noexcept {
    switch (s) {
        case VerdictStatus::Feasible:
            return "Feasible";
        case VerdictStatus::Refuted:
            return "Refuted";
        case VerdictStatus::Unknown:
            return "Unknown";
    }
    return "?";
}

VerdictStatus Verdict::status() const noexcept {
    switch (outcome.index()) {
        case 0:
            return VerdictStatus::Feasible;
        case 1:
            return VerdictStatus::Refuted;
        default:
            return VerdictStatus::Unknown;
    }
}

namespace {

void require_pair_dims(const MatrixPair& pair, const DiagonalMatrix& P, const DiagonalMatrix& Q) {
    if (P.size() != pair.n() || Q.size() != pair.n()) {
        throw DimensionError("P and Q must match the pair dimension");
    }
}

// Block form directly from diagonal vectors, no validation; hot path of the search.
Matrix block_form(const MatrixPair& pair, std::span<const double> p, std::span<const double> q) {
    const std::size_t n = pair.n();
    const Matrix& A = pair.A;
    const Matrix& B = pair.B;
    Matrix m(2 * n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            m(i, j) = A(j, i) * p[j] + p[i] * A(i, j);
            const double pb = p[i] * B(i, j);
            m(i, n + j) = pb;
            m(n + j, i) = pb;
        }
        m(i, i) += q[i];
        m(n + i, n + i) = -q[i];
    }
    return m;
}

// λ_max of the block form at normalized (p, q) = exp(θ) scaled to Σp + Σq = 2n.
class BlockObjective {
public:
    explicit BlockObjective(const MatrixPair& pair) : pair_(pair), n_(pair.n()) {}

    [[nodiscard]] std::size_t dim() const noexcept { return 2 * n_; }

    void normalized(std::span<const double> theta, std::vector<double>& p, std::vector<double>& q) const {
        p.resize(n_);
        q.resize(n_);
        double s = 0.0;
        for (std::size_t i = 0; i < n_; ++i) {
            p[i] = std::exp(std::clamp(theta[i], -60.0, 60.0));
            q[i] = std::exp(std::clamp(theta[n_ + i], -60.0, 60.0));
            s += p[i] + q[i];
        }
        const double c = static_cast<double>(2 * n_) / s;
        for (std::size_t i = 0; i < n_; ++i) {
            p[i] *= c;
            q[i] *= c;
        }
    }

    double value(std::span<const double> theta) const {
        std::vector<double> p;
        std::vector<double> q;
        normalized(theta, p, q);
        return max_eigenvalue(block_form(pair_, p, q));
    }

    // Smoothed maximum t·log Σ exp(λ_k / t) and its gradient in θ. Also reports the
    // exact λ_max at θ.
    double smoothed(std::span<const double> theta, double t, std::vector<double>& grad, double& lmax) const {
        std::vector<double> p;
        std::vector<double> q;
        normalized(theta, p, q);
        const SymEigen eig = sym_eigen(block_form(pair_, p, q));
        const std::size_t m = eig.values.size();
        lmax = eig.values.back();
        std::vector<double> w(m);
        double z = 0.0;
        for (std::size_t k = 0; k < m; ++k) {
            w[k] = std::exp((eig.values[k] - lmax) / t);
            z += w[k];
        }
        // Gradient of λ_k in (p̃, q̃) is uᵀ(∂M)u with u = (x, y):
        // ∂/∂p̃ᵢ = 2xᵢ((Ax)ᵢ + (By)ᵢ), ∂/∂q̃ᵢ = xᵢ² - yᵢ².
        std::vector<double> g(2 * n_, 0.0);
        std::vector<double> x(n_);
        std::vector<double> y(n_);
        for (std::size_t k = 0; k < m; ++k) {
            const double wk = w[k] / z;
            if (wk < 1e-14) {
                continue;
            }
            for (std::size_t i = 0; i < n_; ++i) {
                x[i] = eig.vectors(i, k);
                y[i] = eig.vectors(n_ + i, k);
            }
            const std::vector<double> ax = pair_.A.apply(x);
            const std::vector<double> by = pair_.B.apply(y);
            for (std::size_t i = 0; i < n_; ++i) {
                g[i] += wk * 2.0 * x[i] * (ax[i] + by[i]);
                g[n_ + i] += wk * (x[i] * x[i] - y[i] * y[i]);
            }
        }
        // Chain rule through z̃ = 2n·exp(θ)/Σexp(θ): ∂f/∂θᵢ = z̃ᵢ(gᵢ - Σⱼ z̃ⱼgⱼ / 2n).
        double avg = 0.0;
        for (std::size_t i = 0; i < n_; ++i) {
            avg += p[i] * g[i] + q[i] * g[n_ + i];
        }
        avg /= static_cast<double>(2 * n_);
        grad.resize(2 * n_);
        for (std::size_t i = 0; i < n_; ++i) {
            grad[i] = p[i] * (g[i] - avg);
            grad[n_ + i] = q[i] * (g[n_ + i] - avg);
        }
        return lmax + t * std::log(z);
    }

private:
    const MatrixPair& pair_;
    std::size_t n_;
};

struct SearchPoint {
    std::vector<double> theta;
    double value = std::numeric_limits<double>::infinity();
};

// Nelder–Mead with restarts from the incumbent while iterations remain.
SearchPoint nelder_mead(const BlockObjective& f, std::vector<double> start, const SolverOptions& opt) {
    const std::size_t d = f.dim();
    std::vector<std::vector<double>> simplex(d + 1, start);
    std::vector<double> fv(d + 1);
    std::size_t iter = 0;
    SearchPoint best{start, f.value(start)};

    auto init = [&](const std::vector<double>& centre, double step) {
        for (std::size_t k = 0; k <= d; ++k) {
            simplex[k] = centre;
            if (k > 0) {
                simplex[k][k - 1] += step;
            }
            fv[k] = f.value(simplex[k]);
        }
    };

    double step = 0.5;
    for (int restart = 0; restart < 4 && iter < opt.max_iter; ++restart) {
        init(best.theta, step);
        const double entry_value = best.value;
        while (iter < opt.max_iter) {
            ++iter;
            std::vector<std::size_t> order(d + 1);
            std::iota(order.begin(), order.end(), 0);
            std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
            const std::size_t lo = order.front();
            const std::size_t hi = order.back();
            const std::size_t second = order[d - 1];

            double spread = 0.0;
            for (std::size_t k = 0; k <= d; ++k) {
                for (std::size_t i = 0; i < d; ++i) {
                    spread = std::max(spread, std::abs(simplex[k][i] - simplex[lo][i]));
                }
            }
            if (spread < opt.simplex_tol) {
                break;
            }

            std::vector<double> centroid(d, 0.0);
            for (std::size_t k = 0; k <= d; ++k) {
                if (k == hi) {
                    continue;
                }
                for (std::size_t i = 0; i < d; ++i) {
                    centroid[i] += simplex[k][i] / static_cast<double>(d);
                }
            }
            auto along = [&](double t) {
                std::vector<double> pt(d);
                for (std::size_t i = 0; i < d; ++i) {
                    pt[i] = centroid[i] + t * (simplex[hi][i] - centroid[i]);
                }
                return pt;
            };

            std::vector<double> xr = along(-1.0);
            const double fr = f.value(xr);
            if (fr < fv[lo]) {
                std::vector<double> xe = along(-2.0);
                const double fe = f.value(xe);
                if (fe < fr) {
                    simplex[hi] = std::move(xe);
                    fv[hi] = fe;
                } else {
                    simplex[hi] = std::move(xr);
                    fv[hi] = fr;
                }
            } else if (fr < fv[second]) {
                simplex[hi] = std::move(xr);
                fv[hi] = fr;
            } else {
                const bool outside = fr < fv[hi];
                std::vector<double> xc = along(outside ? -0.5 : 0.5);
                const double fc = f.value(xc);
                if (fc < (outside ? fr : fv[hi])) {
                    simplex[hi] = std::move(xc);
                    fv[hi] = fc;
                } else {
                    for (std::size_t k = 0; k <= d; ++k) {
                        if (k == lo) {
                            continue;
                        }
                        for (std::size_t i = 0; i < d; ++i) {
                            simplex[k][i] = simplex[lo][i] + 0.5 * (simplex[k][i] - simplex[lo][i]);
                        }
                        fv[k] = f.value(simplex[k]);
                    }
                }
            }
        }
        const auto it = std::min_element(fv.begin(), fv.end());
        const std::size_t k = static_cast<std::size_t>(it - fv.begin());
        if (fv[k] < best.value) {
            best = {simplex[k], fv[k]};
        }
        if (entry_value - best.value < 1e-12 * std::max(1.0, std::abs(best.value))) {
            break;
        }
        step *= 0.5;
    }
    return best;
}

// Gradient descent on the smoothed maximum eigenvalue with decreasing temperature.
SearchPoint subgradient_polish(const BlockObjective& f, SearchPoint point) {
    const double scale = std::max(1.0, std::abs(point.value));
    std::vector<double> grad;
    std::vector<double> trial_grad;
    for (double t : {1e-2, 1e-3, 1e-4, 1e-5, 1e-6}) {
        const double temp = t * scale;
        double lmax = 0.0;
        std::vector<double> theta = point.theta;
        double ft = f.smoothed(theta, temp, grad, lmax);
        double step = 1.0;
        for (int it = 0; it < 100; ++it) {
            const double g2 = std::inner_product(grad.begin(), grad.end(), grad.begin(), 0.0);
            if (g2 < 1e-28) {
                break;
            }
            bool moved = false;
            for (int ls = 0; ls < 40; ++ls) {
                std::vector<double> trial(theta.size());
                for (std::size_t i = 0; i < theta.size(); ++i) {
                    trial[i] = theta[i] - step * grad[i];
                }
                double trial_lmax = 0.0;
                const double ftrial = f.smoothed(trial, temp, trial_grad, trial_lmax);
                if (ftrial <= ft - 1e-4 * step * g2) {
                    theta = std::move(trial);
                    ft = ftrial;
                    grad.swap(trial_grad);
                    if (trial_lmax < point.value) {
                        point = {theta, trial_lmax};
                    }
                    step *= 2.0;
                    moved = true;
                    break;
                }
                step *= 0.5;
            }
            if (!moved) {
                break;
            }
        }
    }
    return point;
}

double gaussian(std::mt19937_64& rng) {
    // Box–Muller on raw 53-bit uniforms keeps the stream identical across standard libraries.
    auto uniform = [&] { return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53; };
    const double u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::optional<CorrelationWitness> test_correlation(const MatrixPair& pair, const BlockSymmetric& S,
                                                   double psd_tol) {
    const PMatrixReport rep = is_p_matrix(hadamard_image(pair, S));
    if (rep.is_p || rep.marginal) {
        return std::nullopt;
    }
    const double lmin = min_eigenvalue(S.full());
    if (lmin < -psd_tol) {
        return std::nullopt;
    }
    return CorrelationWitness{S, rep, lmin};
}

}  // namespace

BlockSymmetric block_lmi(const MatrixPair& pair, const DiagonalMatrix& P, const DiagonalMatrix& Q) {
    require_pair_dims(pair, P, Q);
    if (!Q.is_positive()) {
        throw ContractError("block_lmi: Q must be positive definite");
    }
    return BlockSymmetric(block_form(pair, P.values(), Q.values()));
}

Matrix riccati_expression(const MatrixPair& pair, const DiagonalMatrix& P, const DiagonalMatrix& Q) {
    require_pair_dims(pair, P, Q);
    const Matrix pa = P * pair.A;
    Matrix r = pa.transpose() + pa + Q.to_dense();
    const Matrix pb = P * pair.B;
    r += pb * Q.inverse() * pb.transpose();
    return 0.5 * (r + r.transpose());
}

CertificateCheck verify_certificate(const MatrixPair& pair, const DiagonalMatrix& P, const DiagonalMatrix& Q,
                                    double margin_req) {
    require_pair_dims(pair, P, Q);
    if (!P.is_positive() || !Q.is_positive()) {
        throw ContractError("verify_certificate: P and Q must be positive definite");
    }
    CertificateCheck check;
    check.riccati_max = max_eigenvalue(riccati_expression(pair, P, Q));
    check.block_max = max_eigenvalue(block_lmi(pair, P, Q).full());
    check.accepted = check.riccati_max < -margin_req && check.block_max < -margin_req;
    return check;
}

RiccatiCertificate make_certificate(const MatrixPair& pair, const DiagonalMatrix& P, const DiagonalMatrix& Q,
                                    double margin_req) {
    const CertificateCheck check = verify_certificate(pair, P, Q, margin_req);
    if (!check.accepted) {
        throw ContractError("certificate does not satisfy the Riccati inequality");
    }
    return RiccatiCertificate{P, Q, check.margin()};
}

Matrix hadamard_image(const MatrixPair& pair, const BlockSymmetric& S) {
    if (S.n() != pair.n()) {
        throw DimensionError("correlation matrix size does not match the pair");
    }
    return -(hadamard(pair.A, S.b11()) + hadamard(pair.B, S.b12()));
}

BlockSymmetric extreme_correlation(std::size_t n, double sign) {
    const Matrix ones = Matrix::ones(n, n);
    return BlockSymmetric::from_blocks(ones, sign * ones, ones);
}

std::optional<CorrelationWitness> refute_by_sampling(const MatrixPair& pair, std::size_t n_samples,
                                                     std::uint64_t seed, double psd_tol,
                                                     std::size_t* samples_tried) {
    const std::size_t n = pair.n();
    std::size_t tried = 0;
    auto finish = [&](std::optional<CorrelationWitness> w) {
        if (samples_tried != nullptr) {
            *samples_tried = tried;
        }
        return w;
    };

    for (double sign : {1.0, -1.0}) {
        ++tried;
        if (auto w = test_correlation(pair, extreme_correlation(n, sign), psd_tol)) {
            return finish(std::move(w));
        }
    }

    if (n_samples == 0) {
        return finish(std::nullopt);
    }
    std::mt19937_64 rng(seed);

    // Rank-one S = vvᵀ with v ∈ {±1}^{2n}: exhaustive for small n, sampled otherwise.
    // v and -v give the same S, so v₀ = +1.
    const std::size_t free_bits = 2 * n - 1;
    const bool exhaustive = free_bits <= kExhaustiveSignBits;
    const std::size_t sign_count = exhaustive ? std::size_t{1} << free_bits : n_samples;
    std::vector<double> v(2 * n, 1.0);
    for (std::size_t mask = 0; mask < sign_count; ++mask) {
        const std::uint64_t bits = exhaustive ? mask : rng();
        for (std::size_t i = 1; i < 2 * n; ++i) {
            v[i] = ((bits >> (i - 1)) & 1U) != 0 ? -1.0 : 1.0;
        }
        Matrix s(2 * n, 2 * n);
        for (std::size_t i = 0; i < 2 * n; ++i) {
            for (std::size_t j = 0; j < 2 * n; ++j) {
                s(i, j) = v[i] * v[j];
            }
        }
        ++tried;
        if (auto w = test_correlation(pair, BlockSymmetric(std::move(s)), psd_tol)) {
            return finish(std::move(w));
        }
    }

    const std::size_t k = 2 * n;
    for (std::size_t s = 0; s < n_samples; ++s) {
        ++tried;
        // S = GᵀG with unit columns, hence unit diagonal.
        Matrix g(k, 2 * n);
        for (std::size_t j = 0; j < 2 * n; ++j) {
            double norm = 0.0;
            for (std::size_t i = 0; i < k; ++i) {
                g(i, j) = gaussian(rng);
                norm += g(i, j) * g(i, j);
            }
            norm = std::sqrt(norm);
            for (std::size_t i = 0; i < k; ++i) {
                g(i, j) /= norm;
            }
        }
        Matrix gram = g.transpose() * g;
        gram = 0.5 * (gram + gram.transpose());
        for (std::size_t i = 0; i < 2 * n; ++i) {
            gram(i, i) = 1.0;
        }
        if (auto w = test_correlation(pair, BlockSymmetric(std::move(gram)), psd_tol)) {
            return finish(std::move(w));
        }
    }
    return finish(std::nullopt);
}

bool witness_is_valid(const MatrixPair& pair, const CorrelationWitness& w, double psd_tol) {
    const std::size_t n = pair.n();
    if (w.S.n() != n) {
        return false;
    }
    const Matrix& s = w.S.full();
    for (std::size_t i = 0; i < 2 * n; ++i) {
        if (std::abs(s(i, i) - 1.0) > 1e-12) {
            return false;
        }
    }
    if (min_eigenvalue(s) < -psd_tol) {
        return false;
    }
    const PMatrixReport rep = is_p_matrix(hadamard_image(pair, w.S));
    return !rep.is_p && !rep.marginal;
}

Verdict solve_diagonal(const MatrixPair& pair, const SolverOptions& options) {
    const std::size_t n = pair.n();
    Verdict verdict;

    // The two structured correlations are cheap and settle most infeasible pairs.
    std::size_t tried = 0;
    if (auto w = refute_by_sampling(pair, 0, options.seed, options.psd_tol, &tried)) {
        verdict.outcome = std::move(*w);
        verdict.samples_tried = tried;
        return verdict;
    }
    verdict.samples_tried = tried;

    const BlockObjective objective(pair);
    std::mt19937_64 rng(options.seed ^ 0x9e3779b97f4a7c15ULL);
    SearchPoint best;
    for (std::size_t start = 0; start < std::max<std::size_t>(options.starts, 1); ++start) {
        std::vector<double> theta(2 * n, 0.0);
        if (start > 0) {
            for (double& t : theta) {
                t = -2.0 + 4.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
            }
        }
        SearchPoint pt = nelder_mead(objective, std::move(theta), options);
        pt = subgradient_polish(objective, std::move(pt));
        if (pt.value < best.value) {
            best = pt;
        }
        if (best.value <= -options.tol) {
            std::vector<double> p;
            std::vector<double> q;
            objective.normalized(best.theta, p, q);
            const DiagonalMatrix P(p);
            const DiagonalMatrix Q(q);
            const CertificateCheck check = verify_certificate(pair, P, Q, options.tol);
            if (check.accepted) {
                verdict.outcome = RiccatiCertificate{P, Q, check.margin()};
                return verdict;
            }
        }
    }

    std::size_t random_tried = 0;
    if (auto w = refute_by_sampling(pair, options.samples, options.seed, options.psd_tol, &random_tried)) {
        verdict.outcome = std::move(*w);
        verdict.samples_tried = random_tried;
        return verdict;
    }
    verdict.samples_tried = random_tried;
    verdict.outcome = Undecided{-best.value};
    return verdict;
}

}  // namespace drs
