#include "drs/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "drs/classes.hpp"
#include "drs/ddesim.hpp"
#include "drs/pmatrix.hpp"
#include "drs/transforms.hpp"

namespace drs {

namespace {

constexpr double kBoundaryMargin = 0.05;

class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * (static_cast<double>(gen_() >> 11) * 0x1.0p-53);
    }
    std::size_t index(std::size_t n) { return static_cast<std::size_t>(gen_() % n); }
    bool chance(double p) { return uniform(0.0, 1.0) < p; }
    double gaussian() {
        const double u1 = uniform(0.0, 1.0) + 0x1.0p-54;
        const double u2 = uniform(0.0, 1.0);
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    std::mt19937_64 gen_;
};

class Stopwatch {
public:
    [[nodiscard]] double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

// |μ(M)| ≥ margin, decided with shifted Hurwitz tests only.
bool far_from_axis(const Matrix& m, double margin) {
    const Matrix shift = margin * Matrix::identity(m.rows());
    return is_hurwitz(m + shift) == Stability::Stable || is_hurwitz(m - shift) == Stability::Unstable;
}

bool far_from_boundary(const std::vector<std::pair<std::string, double>>& conditions) {
    return std::all_of(conditions.begin(), conditions.end(),
                       [](const auto& c) { return std::abs(c.second) >= kBoundaryMargin; });
}

bool agrees(Stability s, VerdictStatus v) {
    return (s == Stability::Stable && v == VerdictStatus::Feasible) ||
           (s == Stability::Unstable && v == VerdictStatus::Refuted);
}

// Every verdict produced by the suites, re-audited for criterion 6.
class SoundnessLedger {
public:
    void record(const MatrixPair& pair, const Verdict& v, std::uint64_t seed) {
        if (const auto* w = v.witness()) {
            ++witnesses_;
            if (!witness_is_valid(pair, *w)) {
                ++invalid_witnesses_;
            }
        } else if (const auto* cert = v.certificate()) {
            ++certificates_;
            if (!verify_certificate(pair, cert->P, cert->Q, 0.0).accepted) {
                ++invalid_certificates_;
            }
            if (refute_by_sampling(pair, 32, seed)) {
                ++both_;
            }
        }
    }

    [[nodiscard]] json detail() const {
        return json{{"witnesses", witnesses_},
                    {"invalid_witnesses", invalid_witnesses_},
                    {"certificates", certificates_},
                    {"invalid_certificates", invalid_certificates_},
                    {"feasible_and_refuted", both_}};
    }
    [[nodiscard]] bool sound() const {
        return invalid_witnesses_ == 0 && invalid_certificates_ == 0 && both_ == 0 && witnesses_ > 0 &&
               certificates_ > 0;
    }

private:
    std::size_t witnesses_ = 0;
    std::size_t invalid_witnesses_ = 0;
    std::size_t certificates_ = 0;
    std::size_t invalid_certificates_ = 0;
    std::size_t both_ = 0;
};

struct Context {
    Rng rng;
    SoundnessLedger ledger;
    std::uint64_t seed;
    std::uint64_t counter = 0;

    Verdict solve(const MatrixPair& pair) {
        SolverOptions opt;
        opt.seed = seed + (++counter);
        Verdict v = solve_diagonal(pair, opt);
        ledger.record(pair, v, opt.seed);
        return v;
    }
};

CriterionResult finish(int id, const char* name, bool passed, json detail, const Stopwatch& sw) {
    return CriterionResult{id, name, passed, std::move(detail), sw.seconds()};
}

// ------------------------------------------------------------------ generators

// `spread` in (0, 1] scales every coupling entry so both verdicts occur often.
Matrix random_metzler(Rng& rng, std::size_t n, double density, double spread) {
    Matrix a(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) {
                a(i, j) = rng.uniform(-3.0, 1.0);
            } else if (rng.chance(density)) {
                a(i, j) = rng.uniform(0.0, 3.0 * spread);
            }
        }
    }
    return a;
}

Matrix random_nonnegative(Rng& rng, std::size_t n, double density, double spread) {
    Matrix b(n, n);
    for (double& v : b.data()) {
        if (rng.chance(density)) {
            v = rng.uniform(0.0, 3.0 * spread);
        }
    }
    return b;
}

double mostly_negative(Rng& rng) { return rng.chance(0.15) ? rng.uniform(-3.0, 3.0) : rng.uniform(-3.0, -0.2); }

MatrixPair random_3ab1(Rng& rng) {
    Matrix a(3, 3);
    Matrix b(3, 3);
    for (std::size_t i = 0; i < 3; ++i) {
        a(i, i) = mostly_negative(rng);
    }
    a(1, 0) = rng.uniform(-3.0, 3.0);
    a(2, 1) = rng.uniform(-3.0, 3.0);
    b(0, 2) = rng.uniform(-3.0, 3.0);
    b(1, 2) = rng.uniform(-3.0, 3.0);
    return MatrixPair(a, b);
}

MatrixPair random_3ab2(Rng& rng) {
    Matrix a(3, 3);
    Matrix b(3, 3);
    for (std::size_t i = 0; i < 3; ++i) {
        a(i, i) = mostly_negative(rng);
    }
    a(2, 0) = rng.uniform(-3.0, 3.0);
    a(2, 1) = rng.uniform(-3.0, 3.0);
    b(0, 2) = rng.uniform(-3.0, 3.0);
    b(1, 2) = rng.uniform(-3.0, 3.0);
    return MatrixPair(a, b);
}

Matrix random_tridiagonal(Rng& rng, std::size_t n, double spread) {
    Matrix a(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        a(i, i) = rng.uniform(-3.0, 0.5);
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double l = spread * rng.uniform(-3.0, 3.0);
        a(i + 1, i) = l;
        a(i, i + 1) = sign(l) * rng.uniform(0.0, 3.0 * spread);
    }
    return a;
}

Matrix random_last_row(Rng& rng, std::size_t n, double spread) {
    Matrix a(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        a(i, i) = rng.uniform(-3.0, 0.5);
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
        a(n - 1, i) = spread * rng.uniform(-3.0, 3.0);
    }
    return a;
}

MatrixPair random_structured(Rng& rng, ClassKind kind, std::size_t n) {
    const double spread = rng.uniform(0.05, 1.0);
    auto coupling = [&] { return spread * rng.uniform(-3.0, 3.0); };
    switch (kind) {
        case ClassKind::MetzlerRankOneRow: {
            Matrix a = random_metzler(rng, n, 0.6, spread);
            Matrix b(n, n);
            const std::size_t k = rng.index(n);
            for (std::size_t j = 0; j < n; ++j) {
                b(k, j) = coupling();
            }
            return MatrixPair(a, b);
        }
        case ClassKind::TridiagSignSym: {
            Matrix a = random_tridiagonal(rng, n, spread);
            Matrix b(n, n);
            const std::size_t k = rng.index(n);
            for (std::size_t j = 0; j < n; ++j) {
                b(k, j) = coupling();
            }
            return MatrixPair(a, b);
        }
        case ClassKind::LastRowForm: {
            Matrix a = random_last_row(rng, n, spread);
            Matrix b(n, n);
            const std::size_t k = rng.index(n);
            const double s = rng.chance(0.5) ? 1.0 : -1.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double d = i + 1 < n ? sign(a(n - 1, i)) : 1.0;
                b(i, k) = s * d * rng.uniform(0.0, 3.0 * spread);
            }
            return MatrixPair(a, b);
        }
        case ClassKind::SuperdiagB: {
            Matrix a(n, n);
            switch (rng.index(3)) {
                case 0:
                    a = random_metzler(rng, n, 0.6, spread);
                    break;
                case 1:
                    a = random_tridiagonal(rng, n, spread);
                    break;
                default:
                    a = random_last_row(rng, n, spread);
                    break;
            }
            Matrix b(n, n);
            for (std::size_t i = 0; i + 1 < n; ++i) {
                b(i, i + 1) = coupling();
            }
            return MatrixPair(a, b);
        }
        default:
            throw ContractError("random_structured: unsupported class");
    }
}

MatrixPair random_dense_pair(Rng& rng, std::size_t n) {
    const double spread = rng.uniform(0.1, 1.0);
    Matrix a(n, n);
    Matrix b(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            a(i, j) = i == j ? rng.uniform(-3.0, -1.0) : spread * rng.uniform(-1.0, 1.0);
            b(i, j) = spread * rng.uniform(-1.0, 1.0);
        }
    }
    return MatrixPair(a, b);
}

// Draws dense pairs until the solver certifies one.
std::pair<MatrixPair, RiccatiCertificate> random_feasible_pair(Context& ctx, std::size_t n) {
    while (true) {
        MatrixPair pair = random_dense_pair(ctx.rng, n);
        Verdict v = ctx.solve(pair);
        if (const auto* cert = v.certificate()) {
            return {std::move(pair), *cert};
        }
    }
}

BlockSymmetric random_correlation(Rng& rng, std::size_t n) {
    const std::size_t dim = 2 * n;
    Matrix g(dim, dim);
    for (std::size_t j = 0; j < dim; ++j) {
        double norm = 0.0;
        for (std::size_t i = 0; i < dim; ++i) {
            g(i, j) = rng.gaussian();
            norm += g(i, j) * g(i, j);
        }
        norm = std::sqrt(norm);
        for (std::size_t i = 0; i < dim; ++i) {
            g(i, j) /= norm;
        }
    }
    Matrix s = g.transpose() * g;
    s = 0.5 * (s + s.transpose());
    for (std::size_t i = 0; i < dim; ++i) {
        s(i, i) = 1.0;
    }
    return BlockSymmetric(std::move(s));
}

// ------------------------------------------------------------------ criteria

CriterionResult positive_systems(Context& ctx) {
    const Stopwatch sw;
    std::size_t retained = 0;
    std::size_t discarded = 0;
    std::size_t matches = 0;
    std::size_t feasible = 0;
    std::size_t unknown = 0;
    while (retained < 200) {
        const std::size_t n = 2 + ctx.rng.index(4);
        const double density = ctx.rng.uniform(0.2, 0.8);
        const double spread = ctx.rng.uniform(0.05, 0.6);
        MatrixPair pair(random_metzler(ctx.rng, n, density, spread), random_nonnegative(ctx.rng, n, density, spread));
        const Matrix sum = pair.A + pair.B;
        if (!far_from_axis(sum, kBoundaryMargin)) {
            ++discarded;
            continue;
        }
        ++retained;
        const Verdict v = ctx.solve(pair);
        feasible += v.status() == VerdictStatus::Feasible;
        unknown += v.status() == VerdictStatus::Unknown;
        matches += agrees(is_hurwitz(sum), v.status());
    }
    const double secs = sw.seconds();
    const bool passed = matches == retained && secs < 120.0;
    return finish(1, "positive-systems oracle: verdict matches Hurwitz test of A+B", passed,
                  json{{"retained", retained},
                       {"discarded", discarded},
                       {"matches", matches},
                       {"feasible", feasible},
                       {"unknown", unknown},
                       {"runtime_limit_s", 120.0}},
                  sw);
}

template <typename Gen, typename Check>
json three_by_three_suite(Context& ctx, Gen gen, Check check, std::size_t& mismatches) {
    std::size_t retained = 0;
    std::size_t discarded = 0;
    std::size_t matches = 0;
    std::size_t stable = 0;
    while (retained < 200) {
        const MatrixPair pair = gen(ctx.rng);
        const ClassVerdict cv = check(pair);
        if (!far_from_boundary(cv.conditions)) {
            ++discarded;
            continue;
        }
        ++retained;
        stable += cv.stable == Stability::Stable;
        matches += agrees(cv.stable, ctx.solve(pair).status());
    }
    mismatches += retained - matches;
    return json{{"retained", retained}, {"discarded", discarded}, {"matches", matches}, {"stable", stable}};
}

CriterionResult three_by_three(Context& ctx) {
    const Stopwatch sw;
    std::size_t mismatches = 0;
    json detail;
    detail["3AB1"] = three_by_three_suite(ctx, random_3ab1, thm5_check, mismatches);
    detail["3AB2"] = three_by_three_suite(ctx, random_3ab2, thm6_check, mismatches);
    return finish(2, "3x3 closed forms (3AB1, 3AB2) match the solver", mismatches == 0, std::move(detail), sw);
}

CriterionResult structured_classes(Context& ctx) {
    const Stopwatch sw;
    bool passed = true;
    json detail;
    for (ClassKind kind : {ClassKind::MetzlerRankOneRow, ClassKind::TridiagSignSym, ClassKind::LastRowForm,
                           ClassKind::SuperdiagB}) {
        std::size_t retained = 0;
        std::size_t discarded = 0;
        std::size_t matches = 0;
        std::size_t stable = 0;
        std::size_t signature_checks = 0;
        while (retained < 100) {
            const std::size_t n = 2 + ctx.rng.index(4);
            const MatrixPair pair = random_structured(ctx.rng, kind, n);
            if (classify(pair).kind != kind) {
                ++discarded;
                continue;
            }
            const auto [a_hat, a_bar] = hat_bar(pair.A);
            const auto [b_hat, b_bar] = hat_bar(pair.B);
            if (!far_from_axis(a_hat + b_bar, kBoundaryMargin)) {
                ++discarded;
                continue;
            }
            ++retained;
            // Throws if DAD = Â or DBE = B̄ fails.
            const ClassVerdict cv = structured_condition(pair, kind);
            if (cv.D && cv.E && *cv.D * pair.A * *cv.D == a_hat && *cv.D * pair.B * *cv.E == b_bar) {
                ++signature_checks;
            }
            stable += cv.stable == Stability::Stable;
            matches += agrees(cv.stable, ctx.solve(pair).status());
        }
        passed = passed && matches == retained && signature_checks == retained;
        detail[to_string(kind)] = json{{"retained", retained},
                                       {"discarded", discarded},
                                       {"matches", matches},
                                       {"stable", stable},
                                       {"signature_identities", signature_checks}};
    }
    return finish(3, "sign-structured classes match the solver; DAD = Â and DBE = B̄", passed, std::move(detail),
                  sw);
}

CriterionResult certificate_map(Context& ctx) {
    const Stopwatch sw;
    std::size_t accepted = 0;
    double min_margin = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 100; ++i) {
        const std::size_t n = 1 + ctx.rng.index(4);
        auto [pair, cert] = random_feasible_pair(ctx, n);
        std::vector<double> d(n);
        std::vector<double> e(n);
        for (std::size_t k = 0; k < n; ++k) {
            d[k] = (ctx.rng.chance(0.5) ? 1.0 : -1.0) * ctx.rng.uniform(0.3, 3.0);
            e[k] = (ctx.rng.chance(0.5) ? 1.0 : -1.0) * std::abs(d[k]) * ctx.rng.uniform(0.1, 1.0);
        }
        const DadTransform t = dad_transform(pair, ScalingPair{DiagonalMatrix(d), DiagonalMatrix(e)});
        const RiccatiCertificate mapped = t.map(cert);
        const CertificateCheck check = verify_certificate(t.pair(), mapped.P, mapped.Q, 0.0);
        if (check.accepted && check.margin() > 0.0) {
            ++accepted;
        }
        min_margin = std::min(min_margin, check.margin());
    }
    return finish(4, "mapped certificate (P, DQD) verifies for (DAD, DBE)", accepted == 100,
                  json{{"instances", 100}, {"accepted", accepted}, {"min_margin", min_margin}}, sw);
}

CriterionResult hadamard_preservation(Context& ctx) {
    const Stopwatch sw;
    std::size_t feasible = 0;
    std::size_t unknown = 0;
    std::size_t refuted = 0;
    for (int i = 0; i < 100; ++i) {
        const std::size_t n = 1 + ctx.rng.index(4);
        const auto feasible_pair = random_feasible_pair(ctx, n);
        const BlockSymmetric S = random_correlation(ctx.rng, n);
        const MatrixPair image = hadamard_congruence(feasible_pair.first, S);
        switch (ctx.solve(image).status()) {
            case VerdictStatus::Feasible:
                ++feasible;
                break;
            case VerdictStatus::Unknown:
                ++unknown;
                break;
            case VerdictStatus::Refuted:
                ++refuted;
                break;
        }
    }
    const bool passed = refuted == 0 && unknown <= 5;
    return finish(5, "Hadamard congruence preserves feasibility (<= 5% Unknown)", passed,
                  json{{"instances", 100}, {"feasible", feasible}, {"unknown", unknown}, {"refuted", refuted}}, sw);
}

CriterionResult lag_bound_criterion(Context& ctx) {
    const Stopwatch sw;
    std::size_t inside = 0;
    double worst_excess = -std::numeric_limits<double>::infinity();
    double worst_gap = 0.0;
    for (int i = 0; i < 50; ++i) {
        double c = 0.0;
        double d = 0.0;
        while (std::abs(c) < 1e-3) {
            c = ctx.rng.uniform(-3.0, 3.0);
        }
        while (std::abs(d) < 1e-3) {
            d = ctx.rng.uniform(-3.0, 3.0);
        }
        const double bound = lag_bound(c, d);
        const double grid = lag_bound_oracle(c, d, 0.01);
        worst_excess = std::max(worst_excess, grid - bound);
        worst_gap = std::max(worst_gap, bound - grid);
        if (grid <= bound + 1e-9 && grid >= bound - 0.05) {
            ++inside;
        }
    }
    return finish(7, "grid oracle lies in [bound - 0.05, bound + 1e-9]", inside == 50,
                  json{{"instances", 50},
                       {"inside", inside},
                       {"max_oracle_minus_bound", worst_excess},
                       {"max_bound_minus_oracle", worst_gap}},
                  sw);
}

CriterionResult pmatrix_properties(Context& ctx) {
    const Stopwatch sw;
    std::size_t feasible = 0;
    std::size_t zero_b_p = 0;
    for (int i = 0; i < 100; ++i) {
        const std::size_t n = 2 + ctx.rng.index(4);
        Matrix a(n, n);
        for (std::size_t r = 0; r < n; ++r) {
            for (std::size_t c = 0; c < n; ++c) {
                a(r, c) = r == c ? ctx.rng.uniform(-3.0, 0.5) : ctx.rng.uniform(-2.0, 2.0);
            }
        }
        const MatrixPair pair(a, Matrix(n, n));
        if (ctx.solve(pair).status() == VerdictStatus::Feasible) {
            ++feasible;
            zero_b_p += is_p_matrix(-a).is_p;
        }
    }
    std::size_t invariant = 0;
    std::size_t p_count = 0;
    for (int i = 0; i < 200; ++i) {
        const std::size_t n = 1 + ctx.rng.index(5);
        Matrix m(n, n);
        for (std::size_t r = 0; r < n; ++r) {
            for (std::size_t c = 0; c < n; ++c) {
                m(r, c) = r == c ? ctx.rng.uniform(-0.5, 3.0) : ctx.rng.uniform(-1.5, 1.5);
            }
        }
        std::vector<double> d(n);
        for (double& v : d) {
            v = std::exp(ctx.rng.uniform(-2.0, 2.0));
        }
        const bool before = is_p_matrix(m).is_p;
        const bool after = is_p_matrix(dpd_conjugate(m, DiagonalMatrix(d))).is_p;
        p_count += before;
        invariant += before == after;
    }
    const bool passed = zero_b_p == feasible && feasible > 0 && invariant == 200;
    return finish(8, "B = 0 feasibility implies -A is a P-matrix; P status invariant under DMD", passed,
                  json{{"zero_b_cases", 100},
                       {"zero_b_feasible", feasible},
                       {"zero_b_p_matrix", zero_b_p},
                       {"conjugation_cases", 200},
                       {"conjugation_p_matrices", p_count},
                       {"conjugation_invariant", invariant}},
                  sw);
}

CriterionResult delay_independence(Context& ctx) {
    const Stopwatch sw;
    const std::vector<double> taus = {0.0, 0.1, 1.0, 5.0, 25.0};
    constexpr double kHorizon = 2000.0;
    constexpr double kStep = 0.05;
    std::size_t decayed = 0;
    std::size_t runs = 0;
    double worst_increase_ratio = -std::numeric_limits<double>::infinity();
    double worst_final = 0.0;
    double worst_tau0_diff = 0.0;
    for (int i = 0; i < 20; ++i) {
        const std::size_t n = 1 + ctx.rng.index(3);
        const auto [pair, cert] = random_feasible_pair(ctx, n);
        for (const DecayReport& r : decay_check(pair, cert, taus, kHorizon, kStep)) {
            ++runs;
            decayed += r.decayed;
            worst_increase_ratio = std::max(worst_increase_ratio, r.max_lk_increase / r.initial_lk);
            worst_final = std::max(worst_final, r.final_norm);
        }
        const std::vector<double> phi(n, 1.0);
        const DelayTrajectory delayed = simulate(pair, 0.0, phi, 20.0, kStep);
        const DelayTrajectory plain = simulate(MatrixPair(pair.A + pair.B, Matrix(n, n)), 0.0, phi, 20.0, kStep);
        for (std::size_t k = 0; k < delayed.states.size(); ++k) {
            for (std::size_t j = 0; j < n; ++j) {
                worst_tau0_diff = std::max(worst_tau0_diff, std::abs(delayed.states[k][j] - plain.states[k][j]));
            }
        }
    }
    const bool passed = decayed == runs && worst_tau0_diff <= 1e-8;
    return finish(9, "one certificate gives decay for every delay; tau = 0 matches A+B", passed,
                  json{{"pairs", 20},
                       {"runs", runs},
                       {"decayed", decayed},
                       {"horizon", kHorizon},
                       {"step", kStep},
                       {"max_lk_increase_over_V0", worst_increase_ratio},
                       {"max_final_norm", worst_final},
                       {"max_tau0_step_difference", worst_tau0_diff}},
                  sw);
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options) {
    Context ctx{Rng(options.seed), SoundnessLedger{}, options.seed};
    std::vector<CriterionResult> results;
    results.push_back(positive_systems(ctx));
    results.push_back(three_by_three(ctx));
    results.push_back(structured_classes(ctx));
    results.push_back(certificate_map(ctx));
    results.push_back(hadamard_preservation(ctx));

    // Criterion 6 audits everything the suites above and below produce.
    CriterionResult lag = lag_bound_criterion(ctx);
    CriterionResult p_props = pmatrix_properties(ctx);
    CriterionResult delay = delay_independence(ctx);
    const Stopwatch sw;
    results.push_back(finish(6, "refuter soundness: valid witnesses, no pair both Feasible and Refuted",
                             ctx.ledger.sound(), ctx.ledger.detail(), sw));
    results.push_back(std::move(lag));
    results.push_back(std::move(p_props));
    results.push_back(std::move(delay));
    return results;
}

json acceptance_report(const std::vector<CriterionResult>& results) {
    json out = json::array();
    for (const auto& r : results) {
        out.push_back(json{{"id", r.id}, {"name", r.name}, {"passed", r.passed}, {"detail", r.detail}});
    }
    return out;
}

CriterionResult determinism_criterion(const json& first, const json& second) {
    const Stopwatch sw;
    const bool same = first.dump() == second.dump();
    return finish(10, "two runs with the same seed give identical reports", same,
                  json{{"identical", same}, {"bytes", first.dump().size()}}, sw);
}

}  // namespace drs
