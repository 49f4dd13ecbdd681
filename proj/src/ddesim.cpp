#include "drs/ddesim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>

namespace drs {

namespace {

double norm2(std::span<const double> x) {
    return std::sqrt(std::inner_product(x.begin(), x.end(), x.begin(), 0.0));
}

double quad_form(const DiagonalMatrix& d, std::span<const double> x) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        s += d[i] * x[i] * x[i];
    }
    return s;
}

// History lookup x(s) for s ≤ current time, using the grid and its right derivatives.
class History {
public:
    History(const DelayTrajectory& traj, const std::vector<std::vector<double>>& deriv, std::span<const double> phi)
        : traj_(traj), deriv_(deriv), phi_(phi) {}

    void at(double s, std::vector<double>& out) const {
        const std::size_t n = phi_.size();
        out.resize(n);
        if (s <= 0.0) {
            std::copy(phi_.begin(), phi_.end(), out.begin());
            return;
        }
        const double pos = s / traj_.h;
        auto j = static_cast<std::size_t>(std::floor(pos));
        double theta = pos - static_cast<double>(j);
        const std::size_t base = traj_.origin();
        if (theta < 1e-12) {
            out = traj_.states[base + j];
            return;
        }
        if (theta > 1.0 - 1e-12) {
            out = traj_.states[base + j + 1];
            return;
        }
        // Cubic Hermite on [t_j, t_{j+1}].
        const auto& x0 = traj_.states[base + j];
        const auto& x1 = traj_.states[base + j + 1];
        const auto& f0 = deriv_[j];
        const auto& f1 = deriv_[j + 1];
        const double t2 = theta * theta;
        const double t3 = t2 * theta;
        const double h00 = 2 * t3 - 3 * t2 + 1;
        const double h10 = t3 - 2 * t2 + theta;
        const double h01 = -2 * t3 + 3 * t2;
        const double h11 = t3 - t2;
        for (std::size_t i = 0; i < n; ++i) {
            out[i] = h00 * x0[i] + h10 * traj_.h * f0[i] + h01 * x1[i] + h11 * traj_.h * f1[i];
        }
    }

private:
    const DelayTrajectory& traj_;
    const std::vector<std::vector<double>>& deriv_;
    std::span<const double> phi_;
};

void rhs(const MatrixPair& pair, std::span<const double> x, std::span<const double> xd, std::vector<double>& out) {
    const std::size_t n = x.size();
    out.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            s += pair.A(i, j) * x[j] + pair.B(i, j) * xd[j];
        }
        out[i] = s;
    }
}

}  // namespace

DelayTrajectory simulate(const MatrixPair& pair, double tau, std::span<const double> phi, double horizon, double h) {
    const std::size_t n = pair.n();
    if (phi.size() != n) {
        throw DimensionError("simulate: initial vector length does not match the pair");
    }
    if (!(h > 0.0) || !(tau >= 0.0) || !(horizon >= tau) || !std::isfinite(horizon)) {
        throw ContractError("simulate: need h > 0, tau >= 0 and horizon >= tau");
    }

    DelayTrajectory traj;
    if (tau > 0.0) {
        const auto m = static_cast<std::size_t>(std::ceil(tau / h - 1e-9));
        traj.history_steps = m;
        h = tau / static_cast<double>(m);
    }
    traj.h = h;
    traj.tau = tau;
    const auto steps = static_cast<std::size_t>(std::ceil(horizon / h - 1e-9));
    const std::size_t m = traj.history_steps;

    traj.times.reserve(m + steps + 1);
    traj.states.reserve(m + steps + 1);
    for (std::size_t k = 0; k <= m; ++k) {
        traj.times.push_back(k == m ? 0.0 : -static_cast<double>(m - k) * h);
        traj.states.emplace_back(phi.begin(), phi.end());
    }

    // deriv[j] is the right derivative at t_j = j·h, j ≥ 0.
    std::vector<std::vector<double>> deriv;
    deriv.reserve(steps + 1);
    const History history(traj, deriv, phi);

    std::vector<double> xd;
    std::vector<double> stage(n);
    std::vector<double> k1;
    std::vector<double> k2;
    std::vector<double> k3;
    std::vector<double> k4;
    auto delayed = [&](double t, std::span<const double> current) {
        if (tau == 0.0) {
            xd.assign(current.begin(), current.end());
        } else {
            history.at(t - tau, xd);
        }
    };

    for (std::size_t step = 0; step < steps; ++step) {
        const double t = static_cast<double>(step) * h;
        const std::vector<double> x = traj.states.back();

        delayed(t, x);
        rhs(pair, x, xd, k1);
        deriv.push_back(k1);

        for (std::size_t i = 0; i < n; ++i) {
            stage[i] = x[i] + 0.5 * h * k1[i];
        }
        delayed(t + 0.5 * h, stage);
        rhs(pair, stage, xd, k2);

        for (std::size_t i = 0; i < n; ++i) {
            stage[i] = x[i] + 0.5 * h * k2[i];
        }
        delayed(t + 0.5 * h, stage);
        rhs(pair, stage, xd, k3);

        for (std::size_t i = 0; i < n; ++i) {
            stage[i] = x[i] + h * k3[i];
        }
        delayed(t + h, stage);
        rhs(pair, stage, xd, k4);

        std::vector<double> next(n);
        for (std::size_t i = 0; i < n; ++i) {
            next[i] = x[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        const double nn = norm2(next);
        if (!std::isfinite(nn) || nn > 1e150) {
            traj.diverged = true;
            break;
        }
        traj.times.push_back(static_cast<double>(step + 1) * h);
        traj.states.push_back(std::move(next));
    }
    return traj;
}

std::vector<std::pair<double, double>> lk_functional(const DelayTrajectory& traj, const RiccatiCertificate& cert) {
    const std::size_t m = traj.history_steps;
    if (traj.states.size() < m + 1 || traj.times.size() != traj.states.size()) {
        throw ContractError("lk_functional: trajectory history is incomplete");
    }
    if (cert.P.size() != traj.dim() || cert.Q.size() != traj.dim()) {
        throw DimensionError("lk_functional: certificate size does not match the trajectory");
    }
    const std::size_t total = traj.states.size();
    std::vector<double> g(total);
    for (std::size_t k = 0; k < total; ++k) {
        g[k] = quad_form(cert.Q, traj.states[k]);
    }

    std::vector<std::pair<double, double>> out;
    out.reserve(total - m);
    // Window sum of g over indices k-m..k, updated incrementally.
    double window = std::accumulate(g.begin(), g.begin() + static_cast<std::ptrdiff_t>(m + 1), 0.0);
    for (std::size_t k = m; k < total; ++k) {
        if (k > m) {
            window += g[k] - g[k - m - 1];
        }
        const double integral = m == 0 ? 0.0 : traj.h * (window - 0.5 * (g[k - m] + g[k]));
        out.emplace_back(traj.times[k], quad_form(cert.P, traj.states[k]) + integral);
    }
    return out;
}

DecayReport decay_report(const DelayTrajectory& traj, const RiccatiCertificate& cert, std::span<const double> phi) {
    DecayReport rep;
    rep.tau = traj.tau;
    rep.h = traj.h;
    rep.diverged = traj.diverged;
    rep.final_norm = traj.diverged ? std::numeric_limits<double>::infinity() : norm2(traj.final_state());
    const auto lk = lk_functional(traj, cert);
    rep.initial_lk = lk.front().second;
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k < lk.size(); ++k) {
        worst = std::max(worst, lk[k].second - lk[k - 1].second);
    }
    rep.max_lk_increase = lk.size() > 1 ? worst : 0.0;
    rep.decayed = !rep.diverged && rep.final_norm < kDecayNormFactor * norm2(phi) &&
                  rep.max_lk_increase <= kLkStepTolerance * rep.initial_lk;
    return rep;
}

std::vector<DecayReport> decay_check(const MatrixPair& pair, const RiccatiCertificate& cert,
                                     std::span<const double> taus, double horizon, double h) {
    const std::vector<double> phi(pair.n(), 1.0);
    std::vector<DecayReport> reports;
    reports.reserve(taus.size());
    for (double tau : taus) {
        reports.push_back(decay_report(simulate(pair, tau, phi, horizon, h), cert, phi));
    }
    return reports;
}

void write_trajectory_csv(std::ostream& os, const DelayTrajectory& traj,
                          const std::vector<std::pair<double, double>>& lk) {
    const std::size_t n = traj.dim();
    os << "t";
    for (std::size_t i = 0; i < n; ++i) {
        os << ",x_" << (i + 1);
    }
    os << ",V\n";
    const auto old_precision = os.precision(17);
    for (std::size_t k = traj.origin(); k < traj.states.size(); ++k) {
        os << traj.times[k];
        for (double v : traj.states[k]) {
            os << ',' << v;
        }
        os << ',';
        if (!lk.empty()) {
            os << lk[k - traj.origin()].second;
        }
        os << '\n';
    }
    os.precision(old_precision);
}

}  // namespace drs
