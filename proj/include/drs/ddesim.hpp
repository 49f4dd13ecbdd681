#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "drs/riccati.hpp"

namespace drs {

/// Sampled solution of ẋ(t) = A x(t) + B x(t - τ) on [-τ, T].
///
/// Samples are spaced by `h` and start at t = -τ, so the first
/// `history_steps` + 1 samples are the constant initial function.
struct DelayTrajectory {
    double h = 0.0;
    double tau = 0.0;
    std::size_t history_steps = 0;
    std::vector<double> times;
    std::vector<std::vector<double>> states;
    bool diverged = false;

    [[nodiscard]] std::size_t dim() const noexcept { return states.empty() ? 0 : states.front().size(); }
    /// Index of the sample at t = 0.
    [[nodiscard]] std::size_t origin() const noexcept { return history_steps; }
    [[nodiscard]] const std::vector<double>& final_state() const { return states.back(); }
};

struct DecayReport {
    double tau = 0.0;
    double h = 0.0;
    double final_norm = 0.0;
    double initial_lk = 0.0;
    double max_lk_increase = 0.0;
    bool diverged = false;
    bool decayed = false;
};

/// Classical RK4. The delayed state is read from the stored history by cubic
/// Hermite interpolation on the grid; τ = 0 reduces exactly to ẋ = (A + B)x.
/// h is shrunk so that τ/h is an integer. Blow-up sets `diverged` and stops.
DelayTrajectory simulate(const MatrixPair& pair, double tau, std::span<const double> phi, double horizon, double h);

/// V(t) = x(t)ᵀP x(t) + ∫_{t-τ}^{t} x(s)ᵀQ x(s) ds for every sample with t ≥ 0
/// (trapezoidal rule on the grid).
std::vector<std::pair<double, double>> lk_functional(const DelayTrajectory& traj, const RiccatiCertificate& cert);

inline constexpr double kDecayNormFactor = 1e-3;
inline constexpr double kLkStepTolerance = 1e-6;

/// Simulates every delay from φ = 𝟙 and checks ‖x(T)‖ < 1e-3‖φ‖ and per-step
/// increases of V bounded by 1e-6·V(0).
std::vector<DecayReport> decay_check(const MatrixPair& pair, const RiccatiCertificate& cert,
                                     std::span<const double> taus, double horizon, double h);

DecayReport decay_report(const DelayTrajectory& traj, const RiccatiCertificate& cert, std::span<const double> phi);

/// CSV with header t,x_1..x_n,V for samples with t ≥ 0. V is left empty when `lk` is empty.
void write_trajectory_csv(std::ostream& os, const DelayTrajectory& traj,
                          const std::vector<std::pair<double, double>>& lk);

}  // namespace drs
