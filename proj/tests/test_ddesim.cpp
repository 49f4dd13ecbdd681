#include <doctest.h>

#include <cmath>
#include <sstream>

#include "drs/ddesim.hpp"
#include "support.hpp"

using namespace drs;
using drs::test::Random;

namespace {

RiccatiCertificate unit_certificate(std::size_t n) {
    return RiccatiCertificate{DiagonalMatrix::identity(n), DiagonalMatrix::identity(n), 0.0};
}

double value_at(const DelayTrajectory& traj, double t) {
    const auto k = static_cast<std::size_t>(std::llround(t / traj.h));
    return traj.states[traj.origin() + k][0];
}

}  // namespace

TEST_SUITE("ddesim") {

TEST_CASE("undelayed scalar exponential") {
    const MatrixPair pair(Matrix{{-2}}, Matrix{{0}});
    const std::vector<double> phi{1.0};
    const DelayTrajectory traj = simulate(pair, 0.0, phi, 5.0, 0.01);
    CHECK(traj.times.back() == doctest::Approx(5.0));
    const double exact = std::exp(-10.0);
    CHECK(std::abs(traj.final_state()[0] - exact) <= 1e-6 * exact);
}

TEST_CASE("zero delay reduces to the system with A + B") {
    Random rng(61);
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t n = 1 + rng.index(4);
        const MatrixPair pair(rng.matrix(n, n), rng.matrix(n, n));
        const MatrixPair merged(pair.A + pair.B, Matrix(n, n));
        std::vector<double> phi(n);
        for (double& v : phi) {
            v = rng.uniform(-1, 1);
        }
        const DelayTrajectory a = simulate(pair, 0.0, phi, 3.0, 0.01);
        const DelayTrajectory b = simulate(merged, 0.0, phi, 3.0, 0.01);
        REQUIRE(a.states.size() == b.states.size());
        for (std::size_t k = 0; k < a.states.size(); ++k) {
            for (std::size_t i = 0; i < n; ++i) {
                CHECK(std::abs(a.states[k][i] - b.states[k][i]) <= 1e-8 * std::max(1.0, std::abs(b.states[k][i])));
            }
        }
    }
}

TEST_CASE("scalar delayed decay") {
    const MatrixPair pair(Matrix{{-2}}, Matrix{{1}});
    const std::vector<double> phi{1.0};
    const DelayTrajectory traj = simulate(pair, 1.0, phi, 10.0, 0.01);
    // Reference from an independent method-of-steps integration at tolerance 1e-12.
    CHECK(traj.final_state()[0] == doctest::Approx(0.0105363706).epsilon(1e-7));
    // On [0, 1] the solution is (1 + e^{-2t}) / 2.
    CHECK(value_at(traj, 0.5) == doctest::Approx(0.5 * (1.0 + std::exp(-1.0))).epsilon(1e-9));
    for (std::size_t k = traj.origin() + 1; k < traj.states.size(); ++k) {
        CHECK(std::abs(traj.states[k][0]) <= std::abs(traj.states[k - 1][0]) + 1e-15);
    }
}

TEST_CASE("fourth-order convergence under step halving") {
    const MatrixPair pair(Matrix{{-1.5, 0.4}, {0.2, -2}}, Matrix{{0.6, -0.3}, {0.5, 0.4}});
    const std::vector<double> phi{1.0, -0.5};
    auto at_end = [&](double h) { return simulate(pair, 0.7, phi, 7.0, h).final_state(); };
    const auto x1 = at_end(0.07);
    const auto x2 = at_end(0.035);
    const auto x4 = at_end(0.0175);
    const double e1 = std::hypot(x1[0] - x2[0], x1[1] - x2[1]);
    const double e2 = std::hypot(x2[0] - x4[0], x2[1] - x4[1]);
    CHECK(e1 / e2 >= 8.0);
}

TEST_CASE("step is aligned with the delay grid") {
    const MatrixPair pair(Matrix{{-1}}, Matrix{{0.5}});
    const DelayTrajectory traj = simulate(pair, 1.0, std::vector<double>{1.0}, 2.0, 0.3);
    CHECK(traj.history_steps == 4);
    CHECK(traj.h == doctest::Approx(0.25));
    CHECK(traj.times.front() == doctest::Approx(-1.0));
}

TEST_CASE("simulation preconditions") {
    const MatrixPair pair(Matrix{{-1}}, Matrix{{0.5}});
    const std::vector<double> phi{1.0};
    CHECK_THROWS_AS(simulate(pair, 1.0, phi, 5.0, 0.0), ContractError);
    CHECK_THROWS_AS(simulate(pair, -1.0, phi, 5.0, 0.1), ContractError);
    CHECK_THROWS_AS(simulate(pair, 6.0, phi, 5.0, 0.1), ContractError);
    CHECK_THROWS_AS(simulate(pair, 1.0, std::vector<double>{1.0, 2.0}, 5.0, 0.1), DimensionError);
}

TEST_CASE("Lyapunov-Krasovskii functional examples") {
    const MatrixPair pair(Matrix{{-2}}, Matrix{{1}});
    const auto zero = lk_functional(simulate(pair, 1.0, std::vector<double>{0.0}, 3.0, 0.01), unit_certificate(1));
    for (const auto& [t, v] : zero) {
        CHECK(v == 0.0);
    }

    const RiccatiCertificate cert{DiagonalMatrix{2.0}, DiagonalMatrix{5.0}, 0.0};
    const DelayTrajectory plain = simulate(pair, 0.0, std::vector<double>{1.0}, 2.0, 0.01);
    const auto lk0 = lk_functional(plain, cert);
    for (std::size_t k = 0; k < lk0.size(); ++k) {
        const double x = plain.states[k][0];
        CHECK(lk0[k].second == 2.0 * x * x);
    }

    const auto lk = lk_functional(simulate(pair, 1.0, std::vector<double>{1.0}, 3.0, 0.01), unit_certificate(1));
    CHECK(lk.front().first == 0.0);
    CHECK(lk.front().second == doctest::Approx(2.0));
}

TEST_CASE("functional dissipates at the certified rate") {
    const MatrixPair pair(Matrix{{-2}}, Matrix{{1}});
    const RiccatiCertificate cert = make_certificate(pair, DiagonalMatrix{1}, DiagonalMatrix{1});
    const DelayTrajectory traj = simulate(pair, 1.5, std::vector<double>{1.0}, 10.0, 0.01);
    const auto lk = lk_functional(traj, cert);
    const double tol = 1e-6 * lk.front().second;
    for (std::size_t k = 0; k + 1 < lk.size(); ++k) {
        const double x0 = traj.states[traj.origin() + k][0];
        const double x1 = traj.states[traj.origin() + k + 1][0];
        const double rate = (lk[k + 1].second - lk[k].second) / traj.h;
        CHECK(rate <= -cert.margin * std::min(x0 * x0, x1 * x1) + tol);
    }
}

TEST_CASE("decay check outcomes") {
    const MatrixPair feasible(Matrix{{-2}}, Matrix{{1}});
    const RiccatiCertificate cert = make_certificate(feasible, DiagonalMatrix{1}, DiagonalMatrix{1});
    const std::vector<double> taus{0.0, 0.5, 2.0};
    for (const DecayReport& r : decay_check(feasible, cert, taus, 60.0, 0.01)) {
        CHECK(r.decayed);
        CHECK(r.max_lk_increase <= 1e-12 * r.initial_lk);
    }

    const MatrixPair infeasible(Matrix{{-1}}, Matrix{{2}});
    const std::vector<double> tau2{2.0};
    const DecayReport bad = decay_check(infeasible, unit_certificate(1), tau2, 60.0, 0.01).front();
    CHECK_FALSE(bad.decayed);

    const MatrixPair undelayed(Matrix{{-1, 0.5}, {0, -2}}, Matrix(2, 2));
    const RiccatiCertificate lyap = make_certificate(undelayed, DiagonalMatrix{1, 1}, DiagonalMatrix{0.5, 0.5});
    const std::vector<double> many{0.0, 0.3, 3.0, 10.0};
    for (const DecayReport& r : decay_check(undelayed, lyap, many, 60.0, 0.01)) {
        CHECK(r.decayed);
    }
}

TEST_CASE("trajectory CSV") {
    const MatrixPair pair(Matrix{{-1, 0}, {0, -1}}, Matrix(2, 2));
    const DelayTrajectory traj = simulate(pair, 0.5, std::vector<double>{1.0, 1.0}, 1.0, 0.25);
    std::ostringstream os;
    write_trajectory_csv(os, traj, lk_functional(traj, unit_certificate(2)));
    std::istringstream in(os.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "t,x_1,x_2,V");
    std::getline(in, line);
    CHECK(line.rfind("0,1,1,", 0) == 0);
    int rows = 1;
    while (std::getline(in, line)) {
        ++rows;
    }
    CHECK(rows == 5);
}

}  // TEST_SUITE
