#include <doctest.h>

#include "drs/classes.hpp"
#include "drs/riccati.hpp"
#include "support.hpp"

using namespace drs;
using drs::test::Random;

namespace {

MatrixPair form_3ab1(std::array<double, 3> a, std::array<double, 2> c, std::array<double, 2> b) {
    return MatrixPair(Matrix{{a[0], 0, 0}, {c[0], a[1], 0}, {0, c[1], a[2]}},
                      Matrix{{0, 0, b[0]}, {0, 0, b[1]}, {0, 0, 0}});
}

MatrixPair form_3ab2(std::array<double, 3> a, std::array<double, 2> c, std::array<double, 2> b) {
    return MatrixPair(Matrix{{a[0], 0, 0}, {0, a[1], 0}, {c[0], c[1], a[2]}},
                      Matrix{{0, 0, b[0]}, {0, 0, b[1]}, {0, 0, 0}});
}

double slack(const ClassVerdict& v, const std::string& name) {
    for (const auto& [key, value] : v.conditions) {
        if (key == name) {
            return value;
        }
    }
    FAIL("missing condition " << name);
    return 0.0;
}

}  // namespace

TEST_SUITE("classes") {

TEST_CASE("classification examples") {
    CHECK(classify(MatrixPair(Matrix{{-1, 1}, {0, -1}}, Matrix{{0, 1}, {1, 0}})).kind == ClassKind::MetzlerNonneg);
    const ClassTag t = classify(form_3ab1({-1, -1, -1}, {-1, 2}, {0.3, -0.2}));
    CHECK(t.kind == ClassKind::ThreeByThree_3AB1);
    CHECK(t.c == std::vector<double>{-1, 2});
    CHECK(t.b == std::vector<double>{0.3, -0.2});
    // Same-sign products d_i b_i would make this a LastRowForm pair, which is matched first.
    CHECK(classify(form_3ab2({-1, -1, -1}, {-1, 2}, {0.3, -0.2})).kind == ClassKind::LastRowForm);
    CHECK(classify(form_3ab2({-1, -1, -1}, {-1, 2}, {0.3, 0.2})).kind == ClassKind::ThreeByThree_3AB2);

    Random rng(41);
    CHECK(classify(MatrixPair(rng.matrix(4, 4), rng.matrix(4, 4))).kind == ClassKind::Unstructured);
    CHECK_FALSE(evaluate_class(MatrixPair(rng.matrix(3, 3), rng.matrix(3, 3))).has_value());
}

TEST_CASE("Metzler / nonnegative condition examples") {
    CHECK(metzler_nonneg_condition(MatrixPair(Matrix{{-2, 1}, {0, -2}}, Matrix{{0, 0}, {1, 0}})).stable ==
          Stability::Stable);
    CHECK(metzler_nonneg_condition(MatrixPair(Matrix{{-1}}, Matrix{{1}})).stable == Stability::Marginal);
    CHECK(metzler_nonneg_condition(MatrixPair(Matrix{{-1}}, Matrix{{2}})).stable == Stability::Unstable);
    CHECK_THROWS_AS(metzler_nonneg_condition(MatrixPair(Matrix{{-1}}, Matrix{{-2}})), ClassError);
}

TEST_CASE("rank-one row B on a Metzler A") {
    const MatrixPair pair(Matrix{{-2, 0}, {0, -2}}, Matrix{{1, -1}, {0, 0}});
    CHECK(classify(pair).kind == ClassKind::MetzlerRankOneRow);
    const ClassVerdict v = structured_condition(pair);
    REQUIRE(v.E.has_value());
    CHECK(*v.E == DiagonalMatrix{1, -1});
    CHECK(*v.D * pair.B * *v.E == Matrix{{1, 1}, {0, 0}});
    CHECK(v.stable == Stability::Stable);
    CHECK(solve_diagonal(pair).status() == VerdictStatus::Feasible);
}

TEST_CASE("sign-symmetric tridiagonal A") {
    const MatrixPair pair(Matrix{{-3, -1}, {-1, -3}}, Matrix(2, 2));
    CHECK(classify(pair).kind == ClassKind::TridiagSignSym);
    const ClassVerdict v = structured_condition(pair);
    REQUIRE(v.D.has_value());
    CHECK(*v.D == DiagonalMatrix{1, -1});
    CHECK(*v.D * pair.A * *v.D == Matrix{{-3, 1}, {1, -3}});
    CHECK(v.stable == Stability::Stable);
}

TEST_CASE("last-row A with mixed signs and no delay coupling") {
    const MatrixPair stable(Matrix{{-1, 0, 0}, {0, -2, 0}, {1, -1, -1}}, Matrix(3, 3));
    CHECK(structured_condition(stable, ClassKind::LastRowForm).stable == Stability::Stable);
    const MatrixPair unstable(Matrix{{-1, 0, 0}, {0, 0.5, 0}, {1, -1, -1}}, Matrix(3, 3));
    CHECK(structured_condition(unstable, ClassKind::LastRowForm).stable == Stability::Unstable);
}

TEST_CASE("wrong class is rejected") {
    CHECK_THROWS_AS(structured_condition(MatrixPair(Matrix{{-1, 2}, {3, -1}}, Matrix{{1, 1}, {1, 1}}),
                                         ClassKind::TridiagSignSym),
                    ClassError);
    CHECK_THROWS_AS(thm5_check(form_3ab2({-1, -1, -1}, {1, 1}, {1, 1})), ClassError);
}

TEST_CASE("3AB1 condition examples") {
    const ClassVerdict ok = thm5_check(form_3ab1({-1, -1, -1}, {1, 1}, {0.1, 0.1}));
    CHECK(ok.conditions.size() == 3);
    CHECK(ok.stable == Stability::Stable);
    CHECK(slack(ok, "ii_a2a3_minus_abs_b2c2") == doctest::Approx(0.9));

    const ClassVerdict bad = thm5_check(form_3ab1({-1, -1, -1}, {1, 1}, {20, 0.1}));
    CHECK(bad.stable == Stability::Unstable);
    CHECK(slack(bad, "iii_det_gap") < 0.0);

    CHECK(thm5_check(form_3ab1({-1, -2, -0.5}, {3, -3}, {0, 0})).stable == Stability::Stable);
}

TEST_CASE("3AB2 condition examples") {
    CHECK(thm6_check(form_3ab2({-1, -1, -3}, {1, 1}, {1, 1})).stable == Stability::Stable);
    const ClassVerdict boundary = thm6_check(form_3ab2({-1, -1, -2}, {1, 1}, {1, 1}));
    CHECK(boundary.stable != Stability::Stable);
    CHECK(slack(boundary, "iii_det_gap") == doctest::Approx(0.0));
    CHECK(thm6_check(form_3ab2({-1, -1, -1}, {3, -3}, {0, 0})).stable == Stability::Stable);
    CHECK(thm6_check(form_3ab2({-1, 1, -1}, {3, -3}, {0, 0})).stable == Stability::Unstable);
}

TEST_CASE("3x3 conditions match the solver and failures are witnessed") {
    Random rng(42);
    int compared = 0;
    for (int trial = 0; trial < 300; ++trial) {
        std::array<double, 3> a{};
        for (double& v : a) {
            v = rng.uniform(-3.0, 0.3);
        }
        const std::array<double, 2> c{rng.uniform(-3, 3), rng.uniform(-3, 3)};
        const std::array<double, 2> b{rng.uniform(-3, 3), rng.uniform(-3, 3)};
        const MatrixPair pair = trial % 2 == 0 ? form_3ab1(a, c, b) : form_3ab2(a, c, b);
        const ClassVerdict v = trial % 2 == 0 ? thm5_check(pair) : thm6_check(pair);
        const bool clear = std::all_of(v.conditions.begin(), v.conditions.end(),
                                       [](const auto& s) { return std::abs(s.second) >= 0.05; });
        if (!clear) {
            continue;
        }
        ++compared;
        const VerdictStatus s = solve_diagonal(pair).status();
        if (v.stable == Stability::Stable) {
            CHECK(s == VerdictStatus::Feasible);
        } else {
            CHECK(s == VerdictStatus::Refuted);
            const auto w = refute_by_sampling(pair, 1, 0);
            REQUIRE(w.has_value());
            CHECK(witness_is_valid(pair, *w));
        }
    }
    CHECK(compared > 200);
}

TEST_CASE("lag bound examples") {
    CHECK(lag_bound(1, 1) == 2.0);
    CHECK(lag_bound(1, -2) == 1.0);
    CHECK(lag_bound(-3, 1) == 3.0);
    CHECK_THROWS_AS(lag_bound(0, 1), ContractError);

    CHECK(lag_bound_oracle(1, 1, 0.01) == doctest::Approx(2.0).epsilon(0.01));
    CHECK(lag_bound_oracle(1, -2, 0.01) <= 1.0 + 1e-9);
    CHECK_THROWS_AS(lag_bound_oracle(1, 1, 0.5), ContractError);
}

TEST_CASE("lag bound oracle stays within the band") {
    Random rng(43);
    for (int trial = 0; trial < 10; ++trial) {
        const double c = rng.uniform(-3, 3);
        const double d = rng.uniform(-3, 3);
        const double grid = lag_bound_oracle(c, d, 0.05);
        CHECK(grid <= lag_bound(c, d) + 1e-9);
        CHECK(grid >= lag_bound(c, d) - 0.05);
    }
}

TEST_CASE("strict decision with a marginal band") {
    CHECK(decide_strict({{"x", 1.0}, {"y", 0.5}}) == Stability::Stable);
    CHECK(decide_strict({{"x", 1.0}, {"y", 0.0}}) == Stability::Marginal);
    CHECK(decide_strict({{"x", -1.0}, {"y", 0.0}}) == Stability::Unstable);
}

}  // TEST_SUITE
