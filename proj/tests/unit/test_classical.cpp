// SPDX-License-Identifier: MIT
#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "gpmp/errors.hpp"
#include "gpmp/examples.hpp"

namespace gpmp {
namespace {

constexpr double kPi = std::numbers::pi;

TEST(ClassicalAdjoint, PendulumClosedForm) {
    const double T = kPi / 2;
    const ClassicalProblem cp = pendulum_classical_problem(T, 1.0);
    const ControlCurve u = ControlCurve::constant({1.0}, T);
    const Trajectory x = integrate_state(cp, u);
    for (double t : {0.0, 0.7, T}) {
        EXPECT_NEAR(x.state(t)[0], std::sin(t) + 1.0 - std::cos(t), 1e-9);
    }
    const Vec pT = terminal_adjoint(cp, x.state(T));
    EXPECT_NEAR(pT[0], 1.0, 1e-12);
    EXPECT_NEAR(pT[1], 0.0, 1e-12);
    const Trajectory p = adjoint_integrate(cp, x, u, pT);
    for (double t : {0.0, 0.4, 1.2, T}) {
        EXPECT_NEAR(p.state(t)[0], std::cos(T - t), 1e-9);
        EXPECT_NEAR(p.state(t)[1], std::sin(T - t), 1e-9);
    }
}

TEST(ClassicalAdjoint, JacobianFallsBackToDifferences) {
    ClassicalProblem cp = pendulum_classical_problem(1.0, 1.0);
    cp.jacobian = {};
    const Vec J = state_jacobian(cp, 0.3, {0.2, -0.4}, {0.5});
    EXPECT_NEAR(J[0], 0.0, 1e-8);
    EXPECT_NEAR(J[1], 1.0, 1e-8);
    EXPECT_NEAR(J[2], -1.0, 1e-8);
    EXPECT_NEAR(J[3], 0.0, 1e-8);
}

TEST(ClassicalHamiltonian, IsAffineInTheControl) {
    const ClassicalProblem cp = pendulum_classical_problem(1.0, 1.0);
    const auto H = hamiltonian(cp, 0.5, {0.3, 0.7}, {2.0, -1.5});
    EXPECT_NEAR(H({0.0}), 2.0 * 0.7 - 1.5 * -0.3, 1e-14);
    EXPECT_NEAR(H({1.0}) - H({-1.0}), -3.0, 1e-14);
}

TEST(ClassicalCheck, OptimalAndWrongSign) {
    const double T = kPi / 2;
    const ClassicalProblem cp = pendulum_classical_problem(T, 1.0);
    const std::vector<double> taus{0.2, 0.6, 1.0, 1.4};
    const auto omegas = cp.K.grid(9);
    const ClassicalReport good = classical_pmp_check(cp, ControlCurve::constant({1.0}, T), taus, omegas);
    EXPECT_TRUE(good.violations.empty());
    EXPECT_NEAR(good.max_gap, 0.0, 1e-12);
    const ClassicalReport bad = classical_pmp_check(cp, ControlCurve::constant({-1.0}, T), taus, omegas);
    EXPECT_EQ(bad.violations.size(), taus.size() * (omegas.size() - 1));
    EXPECT_NEAR(bad.max_gap, 2.0 * std::sin(T - 0.2), 1e-8);
    EXPECT_NEAR(bad.violations.front().margin, bad.max_gap, 1e-14);
}

TEST(TerminalAdjoint, LinearFamilies) {
    const Vec pend = linear_terminal_adjoint({1.0, 0.0, 1.0});
    ASSERT_EQ(pend.size(), 2u);
    EXPECT_DOUBLE_EQ(pend[0], 0.0);
    EXPECT_DOUBLE_EQ(pend[1], -1.0);
    const Vec third = linear_terminal_adjoint({0.0, 0.0, 0.0, 1.0});
    ASSERT_EQ(third.size(), 3u);
    EXPECT_DOUBLE_EQ(third[0], 0.0);
    EXPECT_DOUBLE_EQ(third[1], 0.0);
    EXPECT_DOUBLE_EQ(third[2], 1.0);
    const Vec first = linear_terminal_adjoint({0.0, 2.0});
    ASSERT_EQ(first.size(), 1u);
    EXPECT_DOUBLE_EQ(first[0], 0.5);
}

TEST(BangBang, PendulumNoSwitchBelowPi) {
    const BangBangResult r = mth_order_bang_bang({1.0, 0.0, 1.0}, kPi / 2);
    EXPECT_TRUE(r.switches.empty());
    EXPECT_EQ(r.u_opt(0.5)[0], 1.0);
    EXPECT_NEAR(r.adjoint.state(0.5)[0], std::sin(kPi / 2 - 0.5), 1e-9);
    EXPECT_LT(r.oracle_max_diff, 1e-8);
    EXPECT_TRUE(r.oracle_argmax_agrees);
}

TEST(BangBang, PendulumSwitchesEveryPi) {
    const double T = 4.0 + kPi;
    const BangBangResult r = mth_order_bang_bang({1.0, 0.0, 1.0}, T);
    ASSERT_EQ(r.switches.size(), 2u);
    EXPECT_NEAR(r.switches[0], T - 2.0 * kPi, 1e-7);
    EXPECT_NEAR(r.switches[1], T - kPi, 1e-7);
    EXPECT_EQ(r.u_opt(0.1)[0], 1.0);
    EXPECT_EQ(r.u_opt(2.0)[0], -1.0);
    EXPECT_EQ(r.u_opt(T - 0.1)[0], 1.0);
    EXPECT_LT(r.oracle_max_diff, 1e-7);
}

TEST(BangBang, TripleIntegratorAdjointIsQuadratic) {
    const double T = 1.5;
    const BangBangResult r = mth_order_bang_bang({0.0, 0.0, 0.0, 1.0}, T);
    EXPECT_TRUE(r.switches.empty());
    for (double t : {0.0, 0.5, 1.2}) EXPECT_NEAR(r.adjoint.state(t)[0], 0.5 * (T - t) * (T - t), 1e-9);
    ASSERT_EQ(r.terminal_adjoint.size(), 3u);
    EXPECT_NEAR(r.terminal_adjoint[2], 1.0, 1e-12);
}

TEST(PhiProbe, PendulumDirectLine) {
    BuiltinParams p;
    p.id = "pendulum-direct";
    p.T = 1.2;
    const DefiningTriple tr = build(p);
    const std::vector<double> vs{-1.0, -0.5, 0.0, 0.5, 1.0};
    auto sigma = [&](double v) { return make_initial_state(p, v); };
    const PhiProbeReport zero = phi_surjectivity_probe(tr, ControlCurve::constant({0.0}, tr.T), vs, sigma);
    EXPECT_NEAR(zero.sin_T, std::sin(1.2), 1e-15);
    EXPECT_NEAR(zero.slope, std::sin(1.2), 1e-9);
    EXPECT_NEAR(zero.intercept, 0.0, 1e-9);
    EXPECT_LT(zero.affinity_residual, 1e-9);
    const PhiProbeReport one = phi_surjectivity_probe(tr, ControlCurve::constant({1.0}, tr.T), vs, sigma);
    EXPECT_NEAR(one.intercept, 1.0 - std::cos(1.2), 1e-9);
    EXPECT_NEAR(one.slope, std::sin(1.2), 1e-9);
}

TEST(PhiProbe, HorizonAtPiIsDegenerate) {
    BuiltinParams p;
    p.id = "pendulum-direct";
    p.T = 1.0;
    DefiningTriple tr = build(p);
    tr.T = kPi;
    try {
        phi_surjectivity_probe(tr, ControlCurve::constant({0.0}, kPi), {-1.0, 0.0, 1.0},
                               [&](double v) { return make_initial_state(p, v); });
        FAIL() << "expected DegenerateHorizon";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::DegenerateHorizon);
    }
}

TEST(Embedding, ClassicalTripleReproducesTheState) {
    const double T = 1.1;
    const ClassicalProblem cp = pendulum_classical_problem(T, 1.0);
    const DefiningTriple tr = embed_classical(cp);
    const ControlCurve u = ControlCurve::piecewise_constant({0.5}, {{1.0}, {-0.5}}, T);
    const Trajectory direct = integrate_state(cp, u);
    const Trajectory emb = solve(tr, u, tr.initial.default_state);
    for (double t : {0.3, 0.5, 0.9, T}) {
        EXPECT_NEAR(emb.state(t)[0], direct.state(t)[0], 1e-8);
        EXPECT_NEAR(emb.state(t)[1], direct.state(t)[1], 1e-8);
    }
    EXPECT_NEAR(cost_at(tr, emb, T), -direct.state(T)[0], 1e-8);
    EXPECT_NEAR(cost_at(tr, emb, 0.0), 0.0, 1e-15);
}

}  // namespace
}  // namespace gpmp
