// SPDX-License-Identifier: MIT
#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "gpmp/auxiliary.hpp"
#include "gpmp/errors.hpp"
#include "gpmp/examples.hpp"

namespace gpmp {
namespace {

constexpr double kPi = std::numbers::pi;

/// Composite Simpson on [a, b] with n (even) intervals.
template <class F>
double simpson(F f, double a, double b, int n) {
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int k = 1; k < n; ++k) s += (k % 2 ? 4.0 : 2.0) * f(a + k * h);
    return s * h / 3.0;
}

TEST(BoundaryMatrix, QuarterPeriodHorizon) {
    const Eigen::Matrix4d A = boundary_matrix(kPi / 2);
    const double ep = std::exp(kPi / 2), em = std::exp(-kPi / 2);
    Eigen::Matrix4d expected;
    expected << 1, 1, 1, 0, 1, -1, 0, 1, ep, -em, -1, 0, ep, em, 0, -1;
    EXPECT_LE((A - expected).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(BoundaryMatrix, FirstRowAndNonsingularity) {
    for (double T : {0.1, 1.0, kPi / 2, 10.0}) {
        const Eigen::Matrix4d A = boundary_matrix(T);
        EXPECT_EQ(A.row(0), Eigen::RowVector4d(1, 1, 1, 0).eval()) << T;
        EXPECT_GT(std::abs(A.determinant()), 1e-6) << T;
    }
}

TEST(QuarticBasis, FourthDerivativeIdentityAtRandomTimes) {
    std::mt19937_64 rng(44);
    std::uniform_real_distribution<double> td(0.0, 3.0);
    const double T = 3.0, w4 = std::pow(kPi / (2 * T), 4);
    for (int trial = 0; trial < 20; ++trial) {
        const double t = td(rng);
        for (int j = 0; j < 4; ++j) EXPECT_NEAR(quartic_basis(T, j, t, 4), w4 * quartic_basis(T, j, t, 0), 1e-10);
    }
}

HBoundaryData scalar_data(double T, double q0, double PL0, double qT, double PT) {
    HBoundaryData d;
    d.T = T;
    d.q0 = {{q0}};
    d.PL0 = {{PL0}};
    d.qT = {{qT}};
    d.PT = {{PT}};
    return d;
}

TEST(SolveH, ZeroDataGivesZeroFamily) {
    const HCoefficients c = solve_h(scalar_data(1.0, 0.0, 0.0, 0.0, 0.0));
    for (double t : {0.0, 0.5, 1.0}) {
        const HValues v = eval_h(c, t, 0);
        EXPECT_EQ(v.h[0], 0.0);
        EXPECT_EQ(v.hp[0], 0.0);
        EXPECT_EQ(v.hpp[0], 0.0);
    }
}

TEST(SolveH, DecayingExponential) {
    const HCoefficients c = solve_h(scalar_data(1.0, 1.0, 1.0, 0.3, -0.7));
    EXPECT_NEAR(c.h[0][0], 0.0, 1e-15);
    EXPECT_NEAR(c.h[0][1], 1.0, 1e-15);
    for (double t : {0.0, 0.4, 1.0}) EXPECT_NEAR(eval_h(c, t, 0).h[0], std::exp(-t), 1e-14);
    // Boundary conditions of h' and h''.
    EXPECT_NEAR(eval_h(c, 0.0, 0).hp[0], 0.0, 1e-13);
    EXPECT_NEAR(eval_h(c, 0.0, 1).hp[0], 0.0, 1e-13);
    EXPECT_NEAR(eval_h(c, 1.0, 1).hp[0], 0.3, 1e-13);
    EXPECT_NEAR(eval_h(c, 1.0, 2).hp[0], -0.7, 1e-13);
    EXPECT_NEAR(eval_h(c, 1.0, 1).hpp[0], std::exp(-1.0), 1e-13);
    EXPECT_NEAR(eval_h(c, 1.0, 2).hpp[0], -std::exp(-1.0), 1e-13);
}

TEST(EvalH, CoshAndZeroQuartics) {
    HCoefficients c;
    c.T = 2.0;
    c.N = 1;
    c.r = 1;
    c.h = {{0.5, 0.5}};
    c.hp = {{0, 0, 0, 0}};
    c.hpp = {{0, 0, 0, 0}};
    for (double t : {0.0, 0.7, 2.0}) {
        EXPECT_NEAR(eval_h(c, t, 0).h[0], std::cosh(t), 1e-14);
        EXPECT_NEAR(eval_h(c, t, 2).h[0] - eval_h(c, t, 0).h[0], 0.0, 1e-14);
        for (int d = 0; d <= 3; ++d) EXPECT_EQ(eval_h(c, t, d).hp[0], 0.0);
    }
}

TEST(SolveH, AuditOnRandomPendulumTrajectories) {
    BuiltinParams p;
    const DefiningTriple tr = build(p);
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> unit(-1.0, 1.0), td(0.0, tr.T);
    for (int trial = 0; trial < 10; ++trial) {
        Vec sigma = tr.initial.default_state;
        sigma[1] = unit(rng);
        sigma[2] = unit(rng);
        sigma[3] = unit(rng);
        const Trajectory g = solve(tr, ControlCurve::piecewise_constant({td(rng)}, {{unit(rng)}, {unit(rng)}}, tr.T), sigma);
        const HBoundaryData data = h_boundary_data(tr, g);
        const HAudit a = audit_h(solve_h(data), data, {td(rng), td(rng), td(rng)});
        EXPECT_LE(a.boundary_residual, 1e-9);
        EXPECT_LE(a.ode_residual, 1e-10);
    }
}

TEST(Mu, StartsAtZeroAndMatchesIndependentQuadrature) {
    BuiltinParams p;
    const DefiningTriple tr = build(p);
    const OptimalReference ref = optimal_reference(p);
    const Trajectory g = solve(tr, ref.u, ref.sigma);
    const ExtendedCurve ext = ExtendedCurve::build(tr, g);
    EXPECT_EQ(mu_of(ext, 0.0), 0.0);
    const HCoefficients& c = ext.h();
    const double oracle = -simpson(
        [&](double t) {
            const JetPoint j = jet_of_trajectory(g, t, tr.r());
            return tr.lagrangian.field(j, ref.u.value(t)) + ltilde_correction(c, t);
        },
        0.0, tr.T, 4000);
    EXPECT_NEAR(mu_of(ext, tr.T), oracle, 1e-7);
}

TEST(ActionIntegral, DirectPendulumAgainstClosedFormCurve) {
    BuiltinParams p;
    p.id = "pendulum-direct";
    const DefiningTriple tr = build(p);
    const double v = 0.4, T = tr.T;
    const Trajectory g = solve(tr, ControlCurve::constant({1.0}, T), make_initial_state(p, v));
    // x = v sin t + 1 - cos t under u = 1.
    const double oracle = simpson(
        [&](double t) {
            const double x = v * std::sin(t) + 1.0 - std::cos(t), xd = v * std::cos(t) + std::sin(t);
            return 0.5 * xd * xd - 0.5 * x * x + x;
        },
        0.0, T, 2000);
    EXPECT_NEAR(action_integral(tr, g), oracle, 1e-9);
}

TEST(PcForm, LiftTangentGivesExtendedLagrangian) {
    BuiltinParams p;
    const DefiningTriple tr = build(p);
    const Trajectory g = solve(tr, ControlCurve::constant({0.5}, tr.T), tr.initial.default_state);
    const ExtendedCurve ext = ExtendedCurve::build(tr, g);
    for (double t : {0.2, 0.8, 1.3}) {
        const ExtendedPoint x = extended_point(tr, ext, t);
        EXPECT_NEAR(pc_form_pairing(tr, x, lift_tangent(x, tr.r())), extended_lagrangian(tr, x), 1e-12);
    }
}

TEST(PcForm, PureTimeDirectionWithFlatJet) {
    BuiltinParams p;
    const DefiningTriple tr = build(p);
    const Trajectory g = solve(tr, ControlCurve::constant({0.5}, tr.T), tr.initial.default_state);
    const ExtendedCurve ext = ExtendedCurve::build(tr, g);
    ExtendedPoint x = extended_point(tr, ext, 0.6);
    for (std::size_t b = 1; b < x.jet.blocks.size(); ++b) std::fill(x.jet.blocks[b].begin(), x.jet.blocks[b].end(), 0.0);
    for (std::size_t k = 1; k < x.hd.size(); ++k) {
        for (auto* v : {&x.hd[k].h, &x.hd[k].hp, &x.hd[k].hpp}) std::fill(v->begin(), v->end(), 0.0);
    }
    x.mu1 = 0.0;
    ExtendedTangent v = lift_tangent(x, tr.r());
    for (auto& b : v.dq) std::fill(b.begin(), b.end(), 0.0);
    for (auto& d : v.dh) std::fill(d.begin(), d.end(), 0.0);
    for (auto& d : v.dhp) std::fill(d.begin(), d.end(), 0.0);
    for (auto& d : v.dhpp) std::fill(d.begin(), d.end(), 0.0);
    v.dmu = v.dlambda = 0.0;
    std::fill(v.du.begin(), v.du.end(), 0.0);
    v.dt = 1.0;
    EXPECT_NEAR(pc_form_pairing(tr, x, v), extended_lagrangian(tr, x), 1e-12);
}

TEST(PcForm, LiftIntegralIsTerminalCostForEveryBuiltin) {
    for (const auto& id : builtin_ids()) {
        BuiltinParams p;
        p.id = id;
        if (id == "mth-order") p.a = {0.5, 0.3, 1.0};
        const DefiningTriple tr = build(p);
        const int M = tr.controls.dim();
        const Trajectory g = solve(tr, ControlCurve::constant(ControlValue(M, 0.7), tr.T), tr.initial.default_state);
        const ExtendedCurve ext = ExtendedCurve::build(tr, g);
        EXPECT_NEAR(pc_lift_integral(tr, ext), cost_at(tr, g, tr.T), 1e-6) << id;
    }
}

}  // namespace
}  // namespace gpmp
