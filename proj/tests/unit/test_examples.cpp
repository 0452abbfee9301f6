// SPDX-License-Identifier: MIT
#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <optional>

#include "gpmp/errors.hpp"
#include "gpmp/examples.hpp"

namespace gpmp {
namespace {

constexpr double kPi = std::numbers::pi;

template <class F>
std::optional<ErrorCode> error_code(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    return std::nullopt;
}

BuiltinParams with_id(const std::string& id) {
    BuiltinParams p;
    p.id = id;
    if (id == "mth-order") p.a = {1.0, 0.0, 1.0};
    return p;
}

TEST(Builtins, AllValidate) {
    for (const auto& id : builtin_ids()) {
        const Diagnostics d = validate_triple(build(with_id(id)));
        for (const auto& c : d.checks) EXPECT_TRUE(c.pass) << id << ": " << c.name << " " << c.detail;
    }
}

TEST(Builtins, MthOrderPendulumMatchesSecondOrderForm) {
    const BuiltinParams pm = with_id("mth-order"), pr = with_id("pendulum-r2");
    const DefiningTriple tm = build(pm), tr = build(pr);
    const ControlCurve u = ControlCurve::piecewise_constant({0.4, 1.1}, {{1.0}, {-1.0}, {0.3}}, pm.T);
    const Trajectory gm = solve(tm, u, make_initial_state(pm, 0.6));
    const Trajectory gr = solve(tr, u, make_initial_state(pr, 0.6));
    for (double t : {0.2, 0.8, 1.3, pm.T}) {
        EXPECT_NEAR(gm.state(t)[0], gr.state(t)[0], 1e-8);
        EXPECT_NEAR(gm.state(t)[1], gr.state(t)[1], 1e-8);
    }
    EXPECT_NEAR(cost_at(tm, gm, pm.T), cost_at(tr, gr, pr.T), 1e-8);
}

TEST(Builtins, PendulumFormulationsAgreeOnCost) {
    const double expected = -(std::sin(kPi / 2) + 1.0 - std::cos(kPi / 2));
    for (const char* id : {"pendulum-classical", "pendulum-r2", "pendulum-direct"}) {
        const BuiltinParams p = with_id(id);
        const DefiningTriple tr = build(p);
        const Trajectory g = solve(tr, ControlCurve::constant({1.0}, tr.T), tr.initial.default_state);
        EXPECT_NEAR(cost_at(tr, g, tr.T), expected, 1e-8) << id;
    }
}

TEST(Builtins, ChainReductionIsTheSameCurve) {
    BuiltinParams p = with_id("third-order");
    p.f_coeffs = {-0.5, 0.2, -0.1};
    const DefiningTriple tr = build(p);
    const ClassicalProblem cp = chain_reduction(p);
    const ControlCurve u = ControlCurve::constant({0.7}, tr.T);
    const Trajectory a = solve(tr, u, tr.initial.default_state);
    const Trajectory b = integrate_state(cp, u);
    for (double t : {0.5, 1.0, tr.T}) {
        for (int i = 0; i < 3; ++i) EXPECT_NEAR(a.state(t)[i], b.state(t)[i], 1e-8) << t << " " << i;
    }
}

TEST(Builtins, DirectPendulumSolvesItsEulerLagrangeEquation) {
    BuiltinParams p = with_id("pendulum-direct");
    p.T = 1.3;
    const DefiningTriple tr = build(p);
    const Trajectory g = solve(tr, ControlCurve::constant({0.4}, tr.T), make_initial_state(p, -0.2));
    for (double t : {0.1, 0.6, 1.2}) {
        for (double e : el_residual(tr, g, t)) EXPECT_LT(std::abs(e), 1e-7) << t;
    }
}

TEST(Builtins, DirectPendulumRejectsMultiplesOfPi) {
    BuiltinParams p = with_id("pendulum-direct");
    p.T = kPi;
    EXPECT_EQ(error_code([&] { build(p); }), ErrorCode::BadParams);
    p.T = 2.0 * kPi;
    EXPECT_EQ(error_code([&] { build(p); }), ErrorCode::BadParams);
}

TEST(Builtins, InvalidParameters) {
    EXPECT_EQ(error_code([] { build(with_id("no-such-problem")); }), ErrorCode::BadParams);
    BuiltinParams p;
    p.T = -1.0;
    EXPECT_EQ(error_code([&] { build(p); }), ErrorCode::BadParams);
    BuiltinParams m = with_id("mth-order");
    m.a = {1.0, 0.0, 0.0};
    EXPECT_EQ(error_code([&] { build(m); }), ErrorCode::BadParams);
    EXPECT_EQ(error_code([&] { make_initial_state(with_id("pendulum-r2"), 0.0, {1.0}); }), ErrorCode::BadParams);
}

TEST(OptimalReference, ClosedForms) {
    EXPECT_NEAR(optimal_reference(with_id("pendulum-r2")).cost, -2.0, 1e-15);
    BuiltinParams still;
    still.v_max = 0.0;
    EXPECT_NEAR(optimal_reference(still).cost, -1.0, 1e-15);
    BuiltinParams lin = with_id("mth-order");
    lin.a = {0.0, 1.0};
    lin.T = 1.7;
    const OptimalReference ref = optimal_reference(lin);
    EXPECT_NEAR(ref.cost, -1.7, 1e-15);
    const DefiningTriple tr = build(lin);
    EXPECT_NEAR(cost_at(tr, solve(tr, ref.u, ref.sigma), tr.T), ref.cost, 1e-9);
}

TEST(OptimalReference, ThirdOrderOnlyWhenPlain) {
    BuiltinParams p = with_id("third-order");
    const OptimalReference ref = optimal_reference(p);
    const DefiningTriple tr = build(p);
    EXPECT_NEAR(cost_at(tr, solve(tr, ref.u, ref.sigma), tr.T), ref.cost, 1e-9);
    p.f_coeffs = {0.0, 1.0, 0.0};
    EXPECT_EQ(error_code([&] { optimal_reference(p); }), ErrorCode::NoClosedForm);
    BuiltinParams m = with_id("mth-order");
    EXPECT_EQ(error_code([&] { optimal_reference(m); }), ErrorCode::NoClosedForm);
}

TEST(OptimalReference, VelocityScanFindsTheBoundary) {
    const BuiltinParams p;
    const VelocityOptimum best = optimize_initial_velocity(p, ControlCurve::constant({1.0}, p.T));
    EXPECT_NEAR(best.v, 1.0, 1e-8);
    EXPECT_NEAR(best.cost, -2.0, 1e-8);
    BuiltinParams late = p;
    late.T = 2.5;
    // sin T > 0 still, so the largest velocity wins.
    EXPECT_NEAR(optimize_initial_velocity(late, ControlCurve::constant({0.0}, late.T)).cost, -std::sin(2.5), 1e-8);
}

}  // namespace
}  // namespace gpmp
