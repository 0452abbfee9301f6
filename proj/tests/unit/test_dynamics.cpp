// SPDX-License-Identifier: MIT
#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "gpmp/dynamics.hpp"
#include "gpmp/errors.hpp"

namespace gpmp {
namespace {

constexpr double kPi = std::numbers::pi;

NormalFormDynamics pendulum() {
    return reduce_to_first_order(
        [](const auto&, const auto& b, const auto& u) {
            using T = std::decay_t<decltype(b[0][0])>;
            return std::vector<T>{-b[0][0] + u[0]};
        },
        2, 1);
}

TEST(Reduce, PendulumChainLayout) {
    const NormalFormDynamics d = pendulum();
    EXPECT_EQ(d.state_dim, 2);
    EXPECT_EQ(d.chain_base, (std::vector<int>{0}));
    EXPECT_EQ(d.chain_len, (std::vector<int>{2}));
    Vec dy(2);
    d.rhs.d(0.0, {0.3, 0.7}, {1.0}, dy);
    EXPECT_DOUBLE_EQ(dy[0], 0.7);
    EXPECT_DOUBLE_EQ(dy[1], 0.7);
}

TEST(Reduce, ThirdOrderChain) {
    const NormalFormDynamics d = reduce_to_first_order(
        [](const auto&, const auto&, const auto& u) {
            using T = std::decay_t<decltype(u[0])>;
            return std::vector<T>{u[0]};
        },
        3, 1);
    Vec dy(3);
    d.rhs.d(0.0, {1.0, 2.0, 3.0}, {4.0}, dy);
    EXPECT_EQ(dy, (Vec{2.0, 3.0, 4.0}));
}

TEST(Integrate, PendulumClosedForms) {
    const Tolerances tol{1e-10, 1e-12};
    const Trajectory free = integrate(pendulum(), ControlCurve::constant({0.0}, kPi / 2), {0.0, 1.0}, kPi / 2, tol);
    EXPECT_NEAR(free.state(kPi / 2)[0], 1.0, 1e-8);
    const Trajectory forced = integrate(pendulum(), ControlCurve::constant({1.0}, kPi), {0.0, 0.0}, kPi, tol);
    for (double t : {0.3, 1.0, kPi / 2, 2.5}) EXPECT_NEAR(forced.state(t)[0], 1.0 - std::cos(t), 1e-8);
}

TEST(Integrate, ZeroFieldStaysZero) {
    NormalFormDynamics d;
    d.state_dim = 2;
    d.order = 1;
    d.chain_base = {0, 1};
    d.chain_len = {1, 1};
    d.rhs = make_vec_fn([](const auto&, const auto&, const auto&, auto& dy) {
        for (auto& v : dy) v = 0.0 * v;
    });
    const Trajectory tr = integrate(d, ControlCurve::constant({0.0}, 1.0), {0.0, 0.0}, 1.0);
    for (double t : {0.0, 0.5, 1.0}) EXPECT_EQ(tr.state(t), (Vec{0.0, 0.0}));
}

TEST(Integrate, BreakpointsAreMeshNodes) {
    const ControlCurve u = ControlCurve::piecewise_constant({0.4, 1.1}, {{1.0}, {-1.0}, {0.5}}, 2.0);
    const Trajectory whole = integrate(pendulum(), u, {0.2, -0.1}, 2.0, {1e-11, 1e-13});
    const auto& mesh = whole.mesh();
    for (double b : {0.4, 1.1}) EXPECT_NE(std::find(mesh.begin(), mesh.end(), b), mesh.end());
    // Composition across the pieces reproduces the single integration.
    const Trajectory first = integrate_between(pendulum(), u, {0.2, -0.1}, 0.0, 0.4, {1e-11, 1e-13});
    const Trajectory rest = integrate_between(pendulum(), u, first.state(0.4), 0.4, 2.0, {1e-11, 1e-13});
    EXPECT_NEAR(rest.state(2.0)[0], whole.state(2.0)[0], 1e-12);
    EXPECT_NEAR(rest.state(2.0)[1], whole.state(2.0)[1], 1e-12);
}

TEST(Integrate, ToleranceRefinementReducesError) {
    const ControlCurve u = ControlCurve::constant({1.0}, 3.0);
    double prev = 1.0;
    for (double rtol : {1e-4, 1e-6, 1e-8}) {
        const Trajectory tr = integrate(pendulum(), u, {0.0, 0.0}, 3.0, {rtol, rtol * 1e-2});
        const double err = std::abs(tr.state(3.0)[0] - (1.0 - std::cos(3.0)));
        EXPECT_LT(err, prev);
        EXPECT_LT(err, 100.0 * rtol);
        prev = err;
    }
}

TEST(Jets, PendulumAnalyticJets) {
    const Tolerances tol{1e-11, 1e-13};
    const Trajectory a = integrate(pendulum(), ControlCurve::constant({0.0}, kPi), {0.0, 1.0}, kPi, tol);
    const JetPoint ja = jet_of_trajectory(a, kPi / 2, 2);
    EXPECT_NEAR(ja.q(0, 0), 1.0, 1e-9);
    EXPECT_NEAR(ja.q(0, 1), 0.0, 1e-9);
    EXPECT_NEAR(ja.q(0, 2), -1.0, 1e-9);
    const Trajectory b = integrate(pendulum(), ControlCurve::constant({1.0}, kPi), {0.0, 0.0}, kPi, tol);
    const JetPoint jb = jet_of_trajectory(b, kPi, 1, Side::Left);
    EXPECT_NEAR(jb.q(0, 0), 2.0, 1e-9);
    EXPECT_NEAR(jb.q(0, 1), 0.0, 1e-9);
}

TEST(Jets, HighOrderMatchesSineDerivativesAtRandomTimes) {
    const Trajectory a = integrate(pendulum(), ControlCurve::constant({0.0}, 4.0), {0.0, 1.0}, 4.0, {1e-11, 1e-13});
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> td(0.0, 4.0);
    for (int trial = 0; trial < 20; ++trial) {
        const double t = td(rng);
        const JetPoint j = jet_of_trajectory(a, t, 7);
        for (int k = 0; k <= 7; ++k) EXPECT_NEAR(j.q(0, k), std::sin(t + k * kPi / 2), 1e-8) << "t=" << t << " k=" << k;
    }
}

TEST(Jets, ControlDerivativesEnterAboveTheChain) {
    // x'' = -x + u with u(t) = t: x''' = -x' + 1.
    const ControlCurve u = ControlCurve::analytic([](const auto& t) { return std::vector<std::decay_t<decltype(t)>>{t}; }, 1, 2.0);
    const Trajectory tr = integrate(pendulum(), u, {0.0, 0.0}, 2.0, {1e-11, 1e-13});
    const double t = 1.2;
    const JetPoint j = jet_of_trajectory(tr, t, 3);
    // Closed form: x(t) = t - sin t.
    EXPECT_NEAR(j.q(0, 0), t - std::sin(t), 1e-9);
    EXPECT_NEAR(j.q(0, 2), std::sin(t), 1e-9);
    EXPECT_NEAR(j.q(0, 3), std::cos(t), 1e-9);
}

TEST(Cutoff, FieldFrozenOutsideBall) {
    const NormalFormDynamics d = with_cutoff(pendulum(), {0.0, 0.0}, 1.0);
    Vec inside(2), outside(2), projected(2);
    d.rhs.d(0.0, {0.5, 0.0}, {0.0}, inside);
    EXPECT_DOUBLE_EQ(inside[1], -0.5);
    d.rhs.d(0.0, {10.0, 0.0}, {0.0}, outside);
    pendulum().rhs.d(0.0, {1.0, 0.0}, {0.0}, projected);
    EXPECT_NEAR(outside[1], projected[1], 1e-14);
}

TEST(Jets, OrderBeyondLimitThrows) {
    const Trajectory a = integrate(pendulum(), ControlCurve::constant({0.0}, 1.0), {0.0, 1.0}, 1.0);
    EXPECT_THROW(jet_of_trajectory(a, 0.5, kMaxJetOrder + 1), Error);
}

}  // namespace
}  // namespace gpmp
