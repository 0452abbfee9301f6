// SPDX-License-Identifier: MIT
#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "gpmp/jetspace.hpp"
#include "gpmp/series.hpp"

namespace gpmp {
namespace {

JetPoint jet1(double t, std::vector<double> q) {
    std::vector<Vec> blocks;
    for (double v : q) blocks.push_back({v});
    return JetPoint(t, blocks);
}

TEST(Series, ExpCoefficientsAreInverseFactorials) {
    const Series e = exp(Series::variable(0.0, 6));
    double fact = 1.0;
    for (int k = 0; k <= 6; ++k) {
        if (k > 0) fact *= k;
        EXPECT_NEAR(e[k], 1.0 / fact, 1e-15);
    }
}

TEST(Series, SinCosDerivativesMatchAnalytic) {
    const double x0 = 0.7;
    const Series s = sin(Series::variable(x0, 5));
    const Series c = cos(Series::variable(x0, 5));
    // d^k sin(x) = sin(x + k pi/2), d^k cos(x) = cos(x + k pi/2).
    for (int k = 0; k <= 5; ++k) {
        EXPECT_NEAR(s.derivative(k), std::sin(x0 + k * M_PI / 2), 1e-14);
        EXPECT_NEAR(c.derivative(k), std::cos(x0 + k * M_PI / 2), 1e-14);
    }
}

TEST(Series, RandomRationalIdentities) {
    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> d(2.0, 3.0);
    for (int trial = 0; trial < 50; ++trial) {
        const Series x = Series::variable(d(rng), 6);
        const Series lhs = (x * x - 1.0) / (x - 1.0);
        const Series rhs = x + 1.0;
        const Series ls = log(exp(x));
        const Series sq = sqrt(x) * sqrt(x);
        for (int k = 0; k <= 6; ++k) {
            EXPECT_NEAR(lhs[k], rhs[k], 1e-10);
            EXPECT_NEAR(ls[k], x[k], 1e-12);
            EXPECT_NEAR(sq[k], x[k], 1e-12);
        }
    }
}

TEST(TotalDerivative, CoordinateTimeAndChainRule) {
    const JetPoint p = jet1(0.3, {3.0, 2.0, 5.0});
    const ScalarJetField q0 = ScalarJetField::from([](const auto& a) { return a.q(0, 0); }, 0);
    const ScalarJetField t = ScalarJetField::from([](const auto& a) { return a.t; }, 0);
    const ScalarJetField sq = ScalarJetField::from([](const auto& a) { return a.q(0, 0) * a.q(0, 0); }, 0);
    EXPECT_DOUBLE_EQ(total_derivative(q0, p, {}), 2.0);
    EXPECT_DOUBLE_EQ(total_derivative(t, p, {}), 1.0);
    EXPECT_NEAR(total_derivative(sq, p, {}), 12.0, 1e-9);
}

TEST(TotalDerivative, IteratedMatchesClosedFormOnPolynomialCurve) {
    // q(t) = t^3 so q_(beta) is known; f = q * t, D^k f = d^k/dt^k (t^4).
    const double t0 = 1.3;
    const JetPoint p = jet1(t0, {std::pow(t0, 3), 3 * t0 * t0, 6 * t0, 6.0, 0.0, 0.0});
    const FieldFn f = make_field_fn([](const auto& a) { return a.q(0, 0) * a.t; });
    const std::vector<double> d = iterated_total_derivatives(f, 0, p, {}, 4);
    const double expected[] = {std::pow(t0, 4), 4 * std::pow(t0, 3), 12 * t0 * t0, 24 * t0, 24.0};
    for (int k = 0; k <= 4; ++k) EXPECT_NEAR(d[k], expected[k], 1e-11) << k;
}

TEST(FiniteDiff, LinearQuadraticAndSine) {
    const JetPoint p = jet1(0.0, {1.0, 0.0});
    const ScalarJetField lin = ScalarJetField::from([](const auto& a) { return a.q(0, 0); }, 0);
    const ScalarJetField quad = ScalarJetField::from([](const auto& a) { return a.q(0, 0) * a.q(0, 0); }, 0);
    const ScalarJetField sn = ScalarJetField::from(
        [](const auto& a) {
            using std::sin;
            return sin(a.q(0, 0));
        },
        0);
    EXPECT_NEAR(finite_diff_partial(lin, p, {}, Coord::q(0, 0), 0.3), 1.0, 1e-14);
    EXPECT_NEAR(finite_diff_partial(quad, p, {}, Coord::q(0, 0), 1e-5), 2.0, 1e-9);
    const JetPoint z = jet1(0.0, {0.0, 0.0});
    EXPECT_NEAR(finite_diff_partial(sn, z, {}, Coord::q(0, 0), 1e-5), 1.0, 1e-10);
}

TEST(TotalDerivative, CoordinateFunctionsShiftExactlyOnRandomJets) {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 30; ++trial) {
        JetPoint p = JetPoint::zero(g(rng), 2, 4);
        for (auto& b : p.blocks) {
            for (double& v : b) v = g(rng);
        }
        for (int beta = 0; beta < 4; ++beta) {
            for (int i = 0; i < 2; ++i) {
                const ScalarJetField f = ScalarJetField::from([i, beta](const auto& a) { return a.q(i, beta); }, beta);
                EXPECT_NEAR(total_derivative(f, p, {}), p.q(i, beta + 1), 1e-12);
            }
        }
    }
}

TEST(ActualOrder, AuditDetectsHiddenDependence) {
    std::mt19937_64 rng(3);
    const JetPoint p = jet1(0.0, {1.0, 2.0, 3.0});
    const ScalarJetField honest = ScalarJetField::from([](const auto& a) { return a.q(0, 1); }, 1);
    const ScalarJetField liar = ScalarJetField::from([](const auto& a) { return a.q(0, 2); }, 1);
    EXPECT_TRUE(audit_actual_order(honest, p, {}, rng));
    EXPECT_FALSE(audit_actual_order(liar, p, {}, rng));
}

}  // namespace
}  // namespace gpmp
