// SPDX-License-Identifier: MIT
#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "gpmp/examples.hpp"
#include "gpmp/homotopy.hpp"

namespace gpmp {
namespace {

constexpr double kPi = std::numbers::pi;

DefiningTriple pendulum() { return build(BuiltinParams{}); }

ControlCurve constant(const DefiningTriple& tr, double v) { return ControlCurve::constant({v}, tr.T); }

TEST(Surface, ConstantHomotopyIsTrivial) {
    const DefiningTriple tr = pendulum();
    const ControlHomotopy hom = ControlHomotopy::blend(constant(tr, 0.5), constant(tr, 0.5), tr.initial.default_state, 4);
    const VariationSurface S = build_surface(tr, hom);
    for (int k = 0; k <= 4; ++k) {
        for (double t : {0.3, 1.1}) {
            const auto Y = S.jacobi_q(t, k, 2);
            for (const auto& b : Y) {
                for (double y : b) EXPECT_NEAR(y, 0.0, 1e-12);
            }
        }
    }
    const HomotopyTable tab = tabulate_homotopy(S, BetaRange::Full, 100);
    EXPECT_EQ(homotopy_lhs(S), 0.0);
    EXPECT_NEAR(homotopy_rhs(tab), 0.0, 1e-12);
    const InfinitesimalConditions ic = infinitesimal_conditions(S, tab);
    EXPECT_NEAR(ic.cost_pairing, 0.0, 1e-12);
    EXPECT_NEAR(ic.labour_rate, 0.0, 1e-12);
}

TEST(Surface, ControlPathSlicesAreScaledParticularSolutions) {
    const DefiningTriple tr = pendulum();
    const Vec zero(4, 0.0);
    const VariationSurface S = build_surface(tr, ControlHomotopy::blend(constant(tr, 0.0), constant(tr, 1.0), zero, 8));
    for (int k = 0; k <= 8; ++k) {
        const double s = S.s_grid()[k];
        for (double t : {0.4, 1.0, tr.T}) EXPECT_NEAR(S.slices()[k].traj.state(t)[0], s * (1.0 - std::cos(t)), 1e-8);
    }
    EXPECT_NEAR(homotopy_lhs(S), -1.0, 1e-8);
    const HomotopyTable tab = tabulate_homotopy(S, BetaRange::Full, 400);
    EXPECT_NEAR(homotopy_rhs(tab), -1.0, 1e-3 * 2.0);
    EXPECT_NEAR(minimal_labour_W(tab, 0.0), 0.0, 1e-15);
    EXPECT_NEAR(minimal_labour_W(tab, 1.0), -homotopy_rhs(tab), 1e-12);
}

TEST(Surface, InitialDataPath) {
    const DefiningTriple tr = pendulum();
    ControlHomotopy hom;
    hom.T = tr.T;
    hom.s_grid = unit_grid(8);
    hom.u = [&](double) { return constant(tr, 0.0); };
    hom.sigma = [](double s, const ControlCurve&) { return Vec{0.0, s, 0.0, 0.0}; };
    const VariationSurface S = build_surface(tr, hom);
    for (int k = 0; k <= 8; ++k) {
        const double s = S.s_grid()[k];
        EXPECT_NEAR(S.slices()[k].traj.state(1.0)[0], s * std::sin(1.0), 1e-8);
    }
    EXPECT_NEAR(homotopy_lhs(S), -1.0, 1e-8);
    EXPECT_NEAR(homotopy_rhs(S, BetaRange::Full, 400), -1.0, 2e-3);
}

TEST(Identity, HoldsOnEveryBuiltinAndRefines) {
    for (const auto& id : builtin_ids()) {
        BuiltinParams p;
        p.id = id;
        if (id == "mth-order") p.a = {0.5, 0.3, 1.0};
        const DefiningTriple tr = build(p);
        Vec sigma = tr.initial.default_state;
        for (int i : tr.initial.free_states) sigma[i] += 0.2;
        const VariationSurface S = build_surface(
            tr, ControlHomotopy::blend(constant(tr, -1.0), ControlCurve::piecewise_constant({0.5 * tr.T}, {{1.0}, {0.0}}, tr.T),
                                       sigma, 16));
        const double lhs = homotopy_lhs(S);
        const double coarse = std::abs(homotopy_rhs(S, BetaRange::Full, 4) - lhs);
        const double fine = std::abs(homotopy_rhs(S, BetaRange::Full, 200) - lhs);
        EXPECT_LE(fine, 1e-3 * (std::abs(lhs) + 1.0)) << id;
        EXPECT_LE(fine, coarse + 1e-12) << id;
    }
}

TEST(BetaRange, AdjudicationPicksFullRange) {
    const DefiningTriple tr = pendulum();
    const VariationSurface S =
        build_surface(tr, ControlHomotopy::blend(constant(tr, 0.0), constant(tr, 1.0), Vec(4, 0.0), 16));
    const BetaRangeVerdict v = adjudicate_beta_range(S, 200);
    EXPECT_EQ(v.chosen, BetaRange::Full);
    EXPECT_LT(std::abs(v.gap_full), 1e-6);
    EXPECT_GT(std::abs(v.gap_from_one), 1e-2);
}

TEST(BetaRange, ClassicalCorrectionVanishesOnlyWithoutTheZeroIndex) {
    BuiltinParams p;
    p.id = "pendulum-classical";
    const DefiningTriple tr = build(p);
    const VariationSurface S =
        build_surface(tr, ControlHomotopy::blend(constant(tr, 0.0), constant(tr, 1.0), tr.initial.default_state, 8));
    auto mu_gap = [&](BetaRange range) {
        const HomotopyTable tab = tabulate_homotopy(S, range, 100);
        double worst = 0.0;
        for (const auto& m : mu_prime_grid(S, tab)) {
            const int k = static_cast<int>(std::lround(m.s * 8));
            worst = std::max(worst, std::abs(m.value - S.slices()[k].ext->mu(m.t)));
        }
        return worst;
    };
    EXPECT_LT(mu_gap(BetaRange::FromOne), 1e-7);
    EXPECT_GT(mu_gap(BetaRange::Full), 1e-2);
}

TEST(MuPrime, StartsFromMuOnTheBaseSlice) {
    const DefiningTriple tr = pendulum();
    const VariationSurface S =
        build_surface(tr, ControlHomotopy::blend(constant(tr, 0.0), constant(tr, 1.0), Vec(4, 0.0), 4));
    const HomotopyTable tab = tabulate_homotopy(S, BetaRange::Full, 50);
    for (const auto& m : mu_prime_grid(S, tab)) {
        if (m.s == 0.0) EXPECT_NEAR(m.value, S.slices()[0].ext->mu(m.t), 1e-12);
    }
}

TEST(Noether, GapAndVerticalPairingVanish) {
    const DefiningTriple tr = pendulum();
    const VariationSurface S =
        build_surface(tr, ControlHomotopy::blend(constant(tr, -0.5), constant(tr, 1.0), tr.initial.default_state, 8));
    const HomotopyTable tab = tabulate_homotopy(S, BetaRange::Full, 200);
    for (int k : {0, 4, 8}) {
        EXPECT_LT(std::abs(noether_gap(S, tab, k)), 1e-7);
        EXPECT_LT(std::abs(vertical_pairing(S, 0.0, k)), 1e-8);
    }
}

TEST(MinimalLabour, OptimalCurveNeverGains) {
    BuiltinParams p;
    const DefiningTriple tr = build(p);
    const OptimalReference ref = optimal_reference(p);
    for (double target : {-1.0, 0.0, 0.5}) {
        const VariationSurface S =
            build_surface(tr, ControlHomotopy::blend(ref.u, constant(tr, target), ref.sigma, 8));
        const HomotopyTable tab = tabulate_homotopy(S, BetaRange::Full, 200);
        for (double d : {0.25, 0.5, 1.0}) EXPECT_LE(minimal_labour_W(tab, d), 1e-8) << target << " " << d;
    }
}

TEST(Infinitesimal, SignsAtOptimalAndNonOptimalCurves) {
    BuiltinParams p;
    const DefiningTriple tr = build(p);
    const OptimalReference ref = optimal_reference(p);
    // Lowering x'(0) from v_max: dC = -sin(T) dv/ds >= 0.
    ControlHomotopy hom;
    hom.T = tr.T;
    hom.s_grid = unit_grid(8);
    hom.u = [&](double) { return ref.u; };
    hom.sigma = [&](double s, const ControlCurve&) {
        Vec v = ref.sigma;
        v[1] -= 0.5 * s;
        return v;
    };
    const VariationSurface S = build_surface(tr, hom);
    const InfinitesimalConditions ic = infinitesimal_conditions(S, tabulate_homotopy(S, BetaRange::Full, 200));
    EXPECT_NEAR(ic.cost_pairing, 0.5 * std::sin(tr.T), 1e-6);

    const VariationSurface bad = build_surface(
        tr, ControlHomotopy::blend(constant(tr, -1.0), constant(tr, 1.0), make_initial_state(p, 1.0), 8));
    const InfinitesimalConditions ib = infinitesimal_conditions(bad, tabulate_homotopy(bad, BetaRange::Full, 200));
    EXPECT_GT(ib.labour_rate, 0.0);
}

TEST(Surface, RejectsMalformedGrid) {
    const DefiningTriple tr = pendulum();
    ControlHomotopy hom = ControlHomotopy::blend(constant(tr, 0.0), constant(tr, 1.0), Vec(4, 0.0), 4);
    hom.s_grid = {0.0, 0.6, 0.5, 1.0};
    EXPECT_ANY_THROW(build_surface(tr, hom));
}

}  // namespace
}  // namespace gpmp
