// SPDX-License-Identifier: MIT
#include "gpmp/lipschitz.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "gpmp/errors.hpp"

namespace gpmp {

namespace {

double uniform(std::mt19937_64& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

ControlValue random_value(std::mt19937_64& rng, const ControlSet& K) {
    ControlValue u(K.lower.size());
    for (std::size_t a = 0; a < u.size(); ++a) u[a] = uniform(rng, K.lower[a], K.upper[a]);
    return u;
}

}  // namespace

LipschitzReport lipschitz_probe(const DefiningTriple& triple, int n_pairs, std::uint64_t seed, int t_grid) {
    if (n_pairs <= 0 || t_grid < 2) throw Error(ErrorCode::BadParams, "lipschitz probe needs positive pair and grid counts");
    const Vec& lo = triple.initial.probe_lower;
    const Vec& hi = triple.initial.probe_upper;
    const int n = triple.dynamics.state_dim;
    if (static_cast<int>(lo.size()) != n || static_cast<int>(hi.size()) != n) {
        throw Error(ErrorCode::BadParams, triple.name + " declares no probe box");
    }
    double scale = 1.0;
    for (int i = 0; i < n; ++i) scale = std::max({scale, std::abs(lo[i]), std::abs(hi[i])});

    DefiningTriple clamped = triple;
    LipschitzReport rep;
    rep.cutoff_radius = 10.0 * scale;
    clamped.dynamics = with_cutoff(triple.dynamics, Vec(n, 0.0), rep.cutoff_radius);

    const double T = triple.T;
    const int order = 2 * triple.r() - 1;
    std::mt19937_64 rng(seed);
    double sum = 0.0;
    for (int p = 0; p < n_pairs; ++p) {
        Vec s1(n), s2(n);
        for (int i = 0; i < n; ++i) s1[i] = uniform(rng, lo[i], hi[i]);
        const double shift = uniform(rng, 0.0, 0.2);
        for (int i = 0; i < n; ++i) s2[i] = std::clamp(s1[i] + shift * uniform(rng, lo[i] - hi[i], hi[i] - lo[i]), lo[i], hi[i]);
        const double width = std::min(uniform(rng, 0.01, 0.2), 0.5 * T);
        const double tau = uniform(rng, width, T);
        const ControlCurve u1 = ControlCurve::constant(random_value(rng, triple.controls), T);
        const ControlCurve u2 = ControlCurve::needle(u1, tau, random_value(rng, triple.controls), width);

        double rho = 0.0;
        for (int i = 0; i < n; ++i) rho += (s1[i] - s2[i]) * (s1[i] - s2[i]);
        const double denom = control_distance(u1, u2) + std::sqrt(rho);
        ++rep.pairs;
        if (!(denom > 0.0)) {
            ++rep.skipped;
            continue;
        }
        const Trajectory g1 = solve(clamped, u1, s1);
        const Trajectory g2 = solve(clamped, u2, s2);
        double sup = 0.0, sup_state = 0.0;
        for (int j = 0; j <= t_grid; ++j) {
            const double t = T * j / t_grid;
            const Vec y1 = g1.state(t), y2 = g2.state(t);
            for (int i = 0; i < n; ++i) sup_state = std::max(sup_state, std::abs(y1[i] - y2[i]));
            for (Side side : {Side::Left, Side::Right}) {
                if ((t == 0.0 && side == Side::Left) || (t == T && side == Side::Right)) continue;
                const JetPoint a = jet_of_trajectory(g1, t, order, side);
                const JetPoint b = jet_of_trajectory(g2, t, order, side);
                for (int beta = 0; beta <= order; ++beta) {
                    for (int i = 0; i < a.dim(); ++i) sup = std::max(sup, std::abs(a.q(i, beta) - b.q(i, beta)));
                }
            }
        }
        const double ratio = sup / denom;
        rep.ratios.push_back(ratio);
        rep.max_ratio = std::max(rep.max_ratio, ratio);
        rep.max_state_ratio = std::max(rep.max_state_ratio, sup_state / denom);
        sum += ratio;
    }
    if (!rep.ratios.empty()) rep.mean_ratio = sum / static_cast<double>(rep.ratios.size());
    return rep;
}

}  // namespace gpmp
