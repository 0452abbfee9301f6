// SPDX-License-Identifier: MIT
#include "gpmp/homotopy.hpp"

#include <algorithm>
#include <cmath>

#include "gpmp/errors.hpp"
#include "gpmp/quadrature.hpp"

namespace gpmp {

std::vector<double> unit_grid(int intervals) {
    if (intervals < 2) throw Error(ErrorCode::BadParams, "s-grid needs at least two intervals");
    std::vector<double> s(intervals + 1);
    for (int k = 0; k <= intervals; ++k) s[k] = static_cast<double>(k) / intervals;
    return s;
}

ControlHomotopy ControlHomotopy::blend(const ControlCurve& u0, const ControlCurve& u1, Vec sigma, int s_intervals) {
    ControlHomotopy h;
    h.T = u0.horizon();
    h.s_grid = unit_grid(s_intervals);
    h.u = [u0, u1](double s) {
        if (s == 0.0) return u0;
        if (s == 1.0) return u1;
        return ControlCurve::blend(u0, u1, s);
    };
    h.sigma = [sigma = std::move(sigma)](double, const ControlCurve&) { return sigma; };
    return h;
}

VariationSurface build_surface(const DefiningTriple& triple, const ControlHomotopy& hom, bool extended) {
    const auto& s = hom.s_grid;
    if (s.size() < 3 || s.front() != 0.0 || s.back() != 1.0 || !std::is_sorted(s.begin(), s.end()) ||
        std::adjacent_find(s.begin(), s.end()) != s.end()) {
        throw Error(ErrorCode::BadParams, "s-grid must increase strictly from 0 to 1 with at least three nodes");
    }
    VariationSurface out;
    out.triple_ = std::make_shared<const DefiningTriple>(triple);
    out.hom_ = hom;
    out.extended_ = extended;
    for (double sk : s) {
        Slice sl;
        sl.s = sk;
        sl.u = hom.u(sk);
        sl.sigma = hom.sigma(sk, sl.u);
        sl.traj = solve(triple, sl.u, sl.sigma);
        if (extended) sl.ext = ExtendedCurve::build(triple, sl.traj);
        out.slices_.push_back(std::move(sl));
    }
    return out;
}

std::vector<double> VariationSurface::breakpoints() const {
    std::vector<double> b;
    for (const Slice& sl : slices_) {
        const auto more = sl.u.breakpoints();
        b.insert(b.end(), more.begin(), more.end());
    }
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
    return b;
}

Vec VariationSurface::jacobi_u(double t, int k, Side side) const {
    Vec y(triple_->controls.dim(), 0.0);
    for (const auto& [idx, w] : derivative_weights(s_grid(), k)) {
        const Vec u = slices_[idx].u.value(t, side);
        for (std::size_t a = 0; a < y.size(); ++a) y[a] += w * u[a];
    }
    return y;
}

std::vector<Vec> VariationSurface::jacobi_q(double t, int k, int order, Side side) const {
    std::vector<Vec> y(order + 1, Vec(triple_->N(), 0.0));
    for (const auto& [idx, w] : derivative_weights(s_grid(), k)) {
        const JetPoint jet = jet_of_trajectory(slices_[idx].traj, t, order, side);
        for (int beta = 0; beta <= order; ++beta) {
            for (int i = 0; i < triple_->N(); ++i) y[beta][i] += w * jet.q(i, beta);
        }
    }
    return y;
}

double homotopy_lhs(const VariationSurface& surface) {
    const auto& sl = surface.slices();
    const double T = surface.triple().T;
    return cost_at(surface.triple(), sl.back().traj, T) - cost_at(surface.triple(), sl.front().traj, T);
}

double HomotopyTable::slice_integral(int k) const {
    double acc = 0.0;
    for (std::size_t j = 0; j < t.size(); ++j) acc += t_weights[j] * (control[k][j] - mixed[k][j]);
    return acc;
}

double HomotopyTable::mixed_integral(int k) const {
    double acc = 0.0;
    for (std::size_t j = 0; j < t.size(); ++j) acc += t_weights[j] * mixed[k][j];
    return acc;
}

HomotopyTable tabulate_homotopy(const VariationSurface& surface, BetaRange range, int t_intervals) {
    if (!surface.extended()) throw Error(ErrorCode::BadParams, "homotopy table needs an extended surface");
    const DefiningTriple& tr = surface.triple();
    const auto& slices = surface.slices();
    const int K = static_cast<int>(slices.size());
    const int r = tr.r(), N = tr.N(), dimu = tr.controls.dim();
    const double T = tr.T;

    HomotopyTable tab;
    tab.range = range;
    tab.s = surface.s_grid();
    for (const Panel& p : make_panels(T, surface.breakpoints(), t_intervals)) {
        tab.panel_start.push_back(static_cast<int>(tab.t.size()));
        const std::vector<double> w = simpson_weights(p.a, p.b, p.intervals);
        for (int i = 0; i <= p.intervals; ++i) {
            tab.t.push_back(i == p.intervals ? p.b : p.a + (p.b - p.a) * i / p.intervals);
            tab.side.push_back(i == p.intervals ? Side::Left : Side::Right);
            tab.t_weights.push_back(w[i]);
        }
    }
    const std::size_t J = tab.t.size();

    std::vector<std::vector<std::pair<int, double>>> dw(K);
    for (int k = 0; k < K; ++k) dw[k] = derivative_weights(tab.s, k);

    const int nh = N * r;
    const int first = beta_start(range) * N;
    // s-derivatives of the h' and h'' coefficients per slice.
    std::vector<std::vector<std::array<double, 4>>> dcp(K, std::vector<std::array<double, 4>>(nh)),
        dcpp(K, std::vector<std::array<double, 4>>(nh));
    for (int k = 0; k < K; ++k) {
        for (int idx = 0; idx < nh; ++idx) {
            dcp[k][idx].fill(0.0);
            dcpp[k][idx].fill(0.0);
            for (const auto& [kk, w] : dw[k]) {
                const HCoefficients& c = slices[kk].ext->h();
                for (int j4 = 0; j4 < 4; ++j4) {
                    dcp[k][idx][j4] += w * c.hp[idx][j4];
                    dcpp[k][idx][j4] += w * c.hpp[idx][j4];
                }
            }
        }
    }

    tab.control.assign(K, std::vector<double>(J));
    tab.mixed.assign(K, std::vector<double>(J));
    std::vector<double> ltilde(K);
    std::vector<Vec> uval(K), lu(K);
    for (std::size_t j = 0; j < J; ++j) {
        const double t = tab.t[j];
        const Side side = tab.side[j];
        double basis[5][4];
        for (int d = 0; d < 5; ++d) {
            for (int j4 = 0; j4 < 4; ++j4) basis[d][j4] = quartic_basis(T, j4, t, d);
        }
        for (int k = 0; k < K; ++k) {
            const JetPoint jet = jet_of_trajectory(slices[k].traj, t, r, side);
            uval[k] = slices[k].u.value(t, side);
            const JetArgs<double> args = make_args(jet, uval[k]);
            lu[k].assign(dimu, 0.0);
            for (int a = 0; a < dimu; ++a) lu[k][a] = tr.lagrangian.field.partial(Coord::u(a)).d(args);
            ltilde[k] = tr.lagrangian.field.eval(args) + ltilde_correction(slices[k].ext->h(), t);
        }
        for (int k = 0; k < K; ++k) {
            double ctrl = 0.0, dlt = 0.0;
            for (int a = 0; a < dimu; ++a) {
                double ya = 0.0;
                for (const auto& [kk, w] : dw[k]) ya += w * uval[kk][a];
                ctrl -= ya * lu[k][a];
            }
            for (const auto& [kk, w] : dw[k]) dlt += w * ltilde[kk];
            double m = -dlt;
            const HCoefficients& c = slices[k].ext->h();
            for (int idx = first; idx < nh; ++idx) {
                double p3 = 0, p4 = 0, q3 = 0, q4 = 0, y0 = 0, y1 = 0, z0 = 0, z1 = 0;
                for (int j4 = 0; j4 < 4; ++j4) {
                    p3 += c.hp[idx][j4] * basis[3][j4];
                    p4 += c.hp[idx][j4] * basis[4][j4];
                    q3 += c.hpp[idx][j4] * basis[3][j4];
                    q4 += c.hpp[idx][j4] * basis[4][j4];
                    y0 += dcp[k][idx][j4] * basis[0][j4];
                    y1 += dcp[k][idx][j4] * basis[1][j4];
                    z0 += dcpp[k][idx][j4] * basis[0][j4];
                    z1 += dcpp[k][idx][j4] * basis[1][j4];
                }
                m += p4 * y0 + p3 * y1 + q4 * z0 + q3 * z1;
            }
            tab.control[k][j] = ctrl;
            tab.mixed[k][j] = m;
        }
    }
    return tab;
}

double minimal_labour_W(const HomotopyTable& table, double delta) {
    std::vector<double> inner(table.s.size());
    for (std::size_t k = 0; k < inner.size(); ++k) inner[k] = table.slice_integral(static_cast<int>(k));
    return quadratic_integral_to(table.s, inner, delta);
}

double homotopy_rhs(const HomotopyTable& table) { return -minimal_labour_W(table, table.s.back()); }

double homotopy_rhs(const VariationSurface& surface, BetaRange range, int t_intervals) {
    return homotopy_rhs(tabulate_homotopy(surface, range, t_intervals));
}

double delta_mu_prime_direct(const HomotopyTable& table) {
    std::vector<double> inner(table.s.size());
    for (std::size_t k = 0; k < inner.size(); ++k) inner[k] = table.mixed_integral(static_cast<int>(k));
    return cumulative_quadratic(table.s, inner).back();
}

InfinitesimalConditions infinitesimal_conditions(const VariationSurface& surface, const HomotopyTable& table) {
    const DefiningTriple& tr = surface.triple();
    const int top = std::min(tr.cost.order, tr.r() - 1);
    const double T = tr.T;
    const std::vector<Vec> Y = surface.jacobi_q(T, 0, top, Side::Left);
    const JetPoint jet = jet_of_trajectory(surface.slices().front().traj, T, top, Side::Left);
    const JetArgs<double> args = make_args(jet, ControlValue(tr.controls.dim(), 0.0));
    InfinitesimalConditions out;
    for (int beta = 0; beta <= top; ++beta) {
        for (int i = 0; i < tr.N(); ++i) out.cost_pairing += tr.cost.field.partial(Coord::q(i, beta)).d(args) * Y[beta][i];
    }
    out.labour_rate = table.slice_integral(0);
    return out;
}

double vertical_pairing(const VariationSurface& surface, double t, int k, Side side) {
    if (!surface.extended()) throw Error(ErrorCode::BadParams, "vertical pairing needs an extended surface");
    const DefiningTriple& tr = surface.triple();
    const int r = tr.r();
    const auto& slices = surface.slices();
    const ExtendedPoint p = extended_point(tr, *slices[k].ext, t, side);
    ExtendedTangent v;
    v.dt = 0.0;
    v.dq.assign(r, Vec(tr.N(), 0.0));
    const std::size_t nh = p.hd[0].h.size();
    for (auto& x : v.dh) x.assign(nh, 0.0);
    for (auto& x : v.dhp) x.assign(nh, 0.0);
    for (auto& x : v.dhpp) x.assign(nh, 0.0);
    for (const auto& [kk, w] : derivative_weights(surface.s_grid(), k)) {
        const ExtendedPoint q = kk == k ? p : extended_point(tr, *slices[kk].ext, t, side);
        for (int beta = 0; beta < r; ++beta) {
            for (int i = 0; i < tr.N(); ++i) v.dq[beta][i] += w * q.jet.q(i, beta);
        }
        for (std::size_t idx = 0; idx < nh; ++idx) {
            for (int d = 0; d < 2; ++d) v.dh[d][idx] += w * q.hd[d].h[idx];
            for (int d = 0; d < 4; ++d) {
                v.dhp[d][idx] += w * q.hd[d].hp[idx];
                v.dhpp[d][idx] += w * q.hd[d].hpp[idx];
            }
        }
        v.dmu += w * q.mu;
    }
    v.du = surface.jacobi_u(t, k, side);
    return pc_form_pairing(tr, p, v);
}

double noether_gap(const VariationSurface& surface, const HomotopyTable& table, int k) {
    const double T = surface.triple().T;
    return vertical_pairing(surface, T, k, Side::Left) - vertical_pairing(surface, 0.0, k, Side::Right) -
           table.mixed_integral(k);
}

std::vector<MuPrimeSample> mu_prime_grid(const VariationSurface& surface, const HomotopyTable& table) {
    const std::size_t K = table.s.size(), J = table.t.size();
    std::vector<std::vector<double>> cum(K, std::vector<double>(J, 0.0));
    for (std::size_t k = 0; k < K; ++k) {
        double offset = 0.0;
        for (std::size_t p = 0; p < table.panel_start.size(); ++p) {
            const std::size_t a = table.panel_start[p];
            const std::size_t b = p + 1 < table.panel_start.size() ? table.panel_start[p + 1] : J;
            const std::vector<double> x(table.t.begin() + a, table.t.begin() + b);
            const std::vector<double> f(table.mixed[k].begin() + a, table.mixed[k].begin() + b);
            const std::vector<double> c = cumulative_quadratic(x, f);
            for (std::size_t j = a; j < b; ++j) cum[k][j] = offset + c[j - a];
            offset = cum[k][b - 1];
        }
    }
    const ExtendedCurve& base = *surface.slices().front().ext;
    std::vector<MuPrimeSample> out;
    out.reserve(K * J);
    for (std::size_t j = 0; j < J; ++j) {
        std::vector<double> col(K);
        for (std::size_t k = 0; k < K; ++k) col[k] = cum[k][j];
        const std::vector<double> acc = cumulative_quadratic(table.s, col);
        const double mu0 = base.mu(table.t[j]);
        for (std::size_t k = 0; k < K; ++k) out.push_back({table.t[j], table.s[k], mu0 + acc[k]});
    }
    return out;
}

BetaRangeVerdict adjudicate_beta_range(const VariationSurface& surface, int t_intervals) {
    BetaRangeVerdict v;
    v.lhs = homotopy_lhs(surface);
    v.gap_full = std::abs(v.lhs - homotopy_rhs(surface, BetaRange::Full, t_intervals));
    v.gap_from_one = std::abs(v.lhs - homotopy_rhs(surface, BetaRange::FromOne, t_intervals));
    v.chosen = v.gap_full <= v.gap_from_one ? BetaRange::Full : BetaRange::FromOne;
    return v;
}

}  // namespace gpmp
