// SPDX-License-Identifier: MIT
#include "gpmp/examples.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gpmp/errors.hpp"

namespace gpmp {

namespace {

bool is_linear_family(const std::string& id) {
    return id == "pendulum-r2" || id == "mth-order" || id == "third-order";
}

/// Coefficients a_0..a_m and control gain of sum_l a_l x^(l) = gain u.
std::pair<Vec, double> linear_coefficients(const BuiltinParams& p) {
    if (p.id == "pendulum-r2") return {{1.0, 0.0, 1.0}, 1.0};
    if (p.id == "third-order") {
        if (p.f_coeffs.size() != 3) throw Error(ErrorCode::BadParams, "third-order needs three coefficients c0, c1, c2");
        return {{-p.f_coeffs[0], -p.f_coeffs[1], -p.f_coeffs[2], 1.0}, p.f_gain};
    }
    if (p.a.size() < 2) throw Error(ErrorCode::BadParams, "mth-order needs coefficients a_0..a_m with m >= 1");
    if (p.a.back() == 0.0) throw Error(ErrorCode::BadParams, "mth-order leading coefficient must be nonzero");
    return {p.a, 1.0};
}

Vec adjoint_initial(const Vec& a, double T, Tolerances tol) {
    const BangBangResult bb = mth_order_bang_bang(a, T, tol.rtol);
    return bb.adjoint.state(0.0);
}

void check_common(const BuiltinParams& p) {
    if (!(p.T > 0.0) || !std::isfinite(p.T)) throw Error(ErrorCode::BadParams, "horizon must be positive");
    if (!(p.v_max >= 0.0)) throw Error(ErrorCode::BadParams, "v_max must be non-negative");
    if (!(p.tol.rtol > 0.0) || !(p.tol.atol > 0.0)) throw Error(ErrorCode::BadParams, "tolerances must be positive");
}

ScalarJetField gated_position_cost(double T) {
    ScalarJetField C = ScalarJetField::from([T](const auto& a) { return -(a.t / T) * a.q(0, 0); }, 0);
    C.with_partial(Coord::q(0, 0), make_field_fn([T](const auto& a) { return -(a.t / T); }));
    return C;
}

DefiningTriple build_linear(const BuiltinParams& p) {
    const auto [a, gain] = linear_coefficients(p);
    const int m = static_cast<int>(a.size()) - 1;
    DefiningTriple tr;
    tr.name = p.id;
    tr.controls = ControlSet{{-1.0}, {1.0}, 0.0};
    tr.T = p.T;
    tr.n = 2 * m + 1;
    tr.tol = p.tol;

    ScalarJetField L = ScalarJetField::from(
        [a, m, gain](const auto& s) {
            auto acc = s.q(0, 0) * a[0];
            for (int l = 1; l <= m; ++l) acc = acc + a[l] * s.q(0, l);
            return s.q(1, 0) * (acc - gain * s.u[0]);
        },
        m);
    for (int l = 0; l <= m; ++l) {
        const double al = a[l];
        L.with_partial(Coord::q(0, l), make_field_fn([al](const auto& s) { return al * s.q(1, 0); }));
    }
    L.with_partial(Coord::q(1, 0), make_field_fn([a, m, gain](const auto& s) {
                       auto acc = s.q(0, 0) * a[0];
                       for (int l = 1; l <= m; ++l) acc = acc + a[l] * s.q(0, l);
                       return acc - gain * s.u[0];
                   }));
    for (int beta = 1; beta <= m; ++beta) {
        L.with_partial(Coord::q(1, beta), make_field_fn([](const auto& s) { return s.t * 0.0; }));
    }
    L.with_partial(Coord::time(), make_field_fn([](const auto& s) { return s.t * 0.0; }));
    L.with_partial(Coord::u(0), make_field_fn([gain](const auto& s) { return -gain * s.q(1, 0); }));
    tr.lagrangian = {L, m, 2};

    tr.cost = {gated_position_cost(p.T), 0};

    tr.dynamics = reduce_to_first_order(
        [a, m, gain](const auto& t, const auto& blocks, const auto& u) {
            using S = std::decay_t<decltype(t)>;
            S x = u[0] * gain + t * 0.0;
            S q = t * 0.0;
            for (int l = 0; l < m; ++l) {
                x = x - a[l] * blocks[l][0];
                q = q - ((l + m) % 2 == 0 ? 1.0 : -1.0) * a[l] * blocks[l][1];
            }
            return std::vector<S>{x / a[m], q / a[m]};
        },
        m, 2);

    const double vmax = p.v_max;
    tr.initial.admissible = [m, vmax](const Vec& s) {
        if (static_cast<int>(s.size()) != 2 * m) return false;
        if (s[0] != 0.0) return false;
        if (m >= 2 && std::abs(s[1]) > vmax * (1.0 + 1e-12)) return false;
        for (int beta = 2; beta < m; ++beta) {
            if (s[beta] != 0.0) return false;
        }
        return true;
    };
    const Vec adj = p.transversal_default ? adjoint_initial(a, p.T, p.tol) : Vec(m, 0.0);
    Vec sigma(2 * m, 0.0);
    if (m >= 2) sigma[1] = vmax;
    for (int beta = 0; beta < m; ++beta) sigma[m + beta] = adj[beta];
    tr.initial.default_state = sigma;
    tr.initial.probe_lower = sigma;
    tr.initial.probe_upper = sigma;
    if (m >= 2) {
        tr.initial.probe_lower[1] = -vmax;
        tr.initial.probe_upper[1] = vmax;
    }
    for (int beta = 0; beta < m; ++beta) {
        tr.initial.free_states.push_back(m + beta);
        tr.initial.probe_lower[m + beta] -= 1.0;
        tr.initial.probe_upper[m + beta] += 1.0;
    }
    tr.adjoint_coords = {1};
    tr.coord_names = {"x", "p"};
    return tr;
}

DefiningTriple build_direct(const BuiltinParams& p) {
    if (std::abs(std::sin(p.T)) < 1e-6) {
        throw Error(ErrorCode::BadParams, "pendulum-direct needs a horizon that is not a multiple of pi");
    }
    DefiningTriple tr;
    tr.name = p.id;
    tr.controls = ControlSet{{-1.0}, {1.0}, 0.0};
    tr.T = p.T;
    tr.n = 3;
    tr.tol = p.tol;
    ScalarJetField L = ScalarJetField::from(
        [](const auto& s) {
            return 0.5 * s.q(0, 1) * s.q(0, 1) - 0.5 * s.q(0, 0) * s.q(0, 0) + s.u[0] * s.q(0, 0);
        },
        1);
    L.with_partial(Coord::q(0, 1), make_field_fn([](const auto& s) { return s.q(0, 1) + s.t * 0.0; }));
    L.with_partial(Coord::q(0, 0), make_field_fn([](const auto& s) { return s.u[0] - s.q(0, 0); }));
    L.with_partial(Coord::time(), make_field_fn([](const auto& s) { return s.t * 0.0; }));
    L.with_partial(Coord::u(0), make_field_fn([](const auto& s) { return s.q(0, 0) + s.t * 0.0; }));
    tr.lagrangian = {L, 1, 1};
    tr.cost = {gated_position_cost(p.T), 0};
    tr.dynamics = reduce_to_first_order(
        [](const auto&, const auto& blocks, const auto& u) {
            return std::vector<std::decay_t<decltype(u[0])>>{u[0] - blocks[0][0]};
        },
        2, 1);
    const double vmax = p.v_max;
    tr.initial.admissible = [vmax](const Vec& s) {
        return s.size() == 2 && s[0] == 0.0 && std::abs(s[1]) <= vmax * (1.0 + 1e-12);
    };
    tr.initial.default_state = {0.0, vmax};
    tr.initial.probe_lower = {0.0, -vmax};
    tr.initial.probe_upper = {0.0, vmax};
    tr.coord_names = {"x"};
    return tr;
}

int linear_order(const BuiltinParams& p) { return static_cast<int>(linear_coefficients(p).first.size()) - 1; }

Vec default_adjoint(const BuiltinParams& p) {
    if (is_linear_family(p.id)) {
        const auto [a, gain] = linear_coefficients(p);
        return p.transversal_default ? adjoint_initial(a, p.T, p.tol) : Vec(a.size() - 1, 0.0);
    }
    if (p.id == "pendulum-classical") {
        const DefiningTriple tr = build(p);
        return Vec(tr.initial.default_state.begin() + 2, tr.initial.default_state.end());
    }
    return {};
}

}  // namespace

std::vector<std::string> builtin_ids() {
    return {"pendulum-classical", "pendulum-r2", "pendulum-direct", "mth-order", "third-order"};
}

ClassicalProblem pendulum_classical_problem(double T, double v_max, Tolerances tol) {
    ClassicalProblem cp;
    cp.name = "pendulum-classical";
    cp.nx = 2;
    cp.f = make_vec_fn([](const auto&, const auto& x, const auto& u, auto& dx) {
        dx[0] = x[1];
        dx[1] = u[0] - x[0];
    });
    cp.jacobian = make_vec_fn([](const auto& t, const auto&, const auto&, auto& J) {
        J[0] = t * 0.0;
        J[1] = t * 0.0 + 1.0;
        J[2] = t * 0.0 - 1.0;
        J[3] = t * 0.0;
    });
    cp.cost = make_state_scalar_fn([](const auto& x) { return -1.0 * x[0]; });
    cp.x0 = {0.0, v_max};
    cp.K = ControlSet{{-1.0}, {1.0}, 0.0};
    cp.T = T;
    cp.tol = tol;
    return cp;
}

DefiningTriple build(const BuiltinParams& params) {
    check_common(params);
    if (is_linear_family(params.id)) return build_linear(params);
    if (params.id == "pendulum-direct") return build_direct(params);
    if (params.id == "pendulum-classical") {
        return embed_classical(pendulum_classical_problem(params.T, params.v_max, params.tol));
    }
    throw Error(ErrorCode::BadParams, "unknown builtin problem '" + params.id + "'");
}

ClassicalProblem chain_reduction(const BuiltinParams& params) {
    check_common(params);
    if (!is_linear_family(params.id)) return pendulum_classical_problem(params.T, params.v_max, params.tol);
    const auto [a, gain] = linear_coefficients(params);
    Vec x0(a.size() - 1, 0.0);
    if (x0.size() >= 2) x0[1] = params.v_max;
    ClassicalProblem cp = linear_chain_problem(a, gain, params.T, x0, params.tol);
    cp.name = params.id + "-chain";
    return cp;
}

Vec make_initial_state(const BuiltinParams& params, double v, const Vec& adjoint) {
    if (params.id == "pendulum-direct") return {0.0, v};
    const Vec adj = adjoint.empty() ? default_adjoint(params) : adjoint;
    if (params.id == "pendulum-classical") return {0.0, v, adj.at(0), adj.at(1)};
    const int m = linear_order(params);
    if (static_cast<int>(adj.size()) != m) throw Error(ErrorCode::BadParams, "adjoint data has the wrong size");
    Vec s(2 * m, 0.0);
    if (m >= 2) s[1] = v;
    for (int beta = 0; beta < m; ++beta) s[m + beta] = adj[beta];
    return s;
}

OptimalReference optimal_reference(const BuiltinParams& params) {
    check_common(params);
    const double T = params.T, vmax = params.v_max;
    OptimalReference ref;
    if (params.id == "pendulum-r2" || params.id == "pendulum-classical" || params.id == "pendulum-direct") {
        if (T >= std::numbers::pi) throw Error(ErrorCode::NoClosedForm, "pendulum optimum is tabulated for T < pi only");
        ref.u = ControlCurve::constant({1.0}, T);
        ref.sigma = make_initial_state(params, vmax);
        ref.cost = -(vmax * std::sin(T) + 1.0 - std::cos(T));
        return ref;
    }
    if (params.id == "third-order") {
        const bool plain = std::all_of(params.f_coeffs.begin(), params.f_coeffs.end(), [](double c) { return c == 0.0; });
        if (!plain || params.f_gain <= 0.0) throw Error(ErrorCode::NoClosedForm, "no closed form for general third-order f");
        ref.u = ControlCurve::constant({1.0}, T);
        ref.sigma = make_initial_state(params, vmax);
        ref.cost = -(vmax * T + params.f_gain * T * T * T / 6.0);
        return ref;
    }
    if (params.id == "mth-order") {
        const Vec& a = params.a;
        if (a.size() != 2 || a[0] != 0.0 || a[1] <= 0.0) {
            throw Error(ErrorCode::NoClosedForm, "closed form only for a_1 x' = u");
        }
        ref.u = ControlCurve::constant({1.0}, T);
        ref.sigma = make_initial_state(params, 0.0);
        ref.cost = -T / a[1];
        return ref;
    }
    throw Error(ErrorCode::BadParams, "unknown builtin problem '" + params.id + "'");
}

VelocityOptimum optimize_initial_velocity(const BuiltinParams& params, const ControlCurve& u, int scan) {
    const DefiningTriple tr = build(params);
    const Vec adj = default_adjoint(params);
    const double vmax = params.v_max;
    auto cost = [&](double v) {
        const Trajectory traj = solve(tr, u, make_initial_state(params, v, adj));
        return cost_at(tr, traj, tr.T);
    };
    if (vmax == 0.0 || scan < 2) return {0.0, cost(0.0)};
    std::vector<double> vs(scan), cs(scan);
    for (int k = 0; k < scan; ++k) {
        vs[k] = -vmax + 2.0 * vmax * k / (scan - 1);
        cs[k] = cost(vs[k]);
    }
    const int best = static_cast<int>(std::min_element(cs.begin(), cs.end()) - cs.begin());
    VelocityOptimum out{vs[best], cs[best]};
    double lo = vs[std::max(best - 1, 0)], hi = vs[std::min(best + 1, scan - 1)];
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
    double f1 = cost(x1), f2 = cost(x2);
    while (hi - lo > 1e-10 * (1.0 + vmax)) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = cost(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = cost(x2);
        }
    }
    const double vmid = 0.5 * (lo + hi);
    for (double v : {vmid, -vmax, vmax}) {
        const double c = cost(v);
        if (c < out.cost) out = {v, c};
    }
    return out;
}

}  // namespace gpmp
