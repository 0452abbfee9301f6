// SPDX-License-Identifier: MIT
#include "gpmp/classical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <type_traits>

#include "gpmp/errors.hpp"

namespace gpmp {

namespace {

template <class T>
std::vector<T> eval_vec(const VecFn& f, const T& t, const std::vector<T>& x, const std::vector<T>& u, int out_dim) {
    std::vector<T> out(out_dim);
    if constexpr (std::is_same_v<T, double>) {
        f.d(t, x, u, out);
    } else {
        f.s(t, x, u, out);
    }
    return out;
}

template <class T>
T eval_cost(const StateScalarFn& c, const std::vector<T>& x) {
    if constexpr (std::is_same_v<T, double>) {
        return c.d(x);
    } else {
        return c.s(x);
    }
}

/// Row-major df/dx; central differences on the constant term when no
/// analytic Jacobian is available.
template <class T>
std::vector<T> eval_jacobian(const ClassicalProblem& cp, const T& t, const std::vector<T>& x, const std::vector<T>& u) {
    const int nx = cp.nx;
    if (cp.jacobian.d) return eval_vec(cp.jacobian, t, x, u, nx * nx);
    std::vector<T> J(nx * nx);
    for (int j = 0; j < nx; ++j) {
        const double h = fd_step(primal(x[j]));
        std::vector<T> xp = x, xm = x;
        xp[j] = xp[j] + h;
        xm[j] = xm[j] - h;
        const std::vector<T> fp = eval_vec(cp.f, t, xp, u, nx);
        const std::vector<T> fm = eval_vec(cp.f, t, xm, u, nx);
        for (int i = 0; i < nx; ++i) J[i * nx + j] = (fp[i] - fm[i]) / (2.0 * h);
    }
    return J;
}

Vec cost_gradient(const ClassicalProblem& cp, const Vec& x) {
    Vec g(cp.nx);
    for (int j = 0; j < cp.nx; ++j) {
        std::vector<Series> xs;
        for (int k = 0; k < cp.nx; ++k) xs.push_back(k == j ? Series::variable(x[k], 1) : Series::constant(x[k], 1));
        g[j] = cp.cost.s(xs)[1];
    }
    return g;
}

}  // namespace

NormalFormDynamics classical_state_dynamics(const ClassicalProblem& cp) {
    NormalFormDynamics dyn;
    dyn.state_dim = cp.nx;
    dyn.order = 1;
    for (int i = 0; i < cp.nx; ++i) {
        dyn.chain_base.push_back(i);
        dyn.chain_len.push_back(1);
    }
    dyn.rhs = cp.f;
    return dyn;
}

Trajectory integrate_state(const ClassicalProblem& cp, const ControlCurve& u) {
    return integrate(classical_state_dynamics(cp), u, cp.x0, cp.T, cp.tol);
}

Vec state_jacobian(const ClassicalProblem& cp, double t, const Vec& x, const Vec& u) {
    return eval_jacobian(cp, t, x, u);
}

Vec terminal_adjoint(const ClassicalProblem& cp, const Vec& xT) {
    Vec g = cost_gradient(cp, xT);
    for (double& v : g) v = -v;
    return g;
}

Trajectory adjoint_integrate(const ClassicalProblem& cp, const Trajectory& x_traj, const ControlCurve& u,
                             const Vec& p_terminal) {
    auto xs = std::make_shared<const Trajectory>(x_traj);
    const int nx = cp.nx;
    NormalFormDynamics dyn;
    dyn.state_dim = nx;
    dyn.order = 1;
    for (int i = 0; i < nx; ++i) {
        dyn.chain_base.push_back(i);
        dyn.chain_len.push_back(1);
    }
    dyn.rhs.d = [cp, xs, nx](double t, const Vec& p, const Vec& uv, Vec& dp) {
        const Vec J = eval_jacobian(cp, t, xs->state(t), uv);
        for (int j = 0; j < nx; ++j) {
            double acc = 0.0;
            for (int i = 0; i < nx; ++i) acc -= p[i] * J[i * nx + j];
            dp[j] = acc;
        }
    };
    dyn.rhs.s = [cp, xs, nx](const Series& t, const std::vector<Series>& p, const std::vector<Series>& uv,
                             std::vector<Series>& dp) {
        const double t0 = t[0];
        const std::vector<Series> x =
            state_series(xs->dynamics(), xs->control(), t0, xs->state(t0), t.degree(), Side::Right);
        const std::vector<Series> J = eval_jacobian(cp, t, x, uv);
        for (int j = 0; j < nx; ++j) {
            Series acc = Series::constant(0.0, t.degree());
            for (int i = 0; i < nx; ++i) acc = acc - p[i] * J[i * nx + j];
            dp[j] = acc;
        }
    };
    return integrate_between(dyn, u, p_terminal, cp.T, 0.0, cp.tol);
}

std::function<double(const ControlValue&)> hamiltonian(const ClassicalProblem& cp, double t, const Vec& x,
                                                       const Vec& p) {
    return [cp, t, x, p](const ControlValue& u) {
        const Vec f = eval_vec(cp.f, t, x, u, cp.nx);
        double acc = 0.0;
        for (int i = 0; i < cp.nx; ++i) acc += p[i] * f[i];
        return acc;
    };
}

DefiningTriple embed_classical(const ClassicalProblem& cp, const ControlCurve* reference) {
    const int nx = cp.nx;
    const double T = cp.T;
    DefiningTriple tr;
    tr.name = cp.name;
    tr.controls = cp.K;
    tr.T = T;
    tr.n = 3;
    tr.tol = cp.tol;

    auto L = ScalarJetField::from(
        [cp, nx](const auto& a) {
            using S = std::decay_t<decltype(a.t)>;
            std::vector<S> x(nx);
            for (int i = 0; i < nx; ++i) x[i] = a.q(i, 0);
            const std::vector<S> f = eval_vec(cp.f, a.t, x, a.u, nx);
            S acc = 0.0;
            for (int i = 0; i < nx; ++i) acc = acc + a.q(nx + i, 0) * (a.q(i, 1) - f[i]);
            return acc;
        },
        1);
    for (int i = 0; i < nx; ++i) {
        L.with_partial(Coord::q(i, 1), make_field_fn([nx, i](const auto& a) { return a.q(nx + i, 0); }));
        L.with_partial(Coord::q(nx + i, 1), make_field_fn([](const auto& a) { return a.t * 0.0; }));
        L.with_partial(Coord::q(nx + i, 0), make_field_fn([cp, nx, i](const auto& a) {
                           using S = std::decay_t<decltype(a.t)>;
                           std::vector<S> x(nx);
                           for (int k = 0; k < nx; ++k) x[k] = a.q(k, 0);
                           return a.q(i, 1) - eval_vec(cp.f, a.t, x, a.u, nx)[i];
                       }));
    }
    tr.lagrangian = {L, 1, 2 * nx};

    tr.cost.field = ScalarJetField::from(
        [cp, nx, T](const auto& a) {
            using S = std::decay_t<decltype(a.t)>;
            std::vector<S> x(nx);
            for (int i = 0; i < nx; ++i) x[i] = a.q(i, 0);
            return (a.t / T) * eval_cost(cp.cost, x);
        },
        0);
    tr.cost.order = 0;

    NormalFormDynamics dyn;
    dyn.state_dim = 2 * nx;
    dyn.order = 1;
    for (int i = 0; i < 2 * nx; ++i) {
        dyn.chain_base.push_back(i);
        dyn.chain_len.push_back(1);
    }
    dyn.rhs = make_vec_fn([cp, nx](const auto& t, const auto& y, const auto& u, auto& dy) {
        using S = std::decay_t<decltype(t)>;
        const std::vector<S> x(y.begin(), y.begin() + nx);
        const std::vector<S> f = eval_vec(cp.f, t, x, u, nx);
        const std::vector<S> J = eval_jacobian(cp, t, x, u);
        for (int i = 0; i < nx; ++i) dy[i] = f[i];
        for (int j = 0; j < nx; ++j) {
            S acc = t * 0.0;
            for (int i = 0; i < nx; ++i) acc = acc - y[nx + i] * J[i * nx + j];
            dy[nx + j] = acc;
        }
    });
    tr.dynamics = dyn;

    const ControlCurve ref = reference ? *reference : ControlCurve::constant(cp.K.upper, T);
    const Trajectory xt = integrate_state(cp, ref);
    const Trajectory pt = adjoint_integrate(cp, xt, ref, terminal_adjoint(cp, xt.state(T)));
    const Vec p0 = pt.state(0.0);

    Vec sigma = cp.x0;
    sigma.insert(sigma.end(), p0.begin(), p0.end());
    tr.initial.default_state = sigma;
    const Vec x0 = cp.x0;
    tr.initial.admissible = [x0, nx](const Vec& s) {
        if (static_cast<int>(s.size()) != 2 * nx) return false;
        for (int i = 0; i < nx; ++i) {
            if (std::abs(s[i] - x0[i]) > 1e-12 * (1.0 + std::abs(x0[i]))) return false;
        }
        return true;
    };
    tr.initial.probe_lower = sigma;
    tr.initial.probe_upper = sigma;
    for (int i = 0; i < nx; ++i) {
        tr.initial.free_states.push_back(nx + i);
        tr.initial.probe_lower[nx + i] -= 1.0;
        tr.initial.probe_upper[nx + i] += 1.0;
        tr.adjoint_coords.push_back(nx + i);
    }
    for (int i = 0; i < nx; ++i) tr.coord_names.push_back("x" + std::to_string(i + 1));
    for (int i = 0; i < nx; ++i) tr.coord_names.push_back("p" + std::to_string(i + 1));
    return tr;
}

ClassicalProblem linear_chain_problem(const Vec& a, double gain, double T, Vec x0, Tolerances tol) {
    const int m = static_cast<int>(a.size()) - 1;
    if (m < 1 || a.back() == 0.0) throw Error(ErrorCode::BadParams, "leading coefficient must be nonzero");
    ClassicalProblem cp;
    cp.name = "linear-chain";
    cp.nx = m;
    cp.f = make_vec_fn([a, m, gain](const auto& t, const auto& y, const auto& u, auto& dy) {
        for (int l = 0; l + 1 < m; ++l) dy[l] = y[l + 1];
        auto top = u[0] * gain + t * 0.0;
        for (int l = 0; l < m; ++l) top = top - a[l] * y[l];
        dy[m - 1] = top / a[m];
    });
    cp.jacobian = make_vec_fn([a, m](const auto& t, const auto&, const auto&, auto& J) {
        for (auto& v : J) v = t * 0.0;
        for (int l = 0; l + 1 < m; ++l) J[l * m + l + 1] = t * 0.0 + 1.0;
        for (int l = 0; l < m; ++l) J[(m - 1) * m + l] = t * 0.0 - a[l] / a[m];
    });
    cp.cost = make_state_scalar_fn([](const auto& x) { return -1.0 * x[0]; });
    x0.resize(m, 0.0);
    cp.x0 = std::move(x0);
    cp.K = ControlSet{{-1.0}, {1.0}, 0.0};
    cp.T = T;
    cp.tol = tol;
    return cp;
}

ClassicalReport classical_pmp_check(const ClassicalProblem& cp, const ControlCurve& u0,
                                    const std::vector<double>& tau_grid, const std::vector<ControlValue>& omega_grid) {
    const Trajectory xt = integrate_state(cp, u0);
    const Trajectory pt = adjoint_integrate(cp, xt, u0, terminal_adjoint(cp, xt.state(cp.T)));
    ClassicalReport rep;
    rep.max_gap = -std::numeric_limits<double>::infinity();
    for (double tau : tau_grid) {
        const auto H = hamiltonian(cp, tau, xt.state(tau), pt.state(tau));
        const double h0 = H(u0.value(tau, Side::Left));
        const double tol = 1e-6 * (1.0 + std::abs(h0));
        for (const ControlValue& w : omega_grid) {
            const double gap = H(w) - h0;
            rep.max_gap = std::max(rep.max_gap, gap);
            if (gap > tol) rep.violations.push_back({tau, w, gap});
        }
    }
    std::sort(rep.violations.begin(), rep.violations.end(),
              [](const ClassicalViolation& x, const ClassicalViolation& y) { return x.margin > y.margin; });
    return rep;
}

Vec linear_terminal_adjoint(const Vec& a) {
    const int m = static_cast<int>(a.size()) - 1;
    if (m < 1 || a.back() == 0.0) throw Error(ErrorCode::BadParams, "leading coefficient must be nonzero");
    Vec P(m, 0.0);
    for (int beta = m - 1; beta >= 0; --beta) {
        const int k = m - 1 - beta;
        double rhs = beta == 0 ? 1.0 : 0.0;
        for (int e = 0; e < k; ++e) rhs -= (e % 2 == 0 ? 1.0 : -1.0) * a[beta + 1 + e] * P[e];
        P[k] = rhs / ((k % 2 == 0 ? 1.0 : -1.0) * a[m]);
    }
    return P;
}

BangBangResult mth_order_bang_bang(const Vec& a, double T, double tol) {
    const int m = static_cast<int>(a.size()) - 1;
    if (m < 1 || a.back() == 0.0) throw Error(ErrorCode::BadParams, "leading coefficient must be nonzero");
    if (!(T > 0.0)) throw Error(ErrorCode::BadParams, "horizon must be positive");
    const NormalFormDynamics adj = reduce_to_first_order(
        [a, m](const auto& t, const auto& blocks, const auto&) {
            using S = std::decay_t<decltype(t)>;
            S acc = t * 0.0;
            for (int l = 0; l < m; ++l) acc = acc - ((l + m) % 2 == 0 ? 1.0 : -1.0) * a[l] * blocks[l][0] / a[m];
            return std::vector<S>{acc};
        },
        m, 1);
    const ControlCurve zero = ControlCurve::constant({0.0}, T);
    const Tolerances tl{tol, tol * 1e-2};

    BangBangResult res;
    res.terminal_adjoint = linear_terminal_adjoint(a);
    res.adjoint = integrate_between(adj, zero, res.terminal_adjoint, T, 0.0, tl);

    const ClassicalProblem cp = linear_chain_problem(a, 1.0, T, {}, tl);
    const Trajectory xt = integrate_state(cp, zero);
    const Trajectory pc = adjoint_integrate(cp, xt, zero, terminal_adjoint(cp, xt.state(T)));

    const int samples = 2000;
    std::vector<double> ts(samples + 1), ps(samples + 1);
    double pmax = 0.0;
    for (int k = 0; k <= samples; ++k) {
        ts[k] = T * k / samples;
        ps[k] = res.adjoint.state(ts[k])[0];
        pmax = std::max(pmax, std::abs(ps[k]));
        const double oracle = pc.state(ts[k])[m - 1] / a[m];
        res.oracle_max_diff = std::max(res.oracle_max_diff, std::abs(ps[k] - oracle));
        if (std::abs(ps[k]) > 1e-9 && std::abs(oracle) > 1e-9 && (ps[k] > 0) != (oracle > 0)) {
            res.oracle_argmax_agrees = false;
        }
    }
    const double zero_tol = 1e-12 * std::max(1.0, pmax);
    for (int k = 0; k < samples; ++k) {
        if (std::abs(ps[k]) <= zero_tol && std::abs(ps[k + 1]) <= zero_tol) {
            throw Error(ErrorCode::DegenerateAdjoint, "adjoint vanishes on an interval");
        }
    }
    for (int k = 0; k < samples; ++k) {
        if ((ps[k] > 0 && ps[k + 1] < 0) || (ps[k] < 0 && ps[k + 1] > 0)) {
            double lo = ts[k], hi = ts[k + 1];
            const bool lo_pos = ps[k] > 0;
            while (hi - lo > 1e-10) {
                const double mid = 0.5 * (lo + hi);
                if ((res.adjoint.state(mid)[0] > 0) == lo_pos) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            const double s = 0.5 * (lo + hi);
            if (s > 0.0 && s < T) res.switches.push_back(s);
        }
    }
    std::vector<double> edges{0.0};
    edges.insert(edges.end(), res.switches.begin(), res.switches.end());
    edges.push_back(T);
    std::vector<Vec> values;
    for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
        const double p = res.adjoint.state(0.5 * (edges[k] + edges[k + 1]))[0];
        if (p == 0.0) throw Error(ErrorCode::DegenerateAdjoint, "adjoint vanishes on an interval");
        values.push_back({p > 0 ? 1.0 : -1.0});
    }
    res.u_opt = ControlCurve::piecewise_constant(res.switches, values, T);
    return res;
}

PhiProbeReport phi_surjectivity_probe(const DefiningTriple& triple, const ControlCurve& u,
                                      const std::vector<double>& v_grid,
                                      const std::function<Vec(double)>& sigma_of_v, double threshold) {
    PhiProbeReport rep;
    rep.sin_T = std::sin(triple.T);
    if (std::abs(rep.sin_T) < threshold) {
        throw Error(ErrorCode::DegenerateHorizon, "horizon is a multiple of pi: x(T) does not depend on v");
    }
    if (v_grid.size() < 2) throw Error(ErrorCode::BadParams, "phi probe needs at least two velocities");
    const int xi = triple.dynamics.chain_base.front();
    for (double v : v_grid) {
        const Trajectory traj = solve(triple, u, sigma_of_v(v));
        rep.v.push_back(v);
        rep.xT.push_back(traj.state(triple.T)[xi]);
    }
    const double n = static_cast<double>(rep.v.size());
    double sv = 0, sx = 0, svv = 0, svx = 0;
    for (std::size_t k = 0; k < rep.v.size(); ++k) {
        sv += rep.v[k];
        sx += rep.xT[k];
        svv += rep.v[k] * rep.v[k];
        svx += rep.v[k] * rep.xT[k];
    }
    rep.slope = (n * svx - sv * sx) / (n * svv - sv * sv);
    rep.intercept = (sx - rep.slope * sv) / n;
    for (std::size_t k = 0; k < rep.v.size(); ++k) {
        rep.affinity_residual =
            std::max(rep.affinity_residual, std::abs(rep.xT[k] - (rep.intercept + rep.slope * rep.v[k])));
    }
    if (std::abs(rep.slope) < threshold) {
        throw Error(ErrorCode::DegenerateHorizon, "terminal position is insensitive to the initial velocity");
    }
    return rep;
}

}  // namespace gpmp
