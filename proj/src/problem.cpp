// SPDX-License-Identifier: MIT
#include "gpmp/problem.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "gpmp/errors.hpp"

namespace gpmp {

Trajectory solve(const DefiningTriple& triple, const ControlCurve& u, const Vec& sigma) {
    if (triple.initial.admissible && !triple.initial.admissible(sigma)) {
        throw Error(ErrorCode::ConstraintViolation, "initial data outside the admissible set of " + triple.name);
    }
    return integrate(triple.dynamics, u, sigma, triple.T, triple.tol);
}

bool Diagnostics::all_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

const CheckResult* Diagnostics::find(const std::string& name) const {
    for (const auto& c : checks) {
        if (c.name == name) return &c;
    }
    return nullptr;
}

Vec el_residual(const ControlledLagrangian& L, const JetPoint& jet, const ControlValue& u) {
    if (jet.order() < 2 * L.r) {
        throw Error(ErrorCode::InsufficientJetOrder, "Euler-Lagrange residual needs jet order >= 2r");
    }
    const JetArgs<double> args = make_args(jet, u);
    Vec out(L.N, 0.0);
    for (int i = 0; i < L.N; ++i) {
        double acc = L.field.partial(Coord::q(i, 0)).d(args);
        for (int beta = 1; beta <= L.r; ++beta) {
            const FieldFn p = L.field.partial(Coord::q(i, beta));
            const double d = iterated_total_derivatives(p, L.r, jet, u, beta)[beta];
            acc += (beta % 2 == 0 ? 1.0 : -1.0) * d;
        }
        out[i] = acc;
    }
    return out;
}

Vec el_residual(const DefiningTriple& triple, const Trajectory& traj, double t) {
    const JetPoint jet = jet_of_trajectory(traj, t, 2 * triple.r());
    return el_residual(triple.lagrangian, jet, traj.control()(t));
}

std::vector<Vec> lagrangian_momenta(const ControlledLagrangian& L, const JetPoint& jet, const ControlValue& u) {
    const int r = L.r;
    if (jet.order() < 2 * r - 1) {
        throw Error(ErrorCode::InsufficientJetOrder, "momenta need jet order >= 2r - 1");
    }
    std::vector<Vec> P(r, Vec(L.N, 0.0));
    for (int i = 0; i < L.N; ++i) {
        for (int delta = 1; delta <= r; ++delta) {
            const FieldFn p = L.field.partial(Coord::q(i, delta));
            const std::vector<double> D = iterated_total_derivatives(p, r, jet, u, delta - 1);
            for (int eps = 0; eps <= delta - 1; ++eps) {
                P[delta - eps - 1][i] += (eps % 2 == 0 ? 1.0 : -1.0) * D[eps];
            }
        }
    }
    return P;
}

std::vector<Vec> full_momenta(const DefiningTriple& triple, const JetPoint& jet, const ControlValue& u) {
    std::vector<Vec> P = lagrangian_momenta(triple.lagrangian, jet, u);
    const JetArgs<double> args = make_args(jet, u);
    for (int beta = 0; beta < triple.r() && beta <= triple.cost.order; ++beta) {
        for (int i = 0; i < triple.N(); ++i) {
            P[beta][i] += triple.cost.field.partial(Coord::q(i, beta)).d(args);
        }
    }
    return P;
}

std::function<double(const ControlValue&)> pontryagin_p(const DefiningTriple& triple, const JetPoint& jet) {
    ScalarJetField L = triple.lagrangian.field;
    return [L, jet](const ControlValue& u) { return -L(jet, u); };
}

double cost_at(const DefiningTriple& triple, const Trajectory& traj, double t) {
    const JetPoint jet = jet_of_trajectory(traj, t, triple.cost.order, Side::Left);
    return triple.cost.field(jet, ControlValue(triple.controls.dim(), 0.0));
}

namespace {

JetPoint random_jet(std::mt19937_64& rng, double t, int N, int n) {
    std::normal_distribution<double> g(0.0, 1.0);
    JetPoint p = JetPoint::zero(t, N, n);
    for (auto& block : p.blocks) {
        for (double& x : block) x = g(rng);
    }
    return p;
}

ControlValue random_control(std::mt19937_64& rng, const ControlSet& K) {
    ControlValue u(K.dim());
    for (int a = 0; a < K.dim(); ++a) {
        std::uniform_real_distribution<double> d(K.lower[a], K.upper[a]);
        u[a] = d(rng);
    }
    return u;
}

std::string fmt_double(double x) {
    std::ostringstream os;
    os.precision(3);
    os << std::scientific << x;
    return os.str();
}

}  // namespace

Diagnostics validate_triple(const DefiningTriple& triple, std::uint64_t seed) {
    Diagnostics diag;
    std::mt19937_64 rng(seed);
    const int r = triple.r();
    const int N = triple.N();
    const int n = triple.n;

    const bool order_ok = 2 * r + 1 <= n;
    diag.checks.push_back({"order-inequality", order_ok,
                           "2r+1 = " + std::to_string(2 * r + 1) + ", n = " + std::to_string(n)});

    diag.checks.push_back({"control-box", triple.controls.sane(), ""});

    {
        double worst = 0.0;
        for (int k = 0; k < 32; ++k) {
            const JetPoint p = random_jet(rng, 0.0, N, std::max(n, 0));
            worst = std::max(worst, std::abs(triple.cost.field(p, ControlValue(triple.controls.dim(), 0.0))));
        }
        diag.checks.push_back({"cost-vanishes-at-t0", worst <= 1e-14, "max |C| = " + fmt_double(worst)});
    }

    {
        bool ok = triple.lagrangian.field.actual_order() == r;
        for (int k = 0; k < 8 && ok; ++k) {
            std::uniform_real_distribution<double> td(0.0, triple.T);
            const JetPoint p = random_jet(rng, td(rng), N, std::max(n, r + 1));
            ok = audit_actual_order(triple.lagrangian.field, p, random_control(rng, triple.controls), rng);
        }
        diag.checks.push_back({"lagrangian-actual-order", ok, "r = " + std::to_string(r)});
    }
    {
        bool ok = triple.cost.field.actual_order() == triple.cost.order && triple.cost.order <= n - 1;
        for (int k = 0; k < 8 && ok; ++k) {
            std::uniform_real_distribution<double> td(0.0, triple.T);
            const JetPoint p = random_jet(rng, td(rng), N, std::max(n, triple.cost.order + 1));
            ok = audit_actual_order(triple.cost.field, p, ControlValue(triple.controls.dim(), 0.0), rng);
        }
        diag.checks.push_back({"cost-actual-order", ok, "order = " + std::to_string(triple.cost.order)});
    }
    diag.checks.push_back({"cost-order-below-r", triple.cost.order <= r - 1,
                           "cost order " + std::to_string(triple.cost.order)});

    const bool sigma_ok = !triple.initial.admissible || triple.initial.admissible(triple.initial.default_state);
    diag.checks.push_back({"initial-data-admissible", sigma_ok, ""});

    if (!order_ok || !sigma_ok || !triple.controls.sane()) {
        diag.checks.push_back({"dynamics-consistency", false, "skipped: prerequisites failed"});
        return diag;
    }
    try {
        // Two-piece probe control so the audit also crosses a breakpoint.
        const ControlValue lo = triple.controls.lower, hi = triple.controls.upper;
        ControlValue a(lo.size()), b(lo.size());
        for (std::size_t k = 0; k < lo.size(); ++k) {
            a[k] = lo[k] + 0.75 * (hi[k] - lo[k]);
            b[k] = lo[k] + 0.25 * (hi[k] - lo[k]);
        }
        const ControlCurve u = ControlCurve::piecewise_constant({0.4 * triple.T}, {a, b}, triple.T);
        const Trajectory traj = solve(triple, u, triple.initial.default_state);
        double worst = 0.0, scale = 1.0;
        for (const Vec& y : traj.node_states()) {
            for (double v : y) scale = std::max(scale, std::abs(v));
        }
        const auto& mesh = traj.mesh();
        for (std::size_t k = 0; k + 1 < mesh.size(); ++k) {
            const double t = 0.5 * (mesh[k] + mesh[k + 1]);
            for (double e : el_residual(triple, traj, t)) worst = std::max(worst, std::abs(e));
        }
        const double bound = 10.0 * triple.tol.rtol * scale;
        diag.checks.push_back({"dynamics-consistency", worst <= bound,
                               "max |E(L)| = " + fmt_double(worst) + ", bound " + fmt_double(bound)});
    } catch (const Error& e) {
        diag.checks.push_back({"dynamics-consistency", false, e.what()});
    }
    return diag;
}

}  // namespace gpmp
