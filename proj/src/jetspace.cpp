// SPDX-License-Identifier: MIT
#include "gpmp/jetspace.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gpmp/errors.hpp"

namespace gpmp {

JetPoint JetPoint::zero(double t, int dim, int order) {
    return JetPoint(t, std::vector<Vec>(static_cast<std::size_t>(order) + 1, Vec(dim, 0.0)));
}

JetArgs<double> make_args(const JetPoint& p, const ControlValue& u) {
    return JetArgs<double>{p.t, p.blocks, u};
}

JetArgs<Series> make_series_args(const JetPoint& p, const ControlValue& u, int degree) {
    JetArgs<Series> a;
    a.t = Series::variable(p.t, degree);
    const int n = p.order();
    a.blocks.resize(p.blocks.size());
    for (int beta = 0; beta <= n; ++beta) {
        const int deg = std::min(degree, n - beta);
        a.blocks[beta].reserve(p.dim());
        for (int i = 0; i < p.dim(); ++i) {
            std::vector<double> c(static_cast<std::size_t>(deg) + 1);
            double fact = 1.0;
            for (int k = 0; k <= deg; ++k) {
                if (k > 0) fact *= k;
                c[k] = p.blocks[beta + k][i] / fact;
            }
            a.blocks[beta].emplace_back(std::move(c));
        }
    }
    a.u.reserve(u.size());
    for (double v : u) a.u.emplace_back(v);
    return a;
}

double fd_step(double x) {
    static const double base = std::cbrt(std::numeric_limits<double>::epsilon());
    return base * std::max(1.0, std::abs(x));
}

namespace {

template <class T>
T& coord_ref(JetArgs<T>& a, Coord c) {
    switch (c.kind) {
        case Coord::Kind::Time: return a.t;
        case Coord::Kind::Q: return a.blocks.at(c.beta).at(c.i);
        case Coord::Kind::U: return a.u.at(c.i);
    }
    return a.t;
}

double& constant_term(double& x) { return x; }
double& constant_term(Series& x) { return x.coeff(0); }

template <class T, class Eval>
T central_difference(const JetArgs<T>& args, Coord c, const Eval& eval) {
    JetArgs<T> plus = args;
    JetArgs<T> minus = args;
    const double h = fd_step(primal(coord_ref(plus, c)));
    constant_term(coord_ref(plus, c)) += h;
    constant_term(coord_ref(minus, c)) -= h;
    return (eval(plus) - eval(minus)) / (2.0 * h);
}

}  // namespace

ScalarJetField& ScalarJetField::with_partial(Coord c, FieldFn partial) {
    partials_[c] = std::move(partial);
    return *this;
}

FieldFn ScalarJetField::partial(Coord c) const {
    auto it = partials_.find(c);
    if (it != partials_.end()) return it->second;
    FieldFn base = fn_;
    return FieldFn{[base, c](const JetArgs<double>& a) { return central_difference(a, c, base.d); },
                   [base, c](const JetArgs<Series>& a) { return central_difference(a, c, base.s); }};
}

ScalarJetField ScalarJetField::linear_combination(double a, const ScalarJetField& f, double b,
                                                  const ScalarJetField& g) {
    FieldFn ff = f.fn_, gf = g.fn_;
    ScalarJetField out(FieldFn{[=](const JetArgs<double>& x) { return a * ff.d(x) + b * gf.d(x); },
                               [=](const JetArgs<Series>& x) { return a * ff.s(x) + b * gf.s(x); }},
                       std::max(f.order_, g.order_));
    for (const auto& [c, pf] : f.partials_) {
        auto it = g.partials_.find(c);
        if (it == g.partials_.end()) continue;
        FieldFn pg = it->second;
        FieldFn pfc = pf;
        out.partials_[c] = FieldFn{[=](const JetArgs<double>& x) { return a * pfc.d(x) + b * pg.d(x); },
                                   [=](const JetArgs<Series>& x) { return a * pfc.s(x) + b * pg.s(x); }};
    }
    return out;
}

double finite_diff_partial(const ScalarJetField& f, const JetPoint& p, const ControlValue& u,
                           Coord direction, double step) {
    JetArgs<double> plus = make_args(p, u);
    JetArgs<double> minus = plus;
    coord_ref(plus, direction) += step;
    coord_ref(minus, direction) -= step;
    return (f.eval(plus) - f.eval(minus)) / (2.0 * step);
}

double total_derivative(const ScalarJetField& f, const JetPoint& p, const ControlValue& u) {
    const int r = f.actual_order();
    if (p.order() < r + 1) {
        throw Error(ErrorCode::InsufficientJetOrder, "total_derivative needs jet order >= actual_order + 1");
    }
    if (f.fn().s) return iterated_total_derivatives(f.fn(), r, p, u, 1)[1];
    const JetArgs<double> args = make_args(p, u);
    double acc = f.partial(Coord::time()).d(args);
    for (int delta = 0; delta <= r; ++delta) {
        for (int j = 0; j < p.dim(); ++j) {
            const double next = p.q(j, delta + 1);
            if (next == 0.0) continue;
            acc += f.partial(Coord::q(j, delta)).d(args) * next;
        }
    }
    return acc;
}

std::vector<double> iterated_total_derivatives(const FieldFn& f, int actual_order, const JetPoint& p,
                                               const ControlValue& u, int k) {
    if (p.order() < actual_order + k) {
        throw Error(ErrorCode::InsufficientJetOrder, "iterated total derivative needs jet order >= r' + k");
    }
    const Series s = f.s(make_series_args(p, u, k));
    std::vector<double> out(static_cast<std::size_t>(k) + 1);
    for (int j = 0; j <= k; ++j) out[j] = s.derivative(j);
    return out;
}

bool audit_actual_order(const ScalarJetField& f, const JetPoint& p, const ControlValue& u,
                        std::mt19937_64& rng, int trials) {
    const double base = f(p, u);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int trial = 0; trial < trials; ++trial) {
        JetPoint q = p;
        for (int beta = f.actual_order() + 1; beta <= q.order(); ++beta) {
            for (double& x : q.blocks[beta]) x += gauss(rng) * (1.0 + std::abs(x));
        }
        const double v = f(q, u);
        if (std::abs(v - base) > 1e-13 * (1.0 + std::abs(base))) return false;
    }
    return true;
}

}  // namespace gpmp
