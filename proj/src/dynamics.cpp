// SPDX-License-Identifier: MIT
#include "gpmp/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gpmp/errors.hpp"

namespace gpmp {

NormalFormDynamics with_cutoff(const NormalFormDynamics& dyn, Vec center, double radius) {
    NormalFormDynamics out = dyn;
    const VecFn inner = dyn.rhs;
    auto project = [center, radius](auto y) {
        double r2 = 0.0;
        for (std::size_t k = 0; k < y.size(); ++k) {
            const double d = primal(y[k]) - center[k];
            r2 += d * d;
        }
        const double r = std::sqrt(r2);
        if (r > radius) {
            const double scale = radius / r;
            for (std::size_t k = 0; k < y.size(); ++k) y[k] = center[k] + (y[k] - center[k]) * scale;
        }
        return y;
    };
    out.rhs.d = [inner, project](double t, const Vec& y, const Vec& u, Vec& dy) { inner.d(t, project(y), u, dy); };
    out.rhs.s = [inner, project](const Series& t, const std::vector<Series>& y, const std::vector<Series>& u,
                                 std::vector<Series>& dy) { inner.s(t, project(y), u, dy); };
    return out;
}

namespace {

// Dormand-Prince 5(4) tableau with its standard continuous extension.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                 a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

struct Stepper {
    const NormalFormDynamics& dyn;
    const ControlCurve& u;
    Tolerances tol;
    double piece_lo = 0.0, piece_hi = 0.0;
    Vec uval;

    void eval(double t, const Vec& y, Vec& dy) {
        const Side side = t >= piece_hi ? Side::Left : Side::Right;
        uval = u.value(t, side);
        dy.assign(y.size(), 0.0);
        dyn.rhs.d(t, y, uval, dy);
    }
};

double error_norm(const Vec& err, const Vec& y0, const Vec& y1, const Tolerances& tol) {
    double acc = 0.0;
    for (std::size_t i = 0; i < err.size(); ++i) {
        const double sk = tol.atol + tol.rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
        const double r = err[i] / sk;
        acc += r * r;
    }
    return std::sqrt(acc / static_cast<double>(std::max<std::size_t>(err.size(), 1)));
}

}  // namespace

Trajectory integrate_between(const NormalFormDynamics& dyn, const ControlCurve& u, const Vec& y_start,
                             double t_start, double t_end, Tolerances tol) {
    if (static_cast<int>(y_start.size()) != dyn.state_dim) {
        throw Error(ErrorCode::ConstraintViolation, "initial state has wrong dimension");
    }
    for (double v : y_start) {
        if (!std::isfinite(v)) throw Error(ErrorCode::ConstraintViolation, "initial state is not finite");
    }
    Trajectory traj;
    traj.dyn_ = std::make_shared<const NormalFormDynamics>(dyn);
    traj.control_ = u;
    traj.initial_ = y_start;

    const double dir = t_end >= t_start ? 1.0 : -1.0;
    std::vector<double> cuts{t_start};
    {
        const double lo = std::min(t_start, t_end), hi = std::max(t_start, t_end);
        std::vector<double> inner;
        for (double b : u.breakpoints()) {
            if (b > lo && b < hi) inner.push_back(b);
        }
        if (dir < 0) std::reverse(inner.begin(), inner.end());
        cuts.insert(cuts.end(), inner.begin(), inner.end());
        cuts.push_back(t_end);
    }

    const std::size_t n = y_start.size();
    Stepper st{dyn, u, tol, 0.0, 0.0, {}};
    Vec y = y_start;
    std::vector<double> times{t_start};
    std::vector<Vec> states{y};
    Vec k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ytmp(n), ynew(n), err(n);
    double h_next = 0.0;

    for (std::size_t piece = 0; piece + 1 < cuts.size(); ++piece) {
        const double a = cuts[piece], b = cuts[piece + 1];
        st.piece_lo = std::min(a, b);
        st.piece_hi = std::max(a, b);
        const double length = std::abs(b - a);
        if (length == 0.0) continue;
        double t = a;
        // A breakpoint means the right-hand side may jump, so stages are
        // re-evaluated from scratch on every piece.
        st.eval(t, y, k1);
        double h;
        if (h_next > 0.0) {
            h = std::min(h_next, length);
        } else {
            double d0 = 0.0, dd = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double sk = tol.atol + tol.rtol * std::abs(y[i]);
                d0 += (y[i] / sk) * (y[i] / sk);
                dd += (k1[i] / sk) * (k1[i] / sk);
            }
            d0 = std::sqrt(d0 / n);
            dd = std::sqrt(dd / n);
            h = (d0 < 1e-5 || dd < 1e-5) ? 1e-6 : 0.01 * d0 / dd;
            h = std::min({h, length, 0.1 * length + 1e-3});
        }
        bool last_rejected = false;
        std::size_t guard = 0;
        while (dir * (b - t) > 0.0) {
            if (++guard > 5000000) throw Error(ErrorCode::StepSizeUnderflow, "step budget exhausted");
            bool final_step = false;
            if (h >= std::abs(b - t) * (1.0 - 1e-12)) {
                h = std::abs(b - t);
                final_step = true;
            }
            const double hs = dir * h;
            if (h < 1e-14 * std::max(1.0, std::abs(t))) {
                throw Error(ErrorCode::StepSizeUnderflow, "step size underflow near t = " + std::to_string(t));
            }
            for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + hs * a21 * k1[i];
            st.eval(t + c2 * hs, ytmp, k2);
            for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + hs * (a31 * k1[i] + a32 * k2[i]);
            st.eval(t + c3 * hs, ytmp, k3);
            for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + hs * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
            st.eval(t + c4 * hs, ytmp, k4);
            for (std::size_t i = 0; i < n; ++i)
                ytmp[i] = y[i] + hs * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
            st.eval(t + c5 * hs, ytmp, k5);
            for (std::size_t i = 0; i < n; ++i)
                ytmp[i] = y[i] + hs * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
            const double t_new = final_step ? b : t + hs;
            st.eval(t_new, ytmp, k6);
            for (std::size_t i = 0; i < n; ++i)
                ynew[i] = y[i] + hs * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
            st.eval(t_new, ynew, k7);
            for (std::size_t i = 0; i < n; ++i)
                err[i] = hs * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
            const double en = error_norm(err, y, ynew, tol);
            if (!std::isfinite(en)) {
                h *= 0.1;
                last_rejected = true;
                continue;
            }
            double fac = en == 0.0 ? 10.0 : 0.9 * std::pow(en, -0.2);
            if (en <= 1.0) {
                fac = std::clamp(fac, 0.2, last_rejected ? 1.0 : 10.0);
                Trajectory::Step step;
                step.t0 = t;
                step.h = t_new - t;
                step.rcont[0] = y;
                step.rcont[1].resize(n);
                step.rcont[2].resize(n);
                step.rcont[3].resize(n);
                step.rcont[4].resize(n);
                for (std::size_t i = 0; i < n; ++i) {
                    const double ydiff = ynew[i] - y[i];
                    const double bspl = step.h * k1[i] - ydiff;
                    step.rcont[1][i] = ydiff;
                    step.rcont[2][i] = bspl;
                    step.rcont[3][i] = ydiff - step.h * k7[i] - bspl;
                    step.rcont[4][i] = step.h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] +
                                                 d7 * k7[i]);
                }
                traj.steps_.push_back(std::move(step));
                t = t_new;
                y = ynew;
                k1 = k7;
                times.push_back(t);
                states.push_back(y);
                h_next = h * fac;
                h = h_next;
                last_rejected = false;
            } else {
                h *= std::clamp(fac, 0.2, 1.0);
                last_rejected = true;
            }
        }
    }

    if (dir < 0) {
        std::reverse(times.begin(), times.end());
        std::reverse(states.begin(), states.end());
        std::reverse(traj.steps_.begin(), traj.steps_.end());
    }
    traj.nodes_ = std::move(times);
    traj.states_ = std::move(states);
    return traj;
}

Vec Trajectory::state(double t) const {
    const double lo = nodes_.front(), hi = nodes_.back();
    if (t < lo - 1e-12 * std::max(1.0, std::abs(lo)) || t > hi + 1e-12 * std::max(1.0, std::abs(hi))) {
        throw Error(ErrorCode::TimeOutOfRange, "time " + std::to_string(t) + " outside trajectory span");
    }
    auto it = std::lower_bound(nodes_.begin(), nodes_.end(), t);
    if (it != nodes_.end() && *it == t) return states_[static_cast<std::size_t>(it - nodes_.begin())];
    if (it == nodes_.end()) return states_.back();
    if (it == nodes_.begin()) return states_.front();
    const std::size_t k = static_cast<std::size_t>(it - nodes_.begin()) - 1;
    const Step& s = steps_[k];
    const double theta = (t - s.t0) / s.h;
    const double theta1 = 1.0 - theta;
    Vec out(s.rcont[0].size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = s.rcont[0][i] +
                 theta * (s.rcont[1][i] + theta1 * (s.rcont[2][i] + theta * (s.rcont[3][i] + theta1 * s.rcont[4][i])));
    }
    return out;
}

std::vector<Series> state_series(const NormalFormDynamics& dyn, const ControlCurve& u, double t, const Vec& y,
                                 int degree, Side side) {
    if (!dyn.rhs.s) throw Error(ErrorCode::OrderUnavailable, "dynamics has no series evaluator");
    const std::size_t n = y.size();
    std::vector<Series> Y;
    Y.reserve(n);
    for (double v : y) Y.push_back(Series::constant(v, 0));
    std::vector<Series> G(n);
    for (int k = 0; k < degree; ++k) {
        const Series ts = Series::variable(t, k);
        const std::vector<Series> us = u.series(t, k, side);
        dyn.rhs.s(ts, Y, us, G);
        for (std::size_t i = 0; i < n; ++i) Y[i].coeff(static_cast<std::size_t>(k) + 1) = G[i][k] / (k + 1);
    }
    return Y;
}

JetPoint jet_from_state(const NormalFormDynamics& dyn, const ControlCurve& u, double t, const Vec& y, int order,
                        Side side) {
    if (order < 0 || order > kMaxJetOrder) {
        throw Error(ErrorCode::OrderUnavailable, "jet order " + std::to_string(order) + " not supported");
    }
    const int N = dyn.config_dim();
    JetPoint p = JetPoint::zero(t, N, order);
    int needed = 0;
    for (int i = 0; i < N; ++i) needed = std::max(needed, order - dyn.chain_len[i] + 1);
    if (needed <= 0) {
        for (int i = 0; i < N; ++i) {
            for (int beta = 0; beta <= order; ++beta) p.q(i, beta) = y[dyn.chain_base[i] + beta];
        }
        return p;
    }
    if (needed == 1) {
        // One past the chain is the field itself.
        Vec dy(y.size());
        dyn.rhs.d(t, y, u.value(t, side), dy);
        for (int i = 0; i < N; ++i) {
            for (int beta = 0; beta <= order; ++beta) {
                const int base = dyn.chain_base[i], len = dyn.chain_len[i];
                p.q(i, beta) = beta < len ? y[base + beta] : dy[base + len - 1];
            }
        }
        return p;
    }
    const std::vector<Series> Y = state_series(dyn, u, t, y, order, side);
    for (int i = 0; i < N; ++i) {
        for (int beta = 0; beta <= order; ++beta) {
            p.q(i, beta) = beta < dyn.chain_len[i] ? y[dyn.chain_base[i] + beta]
                                                   : Y[dyn.chain_base[i]].derivative(beta);
        }
    }
    return p;
}

JetPoint jet_of_trajectory(const Trajectory& traj, double t, int order, Side side) {
    return jet_from_state(traj.dynamics(), traj.control(), t, traj.state(t), order, side);
}

}  // namespace gpmp
