// SPDX-License-Identifier: MIT
#pragma once

#include <array>
#include <functional>
#include <memory>
#include <vector>

#include "gpmp/control.hpp"
#include "gpmp/jetspace.hpp"

namespace gpmp {

/// Vector field g(t, y, u) evaluable on doubles and on Taylor series.
struct VecFn {
    std::function<void(double, const Vec&, const Vec&, Vec&)> d;
    std::function<void(const Series&, const std::vector<Series>&, const std::vector<Series>&,
                       std::vector<Series>&)>
        s;
};

/// Wraps a generic callable `f(t, y, u, dy)` whose arguments are either all
/// double-based or all Series-based.
template <class F>
VecFn make_vec_fn(F f) {
    return VecFn{[f](double t, const Vec& y, const Vec& u, Vec& dy) { f(t, y, u, dy); },
                 [f](const Series& t, const std::vector<Series>& y, const std::vector<Series>& u,
                     std::vector<Series>& dy) { f(t, y, u, dy); }};
}

/// First-order system y' = g(t, y, u) realizing the Euler-Lagrange constraints.
/// Configuration coordinate i occupies the chain of states
/// chain_base[i], ..., chain_base[i] + chain_len[i] - 1 holding q^i and its
/// first chain_len[i] - 1 derivatives.
struct NormalFormDynamics {
    int state_dim = 0;
    int order = 0;
    std::vector<int> chain_base;
    std::vector<int> chain_len;
    VecFn rhs;

    int config_dim() const { return static_cast<int>(chain_base.size()); }
};

/// Chain form for d^m q / dt^m = f(t, q_(0..m-1), u) with q in R^N.  The
/// callable receives (t, blocks, u) with blocks[beta][i] and returns the N
/// highest derivatives.  State index of q^i_(beta) is i*m + beta.
template <class F>
NormalFormDynamics reduce_to_first_order(F highest, int m, int N) {
    NormalFormDynamics dyn;
    dyn.state_dim = m * N;
    dyn.order = m;
    for (int i = 0; i < N; ++i) {
        dyn.chain_base.push_back(i * m);
        dyn.chain_len.push_back(m);
    }
    dyn.rhs = make_vec_fn([highest, m, N](const auto& t, const auto& y, const auto& u, auto& dy) {
        using T = std::decay_t<decltype(y[0])>;
        std::vector<std::vector<T>> blocks(m, std::vector<T>(N));
        for (int i = 0; i < N; ++i) {
            for (int beta = 0; beta < m; ++beta) blocks[beta][i] = y[i * m + beta];
        }
        const std::vector<T> top = highest(t, blocks, u);
        for (int i = 0; i < N; ++i) {
            for (int beta = 0; beta + 1 < m; ++beta) dy[i * m + beta] = y[i * m + beta + 1];
            dy[i * m + m - 1] = top[i];
        }
    });
    return dyn;
}

/// Radial cut-off: outside the ball |y - center| <= radius the field is
/// evaluated at the radial projection onto the sphere.
NormalFormDynamics with_cutoff(const NormalFormDynamics& dyn, Vec center, double radius);

struct Tolerances {
    double rtol = 1e-8;
    double atol = 1e-10;
};

/// Dense-output solution of a normal-form system.
class Trajectory {
public:
    struct Step {
        double t0 = 0.0;
        double h = 0.0;
        std::array<Vec, 5> rcont;
        double lo() const { return h >= 0 ? t0 : t0 + h; }
        double hi() const { return h >= 0 ? t0 + h : t0; }
    };

    Trajectory() = default;

    double t_begin() const { return nodes_.front(); }
    double t_end() const { return nodes_.back(); }
    const std::vector<double>& mesh() const { return nodes_; }
    const std::vector<Vec>& node_states() const { return states_; }
    const ControlCurve& control() const { return control_; }
    const NormalFormDynamics& dynamics() const { return *dyn_; }
    const Vec& initial_state() const { return initial_; }
    std::size_t step_count() const { return steps_.size(); }

    /// Interpolated state; returns the stored state exactly at mesh nodes.
    Vec state(double t) const;

private:
    friend Trajectory integrate_between(const NormalFormDynamics&, const ControlCurve&, const Vec&, double,
                                        double, Tolerances);
    std::shared_ptr<const NormalFormDynamics> dyn_;
    ControlCurve control_;
    Vec initial_;
    std::vector<double> nodes_;
    std::vector<Vec> states_;
    std::vector<Step> steps_;
};

/// Dormand-Prince 5(4) from t_start to t_end (either direction).  Every
/// control breakpoint strictly between the endpoints is a mesh node.
Trajectory integrate_between(const NormalFormDynamics& dyn, const ControlCurve& u, const Vec& y_start,
                             double t_start, double t_end, Tolerances tol = {});

inline Trajectory integrate(const NormalFormDynamics& dyn, const ControlCurve& u, const Vec& y0, double T,
                            Tolerances tol = {}) {
    return integrate_between(dyn, u, y0, 0.0, T, tol);
}

/// Largest jet order jet_of_trajectory will reconstruct.
inline constexpr int kMaxJetOrder = 40;

/// (t, q, dq/dt, ..., d^order q / dt^order) along the trajectory.  Orders
/// above the stored chain come from Taylor-mode differentiation of the
/// right-hand side along the flow, including the control's own expansion.
JetPoint jet_of_trajectory(const Trajectory& traj, double t, int order, Side side = Side::Right);

/// Same reconstruction from an arbitrary state y at time t.
JetPoint jet_from_state(const NormalFormDynamics& dyn, const ControlCurve& u, double t, const Vec& y, int order,
                        Side side = Side::Right);

/// Taylor coefficients of the state at (t, y) under control u, to `degree`.
std::vector<Series> state_series(const NormalFormDynamics& dyn, const ControlCurve& u, double t, const Vec& y,
                                 int degree, Side side = Side::Right);

}  // namespace gpmp
