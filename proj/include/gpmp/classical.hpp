// SPDX-License-Identifier: MIT
#pragma once

#include <functional>
#include <string>
#include <vector>

#include "gpmp/control.hpp"
#include "gpmp/dynamics.hpp"
#include "gpmp/problem.hpp"

namespace gpmp {

/// Scalar function of a state vector, evaluable on doubles and on series.
struct StateScalarFn {
    std::function<double(const Vec&)> d;
    std::function<Series(const std::vector<Series>&)> s;
};

template <class F>
StateScalarFn make_state_scalar_fn(F f) {
    return StateScalarFn{[f](const Vec& x) { return static_cast<double>(f(x)); },
                         [f](const std::vector<Series>& x) { return Series(f(x)); }};
}

/// Classical Mayer problem: x' = f(t, x, u), x(0) = x0, minimize C(x(T)).
struct ClassicalProblem {
    std::string name;
    int nx = 1;
    VecFn f;
    /// Optional row-major Jacobian df^i/dx^j written into an nx*nx vector.
    VecFn jacobian;
    StateScalarFn cost;
    Vec x0;
    ControlSet K;
    double T = 1.0;
    Tolerances tol{1e-10, 1e-12};
};

/// State equation alone as a normal form (chains of length one).
NormalFormDynamics classical_state_dynamics(const ClassicalProblem& cp);
Trajectory integrate_state(const ClassicalProblem& cp, const ControlCurve& u);

/// Triple on q = (x, p) with L = p.(x' - f), r = 1, n = 3 and the cost
/// extended as (t/T) C(x) so it vanishes on jets at t = 0.  The default
/// initial adjoint meets p(T) = -grad C along the reference control
/// (constant at the upper corner of K when none is given).
DefiningTriple embed_classical(const ClassicalProblem& cp, const ControlCurve* reference = nullptr);

/// Chain form of sum_l a_l x^(l) = gain u with C = -x(T): state (x, ..., x^(m-1)).
ClassicalProblem linear_chain_problem(const Vec& a, double gain, double T, Vec x0, Tolerances tol = {1e-10, 1e-12});

/// Row-major df/dx at (t, x, u); analytic when provided, else central differences.
Vec state_jacobian(const ClassicalProblem& cp, double t, const Vec& x, const Vec& u);

/// p_j' = -sum_i p_i df^i/dx^j, integrated backward from p(T) = p_terminal.
Trajectory adjoint_integrate(const ClassicalProblem& cp, const Trajectory& x_traj, const ControlCurve& u,
                             const Vec& p_terminal);

/// -grad C at x, the classical terminal value of the adjoint.
Vec terminal_adjoint(const ClassicalProblem& cp, const Vec& xT);

/// u -> sum_i p_i f^i(t, x, u).
std::function<double(const ControlValue&)> hamiltonian(const ClassicalProblem& cp, double t, const Vec& x,
                                                       const Vec& p);

struct ClassicalViolation {
    double tau = 0.0;
    ControlValue omega;
    double margin = 0.0;
};

struct ClassicalReport {
    std::vector<ClassicalViolation> violations;  // sorted by decreasing margin
    double max_gap = 0.0;                        // max over the grid of H(omega) - H(u0(tau))
};

/// Flags every (tau, omega) with H(omega) > H(u0(tau)) + 1e-6 (1 + |H(u0(tau))|).
ClassicalReport classical_pmp_check(const ClassicalProblem& cp, const ControlCurve& u0,
                                    const std::vector<double>& tau_grid, const std::vector<ControlValue>& omega_grid);

struct BangBangResult {
    ControlCurve u_opt;
    Trajectory adjoint;              // state of the m-th order adjoint chain p, p', ...
    std::vector<double> switches;    // detected sign changes of p
    Vec terminal_adjoint;            // p(T), ..., p^(m-1)(T)
    double oracle_max_diff = 0.0;    // max |p - p_m / a_m| against the first-order reduction
    bool oracle_argmax_agrees = true;
};

/// Bang-bang synthesis for sum_l a_l x^(l) = u, |u| <= 1, C = -x(T):
/// u_opt = sign(p) where the adjoint solves sum_l (-1)^l a_l p^(l) = 0
/// with synthesized terminal conditions.
BangBangResult mth_order_bang_bang(const Vec& a, double T, double tol = 1e-10);

/// Terminal values p(T), ..., p^(m-1)(T) annihilating the boundary pairing
/// of L = p (sum_l a_l x^(l) - u) against C = -x.
Vec linear_terminal_adjoint(const Vec& a);

struct PhiProbeReport {
    double sin_T = 0.0;
    double slope = 0.0;
    double intercept = 0.0;
    double affinity_residual = 0.0;  // max |x(T) - (intercept + slope v)| over the grid
    std::vector<double> v;
    std::vector<double> xT;
};

/// Samples v -> x(T) for fixed u, where sigma_of_v(v) is the initial state
/// with initial velocity v, and fits a line.  Throws DegenerateHorizon when
/// |sin T| or the fitted slope falls below `threshold`.
PhiProbeReport phi_surjectivity_probe(const DefiningTriple& triple, const ControlCurve& u,
                                      const std::vector<double>& v_grid,
                                      const std::function<Vec(double)>& sigma_of_v, double threshold = 1e-6);

}  // namespace gpmp
