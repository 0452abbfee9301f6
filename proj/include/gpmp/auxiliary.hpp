// SPDX-License-Identifier: MIT
#pragma once

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "gpmp/dynamics.hpp"
#include "gpmp/problem.hpp"

namespace gpmp {

/// Which (i, beta) pairs enter the Jacobi-field correction sums of mu'.
/// Full runs beta over 0..r-1, FromOne over 1..r-1.
enum class BetaRange { Full, FromOne };
const char* to_string(BetaRange range);
inline int beta_start(BetaRange range) { return range == BetaRange::Full ? 0 : 1; }

/// k-th derivative of the j-th quartic basis function at t, with
/// basis e^{wt}, e^{-wt}, cos(wt), sin(wt) and w = pi / (2T).
double quartic_basis(double T, int j, double t, int deriv);

/// Rows: value at 0, first derivative at 0, first derivative at T, second
/// derivative at T, of the four quartic basis functions.
Eigen::Matrix4d boundary_matrix(double T);

/// Coefficients of h (A, B), h' (A'..D') and h'' (A''..D'') for every
/// (i, beta), stored at index beta * N + i.
struct HCoefficients {
    double T = 1.0;
    int N = 0;
    int r = 0;
    std::vector<std::array<double, 2>> h;
    std::vector<std::array<double, 4>> hp;
    std::vector<std::array<double, 4>> hpp;
    double condition_number = 0.0;

    int index(int i, int beta) const { return beta * N + i; }
    int size() const { return N * r; }
};

/// Boundary data feeding the h-family: jet values q_(beta), the Lagrangian
/// momenta at t = 0 and the full momenta (with dC/dt) at t = T, each
/// indexed [beta][i].
struct HBoundaryData {
    double T = 1.0;
    std::vector<Vec> q0;
    std::vector<Vec> PL0;
    std::vector<Vec> qT;
    std::vector<Vec> PT;
};

HCoefficients solve_h(const HBoundaryData& data);
HBoundaryData h_boundary_data(const DefiningTriple& triple, const Trajectory& traj);
HCoefficients solve_h(const Trajectory& traj, const DefiningTriple& triple);

/// Values of the three families at t; `deriv` selects the derivative order.
struct HValues {
    std::vector<double> h, hp, hpp;
};
HValues eval_h(const HCoefficients& c, double t, int deriv);

struct HAudit {
    double boundary_residual = 0.0;  // max relative residual over all boundary conditions
    double ode_residual = 0.0;       // max |h'' - h|, |h'''' - w^4 h'|, |h''''' - w^4 h''| at probe times
};
HAudit audit_h(const HCoefficients& c, const HBoundaryData& data, const std::vector<double>& probe_times);

/// Ltilde - L at t: the quadratic h-family terms.
double ltilde_correction(const HCoefficients& c, double t);

/// Base trajectory plus h-family and mu = -int_0^t Ltilde, lambda = 1.
class ExtendedCurve {
public:
    ExtendedCurve() = default;
    /// mu is accumulated with a 10-point Gauss rule on each of `subdiv`
    /// equal parts of every mesh interval.
    static ExtendedCurve build(const DefiningTriple& triple, Trajectory base, int subdiv = 1);

    const Trajectory& base() const { return base_; }
    const HCoefficients& h() const { return h_; }
    double lambda() const { return 1.0; }
    double mu(double t) const;
    /// int_0^t L along the base curve.
    double action(double t) const;
    /// Ltilde = L + 1/2 sum (h_(1)^2 - h'_(2)^2 - h''_(2)^2) + sum (h^2/2 + pi^4/(32 T^4)(h'^2 + h''^2)).
    double ltilde(double t, Side side = Side::Right) const;
    double lagrangian(double t, Side side = Side::Right) const;

private:
    double integrate_piece(double a, double b, bool with_h) const;

    std::shared_ptr<const DefiningTriple> triple_;
    Trajectory base_;
    HCoefficients h_;
    std::vector<double> mu_nodes_;
    std::vector<double> action_nodes_;
    int subdiv_ = 1;
};

double mu_of(const ExtendedCurve& ext, double t);

/// int_0^T L along a trajectory, 5-point Gauss on each mesh interval.
double action_integral(const DefiningTriple& triple, const Trajectory& traj);

/// Point of the extended jet space: jet of q, control, the h-family with
/// derivatives up to 4, mu and its first derivative, lambda.
struct ExtendedPoint {
    JetPoint jet;
    ControlValue u;
    std::array<HValues, 5> hd;  // hd[k] = k-th derivatives
    double mu = 0.0;
    double mu1 = 0.0;
    double lambda = 1.0;
    double ltilde = 0.0;
};

ExtendedPoint extended_point(const DefiningTriple& triple, const ExtendedCurve& ext, double t,
                             Side side = Side::Right);

/// Components of a tangent vector over the extended jet coordinates.
struct ExtendedTangent {
    double dt = 0.0;
    std::vector<Vec> dq;                 // dq[beta][i], beta = 0..r-1 suffices
    std::array<std::vector<double>, 2> dh;    // dh[delta][k], delta = 0..1
    std::array<std::vector<double>, 4> dhp;   // delta = 0..3
    std::array<std::vector<double>, 4> dhpp;  // delta = 0..3
    double dmu = 0.0;
    double dlambda = 0.0;
    ControlValue du;
};

/// Tangent of the prolonged curve through the point (all contact forms vanish on it).
ExtendedTangent lift_tangent(const ExtendedPoint& p, int r);

/// Value of the controlled Poincare-Cartan form on a tangent vector.
double pc_form_pairing(const DefiningTriple& triple, const ExtendedPoint& p, const ExtendedTangent& v);

/// Extended Lagrangian lambda (mu_(1) + Ltilde) + dC/dt at the point.
double extended_lagrangian(const DefiningTriple& triple, const ExtendedPoint& p);

/// int_0^T of the form along the lift, by 10-point Gauss quadrature over the mesh.
double pc_lift_integral(const DefiningTriple& triple, const ExtendedCurve& ext);

}  // namespace gpmp
