// SPDX-License-Identifier: MIT
#pragma once

#include <numbers>
#include <string>
#include <vector>

#include "gpmp/classical.hpp"
#include "gpmp/problem.hpp"

namespace gpmp {

/// Named worked problems.  Ids: pendulum-classical, pendulum-r2,
/// pendulum-direct, mth-order (coefficients `a`), third-order
/// (x''' = c0 x + c1 x' + c2 x'' + gain u).
struct BuiltinParams {
    std::string id = "pendulum-r2";
    double T = std::numbers::pi / 2;
    double v_max = 1.0;
    Vec a;                            // a_0..a_m for mth-order
    Vec f_coeffs{0.0, 0.0, 0.0};      // c0, c1, c2 for third-order
    double f_gain = 1.0;
    Tolerances tol{1e-10, 1e-12};
    /// Fill the default initial adjoint data so the transversality
    /// conditions hold under the reference control u = +1.
    bool transversal_default = true;
};

std::vector<std::string> builtin_ids();

/// Wired triple; throws BadParams for invalid parameters.
DefiningTriple build(const BuiltinParams& params);

/// Pendulum as a classical first-order problem x1' = x2, x2' = -x1 + u, C = -x1(T).
ClassicalProblem pendulum_classical_problem(double T, double v_max, Tolerances tol = {1e-10, 1e-12});

/// First-order chain reduction of the higher-order x-equation of a builtin,
/// with C = -x(T) and matching initial x-data.  Used as the oracle for
/// transversality synthesis.
ClassicalProblem chain_reduction(const BuiltinParams& params);

/// Normal-form initial state with x(0) = 0, x'(0) = v and the given adjoint
/// initial data (empty means zeros).
Vec make_initial_state(const BuiltinParams& params, double v, const Vec& adjoint = {});

struct OptimalReference {
    ControlCurve u;
    Vec sigma;
    double cost = 0.0;
};

/// Closed-form optimum; NoClosedForm outside the solved families.
OptimalReference optimal_reference(const BuiltinParams& params);

struct VelocityOptimum {
    double v = 0.0;
    double cost = 0.0;
};

/// 1-D scan plus golden-section refinement of the cost over x'(0) in
/// [-v_max, v_max] for a fixed control.
VelocityOptimum optimize_initial_velocity(const BuiltinParams& params, const ControlCurve& u, int scan = 21);

}  // namespace gpmp
