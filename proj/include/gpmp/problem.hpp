// SPDX-License-Identifier: MIT
#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "gpmp/control.hpp"
#include "gpmp/dynamics.hpp"
#include "gpmp/jetspace.hpp"

namespace gpmp {

struct ControlledLagrangian {
    ScalarJetField field;
    int r = 1;
    int N = 1;
};

/// Terminal cost, extended to all times so that it vanishes identically on
/// jets at t = 0.
struct CostFunction {
    ScalarJetField field;
    int order = 0;
};

/// Admissible initial data, expressed on the normal-form initial state
/// (which is equivalent to the initial jet of order 2r - 1).
struct InitialConstraint {
    std::function<bool(const Vec&)> admissible;
    Vec default_state;
    /// State indices left free by the constraint and available to initial
    /// data families (typically the adjoint block).
    std::vector<int> free_states;
    /// Compact box of initial states used by randomized probes.
    Vec probe_lower;
    Vec probe_upper;
};

struct DefiningTriple {
    std::string name;
    ControlSet controls;
    ControlledLagrangian lagrangian;
    CostFunction cost;
    NormalFormDynamics dynamics;
    InitialConstraint initial;
    double T = 1.0;
    int n = 3;
    Tolerances tol;
    /// Configuration coordinates that form the adjoint block (may be empty).
    std::vector<int> adjoint_coords;
    std::vector<std::string> coord_names;

    int r() const { return lagrangian.r; }
    int N() const { return lagrangian.N; }
};

/// Integrates the triple's dynamics after checking admissibility of sigma.
Trajectory solve(const DefiningTriple& triple, const ControlCurve& u, const Vec& sigma);

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct Diagnostics {
    std::vector<CheckResult> checks;
    bool all_pass() const;
    const CheckResult* find(const std::string& name) const;
};

Diagnostics validate_triple(const DefiningTriple& triple, std::uint64_t seed = 7);

/// E_i(L) = dL/dq^i + sum_{beta=1..r} (-1)^beta D^beta (dL/dq^i_(beta)).
Vec el_residual(const ControlledLagrangian& L, const JetPoint& jet, const ControlValue& u);
Vec el_residual(const DefiningTriple& triple, const Trajectory& traj, double t);

/// P[beta][i] = sum_{delta - eps - 1 = beta} (-1)^eps D^eps(dL/dq^i_(delta)),
/// beta = 0..r-1, built from L alone.
std::vector<Vec> lagrangian_momenta(const ControlledLagrangian& L, const JetPoint& jet, const ControlValue& u);

/// Momenta of L + dC/dt.  For a cost of order below r these equal the
/// Lagrangian momenta plus dC/dq_(beta), since the momenta of a total
/// derivative telescope to the plain partials.
std::vector<Vec> full_momenta(const DefiningTriple& triple, const JetPoint& jet, const ControlValue& u);

/// u -> -L(jet, u).
std::function<double(const ControlValue&)> pontryagin_p(const DefiningTriple& triple, const JetPoint& jet);

/// Cost C evaluated on the jet of a trajectory at time t.
double cost_at(const DefiningTriple& triple, const Trajectory& traj, double t);

}  // namespace gpmp
