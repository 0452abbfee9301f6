// SPDX-License-Identifier: MIT
#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gpmp/classical.hpp"
#include "gpmp/homotopy.hpp"

namespace gpmp {

/// Initial data of the slice (eps, s); receives the slice control.  Must
/// return sigma_0 at s = 0.
using SigmaFamily = std::function<Vec(double eps, double s, const ControlCurve& us)>;

struct NeedleSpec {
    double tau = 0.0;
    ControlValue omega;
    double eps0 = 0.1;
    double k = 0.05;  // ramp width is k eps^2
    SigmaFamily sigma_family;
};

/// Throws BadParams unless [tau - eps0 - k eps0^2, tau + k eps0^2] lies inside (0, T).
void check_needle_spec(const NeedleSpec& spec, double T);

/// omega on [tau - eps, tau), u0 elsewhere.
ControlCurve needle_modification(const ControlCurve& u0, const NeedleSpec& spec, double eps);

/// Replaces the two jumps of a needle by quintic ramps on
/// [tau - eps - k eps^2, tau - eps] and [tau, tau + k eps^2].
ControlCurve smooth_needle(const ControlCurve& needle, const NeedleSpec& spec, double eps);

SigmaFamily frozen_sigma(Vec sigma0);

/// Solves the free initial states (triple.initial.free_states) of each slice
/// so that the full momenta of every non-adjoint coordinate vanish at T.
/// A chord iteration reuses one Jacobian for the lifetime of the family.
SigmaFamily terminal_enforcing_sigma(const DefiningTriple& triple, Vec sigma0);

/// One-shot version of the same solve.  Throws NonSolvableForm when the
/// terminal conditions cannot be met by the free initial states.
Vec enforce_terminal_conditions(const DefiningTriple& triple, const ControlCurve& u, const Vec& sigma_guess);

/// Terminal adjoint data that annihilates the t = T boundary pairing.
struct TransversalityConditions {
    /// Adjoint chain states at T, in triple state order of the adjoint coordinates.
    std::vector<int> states;
    Vec values;
    std::vector<std::string> text;  // e.g. "p''(T) = 1"
    double residual = 0.0;          // max |full momentum| of the non-adjoint block after the solve
    /// Set when the top-order condition is positive, i.e. the even-order
    /// pattern "p^(r-1)(T) = -1" does not carry over.
    bool top_sign_positive = false;
};

/// Requires L affine in the adjoint block; NonSolvableForm otherwise.  The
/// x-part of the jet at T is taken from `traj`.
TransversalityConditions transversality_synthesize(const DefiningTriple& triple, const Trajectory& traj);

/// Agreement of P(w) - P(w') with H(w) - H(w') over a control grid, along
/// `traj` and the classical oracle started from the mapped initial state.
struct OracleAgreement {
    double max_difference_gap = 0.0;
    bool argmax_agrees = true;
};
OracleAgreement cross_validate_transversality(const DefiningTriple& triple, const Trajectory& traj,
                                              const ClassicalProblem& oracle, const std::vector<int>& state_map,
                                              const std::vector<double>& taus, int omega_per_axis = 9);

/// Surface for u(t, s) = (1 - s) u0(t) + s smooth_needle(t), sigma(s) = Sigma(eps, s).
VariationSurface needle_variation(const DefiningTriple& triple, const Trajectory& gamma0, const NeedleSpec& spec,
                                  double eps, int s_intervals = 4, bool extended = false);

/// Closed form of mu'(T, 1) - mu'(T, 0): cost difference, Lagrangian
/// integrals and the boundary momentum pairings at t = T and t = 0.
double delta_mu_prime_closed(const VariationSurface& surface);

struct GoodNResult {
    bool pass = false;
    double residual = 0.0;   // left side of the GoodN inequality; the class needs residual >= 0
    double tolerance = 0.0;  // 1e-6 (1 + |C_0|)
    double eps = 0.0;
};
GoodNResult goodn_check(const DefiningTriple& triple, const VariationSurface& surface, double eps);

struct CorrectiveEstimate {
    std::vector<double> eps;
    std::vector<double> quotients;       // (mu'(T,1) - mu'(T,0)) / eps
    std::vector<double> goodn_residuals;
    double tail_min = 0.0;               // min over the last half of the sequence
    std::optional<double> richardson;    // linear-in-eps extrapolation of the last two quotients
    bool consistent = false;             // false flags InconsistentSequence
    double value = 0.0;                  // richardson when consistent, else tail_min
    bool all_goodn = false;
};

CorrectiveEstimate corrective_term(const DefiningTriple& triple, const Trajectory& gamma0, const NeedleSpec& spec,
                                   const std::vector<double>& eps_sequence);

/// eps0 2^-j for j = 0..count-1.
std::vector<double> default_eps_sequence(double eps0, int count = 7);

struct PMPVerdict {
    double p_at_omega = 0.0;
    double p_at_uo = 0.0;
    CorrectiveEstimate corrective;
    double corrective_used = 0.0;  // 0 when every needle of the sequence is GoodN
    bool satisfied = true;
    double margin = 0.0;           // P(w) - corrective_used - P(u0(tau)); > tolerance is a violation
    double tolerance = 0.0;
};

PMPVerdict gpmp_verdict(const DefiningTriple& triple, const Trajectory& gamma0, const NeedleSpec& spec,
                        const std::vector<double>& eps_sequence);

struct ScanViolation {
    double tau = 0.0;
    ControlValue omega;
    double margin = 0.0;
    double corrective = 0.0;
};

struct ScanReport {
    std::vector<ScanViolation> violations;  // sorted by decreasing margin
    std::vector<double> tau;
    std::vector<double> max_margin;         // per tau, over omega
    std::vector<double> eps_scale;          // per tau, factor applied to eps_sequence
    int verdicts = 0;
};

/// Runs gpmp_verdict over the grid.  Near the ends of [0, T] the eps
/// sequence is scaled down so that every needle fits inside (0, T).
ScanReport pmp_scan(const DefiningTriple& triple, const Trajectory& gamma0, const std::vector<double>& tau_grid,
                    const std::vector<ControlValue>& omega_grid, const std::vector<double>& eps_sequence,
                    const SigmaFamily& sigma, double k = 0.05);

}  // namespace gpmp
