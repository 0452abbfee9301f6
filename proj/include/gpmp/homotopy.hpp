// SPDX-License-Identifier: MIT
#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "gpmp/auxiliary.hpp"
#include "gpmp/problem.hpp"

namespace gpmp {

/// Family of control curves u(., s) and initial states sigma(s) over s in [0, 1].
/// sigma receives the slice control so that initial-data families may be
/// solved for (terminal-enforcing families do this).
struct ControlHomotopy {
    std::function<ControlCurve(double s)> u;
    std::function<Vec(double s, const ControlCurve& us)> sigma;
    std::vector<double> s_grid;
    double T = 1.0;

    /// u(t, s) = (1 - s) u0(t) + s u1(t), fixed sigma, uniform s-grid.
    static ControlHomotopy blend(const ControlCurve& u0, const ControlCurve& u1, Vec sigma, int s_intervals);
};

/// Uniform grid 0, 1/n, ..., 1.
std::vector<double> unit_grid(int intervals);

struct Slice {
    double s = 0.0;
    ControlCurve u;
    Vec sigma;
    Trajectory traj;
    std::optional<ExtendedCurve> ext;
};

class VariationSurface {
public:
    const DefiningTriple& triple() const { return *triple_; }
    const ControlHomotopy& homotopy() const { return hom_; }
    const std::vector<Slice>& slices() const { return slices_; }
    const std::vector<double>& s_grid() const { return hom_.s_grid; }
    bool extended() const { return extended_; }
    /// Union of control breakpoints over all slices.
    std::vector<double> breakpoints() const;

    /// Y^a at (t, s_k): s-derivative of the control by three-point differences.
    Vec jacobi_u(double t, int k, Side side = Side::Right) const;
    /// Y^i_(beta) for beta = 0..order at (t, s_k), indexed [beta][i].
    std::vector<Vec> jacobi_q(double t, int k, int order, Side side = Side::Right) const;

private:
    friend VariationSurface build_surface(const DefiningTriple&, const ControlHomotopy&, bool);
    std::shared_ptr<const DefiningTriple> triple_;
    ControlHomotopy hom_;
    std::vector<Slice> slices_;
    bool extended_ = true;
};

/// Integrates every slice; with `extended` also solves the h-family and mu.
VariationSurface build_surface(const DefiningTriple& triple, const ControlHomotopy& hom, bool extended = true);

/// C(slice 1 at T) - C(slice 0 at T).
double homotopy_lhs(const VariationSurface& surface);

/// Integrands of the homotopy identity on a (t, s) tensor grid.  t-nodes are
/// per-panel composite Simpson nodes with panels split at control
/// breakpoints; nodes at a panel joint appear once per side.
struct HomotopyTable {
    BetaRange range = BetaRange::Full;
    std::vector<double> t;
    std::vector<Side> side;
    std::vector<double> t_weights;
    std::vector<int> panel_start;                // first node index of each panel
    std::vector<double> s;
    std::vector<std::vector<double>> control;    // [k][j] Y^a dP/du^a
    std::vector<std::vector<double>> mixed;      // [k][j] d2 mu' / dt ds

    /// int_0^T (control - mixed) dt on slice k.
    double slice_integral(int k) const;
    /// int_0^T mixed dt on slice k.
    double mixed_integral(int k) const;
};

HomotopyTable tabulate_homotopy(const VariationSurface& surface, BetaRange range = BetaRange::Full,
                                int t_intervals = 400);

/// -int int [Y^a dP/du^a - d2mu'/dtds] ds dt.
double homotopy_rhs(const HomotopyTable& table);
double homotopy_rhs(const VariationSurface& surface, BetaRange range = BetaRange::Full, int t_intervals = 400);

/// Partial double integral of [Y^a dP/du^a - d2mu'/dtds] over s in [0, delta].
double minimal_labour_W(const HomotopyTable& table, double delta);

/// mu'(T, 1) - mu'(T, 0) as the double integral of the mixed derivative.
double delta_mu_prime_direct(const HomotopyTable& table);

struct InfinitesimalConditions {
    double cost_pairing = 0.0;  // dC(V) at (T, s = 0); necessary: >= 0
    double labour_rate = 0.0;   // s = 0 integral; necessary: <= 0
};
InfinitesimalConditions infinitesimal_conditions(const VariationSurface& surface, const HomotopyTable& table);

/// Poincare-Cartan pairing with the vertical Jacobi field at (t, s_k).
double vertical_pairing(const VariationSurface& surface, double t, int k, Side side = Side::Right);

/// alpha(Y)|_T - alpha(Y)|_0 - int_0^T d2mu'/dtds dt on slice k.
double noether_gap(const VariationSurface& surface, const HomotopyTable& table, int k);

/// mu'(t, s) = mu(t, 0) + int_0^s int_0^t d2mu'/dtds on the table grid, as
/// (t, s, value) rows.
struct MuPrimeSample {
    double t = 0.0;
    double s = 0.0;
    double value = 0.0;
};
std::vector<MuPrimeSample> mu_prime_grid(const VariationSurface& surface, const HomotopyTable& table);

struct BetaRangeVerdict {
    BetaRange chosen = BetaRange::Full;
    double lhs = 0.0;
    double gap_full = 0.0;
    double gap_from_one = 0.0;
};
/// Evaluates the identity under both summation ranges and keeps the smaller gap.
BetaRangeVerdict adjudicate_beta_range(const VariationSurface& surface, int t_intervals = 400);

}  // namespace gpmp
