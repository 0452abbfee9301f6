// SPDX-License-Identifier: MIT
#include "gpmp/needle.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <optional>
#include <sstream>

#include <Eigen/Dense>

#include "gpmp/errors.hpp"
#include "gpmp/quadrature.hpp"

namespace gpmp {

namespace {

bool is_adjoint(const DefiningTriple& tr, int i) {
    return std::find(tr.adjoint_coords.begin(), tr.adjoint_coords.end(), i) != tr.adjoint_coords.end();
}

/// Full momenta of the non-adjoint coordinates at the jet.
Vec terminal_residual(const DefiningTriple& tr, const JetPoint& jetT, const ControlValue& uT) {
    const std::vector<Vec> P = full_momenta(tr, jetT, uT);
    Vec F;
    for (int beta = 0; beta < tr.r(); ++beta) {
        for (int i = 0; i < tr.N(); ++i) {
            if (!is_adjoint(tr, i)) F.push_back(P[beta][i]);
        }
    }
    return F;
}

Vec terminal_residual(const DefiningTriple& tr, const Trajectory& traj) {
    const JetPoint jet = jet_of_trajectory(traj, tr.T, 2 * tr.r() - 1, Side::Left);
    return terminal_residual(tr, jet, traj.control().value(tr.T, Side::Left));
}

double inf_norm(const Vec& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

Eigen::VectorXd as_eigen(const Vec& v) { return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size())); }

/// Chord iteration on the free initial states; the Jacobian is built once
/// by forward differences and kept until an iteration stalls.
class ChordSolver {
public:
    explicit ChordSolver(DefiningTriple tr) : tr_(std::move(tr)) {}

    Vec solve(const ControlCurve& u, Vec sigma) {
        const auto& free = tr_.initial.free_states;
        if (free.empty()) throw Error(ErrorCode::NonSolvableForm, tr_.name + " has no free initial states to solve for");
        for (int attempt = 0; attempt < 2; ++attempt) {
            if (!qr_) factor(u, sigma);
            double prev = std::numeric_limits<double>::infinity();
            for (int it = 0; it < 8; ++it) {
                const Vec F = residual(u, sigma);
                const double nf = inf_norm(F);
                const double scale = 1.0 + inf_norm(sigma);
                if (nf <= 10.0 * tr_.tol.rtol * scale || (nf >= 0.5 * prev && nf <= 1e-6 * scale)) return sigma;
                if (nf >= prev) break;
                prev = nf;
                const Eigen::VectorXd dz = qr_->solve(-as_eigen(F));
                for (std::size_t k = 0; k < free.size(); ++k) sigma[free[k]] += dz(static_cast<Eigen::Index>(k));
            }
            qr_.reset();
        }
        throw Error(ErrorCode::NonSolvableForm, "terminal conditions of " + tr_.name + " cannot be met by the free initial states");
    }

private:
    Vec residual(const ControlCurve& u, const Vec& sigma) const { return terminal_residual(tr_, solve_traj(u, sigma)); }
    Trajectory solve_traj(const ControlCurve& u, const Vec& sigma) const { return solve(tr_, u, sigma); }
    static Trajectory solve(const DefiningTriple& tr, const ControlCurve& u, const Vec& sigma) {
        return gpmp::solve(tr, u, sigma);
    }

    void factor(const ControlCurve& u, const Vec& sigma) {
        const auto& free = tr_.initial.free_states;
        const Vec F0 = residual(u, sigma);
        Eigen::MatrixXd J(static_cast<Eigen::Index>(F0.size()), static_cast<Eigen::Index>(free.size()));
        for (std::size_t k = 0; k < free.size(); ++k) {
            Vec s = sigma;
            const double h = 1e-3 * std::max(1.0, std::abs(s[free[k]]));
            s[free[k]] += h;
            const Vec F = residual(u, s);
            for (std::size_t e = 0; e < F.size(); ++e) J(static_cast<Eigen::Index>(e), static_cast<Eigen::Index>(k)) = (F[e] - F0[e]) / h;
        }
        qr_.emplace(J);
        if (qr_->rank() < static_cast<Eigen::Index>(free.size())) {
            qr_.reset();
            throw Error(ErrorCode::NonSolvableForm, "free initial states do not determine the terminal conditions");
        }
    }

    DefiningTriple tr_;
    std::optional<Eigen::ColPivHouseholderQR<Eigen::MatrixXd>> qr_;
};

std::string derivative_name(const std::string& base, int beta) {
    return base + std::string(static_cast<std::size_t>(beta), '\'') + "(T)";
}

struct NeedleTerms {
    double cost_diff = 0.0;     // C1 - C0
    double action_diff = 0.0;   // int L1 - int L0
    double momenta_T = 0.0;     // int_0^1 P^L . Y at T
    double momenta_0 = 0.0;     // int_0^1 P^L . Y at 0
    double cost_pairing = 0.0;  // int_0^1 dC/dq . Y at T
    double cost0 = 0.0;
};

NeedleTerms needle_terms(const VariationSurface& S) {
    const DefiningTriple& tr = S.triple();
    const auto& slices = S.slices();
    const int r = tr.r(), N = tr.N();
    const double T = tr.T;
    const int K = static_cast<int>(slices.size());
    NeedleTerms out;
    out.cost0 = cost_at(tr, slices.front().traj, T);
    out.cost_diff = cost_at(tr, slices.back().traj, T) - out.cost0;
    out.action_diff = action_integral(tr, slices.back().traj) - action_integral(tr, slices.front().traj);
    const int ctop = std::min(tr.cost.order, r - 1);
    std::vector<double> bT(K), b0(K), cT(K);
    for (int k = 0; k < K; ++k) {
        const Trajectory& traj = slices[k].traj;
        for (const auto& [t, side, target] : {std::tuple{T, Side::Left, &bT}, std::tuple{0.0, Side::Right, &b0}}) {
            const JetPoint jet = jet_of_trajectory(traj, t, 2 * r - 1, side);
            const ControlValue u = traj.control().value(t, side);
            const std::vector<Vec> P = lagrangian_momenta(tr.lagrangian, jet, u);
            const std::vector<Vec> Y = S.jacobi_q(t, k, r - 1, side);
            double acc = 0.0;
            for (int beta = 0; beta < r; ++beta) {
                for (int i = 0; i < N; ++i) acc += P[beta][i] * Y[beta][i];
            }
            (*target)[k] = acc;
            if (t == T) {
                const JetArgs<double> args = make_args(jet, u);
                double c = 0.0;
                for (int beta = 0; beta <= ctop; ++beta) {
                    for (int i = 0; i < N; ++i) c += tr.cost.field.partial(Coord::q(i, beta)).d(args) * Y[beta][i];
                }
                cT[k] = c;
            }
        }
    }
    const auto& s = S.s_grid();
    out.momenta_T = cumulative_quadratic(s, bT).back();
    out.momenta_0 = cumulative_quadratic(s, b0).back();
    out.cost_pairing = cumulative_quadratic(s, cT).back();
    return out;
}

double closed_form(const NeedleTerms& n) { return n.cost_diff - n.action_diff + n.momenta_T - n.momenta_0; }

GoodNResult goodn_from(const NeedleTerms& n, double eps) {
    GoodNResult g;
    g.residual = n.action_diff - n.cost_pairing - n.momenta_T + n.momenta_0;
    g.tolerance = 1e-6 * (1.0 + std::abs(n.cost0));
    g.eps = eps;
    g.pass = g.residual >= -g.tolerance;
    return g;
}

}  // namespace

void check_needle_spec(const NeedleSpec& spec, double T) {
    const double e = spec.eps0, ramp = spec.k * e * e;
    if (!(e > 0.0)) throw Error(ErrorCode::BadParams, "needle width must be positive");
    if (!(spec.k > 0.0 && spec.k < 1.0)) throw Error(ErrorCode::BadParams, "ramp fraction k must lie in (0, 1)");
    if (!(spec.tau - e - ramp > 0.0) || !(spec.tau + ramp < T)) {
        throw Error(ErrorCode::BadParams, "needle support does not fit inside (0, T)");
    }
}

ControlCurve needle_modification(const ControlCurve& u0, const NeedleSpec& spec, double eps) {
    if (!(eps > 0.0) || eps > spec.eps0 * (1.0 + 1e-12)) throw Error(ErrorCode::BadParams, "needle width outside (0, eps0]");
    return ControlCurve::needle(u0, spec.tau, spec.omega, eps);
}

ControlCurve smooth_needle(const ControlCurve& needle, const NeedleSpec& spec, double eps) {
    if (!(eps > 0.0) || eps > spec.eps0 * (1.0 + 1e-12)) throw Error(ErrorCode::BadParams, "needle width outside (0, eps0]");
    return ControlCurve::smoothed_needle(needle, spec.tau, spec.omega, eps, spec.k * eps * eps);
}

SigmaFamily frozen_sigma(Vec sigma0) {
    return [sigma0 = std::move(sigma0)](double, double, const ControlCurve&) { return sigma0; };
}

SigmaFamily terminal_enforcing_sigma(const DefiningTriple& triple, Vec sigma0) {
    auto solver = std::make_shared<ChordSolver>(triple);
    return [solver, sigma0 = std::move(sigma0)](double, double s, const ControlCurve& us) {
        if (s == 0.0) return sigma0;
        return solver->solve(us, sigma0);
    };
}

Vec enforce_terminal_conditions(const DefiningTriple& triple, const ControlCurve& u, const Vec& sigma_guess) {
    ChordSolver solver(triple);
    return solver.solve(u, sigma_guess);
}

TransversalityConditions transversality_synthesize(const DefiningTriple& triple, const Trajectory& traj) {
    const double T = triple.T;
    const NormalFormDynamics& dyn = triple.dynamics;
    if (triple.adjoint_coords.empty()) {
        throw Error(ErrorCode::NonSolvableForm, triple.name + " has no adjoint block");
    }
    TransversalityConditions out;
    for (int c : triple.adjoint_coords) {
        for (int beta = 0; beta < dyn.chain_len[c]; ++beta) out.states.push_back(dyn.chain_base[c] + beta);
    }
    const Vec yT = traj.state(T);
    const ControlValue uT = traj.control().value(T, Side::Left);
    auto F = [&](const Vec& z) {
        Vec y = yT;
        for (std::size_t k = 0; k < z.size(); ++k) y[out.states[k]] = z[k];
        const JetPoint jet = jet_from_state(dyn, traj.control(), T, y, 2 * triple.r() - 1, Side::Left);
        return terminal_residual(triple, jet, uT);
    };
    const std::size_t nz = out.states.size();
    const Vec F0 = F(Vec(nz, 0.0));
    Eigen::MatrixXd J(static_cast<Eigen::Index>(F0.size()), static_cast<Eigen::Index>(nz));
    double scale = 1.0 + inf_norm(F0);
    for (std::size_t k = 0; k < nz; ++k) {
        Vec e(nz, 0.0);
        e[k] = 1.0;
        const Vec F1 = F(e);
        e[k] = 2.0;
        const Vec F2 = F(e);
        for (std::size_t q = 0; q < F0.size(); ++q) {
            const double d1 = F1[q] - F0[q], d2 = F2[q] - F0[q];
            if (std::abs(d2 - 2.0 * d1) > 1e-8 * (scale + std::abs(d2))) {
                throw Error(ErrorCode::NonSolvableForm, "Lagrangian is not affine in the adjoint block");
            }
            J(static_cast<Eigen::Index>(q), static_cast<Eigen::Index>(k)) = d1;
            scale = std::max(scale, std::abs(d1));
        }
    }
    const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(J);
    if (qr.rank() < static_cast<Eigen::Index>(nz)) {
        throw Error(ErrorCode::NonSolvableForm, "terminal conditions do not determine the adjoint jet");
    }
    const Eigen::VectorXd z = qr.solve(-as_eigen(F0));
    out.values.assign(z.data(), z.data() + z.size());
    for (double& v : out.values) {
        if (std::abs(v) < 1e-13 * scale) v = 0.0;
    }
    out.residual = inf_norm(F(out.values));
    if (out.residual > 1e-8 * scale) {
        throw Error(ErrorCode::NonSolvableForm, "terminal conditions are inconsistent");
    }
    std::size_t k = 0;
    for (int c : triple.adjoint_coords) {
        const std::string name = c < static_cast<int>(triple.coord_names.size()) ? triple.coord_names[c] : "q" + std::to_string(c);
        for (int beta = 0; beta < dyn.chain_len[c]; ++beta, ++k) {
            std::ostringstream os;
            os.precision(12);
            os << derivative_name(name, beta) << " = " << out.values[k];
            out.text.push_back(os.str());
            if (triple.r() >= 2 && beta == dyn.chain_len[c] - 1 && out.values[k] > 0.0) out.top_sign_positive = true;
        }
    }
    return out;
}

OracleAgreement cross_validate_transversality(const DefiningTriple& triple, const Trajectory& traj,
                                              const ClassicalProblem& oracle, const std::vector<int>& state_map,
                                              const std::vector<double>& taus, int omega_per_axis) {
    ClassicalProblem cp = oracle;
    for (int l = 0; l < cp.nx; ++l) cp.x0[l] = traj.initial_state()[state_map[l]];
    const Trajectory xt = integrate_state(cp, traj.control());
    const Trajectory pt = adjoint_integrate(cp, xt, traj.control(), terminal_adjoint(cp, xt.state(cp.T)));
    const std::vector<ControlValue> grid = triple.controls.grid(omega_per_axis);
    OracleAgreement out;
    for (double tau : taus) {
        const auto P = pontryagin_p(triple, jet_of_trajectory(traj, tau, triple.r(), Side::Left));
        const auto H = hamiltonian(cp, tau, xt.state(tau), pt.state(tau));
        const double p0 = P(grid.front()), h0 = H(grid.front());
        std::size_t bp = 0, bh = 0;
        std::vector<double> hv(grid.size());
        for (std::size_t g = 0; g < grid.size(); ++g) {
            const double pv = P(grid[g]);
            hv[g] = H(grid[g]);
            out.max_difference_gap = std::max(out.max_difference_gap, std::abs((pv - p0) - (hv[g] - h0)));
            if (pv > P(grid[bp])) bp = g;
            if (hv[g] > hv[bh]) bh = g;
        }
        if (hv[bp] < hv[bh] - 1e-9 * (1.0 + std::abs(hv[bh]))) out.argmax_agrees = false;
    }
    return out;
}

VariationSurface needle_variation(const DefiningTriple& triple, const Trajectory& gamma0, const NeedleSpec& spec,
                                  double eps, int s_intervals, bool extended) {
    check_needle_spec(spec, triple.T);
    const ControlCurve u0 = gamma0.control();
    const ControlCurve smooth = smooth_needle(needle_modification(u0, spec, eps), spec, eps);
    const SigmaFamily family = spec.sigma_family ? spec.sigma_family : frozen_sigma(gamma0.initial_state());
    ControlHomotopy hom;
    hom.T = triple.T;
    hom.s_grid = unit_grid(s_intervals);
    hom.u = [u0, smooth](double s) {
        if (s == 0.0) return u0;
        if (s == 1.0) return smooth;
        return ControlCurve::blend(u0, smooth, s);
    };
    hom.sigma = [family, eps](double s, const ControlCurve& us) { return family(eps, s, us); };
    return build_surface(triple, hom, extended);
}

double delta_mu_prime_closed(const VariationSurface& surface) { return closed_form(needle_terms(surface)); }

GoodNResult goodn_check(const DefiningTriple& triple, const VariationSurface& surface, double eps) {
    (void)triple;
    return goodn_from(needle_terms(surface), eps);
}

std::vector<double> default_eps_sequence(double eps0, int count) {
    std::vector<double> e(count);
    for (int j = 0; j < count; ++j) e[j] = std::ldexp(eps0, -j);
    return e;
}

CorrectiveEstimate corrective_term(const DefiningTriple& triple, const Trajectory& gamma0, const NeedleSpec& spec,
                                   const std::vector<double>& eps_sequence) {
    if (eps_sequence.size() < 3) throw Error(ErrorCode::BadParams, "eps sequence needs at least three widths");
    for (std::size_t j = 0; j < eps_sequence.size(); ++j) {
        const double e = eps_sequence[j];
        if (!(e > 0.0) || e > spec.eps0 * (1.0 + 1e-12) || (j > 0 && !(e < eps_sequence[j - 1]))) {
            throw Error(ErrorCode::BadParams, "eps sequence must decrease strictly inside (0, eps0]");
        }
    }
    CorrectiveEstimate est;
    est.all_goodn = true;
    for (double e : eps_sequence) {
        const VariationSurface S = needle_variation(triple, gamma0, spec, e);
        const NeedleTerms n = needle_terms(S);
        const GoodNResult g = goodn_from(n, e);
        est.eps.push_back(e);
        est.quotients.push_back(closed_form(n) / e);
        est.goodn_residuals.push_back(g.residual);
        est.all_goodn = est.all_goodn && g.pass;
    }
    const std::size_t n = est.quotients.size();
    est.tail_min = *std::min_element(est.quotients.begin() + static_cast<std::ptrdiff_t>(n / 2), est.quotients.end());
    const double e1 = est.eps[n - 2], e2 = est.eps[n - 1];
    est.richardson = (e1 * est.quotients[n - 1] - e2 * est.quotients[n - 2]) / (e1 - e2);
    const double floor = 1e-8 * (1.0 + std::abs(cost_at(triple, gamma0, triple.T)));
    if (inf_norm(est.quotients) <= floor) {
        est.consistent = true;
    } else {
        est.consistent = true;
        for (std::size_t j = n - 3; j + 1 < n; ++j) {
            const double d_prev = std::abs(est.quotients[j] - est.quotients[j - 1]);
            const double d = std::abs(est.quotients[j + 1] - est.quotients[j]);
            if (d > 0.9 * d_prev + floor) est.consistent = false;
        }
    }
    est.value = est.consistent ? *est.richardson : est.tail_min;
    return est;
}

PMPVerdict gpmp_verdict(const DefiningTriple& triple, const Trajectory& gamma0, const NeedleSpec& spec,
                        const std::vector<double>& eps_sequence) {
    check_needle_spec(spec, triple.T);
    const JetPoint jet = jet_of_trajectory(gamma0, spec.tau, triple.r(), Side::Left);
    const ControlValue u_tau = gamma0.control().value(spec.tau, Side::Left);
    const auto P = pontryagin_p(triple, jet);
    PMPVerdict v;
    v.p_at_omega = P(spec.omega);
    v.p_at_uo = P(u_tau);
    v.tolerance = 1e-6 * (1.0 + std::abs(v.p_at_uo));
    double diff = 0.0;
    for (std::size_t a = 0; a < u_tau.size(); ++a) diff = std::max(diff, std::abs(u_tau[a] - spec.omega[a]));
    if (diff == 0.0) {
        v.margin = v.p_at_omega - v.p_at_uo;
        v.satisfied = true;
        return v;
    }
    v.corrective = corrective_term(triple, gamma0, spec, eps_sequence);
    v.corrective_used = v.corrective.all_goodn ? 0.0 : v.corrective.value;
    v.margin = v.p_at_omega - v.corrective_used - v.p_at_uo;
    v.satisfied = v.margin <= v.tolerance;
    return v;
}

ScanReport pmp_scan(const DefiningTriple& triple, const Trajectory& gamma0, const std::vector<double>& tau_grid,
                    const std::vector<ControlValue>& omega_grid, const std::vector<double>& eps_sequence,
                    const SigmaFamily& sigma, double k) {
    if (tau_grid.empty() || omega_grid.empty() || eps_sequence.empty()) {
        throw Error(ErrorCode::BadParams, "pmp scan needs nonempty grids");
    }
    const double T = triple.T;
    ScanReport rep;
    for (double tau : tau_grid) {
        const double e0 = eps_sequence.front();
        double f = std::min({1.0, 0.5 * tau / e0, std::sqrt(0.5 * (T - tau) / k) / e0});
        if (!(f > 0.0)) throw Error(ErrorCode::BadParams, "tau grid must lie inside (0, T)");
        std::vector<double> eps = eps_sequence;
        for (double& e : eps) e *= f;
        double worst = -std::numeric_limits<double>::infinity();
        for (const ControlValue& w : omega_grid) {
            NeedleSpec spec{tau, w, eps.front(), k, sigma};
            const PMPVerdict v = gpmp_verdict(triple, gamma0, spec, eps);
            ++rep.verdicts;
            worst = std::max(worst, v.margin);
            if (!v.satisfied) rep.violations.push_back({tau, w, v.margin, v.corrective_used});
        }
        rep.tau.push_back(tau);
        rep.max_margin.push_back(worst);
        rep.eps_scale.push_back(f);
    }
    std::stable_sort(rep.violations.begin(), rep.violations.end(),
                     [](const ScanViolation& a, const ScanViolation& b) { return a.margin > b.margin; });
    return rep;
}

}  // namespace gpmp
