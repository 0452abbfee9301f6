// SPDX-License-Identifier: MIT
#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <optional>
#include <random>
#include <sstream>

#include "gpmp/auxiliary.hpp"
#include "gpmp/errors.hpp"
#include "gpmp/homotopy.hpp"
#include "gpmp/lipschitz.hpp"
#include "gpmp/needle.hpp"

namespace gpmp::cli {

std::string format_number(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

namespace {

/// One `[suite.name]` block of the report.
class Section {
public:
    explicit Section(std::string name) : name_(std::move(name)) {}

    void put(const std::string& key, const std::string& value) { lines_.push_back(key + " = " + value); }
    void put(const std::string& key, double value) { put(key, format_number(value)); }
    void put(const std::string& key, int value) { put(key, std::to_string(value)); }
    void put(const std::string& key, bool value) { put(key, std::string(value ? "true" : "false")); }
    void row(const std::vector<double>& cells) {
        std::string s = "  ";
        for (std::size_t j = 0; j < cells.size(); ++j) s += (j ? ", " : "") + format_number(cells[j]);
        lines_.push_back(s);
    }
    void text(const std::string& s) { lines_.push_back(s); }

    /// Records a named check; the section fails if any check fails.
    void check(const std::string& key, bool ok) {
        put("check." + key, std::string(ok ? "pass" : "fail"));
        pass_ = pass_ && ok;
    }

    bool pass() const { return pass_; }
    void fail() { pass_ = false; }
    void set_status(std::string s) { status_override_ = std::move(s); }

    void write(std::ostream& os) const {
        os << '[' << name_ << "]\n";
        os << "status = " << (status_override_.empty() ? (pass_ ? "pass" : "fail") : status_override_) << '\n';
        for (const auto& l : lines_) os << l << '\n';
        os << '\n';
    }

private:
    std::string name_;
    std::vector<std::string> lines_;
    bool pass_ = true;
    std::string status_override_;
};

std::string timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

std::string control_text(const ControlValue& u) {
    std::string s;
    for (std::size_t a = 0; a < u.size(); ++a) s += (a ? " " : "") + format_number(u[a]);
    return s;
}

/// Everything the suites share: the wired triple and the reference pair.
struct Setup {
    DefiningTriple triple;
    ControlCurve u0;
    Vec sigma;
    Trajectory gamma0;
    double v = 0.0;
};

Setup prepare(const RunConfig& cfg, Section& run) {
    Setup s{build(cfg.problem), {}, {}, {}, 0.0};
    DefiningTriple& tr = s.triple;
    if (cfg.n_override != 0) {
        if (cfg.n_override < 2 * tr.r() + 1) {
            throw Error(ErrorCode::ConfigError, "jet order n = " + std::to_string(cfg.n_override) + " is below 2r + 1 = " +
                                                    std::to_string(2 * tr.r() + 1));
        }
        tr.n = cfg.n_override;
    }
    if (cfg.reference == "optimal") {
        OptimalReference ref;
        try {
            ref = optimal_reference(cfg.problem);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::NoClosedForm) throw;
            throw Error(ErrorCode::ConfigError, std::string("reference = optimal unavailable: ") + e.what());
        }
        s.u0 = ref.u;
        s.sigma = ref.sigma;
        s.v = cfg.problem.id == "mth-order" ? 0.0 : cfg.problem.v_max;
        run.put("reference_cost_closed_form", ref.cost);
    } else {
        s.u0 = ControlCurve::constant(ControlValue(tr.controls.lower.size(), cfg.u_value), tr.T);
        if (cfg.optimize_v) {
            s.v = optimize_initial_velocity(cfg.problem, s.u0).v;
        } else {
            if (std::abs(cfg.v) > cfg.problem.v_max) throw Error(ErrorCode::ConfigError, "|v| exceeds v_max");
            s.v = cfg.v;
        }
        s.sigma = make_initial_state(cfg.problem, s.v);
    }
    if (cfg.transversal_adjoint && !tr.initial.free_states.empty()) {
        s.sigma = enforce_terminal_conditions(tr, s.u0, s.sigma);
    }
    s.gamma0 = solve(tr, s.u0, s.sigma);
    run.put("problem", tr.name);
    run.put("T", tr.T);
    run.put("r", tr.r());
    run.put("n", tr.n);
    run.put("reference", cfg.reference);
    run.put("u0", control_text(s.u0.value(0.0, Side::Right)));
    run.put("v", s.v);
    run.put("adjoint", std::string(cfg.transversal_adjoint ? "transversal" : "default"));
    run.put("cost", cost_at(tr, s.gamma0, tr.T));
    run.put("seed", std::to_string(cfg.seed));
    return s;
}

std::vector<double> tau_grid(double T, int count) {
    std::vector<double> t(count);
    for (int j = 0; j < count; ++j) t[j] = T * (j + 0.5) / count;
    return t;
}

SigmaFamily sigma_family_for(const Setup& s, const RunConfig& cfg) {
    if (cfg.transversal_adjoint && !s.triple.initial.free_states.empty()) {
        return terminal_enforcing_sigma(s.triple, s.sigma);
    }
    return frozen_sigma(s.sigma);
}

void suite_validate(const Setup& s, const RunConfig& cfg, Section& sec) {
    const Diagnostics d = validate_triple(s.triple, cfg.seed);
    for (const auto& c : d.checks) {
        sec.check(c.name, c.pass);
        if (!c.detail.empty()) sec.put("detail." + c.name, c.detail);
    }
    sec.check("reference_admissible", s.triple.initial.admissible(s.sigma));
}

void suite_homotopy(const Setup& s, const RunConfig& cfg, Section& sec) {
    const DefiningTriple& tr = s.triple;
    const HBoundaryData data = h_boundary_data(tr, s.gamma0);
    const HCoefficients h = solve_h(data);
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> td(0.0, tr.T);
    std::vector<double> probes(10);
    for (double& t : probes) t = td(rng);
    const HAudit audit = audit_h(h, data, probes);
    sec.put("h_condition_number", h.condition_number);
    sec.put("h_boundary_residual", audit.boundary_residual);
    sec.put("h_ode_residual", audit.ode_residual);
    sec.check("h_boundary", audit.boundary_residual <= 1e-9);
    sec.check("h_ode", audit.ode_residual <= 1e-10 * (1.0 + h.condition_number));

    const ExtendedCurve ext = ExtendedCurve::build(tr, s.gamma0);
    const double pc = pc_lift_integral(tr, ext), cost = cost_at(tr, s.gamma0, tr.T);
    sec.put("pc_lift_integral", pc);
    sec.put("pc_lift_gap", pc - cost);
    sec.check("pc_lift", std::abs(pc - cost) <= 1e-6);

    const ControlCurve start = ControlCurve::constant(ControlValue(tr.controls.lower.size(), cfg.homotopy_start), tr.T);
    const ControlHomotopy hom = ControlHomotopy::blend(start, s.u0, s.sigma, cfg.grids.s_intervals);
    const VariationSurface surf = build_surface(tr, hom);
    const BetaRangeVerdict verdict = adjudicate_beta_range(surf, cfg.grids.t_intervals);
    sec.put("beta_range", std::string(to_string(verdict.chosen)));
    sec.put("lhs", verdict.lhs);
    sec.put("gap_full", verdict.gap_full);
    sec.put("gap_from_one", verdict.gap_from_one);
    const double gap = verdict.chosen == BetaRange::Full ? verdict.gap_full : verdict.gap_from_one;
    sec.check("identity", std::abs(gap) <= 1e-3 * (std::abs(verdict.lhs) + 1.0));

    const HomotopyTable table = tabulate_homotopy(surf, verdict.chosen, cfg.grids.t_intervals);
    double vp = 0.0, noether = 0.0;
    const int K = static_cast<int>(surf.s_grid().size()) - 1;
    for (int k : {0, K / 2, K}) {
        vp = std::max(vp, std::abs(vertical_pairing(surf, 0.0, k)));
        noether = std::max(noether, std::abs(noether_gap(surf, table, k)));
    }
    sec.put("vertical_pairing_t0", vp);
    sec.put("noether_gap", noether);
    sec.check("vertical_pairing", vp <= 1e-8);

    sec.text("convergence = t_intervals, rhs, gap");
    for (int div : {4, 2, 1}) {
        const int nt = std::max(4, cfg.grids.t_intervals / div);
        const double rhs = homotopy_rhs(surf, verdict.chosen, nt);
        sec.row({static_cast<double>(nt), rhs, rhs - verdict.lhs});
    }

    if (!cfg.mu_dump_name.empty()) {
        std::ofstream os(cfg.out_dir / cfg.mu_dump_name);
        os << "t,s,value\n";
        for (const auto& m : mu_prime_grid(surf, table)) {
            os << format_number(m.t) << ',' << format_number(m.s) << ',' << format_number(m.value) << '\n';
        }
        sec.put("mu_dump", cfg.mu_dump_name);
    }
}

void suite_needle(const Setup& s, const RunConfig& cfg, Section& sec) {
    const DefiningTriple& tr = s.triple;
    const double T = tr.T, e0 = cfg.grids.eps0, k = cfg.grids.needle_k;
    const double C0 = cost_at(tr, s.gamma0, T);
    const SigmaFamily family = sigma_family_for(s, cfg);
    const std::vector<ControlValue> corners = tr.controls.grid(2);
    sec.text("probes = tau, omega, eps, closed, direct, goodn_residual");
    bool agree = true, goodn = true;
    std::optional<NeedleSpec> first;
    for (double tau : {0.25 * T, 0.5 * T, 0.75 * T}) {
        const double f = std::min({1.0, 0.5 * tau / e0, std::sqrt(0.5 * (T - tau) / k) / e0});
        for (const ControlValue& w : corners) {
            NeedleSpec spec{tau, w, e0 * f, k, family};
            const VariationSurface S = needle_variation(tr, s.gamma0, spec, spec.eps0, 4, true);
            const double closed = delta_mu_prime_closed(S);
            const double direct = delta_mu_prime_direct(tabulate_homotopy(S, BetaRange::Full, cfg.grids.t_intervals));
            const GoodNResult g = goodn_check(tr, S, spec.eps0);
            agree = agree && std::abs(closed - direct) <= 1e-4 * std::max(std::abs(closed), std::abs(direct)) + 1e-9 * (1.0 + std::abs(C0));
            goodn = goodn && g.pass;
            std::vector<double> row{tau};
            row.insert(row.end(), w.begin(), w.end());
            row.insert(row.end(), {spec.eps0, closed, direct, g.residual});
            sec.row(row);
            if (!first && s.u0.value(tau, Side::Left) != w) first = spec;
        }
    }
    sec.check("closed_vs_direct", agree);
    sec.put("goodn_all", goodn);
    if (first) {
        const CorrectiveEstimate est = corrective_term(tr, s.gamma0, *first, default_eps_sequence(first->eps0, cfg.grids.eps_count));
        sec.put("corrective.tau", first->tau);
        sec.put("corrective.omega", control_text(first->omega));
        sec.text("corrective = eps, quotient, goodn_residual");
        for (std::size_t j = 0; j < est.eps.size(); ++j) sec.row({est.eps[j], est.quotients[j], est.goodn_residuals[j]});
        sec.put("corrective.tail_min", est.tail_min);
        if (est.richardson) sec.put("corrective.richardson", *est.richardson);
        sec.put("corrective.value", est.value);
        sec.check("corrective_consistent", est.consistent);
    }
}

void suite_pmp_scan(const Setup& s, const RunConfig& cfg, Section& sec) {
    const DefiningTriple& tr = s.triple;
    const ScanReport rep = pmp_scan(tr, s.gamma0, tau_grid(tr.T, cfg.grids.tau_count), tr.controls.grid(cfg.grids.omega_per_axis),
                                    default_eps_sequence(cfg.grids.eps0, cfg.grids.eps_count), sigma_family_for(s, cfg),
                                    cfg.grids.needle_k);
    sec.put("verdicts", rep.verdicts);
    sec.put("violations", static_cast<int>(rep.violations.size()));
    sec.text("margins = tau, max_margin, eps_scale");
    for (std::size_t j = 0; j < rep.tau.size(); ++j) sec.row({rep.tau[j], rep.max_margin[j], rep.eps_scale[j]});
    const std::size_t shown = std::min<std::size_t>(rep.violations.size(), 20);
    if (shown > 0) sec.text("worst_violations = tau, omega, margin, corrective");
    for (std::size_t j = 0; j < shown; ++j) {
        const ScanViolation& v = rep.violations[j];
        std::vector<double> row{v.tau};
        row.insert(row.end(), v.omega.begin(), v.omega.end());
        row.insert(row.end(), {v.margin, v.corrective});
        sec.row(row);
    }
    sec.check("no_violations", rep.violations.empty());
}

std::vector<int> oracle_state_map(const DefiningTriple& tr) {
    std::vector<int> map;
    for (int c = 0; c < tr.N(); ++c) {
        if (std::find(tr.adjoint_coords.begin(), tr.adjoint_coords.end(), c) != tr.adjoint_coords.end()) continue;
        for (int b = 0; b < tr.dynamics.chain_len[c]; ++b) map.push_back(tr.dynamics.chain_base[c] + b);
    }
    return map;
}

void suite_classical(const Setup& s, const RunConfig& cfg, Section& sec) {
    const DefiningTriple& tr = s.triple;
    ClassicalProblem cp = chain_reduction(cfg.problem);
    const std::vector<int> map = oracle_state_map(tr);
    for (int l = 0; l < cp.nx; ++l) cp.x0[l] = s.gamma0.initial_state()[map[l]];
    const Trajectory xt = integrate_state(cp, s.u0);
    const double oracle_cost = cp.cost.d(xt.state(cp.T)), cost = cost_at(tr, s.gamma0, tr.T);
    sec.put("oracle", cp.name);
    sec.put("oracle_cost", oracle_cost);
    sec.put("cost_gap", cost - oracle_cost);
    sec.check("cost_agreement", std::abs(cost - oracle_cost) <= 1e-8 * (1.0 + std::abs(cost)));

    const std::vector<double> taus = tau_grid(tr.T, cfg.grids.tau_count);
    const ClassicalReport cr = classical_pmp_check(cp, s.u0, taus, cp.K.grid(cfg.grids.omega_per_axis));
    sec.put("oracle_max_gap", cr.max_gap);
    sec.put("oracle_violations", static_cast<int>(cr.violations.size()));
    sec.check("oracle_pmp", cr.violations.empty());

    if (tr.adjoint_coords.empty()) {
        sec.put("transversality", std::string("no adjoint block"));
        return;
    }
    const TransversalityConditions tc = transversality_synthesize(tr, s.gamma0);
    for (const auto& t : tc.text) sec.put("transversality", t);
    sec.put("transversality_residual", tc.residual);
    if (tc.top_sign_positive) sec.put("note", std::string("top-order terminal adjoint condition is positive"));
    const OracleAgreement oa = cross_validate_transversality(tr, s.gamma0, cp, map, taus, cfg.grids.omega_per_axis);
    sec.put("difference_gap", oa.max_difference_gap);
    sec.check("argmax_agrees", oa.argmax_agrees);
    sec.check("difference_gap", oa.max_difference_gap <= 1e-6);
}

void suite_lipschitz(const Setup& s, const RunConfig& cfg, Section& sec) {
    const LipschitzReport rep = lipschitz_probe(s.triple, cfg.grids.lipschitz_pairs, cfg.seed);
    sec.put("pairs", rep.pairs);
    sec.put("skipped", rep.skipped);
    sec.put("cutoff_radius", rep.cutoff_radius);
    sec.put("max_ratio", rep.max_ratio);
    sec.put("mean_ratio", rep.mean_ratio);
    sec.put("max_state_ratio", rep.max_state_ratio);
    sec.check("finite", std::isfinite(rep.max_ratio) && rep.pairs > rep.skipped);
}

void suite_phi(const Setup& s, const RunConfig& cfg, Section& sec) {
    if (cfg.problem.id != "pendulum-direct") {
        sec.set_status("skipped");
        sec.put("reason", std::string("defined for pendulum-direct only"));
        return;
    }
    try {
        const PhiProbeReport rep = phi_surjectivity_probe(s.triple, s.u0, cfg.grids.v_grid,
                                                          [&](double v) { return make_initial_state(cfg.problem, v); });
        sec.put("sin_T", rep.sin_T);
        sec.put("slope", rep.slope);
        sec.put("intercept", rep.intercept);
        sec.put("affinity_residual", rep.affinity_residual);
        sec.check("slope", std::abs(rep.slope - rep.sin_T) <= 1e-9);
        sec.check("affine", rep.affinity_residual <= 1e-9);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::DegenerateHorizon) throw;
        sec.put("degenerate", std::string(e.what()));
        sec.fail();
    }
}

void write_csv(const Setup& s, const RunConfig& cfg) {
    const DefiningTriple& tr = s.triple;
    const NormalFormDynamics& dyn = tr.dynamics;
    auto name_of = [&](int c) { return c < static_cast<int>(tr.coord_names.size()) ? tr.coord_names[c] : "q" + std::to_string(c + 1); };
    std::vector<int> order;
    std::vector<std::string> header;
    for (int pass = 0; pass < 2; ++pass) {
        for (int c = 0; c < tr.N(); ++c) {
            const bool adj = std::find(tr.adjoint_coords.begin(), tr.adjoint_coords.end(), c) != tr.adjoint_coords.end();
            if (adj != (pass == 1)) continue;
            for (int b = 0; b < dyn.chain_len[c]; ++b) {
                order.push_back(dyn.chain_base[c] + b);
                header.push_back(name_of(c) + std::string(static_cast<std::size_t>(b), '\''));
            }
        }
    }
    const int M = static_cast<int>(tr.controls.lower.size());
    std::ofstream os(cfg.out_dir / cfg.csv_name);
    os << "t";
    for (const auto& h : header) os << ',' << h;
    for (int a = 0; a < M; ++a) os << ',' << (M == 1 ? std::string("u") : "u" + std::to_string(a + 1));
    os << '\n';
    const int nodes = cfg.grids.csv_nodes;
    for (int j = 0; j < nodes; ++j) {
        const double t = tr.T * j / (nodes - 1);
        const Vec y = s.gamma0.state(t);
        const ControlValue u = s.u0.value(t, j + 1 == nodes ? Side::Left : Side::Right);
        os << format_number(t);
        for (int i : order) os << ',' << format_number(y[i]);
        for (double ua : u) os << ',' << format_number(ua);
        os << '\n';
    }
}

}  // namespace

RunResult run(const RunConfig& cfg) {
    RunResult result;
    std::ostringstream body;
    Section run_sec("run");
    bool failed = false, numerical = false;
    auto finish = [&](int code) {
        std::ostringstream out;
        out << "# gpmp report generated " << timestamp() << '\n';
        run_sec.put("exit_code", code);
        run_sec.write(out);
        out << body.str();
        result.exit_code = code;
        result.report = out.str();
        std::error_code ec;
        std::filesystem::create_directories(cfg.out_dir, ec);
        std::ofstream(cfg.out_dir / cfg.report_name) << result.report;
        return result;
    };

    Setup setup;
    try {
        std::filesystem::create_directories(cfg.out_dir);
        setup = prepare(cfg, run_sec);
        write_csv(setup, cfg);
    } catch (const Error& e) {
        run_sec.put("error", std::string(e.what()));
        run_sec.fail();
        const bool config = e.code() == ErrorCode::ConfigError || e.code() == ErrorCode::BadParams;
        return finish(config ? BadConfig : NumericalFailure);
    } catch (const std::exception& e) {
        run_sec.put("error", std::string(e.what()));
        run_sec.fail();
        return finish(NumericalFailure);
    }

    using SuiteFn = void (*)(const Setup&, const RunConfig&, Section&);
    const std::vector<std::pair<std::string, SuiteFn>> table{
        {"validate", suite_validate},   {"homotopy", suite_homotopy}, {"needle", suite_needle},
        {"pmp-scan", suite_pmp_scan},   {"classical-cross", suite_classical}, {"lipschitz", suite_lipschitz},
        {"phi-probe", suite_phi},
    };
    for (const auto& [name, fn] : table) {
        if (std::find(cfg.suites.begin(), cfg.suites.end(), name) == cfg.suites.end()) continue;
        Section sec("suite." + name);
        try {
            fn(setup, cfg, sec);
        } catch (const Error& e) {
            sec.put("error", std::string(e.what()));
            sec.set_status("error");
            numerical = true;
        }
        failed = failed || !sec.pass();
        sec.write(body);
    }
    return finish(numerical ? NumericalFailure : failed ? Violation : Ok);
}

}  // namespace gpmp::cli
