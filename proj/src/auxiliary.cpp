// SPDX-License-Identifier: MIT
#include "gpmp/auxiliary.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss.hpp>

#include "gpmp/errors.hpp"

namespace gpmp {

using boost::math::quadrature::gauss;

const char* to_string(BetaRange range) { return range == BetaRange::Full ? "0..r-1" : "1..r-1"; }

double quartic_basis(double T, int j, double t, int deriv) {
    const double w = std::numbers::pi / (2.0 * T);
    const double wk = std::pow(w, deriv);
    switch (j) {
        case 0: return wk * std::exp(w * t);
        case 1: return (deriv % 2 == 0 ? 1.0 : -1.0) * wk * std::exp(-w * t);
        case 2: return wk * std::cos(w * t + deriv * std::numbers::pi / 2.0);
        default: return wk * std::sin(w * t + deriv * std::numbers::pi / 2.0);
    }
}

Eigen::Matrix4d boundary_matrix(double T) {
    Eigen::Matrix4d A;
    for (int j = 0; j < 4; ++j) {
        A(0, j) = quartic_basis(T, j, 0.0, 0);
        A(1, j) = quartic_basis(T, j, 0.0, 1);
        A(2, j) = quartic_basis(T, j, T, 1);
        A(3, j) = quartic_basis(T, j, T, 2);
    }
    // cos and sin at w T = pi/2 are exact zeros and ones.
    A(0, 3) = 0.0;
    A(1, 2) = 0.0;
    A(2, 3) = 0.0;
    A(3, 2) = 0.0;
    return A;
}

HCoefficients solve_h(const HBoundaryData& data) {
    HCoefficients c;
    c.T = data.T;
    c.r = static_cast<int>(data.q0.size());
    c.N = c.r > 0 ? static_cast<int>(data.q0.front().size()) : 0;
    const Eigen::Matrix4d A = boundary_matrix(data.T);
    const Eigen::PartialPivLU<Eigen::Matrix4d> lu(A);
    const double rcond = lu.rcond();
    if (!(rcond > 1e-15) || !std::isfinite(lu.determinant()) || lu.determinant() == 0.0) {
        throw Error(ErrorCode::SingularBoundaryMatrix, "boundary matrix is numerically singular");
    }
    c.condition_number = 1.0 / rcond;
    c.h.resize(c.size());
    c.hp.resize(c.size());
    c.hpp.resize(c.size());
    const double eT = std::exp(data.T), emT = std::exp(-data.T);
    for (int beta = 0; beta < c.r; ++beta) {
        for (int i = 0; i < c.N; ++i) {
            const int k = c.index(i, beta);
            const double q0 = data.q0[beta][i], p0 = data.PL0[beta][i];
            const double Acoef = 0.5 * (q0 - p0), Bcoef = 0.5 * (q0 + p0);
            c.h[k] = {Acoef, Bcoef};
            const Eigen::Vector4d cp = lu.solve(Eigen::Vector4d(0.0, 0.0, data.qT[beta][i], data.PT[beta][i]));
            const double hT = Acoef * eT + Bcoef * emT;
            const double h1T = Acoef * eT - Bcoef * emT;
            const Eigen::Vector4d cpp = lu.solve(Eigen::Vector4d(0.0, 0.0, hT, h1T));
            for (int j = 0; j < 4; ++j) {
                c.hp[k][j] = cp(j);
                c.hpp[k][j] = cpp(j);
            }
        }
    }
    return c;
}

HBoundaryData h_boundary_data(const DefiningTriple& triple, const Trajectory& traj) {
    const int r = triple.r();
    const double T = triple.T;
    HBoundaryData d;
    d.T = T;
    const JetPoint j0 = jet_of_trajectory(traj, 0.0, 2 * r - 1, Side::Right);
    const JetPoint jT = jet_of_trajectory(traj, T, 2 * r - 1, Side::Left);
    const ControlValue u0 = traj.control().value(0.0, Side::Right);
    const ControlValue uT = traj.control().value(T, Side::Left);
    d.PL0 = lagrangian_momenta(triple.lagrangian, j0, u0);
    d.PT = full_momenta(triple, jT, uT);
    for (int beta = 0; beta < r; ++beta) {
        d.q0.push_back(j0.blocks[beta]);
        d.qT.push_back(jT.blocks[beta]);
    }
    return d;
}

HCoefficients solve_h(const Trajectory& traj, const DefiningTriple& triple) {
    return solve_h(h_boundary_data(triple, traj));
}

HValues eval_h(const HCoefficients& c, double t, int deriv) {
    HValues v;
    v.h.resize(c.size());
    v.hp.resize(c.size());
    v.hpp.resize(c.size());
    double basis[4];
    for (int j = 0; j < 4; ++j) basis[j] = quartic_basis(c.T, j, t, deriv);
    const double et = std::exp(t), emt = (deriv % 2 == 0 ? 1.0 : -1.0) * std::exp(-t);
    for (int k = 0; k < c.size(); ++k) {
        v.h[k] = c.h[k][0] * et + c.h[k][1] * emt;
        double a = 0.0, b = 0.0;
        for (int j = 0; j < 4; ++j) {
            a += c.hp[k][j] * basis[j];
            b += c.hpp[k][j] * basis[j];
        }
        v.hp[k] = a;
        v.hpp[k] = b;
    }
    return v;
}

HAudit audit_h(const HCoefficients& c, const HBoundaryData& data, const std::vector<double>& probe_times) {
    HAudit out;
    auto rel = [](double value, double target) {
        return std::abs(value - target) / std::max(1.0, std::abs(target));
    };
    const HValues v0 = eval_h(c, 0.0, 0), d0 = eval_h(c, 0.0, 1);
    const HValues vT = eval_h(c, c.T, 0), dT = eval_h(c, c.T, 1), ddT = eval_h(c, c.T, 2);
    for (int beta = 0; beta < c.r; ++beta) {
        for (int i = 0; i < c.N; ++i) {
            const int k = c.index(i, beta);
            const double res[] = {
                rel(v0.h[k], data.q0[beta][i]),  rel(d0.h[k], -data.PL0[beta][i]),
                rel(v0.hp[k], 0.0),              rel(d0.hp[k], 0.0),
                rel(dT.hp[k], data.qT[beta][i]), rel(ddT.hp[k], data.PT[beta][i]),
                rel(v0.hpp[k], 0.0),             rel(d0.hpp[k], 0.0),
                rel(dT.hpp[k], vT.h[k]),         rel(ddT.hpp[k], dT.h[k]),
            };
            for (double x : res) out.boundary_residual = std::max(out.boundary_residual, x);
        }
    }
    const double w = std::numbers::pi / (2.0 * c.T);
    const double w4 = w * w * w * w;
    for (double t : probe_times) {
        const HValues a0 = eval_h(c, t, 0), a2 = eval_h(c, t, 2), a4 = eval_h(c, t, 4);
        for (int k = 0; k < c.size(); ++k) {
            const double r1 = std::abs(a2.h[k] - a0.h[k]) / (1.0 + std::abs(a0.h[k]));
            const double r2 = std::abs(a4.hp[k] - w4 * a0.hp[k]) / (1.0 + std::abs(a4.hp[k]));
            const double r3 = std::abs(a4.hpp[k] - w4 * a0.hpp[k]) / (1.0 + std::abs(a4.hpp[k]));
            out.ode_residual = std::max({out.ode_residual, r1, r2, r3});
        }
    }
    return out;
}

double ltilde_correction(const HCoefficients& c, double t) {
    const HValues v0 = eval_h(c, t, 0), v1 = eval_h(c, t, 1), v2 = eval_h(c, t, 2);
    const double w4half = std::pow(std::numbers::pi, 4) / (32.0 * std::pow(c.T, 4));
    double acc = 0.0;
    for (int k = 0; k < c.size(); ++k) {
        acc += 0.5 * (v1.h[k] * v1.h[k] - v2.hp[k] * v2.hp[k] - v2.hpp[k] * v2.hpp[k]);
        acc += 0.5 * v0.h[k] * v0.h[k] + w4half * (v0.hp[k] * v0.hp[k] + v0.hpp[k] * v0.hpp[k]);
    }
    return acc;
}

namespace {

double ltilde_from(const DefiningTriple& triple, const HCoefficients& h, const JetPoint& jet,
                   const ControlValue& u, double t) {
    return triple.lagrangian.field(jet, u) + ltilde_correction(h, t);
}

}  // namespace

ExtendedCurve ExtendedCurve::build(const DefiningTriple& triple, Trajectory base, int subdiv) {
    ExtendedCurve e;
    e.triple_ = std::make_shared<const DefiningTriple>(triple);
    e.h_ = solve_h(base, triple);
    e.base_ = std::move(base);
    e.subdiv_ = std::max(1, subdiv);
    const auto& mesh = e.base_.mesh();
    e.mu_nodes_.assign(mesh.size(), 0.0);
    e.action_nodes_.assign(mesh.size(), 0.0);
    for (std::size_t k = 0; k + 1 < mesh.size(); ++k) {
        e.mu_nodes_[k + 1] = e.mu_nodes_[k] - e.integrate_piece(mesh[k], mesh[k + 1], true);
        e.action_nodes_[k + 1] = e.action_nodes_[k] + e.integrate_piece(mesh[k], mesh[k + 1], false);
    }
    return e;
}

double ExtendedCurve::lagrangian(double t, Side side) const {
    const JetPoint jet = jet_of_trajectory(base_, t, triple_->r(), side);
    return triple_->lagrangian.field(jet, base_.control().value(t, side));
}

double ExtendedCurve::ltilde(double t, Side side) const {
    const JetPoint jet = jet_of_trajectory(base_, t, triple_->r(), side);
    return ltilde_from(*triple_, h_, jet, base_.control().value(t, side), t);
}

double ExtendedCurve::integrate_piece(double a, double b, bool with_h) const {
    if (b <= a) return 0.0;
    double acc = 0.0;
    const double step = (b - a) / subdiv_;
    for (int m = 0; m < subdiv_; ++m) {
        const double lo = a + m * step, hi = (m + 1 == subdiv_) ? b : a + (m + 1) * step;
        acc += gauss<double, 10>::integrate(
            [&](double t) { return with_h ? ltilde(t) : lagrangian(t); }, lo, hi);
    }
    return acc;
}

double ExtendedCurve::mu(double t) const {
    const auto& mesh = base_.mesh();
    if (t <= mesh.front()) return 0.0;
    if (t >= mesh.back()) return mu_nodes_.back();
    const std::size_t k = static_cast<std::size_t>(std::upper_bound(mesh.begin(), mesh.end(), t) - mesh.begin()) - 1;
    return mu_nodes_[k] - integrate_piece(mesh[k], t, true);
}

double ExtendedCurve::action(double t) const {
    const auto& mesh = base_.mesh();
    if (t <= mesh.front()) return 0.0;
    if (t >= mesh.back()) return action_nodes_.back();
    const std::size_t k = static_cast<std::size_t>(std::upper_bound(mesh.begin(), mesh.end(), t) - mesh.begin()) - 1;
    return action_nodes_[k] + integrate_piece(mesh[k], t, false);
}

double mu_of(const ExtendedCurve& ext, double t) { return ext.mu(t); }

double action_integral(const DefiningTriple& triple, const Trajectory& traj) {
    const auto& mesh = traj.mesh();
    double acc = 0.0;
    for (std::size_t k = 0; k + 1 < mesh.size(); ++k) {
        acc += gauss<double, 5>::integrate(
            [&](double t) {
                const JetPoint jet = jet_of_trajectory(traj, t, triple.r());
                return triple.lagrangian.field(jet, traj.control()(t));
            },
            mesh[k], mesh[k + 1]);
    }
    return acc;
}

ExtendedPoint extended_point(const DefiningTriple& triple, const ExtendedCurve& ext, double t, Side side) {
    ExtendedPoint p;
    p.jet = jet_of_trajectory(ext.base(), t, 2 * triple.r(), side);
    p.u = ext.base().control().value(t, side);
    for (int d = 0; d < 5; ++d) p.hd[d] = eval_h(ext.h(), t, d);
    p.mu = ext.mu(t);
    p.ltilde = ltilde_from(triple, ext.h(), p.jet, p.u, t);
    p.mu1 = -p.ltilde;
    p.lambda = ext.lambda();
    return p;
}

ExtendedTangent lift_tangent(const ExtendedPoint& p, int r) {
    ExtendedTangent v;
    v.dt = 1.0;
    for (int beta = 0; beta < r; ++beta) v.dq.push_back(p.jet.blocks[beta + 1]);
    v.dh[0] = p.hd[1].h;
    v.dh[1] = p.hd[2].h;
    for (int d = 0; d < 4; ++d) {
        v.dhp[d] = p.hd[d + 1].hp;
        v.dhpp[d] = p.hd[d + 1].hpp;
    }
    v.dmu = p.mu1;
    v.du.assign(p.u.size(), 0.0);
    return v;
}

double extended_lagrangian(const DefiningTriple& triple, const ExtendedPoint& p) {
    return p.lambda * (p.mu1 + p.ltilde) + total_derivative(triple.cost.field, p.jet, p.u);
}

double pc_form_pairing(const DefiningTriple& triple, const ExtendedPoint& p, const ExtendedTangent& v) {
    const int r = triple.r();
    if (p.jet.order() < 2 * r) {
        throw Error(ErrorCode::InsufficientJetOrder, "pairing needs extended jet order >= 2r");
    }
    double acc = v.dt == 0.0 ? 0.0 : extended_lagrangian(triple, p) * v.dt;
    const std::vector<Vec> P = full_momenta(triple, p.jet, p.u);
    for (int beta = 0; beta < r; ++beta) {
        for (int i = 0; i < triple.N(); ++i) {
            acc += P[beta][i] * (v.dq[beta][i] - p.jet.q(i, beta + 1) * v.dt);
        }
    }
    const HValues &h1 = p.hd[1], &h2 = p.hd[2], &h3 = p.hd[3];
    for (std::size_t k = 0; k < h1.h.size(); ++k) {
        acc += h1.h[k] * (v.dh[0][k] - h1.h[k] * v.dt);
        acc -= h2.hp[k] * (v.dhp[1][k] - h2.hp[k] * v.dt);
        acc += h3.hp[k] * (v.dhp[0][k] - h1.hp[k] * v.dt);
        acc -= h2.hpp[k] * (v.dhpp[1][k] - h2.hpp[k] * v.dt);
        acc += h3.hpp[k] * (v.dhpp[0][k] - h1.hpp[k] * v.dt);
    }
    acc += p.lambda * (v.dmu - p.mu1 * v.dt);
    return acc;
}

double pc_lift_integral(const DefiningTriple& triple, const ExtendedCurve& ext) {
    const auto& mesh = ext.base().mesh();
    double acc = 0.0;
    for (std::size_t k = 0; k + 1 < mesh.size(); ++k) {
        acc += gauss<double, 10>::integrate(
            [&](double t) {
                const ExtendedPoint p = extended_point(triple, ext, t);
                return pc_form_pairing(triple, p, lift_tangent(p, triple.r()));
            },
            mesh[k], mesh[k + 1]);
    }
    return acc;
}

}  // namespace gpmp
