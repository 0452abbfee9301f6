// SPDX-License-Identifier: MIT
#pragma once

#include <compare>
#include <functional>
#include <map>
#include <random>
#include <vector>

#include "gpmp/series.hpp"

namespace gpmp {

using Vec = std::vector<double>;
using ControlValue = std::vector<double>;

/// A point of the jet space: time plus derivative blocks q_(0), ..., q_(n).
/// blocks[beta][i] is the beta-th time derivative of the i-th coordinate.
struct JetPoint {
    double t = 0.0;
    std::vector<Vec> blocks;

    JetPoint() = default;
    JetPoint(double t_, std::vector<Vec> blocks_) : t(t_), blocks(std::move(blocks_)) {}
    static JetPoint zero(double t, int dim, int order);

    int order() const { return static_cast<int>(blocks.size()) - 1; }
    int dim() const { return blocks.empty() ? 0 : static_cast<int>(blocks.front().size()); }
    double q(int i, int beta) const { return blocks[beta][i]; }
    double& q(int i, int beta) { return blocks[beta][i]; }
};

/// Argument bundle handed to field evaluators.  T is double for pointwise
/// evaluation and Series for Taylor-mode propagation along a jet.
template <class T>
struct JetArgs {
    T t{};
    std::vector<std::vector<T>> blocks;
    std::vector<T> u;

    const T& q(int i, int beta) const { return blocks[beta][i]; }
    int order() const { return static_cast<int>(blocks.size()) - 1; }
};

JetArgs<double> make_args(const JetPoint& p, const ControlValue& u);

/// Local expansion of a jet point: block beta becomes the polynomial
/// sum_k q_(beta+k) tau^k / k!, truncated at min(degree, n - beta).  The
/// control is frozen, which is exactly what the total derivative does.
JetArgs<Series> make_series_args(const JetPoint& p, const ControlValue& u, int degree);

/// A scalar function on jets and controls, evaluable on doubles or series.
struct FieldFn {
    std::function<double(const JetArgs<double>&)> d;
    std::function<Series(const JetArgs<Series>&)> s;

    explicit operator bool() const { return static_cast<bool>(d); }
};

/// Wraps a generic lambda `[](const auto& a) { ... }` for both scalar types.
template <class F>
FieldFn make_field_fn(F f) {
    return FieldFn{[f](const JetArgs<double>& a) { return static_cast<double>(f(a)); },
                   [f](const JetArgs<Series>& a) { return Series(f(a)); }};
}

struct Coord {
    enum class Kind { Time, Q, U };
    Kind kind = Kind::Time;
    int i = 0;
    int beta = 0;

    static Coord time() { return {Kind::Time, 0, 0}; }
    static Coord q(int i, int beta) { return {Kind::Q, i, beta}; }
    static Coord u(int a) { return {Kind::U, a, 0}; }

    auto operator<=>(const Coord&) const = default;
};

/// Symmetric-difference step: cbrt(machine epsilon) * max(1, |x|).
double fd_step(double x);

class ScalarJetField {
public:
    ScalarJetField() = default;
    ScalarJetField(FieldFn fn, int actual_order) : fn_(std::move(fn)), order_(actual_order) {}

    template <class F>
    static ScalarJetField from(F f, int actual_order) {
        return ScalarJetField(make_field_fn(std::move(f)), actual_order);
    }

    double operator()(const JetPoint& p, const ControlValue& u) const { return fn_.d(make_args(p, u)); }
    double eval(const JetArgs<double>& a) const { return fn_.d(a); }
    Series eval(const JetArgs<Series>& a) const { return fn_.s(a); }

    int actual_order() const { return order_; }
    const FieldFn& fn() const { return fn_; }
    explicit operator bool() const { return static_cast<bool>(fn_); }

    ScalarJetField& with_partial(Coord c, FieldFn partial);
    bool has_analytic_partial(Coord c) const { return partials_.count(c) != 0; }

    /// Analytic partial when registered, otherwise a central difference that
    /// perturbs only the constant term of the named coordinate.
    FieldFn partial(Coord c) const;

    /// a*f + b*g, with partials combined where both sides provide them.
    static ScalarJetField linear_combination(double a, const ScalarJetField& f, double b,
                                             const ScalarJetField& g);

private:
    FieldFn fn_;
    int order_ = 0;
    std::map<Coord, FieldFn> partials_;
};

double finite_diff_partial(const ScalarJetField& f, const JetPoint& p, const ControlValue& u,
                           Coord direction, double step);

/// Df = df/dt + sum_{j, delta <= r'} df/dq^j_(delta) q^j_(delta+1).
double total_derivative(const ScalarJetField& f, const JetPoint& p, const ControlValue& u);

/// D^0 f, ..., D^k f at p by Taylor propagation of the frozen-control jet.
std::vector<double> iterated_total_derivatives(const FieldFn& f, int actual_order, const JetPoint& p,
                                               const ControlValue& u, int k);

/// Random-perturbation audit that f ignores blocks above its declared order.
bool audit_actual_order(const ScalarJetField& f, const JetPoint& p, const ControlValue& u,
                        std::mt19937_64& rng, int trials = 8);

}  // namespace gpmp
