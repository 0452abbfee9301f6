// SPDX-License-Identifier: MIT
#pragma once

#include <memory>
#include <vector>

#include "gpmp/jetspace.hpp"

namespace gpmp {

/// Which one-sided limit to take at a control breakpoint.
enum class Side { Left, Right };

/// Box control set K = prod [lower_a, upper_a] with an inflation margin that
/// defines the slightly larger convex hull used by smoothed needles.
struct ControlSet {
    Vec lower;
    Vec upper;
    double margin = 0.0;

    int dim() const { return static_cast<int>(lower.size()); }
    bool contains(const ControlValue& u, double tol = 1e-12) const;
    bool contains_hull(const ControlValue& u) const;
    bool sane() const;
    /// Tensor grid with `per_axis` points per control axis, endpoints included.
    std::vector<ControlValue> grid(int per_axis) const;
};

class ControlCurve {
public:
    enum class Kind { AnalyticCallback, PiecewiseConstant, SmoothedNeedle, InterpolatedSamples };

    struct Impl {
        virtual ~Impl() = default;
        virtual Vec value(double t, Side side) const = 0;
        virtual std::vector<Series> series(double t, int degree, Side side) const = 0;
        virtual std::vector<double> breakpoints() const = 0;
        Kind kind = Kind::PiecewiseConstant;
        int dim = 1;
        double horizon = 1.0;
    };

    ControlCurve() = default;
    explicit ControlCurve(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

    static ControlCurve constant(Vec u, double T);
    /// values.size() == breaks.size() + 1; breaks strictly inside (0, T).
    static ControlCurve piecewise_constant(std::vector<double> breaks, std::vector<Vec> values, double T);
    /// Piecewise-linear interpolation through (times[k], values[k]).
    static ControlCurve samples(std::vector<double> times, std::vector<Vec> values, double T);
    /// f is a generic callable taking the time (double or Series) and
    /// returning a std::vector of the same scalar type.
    template <class F>
    static ControlCurve analytic(F f, int dim, double T);

    /// Equals omega on [tau - eps, tau) and u0 elsewhere.
    static ControlCurve needle(const ControlCurve& u0, double tau, Vec omega, double eps);
    /// Needle with quintic smoothstep ramps of width `ramp` outside [tau - eps, tau].
    static ControlCurve smoothed_needle(const ControlCurve& u0, double tau, Vec omega, double eps, double ramp);
    /// (1 - s) a + s b.
    static ControlCurve blend(const ControlCurve& a, const ControlCurve& b, double s);

    Vec value(double t, Side side = Side::Right) const { return impl_->value(t, side); }
    Vec operator()(double t) const { return impl_->value(t, Side::Right); }
    std::vector<Series> series(double t, int degree, Side side = Side::Right) const {
        return impl_->series(t, degree, side);
    }
    /// Sorted times inside (0, T) where the curve or one of its derivatives jumps.
    std::vector<double> breakpoints() const { return impl_->breakpoints(); }
    Kind kind() const { return impl_->kind; }
    int dim() const { return impl_->dim; }
    double horizon() const { return impl_->horizon; }
    explicit operator bool() const { return static_cast<bool>(impl_); }

private:
    std::shared_ptr<const Impl> impl_;
};

/// Quintic smoothstep 10x^3 - 15x^4 + 6x^5 on [0, 1].
template <class T>
T smoothstep5(const T& x) {
    return x * x * x * (10.0 + x * (-15.0 + 6.0 * x));
}

namespace detail {
template <class F>
struct AnalyticControl final : ControlCurve::Impl {
    explicit AnalyticControl(F f_) : f(std::move(f_)) {}
    Vec value(double t, Side) const override { return f(t); }
    std::vector<Series> series(double t, int degree, Side) const override {
        return f(Series::variable(t, degree));
    }
    std::vector<double> breakpoints() const override { return {}; }
    F f;
};
}  // namespace detail

template <class F>
ControlCurve ControlCurve::analytic(F f, int dim, double T) {
    auto impl = std::make_shared<detail::AnalyticControl<F>>(std::move(f));
    impl->kind = Kind::AnalyticCallback;
    impl->dim = dim;
    impl->horizon = T;
    return ControlCurve(std::move(impl));
}

/// Measure of {t : |u1(t) - u2(t)|_inf > 1e-12}, counted on a uniform
/// midpoint grid of `grid` cells.
double control_distance(const ControlCurve& u1, const ControlCurve& u2, int grid = 10000);

}  // namespace gpmp
