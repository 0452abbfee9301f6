// SPDX-License-Identifier: MIT
#include "gpmp/control.hpp"

#include <algorithm>
#include <cmath>

#include "gpmp/errors.hpp"

namespace gpmp {

bool ControlSet::contains(const ControlValue& u, double tol) const {
    if (static_cast<int>(u.size()) != dim()) return false;
    for (int a = 0; a < dim(); ++a) {
        if (u[a] < lower[a] - tol || u[a] > upper[a] + tol) return false;
    }
    return true;
}

bool ControlSet::contains_hull(const ControlValue& u) const { return contains(u, margin + 1e-12); }

bool ControlSet::sane() const {
    if (lower.size() != upper.size() || lower.empty() || margin < 0.0) return false;
    for (int a = 0; a < dim(); ++a) {
        if (!(lower[a] <= upper[a]) || !std::isfinite(lower[a]) || !std::isfinite(upper[a])) return false;
    }
    return true;
}

std::vector<ControlValue> ControlSet::grid(int per_axis) const {
    std::vector<ControlValue> out{ControlValue{}};
    for (int a = 0; a < dim(); ++a) {
        std::vector<ControlValue> next;
        for (const auto& prefix : out) {
            for (int k = 0; k < per_axis; ++k) {
                const double w = per_axis == 1 ? 0.5 : static_cast<double>(k) / (per_axis - 1);
                ControlValue v = prefix;
                v.push_back(lower[a] + w * (upper[a] - lower[a]));
                next.push_back(std::move(v));
            }
        }
        out = std::move(next);
    }
    return out;
}

namespace {

bool in_piece(double t, double a, double b, Side side) {
    return side == Side::Right ? (t >= a && t < b) : (t > a && t <= b);
}

std::vector<Series> constant_series(const Vec& v, int degree) {
    std::vector<Series> out;
    out.reserve(v.size());
    for (double x : v) out.push_back(Series::constant(x, degree));
    return out;
}

void merge_breaks(std::vector<double>& into, const std::vector<double>& more) {
    into.insert(into.end(), more.begin(), more.end());
    std::sort(into.begin(), into.end());
    into.erase(std::unique(into.begin(), into.end()), into.end());
}

struct PiecewiseConstant final : ControlCurve::Impl {
    std::vector<double> breaks;
    std::vector<Vec> values;

    std::size_t piece(double t, Side side) const {
        // Right limit: first break strictly greater than t; left limit: first break >= t.
        auto it = side == Side::Right ? std::upper_bound(breaks.begin(), breaks.end(), t)
                                      : std::lower_bound(breaks.begin(), breaks.end(), t);
        return static_cast<std::size_t>(it - breaks.begin());
    }
    Vec value(double t, Side side) const override { return values[piece(t, side)]; }
    std::vector<Series> series(double t, int degree, Side side) const override {
        return constant_series(values[piece(t, side)], degree);
    }
    std::vector<double> breakpoints() const override { return breaks; }
};

struct Samples final : ControlCurve::Impl {
    std::vector<double> times;
    std::vector<Vec> values;

    std::size_t segment(double t, Side side) const {
        auto it = side == Side::Right ? std::upper_bound(times.begin(), times.end(), t)
                                      : std::lower_bound(times.begin(), times.end(), t);
        std::size_t k = static_cast<std::size_t>(it - times.begin());
        k = std::clamp<std::size_t>(k, 1, times.size() - 1);
        return k - 1;
    }
    std::vector<Series> series(double t, int degree, Side side) const override {
        const std::size_t k = segment(t, side);
        const double t0 = times[k], t1 = times[k + 1];
        std::vector<Series> out;
        for (int a = 0; a < dim; ++a) {
            const double slope = (values[k + 1][a] - values[k][a]) / (t1 - t0);
            Series s = Series::constant(values[k][a] + slope * (t - t0), degree);
            if (degree >= 1) s.coeff(1) = slope;
            out.push_back(std::move(s));
        }
        return out;
    }
    Vec value(double t, Side side) const override {
        Vec v;
        for (const Series& s : series(t, 0, side)) v.push_back(s.value());
        return v;
    }
    std::vector<double> breakpoints() const override {
        std::vector<double> out;
        for (double x : times) {
            if (x > 0.0 && x < horizon) out.push_back(x);
        }
        return out;
    }
};

struct Needle final : ControlCurve::Impl {
    ControlCurve base;
    double lo = 0.0, hi = 0.0;
    Vec omega;

    Vec value(double t, Side side) const override {
        return in_piece(t, lo, hi, side) ? omega : base.value(t, side);
    }
    std::vector<Series> series(double t, int degree, Side side) const override {
        return in_piece(t, lo, hi, side) ? constant_series(omega, degree) : base.series(t, degree, side);
    }
    std::vector<double> breakpoints() const override {
        std::vector<double> out = base.breakpoints();
        merge_breaks(out, {lo, hi});
        return out;
    }
};

struct SmoothedNeedle final : ControlCurve::Impl {
    ControlCurve base;
    double a1 = 0.0, b1 = 0.0, a2 = 0.0, b2 = 0.0;  // ramps [a1, b1] and [a2, b2]
    Vec omega;

    template <class T>
    std::vector<T> eval(const T& t, const std::vector<T>& u0, Side side) const {
        const double tv = primal(t);
        std::vector<T> out = u0;
        if (in_piece(tv, a1, b1, side)) {
            const T x = (t - a1) / (b1 - a1);
            const T w = smoothstep5(x);
            for (int a = 0; a < dim; ++a) out[a] = u0[a] + (omega[a] - u0[a]) * w;
        } else if (in_piece(tv, b1, a2, side)) {
            for (int a = 0; a < dim; ++a) out[a] = u0[a] * 0.0 + omega[a];
        } else if (in_piece(tv, a2, b2, side)) {
            const T x = (t - a2) / (b2 - a2);
            const T w = smoothstep5(x);
            for (int a = 0; a < dim; ++a) out[a] = omega[a] + (u0[a] - omega[a]) * w;
        }
        return out;
    }
    Vec value(double t, Side side) const override { return eval(t, base.value(t, side), side); }
    std::vector<Series> series(double t, int degree, Side side) const override {
        return eval(Series::variable(t, degree), base.series(t, degree, side), side);
    }
    std::vector<double> breakpoints() const override {
        std::vector<double> out = base.breakpoints();
        merge_breaks(out, {a1, b1, a2, b2});
        return out;
    }
};

struct Blend final : ControlCurve::Impl {
    ControlCurve a, b;
    double s = 0.0;

    Vec value(double t, Side side) const override {
        Vec va = a.value(t, side);
        const Vec vb = b.value(t, side);
        for (std::size_t k = 0; k < va.size(); ++k) va[k] = (1.0 - s) * va[k] + s * vb[k];
        return va;
    }
    std::vector<Series> series(double t, int degree, Side side) const override {
        std::vector<Series> sa = a.series(t, degree, side);
        const std::vector<Series> sb = b.series(t, degree, side);
        for (std::size_t k = 0; k < sa.size(); ++k) sa[k] = (1.0 - s) * sa[k] + s * sb[k];
        return sa;
    }
    std::vector<double> breakpoints() const override {
        std::vector<double> out = a.breakpoints();
        merge_breaks(out, b.breakpoints());
        return out;
    }
};

}  // namespace

ControlCurve ControlCurve::constant(Vec u, double T) {
    return piecewise_constant({}, {std::move(u)}, T);
}

ControlCurve ControlCurve::piecewise_constant(std::vector<double> breaks, std::vector<Vec> values, double T) {
    if (values.size() != breaks.size() + 1 || values.empty()) {
        throw Error(ErrorCode::BadParams, "piecewise-constant control needs one more value than breaks");
    }
    for (std::size_t k = 0; k < breaks.size(); ++k) {
        if (!(breaks[k] > 0.0 && breaks[k] < T) || (k > 0 && !(breaks[k] > breaks[k - 1]))) {
            throw Error(ErrorCode::BadParams, "breaks must be increasing inside (0, T)");
        }
    }
    auto impl = std::make_shared<PiecewiseConstant>();
    impl->kind = Kind::PiecewiseConstant;
    impl->dim = static_cast<int>(values.front().size());
    impl->horizon = T;
    impl->breaks = std::move(breaks);
    impl->values = std::move(values);
    return ControlCurve(std::move(impl));
}

ControlCurve ControlCurve::samples(std::vector<double> times, std::vector<Vec> values, double T) {
    if (times.size() < 2 || times.size() != values.size()) {
        throw Error(ErrorCode::BadParams, "sampled control needs at least two matching samples");
    }
    auto impl = std::make_shared<Samples>();
    impl->kind = Kind::InterpolatedSamples;
    impl->dim = static_cast<int>(values.front().size());
    impl->horizon = T;
    impl->times = std::move(times);
    impl->values = std::move(values);
    return ControlCurve(std::move(impl));
}

ControlCurve ControlCurve::needle(const ControlCurve& u0, double tau, Vec omega, double eps) {
    auto impl = std::make_shared<Needle>();
    impl->kind = Kind::PiecewiseConstant;
    impl->dim = u0.dim();
    impl->horizon = u0.horizon();
    impl->base = u0;
    impl->lo = tau - eps;
    impl->hi = tau;
    impl->omega = std::move(omega);
    return ControlCurve(std::move(impl));
}

ControlCurve ControlCurve::smoothed_needle(const ControlCurve& u0, double tau, Vec omega, double eps,
                                           double ramp) {
    auto impl = std::make_shared<SmoothedNeedle>();
    impl->kind = Kind::SmoothedNeedle;
    impl->dim = u0.dim();
    impl->horizon = u0.horizon();
    impl->base = u0;
    impl->a1 = tau - eps - ramp;
    impl->b1 = tau - eps;
    impl->a2 = tau;
    impl->b2 = tau + ramp;
    impl->omega = std::move(omega);
    return ControlCurve(std::move(impl));
}

ControlCurve ControlCurve::blend(const ControlCurve& a, const ControlCurve& b, double s) {
    auto impl = std::make_shared<Blend>();
    impl->kind = a.kind() == b.kind() ? a.kind() : Kind::SmoothedNeedle;
    impl->dim = a.dim();
    impl->horizon = a.horizon();
    impl->a = a;
    impl->b = b;
    impl->s = s;
    return ControlCurve(std::move(impl));
}

double control_distance(const ControlCurve& u1, const ControlCurve& u2, int grid) {
    const double T = u1.horizon();
    const double h = T / grid;
    int differing = 0;
    for (int k = 0; k < grid; ++k) {
        const double t = (k + 0.5) * h;
        const Vec a = u1(t), b = u2(t);
        double d = 0.0;
        for (std::size_t j = 0; j < a.size(); ++j) d = std::max(d, std::abs(a[j] - b[j]));
        if (d > 1e-12) ++differing;
    }
    return differing * h;
}

}  // namespace gpmp
