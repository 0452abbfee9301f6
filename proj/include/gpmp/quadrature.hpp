// SPDX-License-Identifier: MIT
#pragma once

#include <utility>
#include <vector>

namespace gpmp {

/// Integral over [a, b] of the quadratic through (x0,f0), (x1,f1), (x2,f2).
double quadratic_integral(double x0, double x1, double x2, double f0, double f1, double f2, double a, double b);

/// F[j] = int_{x[0]}^{x[j]} f, using the quadratic through node pairs
/// (composite Simpson on even prefixes, exact on quadratics).
std::vector<double> cumulative_quadratic(const std::vector<double>& x, const std::vector<double>& f);

/// Integral up to an arbitrary point inside [x.front(), x.back()].
double quadratic_integral_to(const std::vector<double>& x, const std::vector<double>& f, double upto);

/// Weights (index, weight) of the three-point derivative at node j; central
/// in the interior and one-sided second order at the ends.
std::vector<std::pair<int, double>> derivative_weights(const std::vector<double>& x, int j);

/// Composite Simpson weights for `intervals` (even) equal intervals of [a, b].
std::vector<double> simpson_weights(double a, double b, int intervals);

/// Panels for a composite rule on [0, T] with interior breakpoints: each
/// panel is [a, b] with an even number of intervals, allocated in
/// proportion to its length with at least two.
struct Panel {
    double a = 0.0;
    double b = 0.0;
    int intervals = 2;
};
std::vector<Panel> make_panels(double T, const std::vector<double>& breakpoints, int total_intervals);

}  // namespace gpmp
