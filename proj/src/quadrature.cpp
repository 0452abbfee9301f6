// SPDX-License-Identifier: MIT
#include "gpmp/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace gpmp {

double quadratic_integral(double x0, double x1, double x2, double f0, double f1, double f2, double a, double b) {
    // Newton form p(x) = f0 + d1 (x - x0) + d2 (x - x0)(x - x1).
    const double d01 = (f1 - f0) / (x1 - x0);
    const double d12 = (f2 - f1) / (x2 - x1);
    const double d2 = (d12 - d01) / (x2 - x0);
    auto prim = [&](double x) {
        const double u = x - x0;
        // int (x - x0)(x - x1) = u^3/3 - (x1 - x0) u^2 / 2
        return f0 * u + d01 * u * u / 2.0 + d2 * (u * u * u / 3.0 - (x1 - x0) * u * u / 2.0);
    };
    return prim(b) - prim(a);
}

std::vector<double> cumulative_quadratic(const std::vector<double>& x, const std::vector<double>& f) {
    const std::size_t n = x.size();
    std::vector<double> F(n, 0.0);
    if (n < 2) return F;
    if (n == 2) {
        F[1] = 0.5 * (f[0] + f[1]) * (x[1] - x[0]);
        return F;
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
        std::size_t k = i - (i % 2);  // anchor of the pair containing interval i
        if (k + 2 >= n) k = n - 3;
        F[i + 1] = F[i] + quadratic_integral(x[k], x[k + 1], x[k + 2], f[k], f[k + 1], f[k + 2], x[i], x[i + 1]);
    }
    return F;
}

double quadratic_integral_to(const std::vector<double>& x, const std::vector<double>& f, double upto) {
    const std::vector<double> F = cumulative_quadratic(x, f);
    if (upto <= x.front()) return 0.0;
    if (upto >= x.back()) return F.back();
    const std::size_t i = static_cast<std::size_t>(std::upper_bound(x.begin(), x.end(), upto) - x.begin()) - 1;
    if (x.size() == 2) return 0.5 * (f[0] + f[0] + (f[1] - f[0]) * (upto - x[0]) / (x[1] - x[0])) * (upto - x[0]);
    std::size_t k = i - (i % 2);
    if (k + 2 >= x.size()) k = x.size() - 3;
    return F[i] + quadratic_integral(x[k], x[k + 1], x[k + 2], f[k], f[k + 1], f[k + 2], x[i], upto);
}

std::vector<std::pair<int, double>> derivative_weights(const std::vector<double>& x, int j) {
    const int n = static_cast<int>(x.size());
    if (n == 1) return {};
    if (n == 2) {
        const double h = x[1] - x[0];
        return {{0, -1.0 / h}, {1, 1.0 / h}};
    }
    int k = j - 1;
    if (j == 0) k = 0;
    if (j == n - 1) k = n - 3;
    const double x0 = x[k], x1 = x[k + 1], x2 = x[k + 2], t = x[j];
    // Derivatives of the Lagrange basis polynomials at t.
    const double w0 = ((t - x1) + (t - x2)) / ((x0 - x1) * (x0 - x2));
    const double w1 = ((t - x0) + (t - x2)) / ((x1 - x0) * (x1 - x2));
    const double w2 = ((t - x0) + (t - x1)) / ((x2 - x0) * (x2 - x1));
    return {{k, w0}, {k + 1, w1}, {k + 2, w2}};
}

std::vector<double> simpson_weights(double a, double b, int intervals) {
    const double h = (b - a) / intervals;
    std::vector<double> w(static_cast<std::size_t>(intervals) + 1);
    for (int k = 0; k <= intervals; ++k) {
        const double c = (k == 0 || k == intervals) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
        w[k] = c * h / 3.0;
    }
    return w;
}

std::vector<Panel> make_panels(double T, const std::vector<double>& breakpoints, int total_intervals) {
    std::vector<double> cuts{0.0};
    for (double b : breakpoints) {
        if (b > 0.0 && b < T && b > cuts.back()) cuts.push_back(b);
    }
    cuts.push_back(T);
    std::vector<Panel> panels;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        const double len = cuts[k + 1] - cuts[k];
        int m = static_cast<int>(std::lround(total_intervals * len / T));
        m = std::max(2, m + (m % 2));
        panels.push_back({cuts[k], cuts[k + 1], m});
    }
    return panels;
}

}  // namespace gpmp
