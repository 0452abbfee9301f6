// SPDX-License-Identifier: MIT
#include "gpmp/series.hpp"

#include <algorithm>
#include <utility>

namespace gpmp {

Series::Series(std::vector<double> coeffs) : c_(std::move(coeffs)) {
    if (c_.empty()) c_.push_back(0.0);
}

Series Series::variable(double x0, int degree) {
    std::vector<double> c(static_cast<std::size_t>(std::max(degree, 0)) + 1, 0.0);
    c[0] = x0;
    if (degree >= 1) c[1] = 1.0;
    return Series(std::move(c));
}

Series Series::constant(double x0, int degree) {
    std::vector<double> c(static_cast<std::size_t>(std::max(degree, 0)) + 1, 0.0);
    c[0] = x0;
    return Series(std::move(c));
}

double& Series::coeff(std::size_t k) {
    if (k >= c_.size()) c_.resize(k + 1, 0.0);
    return c_[k];
}

double Series::derivative(int k) const {
    double f = 1.0;
    for (int j = 2; j <= k; ++j) f *= j;
    return f * (*this)[static_cast<std::size_t>(k)];
}

Series Series::truncated(int degree) const {
    std::vector<double> c(static_cast<std::size_t>(degree) + 1, 0.0);
    for (std::size_t k = 0; k < c.size() && k < c_.size(); ++k) c[k] = c_[k];
    return Series(std::move(c));
}

Series& Series::operator+=(const Series& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0.0);
    for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
    return *this;
}

Series& Series::operator-=(const Series& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0.0);
    for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] -= o.c_[k];
    return *this;
}

Series& Series::operator*=(const Series& o) {
    *this = *this * o;
    return *this;
}

Series& Series::operator/=(const Series& o) {
    *this = *this / o;
    return *this;
}

Series operator-(const Series& a) {
    std::vector<double> c = a.coeffs();
    for (double& x : c) x = -x;
    return Series(std::move(c));
}

Series operator+(Series a, const Series& b) { return a += b; }
Series operator-(Series a, const Series& b) { return a -= b; }

Series operator*(const Series& a, const Series& b) {
    const std::size_t na = a.coeffs().size();
    const std::size_t nb = b.coeffs().size();
    const std::size_t n = std::max(na, nb);
    std::vector<double> c(n, 0.0);
    for (std::size_t i = 0; i < na; ++i) {
        const double ai = a.coeffs()[i];
        if (ai == 0.0) continue;
        for (std::size_t j = 0; j < nb && i + j < n; ++j) c[i + j] += ai * b.coeffs()[j];
    }
    return Series(std::move(c));
}

Series operator/(const Series& a, const Series& b) {
    const std::size_t n = std::max(a.coeffs().size(), b.coeffs().size());
    std::vector<double> q(n, 0.0);
    const double b0 = b[0];
    for (std::size_t k = 0; k < n; ++k) {
        double acc = a[k];
        for (std::size_t j = 1; j <= k; ++j) acc -= b[j] * q[k - j];
        q[k] = acc / b0;
    }
    return Series(std::move(q));
}

Series operator+(Series a, double b) {
    a.coeff(0) += b;
    return a;
}
Series operator+(double a, Series b) { return std::move(b) + a; }
Series operator-(Series a, double b) {
    a.coeff(0) -= b;
    return a;
}
Series operator-(double a, const Series& b) { return (-b) + a; }
Series operator*(Series a, double b) {
    std::vector<double> c = a.coeffs();
    for (double& x : c) x *= b;
    return Series(std::move(c));
}
Series operator*(double a, Series b) { return std::move(b) * a; }
Series operator/(Series a, double b) { return std::move(a) * (1.0 / b); }
Series operator/(double a, const Series& b) { return Series(a) / b; }

Series exp(const Series& a) {
    const std::size_t n = a.coeffs().size();
    std::vector<double> e(n, 0.0);
    e[0] = std::exp(a[0]);
    for (std::size_t k = 1; k < n; ++k) {
        double acc = 0.0;
        for (std::size_t j = 1; j <= k; ++j) acc += static_cast<double>(j) * a[j] * e[k - j];
        e[k] = acc / static_cast<double>(k);
    }
    return Series(std::move(e));
}

Series log(const Series& a) {
    const std::size_t n = a.coeffs().size();
    std::vector<double> l(n, 0.0);
    l[0] = std::log(a[0]);
    for (std::size_t k = 1; k < n; ++k) {
        double acc = 0.0;
        for (std::size_t j = 1; j < k; ++j) acc += static_cast<double>(j) * l[j] * a[k - j];
        l[k] = (a[k] - acc / static_cast<double>(k)) / a[0];
    }
    return Series(std::move(l));
}

namespace {
std::pair<Series, Series> sincos(const Series& a) {
    const std::size_t n = a.coeffs().size();
    std::vector<double> s(n, 0.0), c(n, 0.0);
    s[0] = std::sin(a[0]);
    c[0] = std::cos(a[0]);
    for (std::size_t k = 1; k < n; ++k) {
        double as = 0.0, ac = 0.0;
        for (std::size_t j = 1; j <= k; ++j) {
            const double w = static_cast<double>(j) * a[j];
            as += w * c[k - j];
            ac += w * s[k - j];
        }
        s[k] = as / static_cast<double>(k);
        c[k] = -ac / static_cast<double>(k);
    }
    return {Series(std::move(s)), Series(std::move(c))};
}
}  // namespace

Series sin(const Series& a) { return sincos(a).first; }
Series cos(const Series& a) { return sincos(a).second; }

Series sqrt(const Series& a) {
    const std::size_t n = a.coeffs().size();
    std::vector<double> r(n, 0.0);
    r[0] = std::sqrt(a[0]);
    for (std::size_t k = 1; k < n; ++k) {
        double acc = a[k];
        for (std::size_t j = 1; j < k; ++j) acc -= r[j] * r[k - j];
        r[k] = acc / (2.0 * r[0]);
    }
    return Series(std::move(r));
}

Series pow(const Series& a, int n) {
    if (n < 0) return 1.0 / pow(a, -n);
    Series result = Series::constant(1.0, a.degree());
    Series base = a;
    while (n > 0) {
        if (n & 1) result = result * base;
        n >>= 1;
        if (n) base = base * base;
    }
    return result;
}

}  // namespace gpmp
