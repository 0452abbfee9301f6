// SPDX-License-Identifier: MIT
#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace gpmp {

/// Truncated Taylor polynomial in a local variable tau about some base point.
/// Coefficient k is f^(k)/k!.  Mixed-degree operands are combined by
/// zero-padding the shorter one, so a degree-0 series acts as a constant.
class Series {
public:
    Series() : c_(1, 0.0) {}
    Series(double value) : c_(1, value) {}  // NOLINT(google-explicit-constructor)
    explicit Series(std::vector<double> coeffs);

    /// The series of tau -> x0 + tau truncated at the given degree.
    static Series variable(double x0, int degree);
    static Series constant(double x0, int degree);

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    double operator[](std::size_t k) const { return k < c_.size() ? c_[k] : 0.0; }
    double& coeff(std::size_t k);
    double value() const { return c_[0]; }
    const std::vector<double>& coeffs() const { return c_; }

    /// k-th derivative at tau = 0, i.e. k! * coefficient k.
    double derivative(int k) const;
    Series truncated(int degree) const;

    Series& operator+=(const Series& o);
    Series& operator-=(const Series& o);
    Series& operator*=(const Series& o);
    Series& operator/=(const Series& o);

private:
    std::vector<double> c_;
};

Series operator-(const Series& a);
Series operator+(Series a, const Series& b);
Series operator-(Series a, const Series& b);
Series operator*(const Series& a, const Series& b);
Series operator/(const Series& a, const Series& b);
Series operator+(Series a, double b);
Series operator+(double a, Series b);
Series operator-(Series a, double b);
Series operator-(double a, const Series& b);
Series operator*(Series a, double b);
Series operator*(double a, Series b);
Series operator/(Series a, double b);
Series operator/(double a, const Series& b);

Series exp(const Series& a);
Series log(const Series& a);
Series sin(const Series& a);
Series cos(const Series& a);
Series sqrt(const Series& a);
Series pow(const Series& a, int n);

/// Value of the constant term; lets generic code branch on magnitudes.
inline double primal(double x) { return x; }
inline double primal(const Series& x) { return x.value(); }

}  // namespace gpmp
