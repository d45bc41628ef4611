#pragma once

#include <vector>

namespace momentplan {

/// Dense univariate polynomial, coefficients in ascending powers.
class Univariate {
 public:
  Univariate() = default;
  explicit Univariate(std::vector<double> coeffs);

  static Univariate constant(double c) { return Univariate({c}); }
  /// a + b t
  static Univariate linear(double a, double b) { return Univariate({a, b}); }

  const std::vector<double>& coeffs() const { return c_; }
  /// Degree after trimming trailing zeros; -1 for the zero polynomial.
  int degree() const;

  double operator()(double t) const;
  Univariate derivative() const;

  Univariate& operator+=(const Univariate& o);
  Univariate& operator*=(double s);
  friend Univariate operator+(Univariate a, const Univariate& b) { return a += b; }
  friend Univariate operator*(const Univariate& a, const Univariate& b);
  friend Univariate operator*(Univariate a, double s) { return a *= s; }
  Univariate pow(int e) const;

  /// Real roots (companion-matrix eigenvalues with |imag| small), sorted.
  std::vector<double> real_roots(double imag_tol = 1e-9) const;

 private:
  void trim();
  std::vector<double> c_;
};

struct IntervalMin {
  double value;
  double argmin;
};

/// Exact minimum over the closed interval [a, b]: endpoints plus the real
/// stationary points inside.
IntervalMin minimize_on_interval(const Univariate& q, double a, double b);

}  // namespace momentplan
