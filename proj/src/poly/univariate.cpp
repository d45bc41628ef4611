#include "momentplan/poly/univariate.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace momentplan {

Univariate::Univariate(std::vector<double> coeffs) : c_(std::move(coeffs)) { trim(); }

void Univariate::trim() {
  while (!c_.empty() && c_.back() == 0.0) c_.pop_back();
}

int Univariate::degree() const { return static_cast<int>(c_.size()) - 1; }

double Univariate::operator()(double t) const {
  double acc = 0.0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * t + *it;
  return acc;
}

Univariate Univariate::derivative() const {
  if (c_.size() <= 1) return {};
  std::vector<double> d(c_.size() - 1);
  for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = static_cast<double>(k) * c_[k];
  return Univariate(std::move(d));
}

Univariate& Univariate::operator+=(const Univariate& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0.0);
  for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
  trim();
  return *this;
}

Univariate& Univariate::operator*=(double s) {
  for (double& c : c_) c *= s;
  trim();
  return *this;
}

Univariate operator*(const Univariate& a, const Univariate& b) {
  if (a.c_.empty() || b.c_.empty()) return {};
  std::vector<double> out(a.c_.size() + b.c_.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.c_.size(); ++i) {
    for (std::size_t j = 0; j < b.c_.size(); ++j) out[i + j] += a.c_[i] * b.c_[j];
  }
  return Univariate(std::move(out));
}

Univariate Univariate::pow(int e) const {
  if (e < 0) throw std::invalid_argument("negative power");
  Univariate r = constant(1.0);
  for (int k = 0; k < e; ++k) r = r * *this;
  return r;
}

std::vector<double> Univariate::real_roots(double imag_tol) const {
  std::vector<double> roots;
  const int d = degree();
  if (d < 1) return roots;
  // Scale-aware cutoff for a numerically vanishing leading coefficient.
  double scale = 0.0;
  for (double c : c_) scale = std::max(scale, std::abs(c));
  int top = d;
  while (top >= 1 && std::abs(c_[static_cast<std::size_t>(top)]) <= 1e-14 * scale) --top;
  if (top < 1) return roots;
  if (top == 1) {
    roots.push_back(-c_[0] / c_[1]);
    return roots;
  }
  const double lead = c_[static_cast<std::size_t>(top)];
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(top, top);
  for (int i = 1; i < top; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < top; ++i) companion(i, top - 1) = -c_[static_cast<std::size_t>(i)] / lead;
  Eigen::EigenSolver<Eigen::MatrixXd> es(companion, false);
  const auto& ev = es.eigenvalues();
  for (int i = 0; i < top; ++i) {
    const double re = ev[i].real();
    if (std::abs(ev[i].imag()) <= imag_tol * std::max(1.0, std::abs(re))) roots.push_back(re);
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

IntervalMin minimize_on_interval(const Univariate& q, double a, double b) {
  if (!(b >= a)) throw std::invalid_argument("interval must satisfy a <= b");
  IntervalMin best{q(a), a};
  auto consider = [&](double t) {
    const double v = q(t);
    if (v < best.value) best = {v, t};
  };
  consider(b);
  // Every eigenvalue's real part is a candidate: near-double roots of q' split
  // into complex pairs, and an extra candidate inside [a, b] can never push the
  // result below the true minimum.
  for (double t : q.derivative().real_roots(std::numeric_limits<double>::infinity())) {
    if (t > a && t < b) consider(t);
  }
  return best;
}

}  // namespace momentplan
