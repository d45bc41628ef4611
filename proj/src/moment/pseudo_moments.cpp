#include "momentplan/moment/pseudo_moments.hpp"

#include <map>
#include <mutex>
#include <stdexcept>

#include "momentplan/moment/moment_matrices.hpp"

namespace momentplan {

std::shared_ptr<const MonomialBasis> shared_basis(int num_vars, int degree) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::shared_ptr<const MonomialBasis>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{num_vars, degree}];
  if (!slot) slot = std::make_shared<const MonomialBasis>(num_vars, degree);
  return slot;
}

PseudoMomentSeq::PseudoMomentSeq(int n_vars, int order, Eigen::VectorXd values)
    : basis_(shared_basis(n_vars, order)), values_(std::move(values)) {
  if (values_.size() != basis_->size()) {
    throw std::invalid_argument("moment vector length does not match C(n + r, r)");
  }
}

PseudoMomentSeq PseudoMomentSeq::from_atoms(std::span<const double> weights,
                                            std::span<const Eigen::VectorXd> points, int order) {
  if (weights.size() != points.size() || points.empty()) {
    throw std::invalid_argument("need one weight per atom");
  }
  const int n = static_cast<int>(points.front().size());
  auto basis = shared_basis(n, order);
  Eigen::VectorXd phi = Eigen::VectorXd::Zero(basis->size());
  for (std::size_t k = 0; k < points.size(); ++k) {
    for (int a = 0; a < basis->size(); ++a) {
      double m = weights[k];
      const Exponent& alpha = (*basis)[a];
      for (int j = 0; j < n; ++j) {
        for (int e = 0; e < alpha[static_cast<std::size_t>(j)]; ++e) m *= points[k][j];
      }
      phi[a] += m;
    }
  }
  return PseudoMomentSeq(n, order, std::move(phi));
}

Eigen::MatrixXd PolyMatrix::operator()(double t) const {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(size(), size());
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) out = out * t + *it;
  return out;
}

double riesz_apply(const PseudoMomentSeq& phi, const Polynomial& q) {
  if (q.num_vars() != phi.n_vars()) throw std::invalid_argument("polynomial and moments disagree on variables");
  if (q.degree() > phi.order()) throw std::invalid_argument("polynomial degree exceeds moment order");
  return riesz_form(phi.basis(), term_list(q)).eval(phi.values());
}

Eigen::MatrixXd moment_matrix(const PseudoMomentSeq& phi) {
  TermList one{{Exponent(static_cast<std::size_t>(phi.n_vars()), 0), 1.0}};
  return localizing_forms(phi.basis(), one, phi.order() / 2).eval(phi.values());
}

Eigen::MatrixXd localizing_matrix(const PseudoMomentSeq& phi, const Polynomial& q) {
  if (q.num_vars() != phi.n_vars()) throw std::invalid_argument("polynomial and moments disagree on variables");
  const int half = localizing_half_order(phi.order(), q.degree());
  if (half < 0) throw std::invalid_argument("localizing polynomial degree exceeds moment order");
  return localizing_forms(phi.basis(), term_list(q), half).eval(phi.values());
}

PolyMatrix localizing_time_matrix(const PseudoMomentSeq& phi, const Polynomial& g_sub, int time_var) {
  if (g_sub.num_vars() != phi.n_vars() + 1) {
    throw std::invalid_argument("g_sub must have the moment variables plus t");
  }
  PolyMatrix out;
  for (const auto& fm : localizing_time_forms(phi.basis(), g_sub, time_var)) {
    out.coeffs.push_back(fm.eval(phi.values()));
  }
  return out;
}

}  // namespace momentplan
