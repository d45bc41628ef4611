#pragma once

#include <Eigen/Core>

#include <memory>
#include <span>
#include <vector>

#include "momentplan/poly/monomials.hpp"
#include "momentplan/poly/polynomial.hpp"

namespace momentplan {

/// Shared graded-lex basis of N^n_d; identical (n, d) requests return the
/// same object.
std::shared_ptr<const MonomialBasis> shared_basis(int num_vars, int degree);

/// Truncated pseudo-moment sequence indexed by the graded-lex basis of N^n_r.
class PseudoMomentSeq {
 public:
  PseudoMomentSeq(int n_vars, int order, Eigen::VectorXd values);

  /// Moments of sum_k weights[k] * delta(points[k]).
  static PseudoMomentSeq from_atoms(std::span<const double> weights,
                                    std::span<const Eigen::VectorXd> points, int order);

  int n_vars() const { return basis_->num_vars(); }
  int order() const { return basis_->degree(); }
  const MonomialBasis& basis() const { return *basis_; }
  const Eigen::VectorXd& values() const { return values_; }

  double operator[](const Exponent& alpha) const { return values_[basis_->index(alpha)]; }
  double mass() const { return values_[0]; }

 private:
  std::shared_ptr<const MonomialBasis> basis_;
  Eigen::VectorXd values_;
};

/// Polynomial X(t) = sum_j t^j X_j with symmetric coefficient matrices.
struct PolyMatrix {
  std::vector<Eigen::MatrixXd> coeffs;

  int size() const { return coeffs.empty() ? 0 : static_cast<int>(coeffs.front().rows()); }
  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
  Eigen::MatrixXd operator()(double t) const;
};

/// L_phi(q) = sum_alpha phi_alpha q_alpha. q must have phi.n_vars() variables
/// and degree <= phi.order().
double riesz_apply(const PseudoMomentSeq& phi, const Polynomial& q);

/// M_phi(1) indexed by N^n_{floor(r/2)}.
Eigen::MatrixXd moment_matrix(const PseudoMomentSeq& phi);

/// M_phi(q) indexed by N^n_{floor((r - deg q)/2)}.
Eigen::MatrixXd localizing_matrix(const PseudoMomentSeq& phi, const Polynomial& q);

/// X(t) with X_j = M_phi(g_j) where g_sub = sum_j t^j g_j. The variable at
/// `time_var` is t; the remaining variables of g_sub, in order, are phi's.
PolyMatrix localizing_time_matrix(const PseudoMomentSeq& phi, const Polynomial& g_sub, int time_var);

}  // namespace momentplan
