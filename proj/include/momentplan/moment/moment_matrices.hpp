#pragma once

#include <Eigen/Core>

#include <utility>
#include <vector>

#include "momentplan/poly/monomials.hpp"
#include "momentplan/poly/polynomial.hpp"

namespace momentplan {

/// Linear functional on a moment vector: sum of coef * phi[index].
struct MomentForm {
  std::vector<std::pair<int, double>> terms;

  double eval(const Eigen::VectorXd& phi) const;
  bool empty() const { return terms.empty(); }
  /// Sorts by index, merges duplicates, drops exact zeros.
  MomentForm& compress();
};

/// Exponent/coefficient pairs of a polynomial with one variable dropped
/// (the dropped variable must have exponent 0 in every term; pass -1 to keep all).
using TermList = std::vector<std::pair<Exponent, double>>;
TermList term_list(const Polynomial& q, int drop_var = -1);
int term_degree(const TermList& q);

/// Symmetric m x m matrix of moment forms; stores the upper triangle row-major.
class FormMatrix {
 public:
  FormMatrix() = default;
  explicit FormMatrix(int m) : m_(m), upper_(static_cast<std::size_t>(m * (m + 1) / 2)) {}

  int size() const { return m_; }
  MomentForm& at(int i, int j);
  const MomentForm& at(int i, int j) const;
  Eigen::MatrixXd eval(const Eigen::VectorXd& phi) const;

 private:
  static std::size_t slot(int m, int i, int j);
  int m_ = 0;
  std::vector<MomentForm> upper_;
};

/// Polynomial in t whose coefficients are form matrices.
using FormPolyMatrix = std::vector<FormMatrix>;

/// Riesz functional as a form.
MomentForm riesz_form(const MonomialBasis& basis, const TermList& q);

/// Localizing matrix of q with rows/columns labelled by N^n_half.
/// Requires 2*half + deg q <= basis.degree().
FormMatrix localizing_forms(const MonomialBasis& basis, const TermList& q, int half);

/// Order floor((r - deg q)/2) used for a localizing matrix; -1 if deg q > r.
int localizing_half_order(int r, int deg_q);

/// Time-parameterized localizing matrix of g_sub(t, y) with t at `time_var`.
/// Uses half order floor((r - deg_y g_sub)/2).
FormPolyMatrix localizing_time_forms(const MonomialBasis& basis, const Polynomial& g_sub, int time_var);

}  // namespace momentplan
