#pragma once

#include <Eigen/Core>

#include <string>
#include <utility>
#include <vector>

namespace momentplan {

/// sum_i coef_i * x[var_i] + constant.
struct AffineExpr {
  std::vector<std::pair<int, double>> terms;
  double constant = 0.0;

  AffineExpr() = default;
  explicit AffineExpr(double c) : constant(c) {}
  static AffineExpr var(int index, double coef = 1.0);

  AffineExpr& add(int index, double coef);
  AffineExpr& operator+=(const AffineExpr& o);
  AffineExpr& operator-=(const AffineExpr& o);
  AffineExpr& operator*=(double s);
  friend AffineExpr operator+(AffineExpr a, const AffineExpr& b) { return a += b; }
  friend AffineExpr operator-(AffineExpr a, const AffineExpr& b) { return a -= b; }
  friend AffineExpr operator*(AffineExpr a, double s) { return a *= s; }
  friend AffineExpr operator*(double s, AffineExpr a) { return a *= s; }

  /// Sorts terms, merges duplicates, drops exact zeros.
  AffineExpr& compress();
  double eval(const Eigen::VectorXd& x) const;
  bool is_constant() const { return terms.empty(); }
};

/// Symmetric matrix of affine expressions (upper triangle, row-major).
class AffineMatrix {
 public:
  AffineMatrix() = default;
  explicit AffineMatrix(int m) : m_(m), upper_(static_cast<std::size_t>(m * (m + 1) / 2)) {}

  int size() const { return m_; }
  AffineExpr& at(int i, int j);
  const AffineExpr& at(int i, int j) const;
  const std::vector<AffineExpr>& upper() const { return upper_; }
  std::vector<AffineExpr>& upper() { return upper_; }
  Eigen::MatrixXd eval(const Eigen::VectorXd& x) const;
  bool is_zero() const;

 private:
  int m_ = 0;
  std::vector<AffineExpr> upper_;
};

/// X(t) = sum_j t^j coeffs[j].
using AffinePolyMatrix = std::vector<AffineMatrix>;

enum class ConeKind { Nonnegative, SecondOrder, Psd };

/// exprs in K. Nonnegative: one row, expr >= 0. SecondOrder: (t, w) with
/// t >= |w|. Psd: upper triangle (row-major) of an m x m symmetric matrix.
struct ConeConstraint {
  ConeKind kind = ConeKind::Nonnegative;
  int dim = 1;  // rows for Nonnegative/SecondOrder, matrix size for Psd
  std::vector<AffineExpr> rows;
};

/// min objective(x) s.t. equalities(x) = 0, cone rows in their cones.
class ConicProgram {
 public:
  int num_vars() const { return num_vars_; }
  /// Appends k free variables and returns the first index.
  int add_variables(int k);

  void set_objective(AffineExpr obj);
  const AffineExpr& objective() const { return objective_; }

  void add_equality(AffineExpr expr);
  void add_nonnegative(AffineExpr expr);
  void add_second_order(std::vector<AffineExpr> rows);
  void add_psd(const AffineMatrix& mat);

  const std::vector<AffineExpr>& equalities() const { return equalities_; }
  const std::vector<ConeConstraint>& cones() const { return cones_; }

  /// Sum over cones of the rows they occupy in svec form.
  int cone_rows() const;

 private:
  void check(const AffineExpr& e) const;

  int num_vars_ = 0;
  AffineExpr objective_;
  std::vector<AffineExpr> equalities_;
  std::vector<ConeConstraint> cones_;
};

enum class SolveStatus { Optimal, Infeasible, Unbounded, Inaccurate, Failed };

std::string to_string(SolveStatus s);

struct Solution {
  SolveStatus status = SolveStatus::Failed;
  Eigen::VectorXd x;
  double objective_value = 0.0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double gap = 0.0;
  int iterations = 0;
  double solve_seconds = 0.0;
  std::string message;
};

}  // namespace momentplan
