#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "momentplan/poly/monomials.hpp"
#include "momentplan/poly/variable_space.hpp"

namespace momentplan {

/// Coefficients with magnitude below this are dropped after every operation.
inline constexpr double kCoefficientCleanup = 1e-14;

/// Sparse multivariate polynomial with real coefficients over a VariableSpace.
///
/// Terms are kept in graded-lex order and never store a zero coefficient.
/// All binary operations require both operands to share a variable space and
/// throw std::invalid_argument otherwise.
class Polynomial {
 public:
  using TermMap = std::map<Exponent, double, GradedLexLess>;

  Polynomial() = default;
  explicit Polynomial(SpacePtr space);

  static Polynomial constant(SpacePtr space, double c);
  static Polynomial variable(SpacePtr space, int index, double scale = 1.0);
  static Polynomial monomial(SpacePtr space, Exponent alpha, double c = 1.0);

  const SpacePtr& space() const { return space_; }
  int num_vars() const;
  const TermMap& terms() const { return terms_; }
  std::size_t num_terms() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  /// Total degree; 0 for the zero polynomial.
  int degree() const;
  /// Degree counting only the flagged variables (mask has one entry per variable).
  int degree_in(const std::vector<bool>& mask) const;
  int degree_in(int var) const;

  double coefficient(const Exponent& alpha) const;
  double constant_term() const;

  /// Adds c to the coefficient of alpha, dropping the term if it cancels.
  void add_term(const Exponent& alpha, double c);

  Polynomial& operator+=(const Polynomial& other);
  Polynomial& operator-=(const Polynomial& other);
  Polynomial& operator*=(const Polynomial& other);
  Polynomial& operator*=(double c);

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(Polynomial a, double c) { return a *= c; }
  friend Polynomial operator*(double c, Polynomial a) { return a *= c; }
  Polynomial operator-() const { return (*this) * -1.0; }

  Polynomial pow(int e) const;

  double evaluate(std::span<const double> point) const;

  /// Replaces variable k by images[k] (all images live in `target`).
  Polynomial substitute(const SpacePtr& target, std::span<const Polynomial> images) const;

  /// Coefficients of var^0, var^1, ...; each returned polynomial has a zero
  /// exponent in `var` and lives in the same space.
  std::vector<Polynomial> split_by_variable(int var) const;

  /// Re-expresses the polynomial in `target`, mapping variable k to
  /// target variable index_map[k]; index_map[k] = -1 requires exponent 0.
  Polynomial remap(const SpacePtr& target, std::span<const int> index_map) const;

  std::string to_string() const;

  /// Coefficient-exact equality (same space, same term set).
  bool operator==(const Polynomial& other) const;

 private:
  void require_same_space(const Polynomial& other) const;

  SpacePtr space_;
  TermMap terms_;
};

/// g(t, u_i + t v_i) for g written in VariableSpace::configuration(n).
///
/// `target` must contain t and u/v variables of `piece`; the result is the
/// expanded polynomial in (t, u_i, v_i).
Polynomial substitute_affine_path(const Polynomial& g, int piece, const SpacePtr& target);

}  // namespace momentplan
