#pragma once

#include <unordered_map>
#include <vector>

#include "momentplan/moment/moment_matrices.hpp"

namespace momentplan {

/// var^2 == replacement, used to rewrite moments modulo an equality.
/// The replacement must not contain `var` and must have degree <= 2, so
/// rewriting never raises the degree.
struct SquareRule {
  int var = -1;
  TermList replacement;
};

/// Truncated moments of order r modulo a set of square rules.
///
/// Coordinates are the standard monomials (every ruled variable with exponent
/// <= 1) of degree <= r, in graded-lex order. Any monomial of degree <= r
/// maps to a form on those coordinates. Imposing L(m * (var^2 - repl)) = 0 for
/// all m of degree <= r - 2 is equivalent to working in these coordinates, and
/// moment/localizing matrices indexed by standard monomials only are
/// congruent to the full ones, so PSD-ness is unchanged while the forced
/// kernel disappears.
///
/// With no rules this is the plain graded-lex moment basis.
class QuotientMoments {
 public:
  QuotientMoments(int num_vars, int order, std::vector<SquareRule> rules = {});

  int num_vars() const { return num_vars_; }
  int order() const { return order_; }
  int size() const { return static_cast<int>(standard_.size()); }
  const std::vector<Exponent>& standard() const { return standard_; }
  /// Number of standard monomials of degree <= d.
  int prefix_size(int d) const;
  /// Coordinate of a standard monomial, -1 otherwise.
  int find(const Exponent& alpha) const;

  /// Form of L(y^alpha); deg alpha <= order.
  const MomentForm& reduce(const Exponent& alpha);
  MomentForm riesz(const TermList& q);
  /// Rows labelled by standard monomials of degree <= half.
  FormMatrix localizing(const TermList& q, int half);
  /// X_j = localizing(g_j) for g_sub = sum_j t^j g_j, half order
  /// floor((order - deg_y)/2) unless `half` >= 0 is given.
  FormPolyMatrix localizing_time(const Polynomial& g_sub, int time_var, int half = -1);

 private:
  int num_vars_;
  int order_;
  std::vector<SquareRule> rules_;
  std::vector<int> rule_of_var_;
  std::vector<Exponent> standard_;
  std::vector<int> prefix_;  // prefix_[d] = #standard monomials of degree <= d
  std::unordered_map<Exponent, int, ExponentHash> lookup_;
  std::unordered_map<Exponent, MomentForm, ExponentHash> cache_;
};

}  // namespace momentplan
