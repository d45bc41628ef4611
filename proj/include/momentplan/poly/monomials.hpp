#pragma once

#include <cstddef>
#include <unordered_map>
#include <vector>

namespace momentplan {

/// Exponent vector alpha, one nonnegative entry per variable.
using Exponent = std::vector<int>;

int total_degree(const Exponent& alpha);
Exponent add_exponents(const Exponent& a, const Exponent& b);

/// Graded lexicographic order: lower total degree first; within a degree the
/// first variable dominates, so x1 precedes x2 and x1^2 precedes x1*x2.
struct GradedLexLess {
  bool operator()(const Exponent& a, const Exponent& b) const;
};

struct ExponentHash {
  std::size_t operator()(const Exponent& alpha) const noexcept;
};

/// All exponent vectors of N^n_d sorted graded-lexicographically.
std::vector<Exponent> enumerate_monomials(int num_vars, int degree);

/// C(n + d, d) computed without overflow for the sizes used here.
std::size_t binomial(int n, int k);

/// Indexed graded-lex basis of N^n_d, shared by moment vectors and the row /
/// column labels of moment and localizing matrices.
class MonomialBasis {
 public:
  MonomialBasis() = default;
  MonomialBasis(int num_vars, int degree);

  int num_vars() const { return num_vars_; }
  int degree() const { return degree_; }
  int size() const { return static_cast<int>(exponents_.size()); }

  const Exponent& operator[](int i) const { return exponents_[static_cast<std::size_t>(i)]; }
  const std::vector<Exponent>& exponents() const { return exponents_; }

  /// Index of alpha, or -1 if |alpha| exceeds the basis degree.
  int find(const Exponent& alpha) const;
  /// Like find() but throws std::out_of_range.
  int index(const Exponent& alpha) const;

  /// Number of basis elements with total degree <= d (prefix length).
  int prefix_size(int d) const;

 private:
  int num_vars_ = 0;
  int degree_ = 0;
  std::vector<Exponent> exponents_;
  std::unordered_map<Exponent, int, ExponentHash> lookup_;
};

}  // namespace momentplan
