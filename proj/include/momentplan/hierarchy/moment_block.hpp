#pragma once

#include <Eigen/Core>

#include <memory>
#include <utility>
#include <vector>

#include "momentplan/conic/program.hpp"
#include "momentplan/moment/quotient_moments.hpp"

namespace momentplan {

/// One pseudo-moment sequence inside a conic program.
///
/// Callers write polynomials in `orig` (optionally containing a time variable
/// t). They are mapped to `reduced` through `images` (one polynomial per orig
/// variable), which is how exact linear equalities are eliminated; the
/// moment coordinates are the standard monomials of the reduced non-time
/// variables modulo the square rules. The coordinate of the monomial 1 is
/// pinned to 1; further coordinates may be pinned to affine expressions
/// before allocate().
class MomentBlock {
 public:
  /// rules: (reduced variable index, replacement polynomial in `reduced`).
  MomentBlock(SpacePtr orig, SpacePtr reduced, std::vector<Polynomial> images, int order,
              const std::vector<std::pair<int, Polynomial>>& rules = {});

  /// orig == reduced, identity images.
  static MomentBlock plain(SpacePtr space, int order);

  const SpacePtr& orig_space() const { return orig_; }
  const SpacePtr& reduced_space() const { return reduced_; }
  int order() const { return moments_->order(); }
  int size() const { return moments_->size(); }
  QuotientMoments& moments() { return *moments_; }
  /// Index of t in the reduced space, -1 without time.
  int time_var() const { return time_var_; }

  /// Replaces a coordinate (standard monomial over the reduced non-time
  /// variables) by an affine expression; only before allocate().
  void pin(const Exponent& alpha, AffineExpr value);
  /// Adds program variables for the unpinned coordinates.
  void allocate(ConicProgram& program);
  bool allocated() const { return allocated_; }

  Polynomial reduce(const Polynomial& q_orig) const;

  AffineExpr expr(const MomentForm& f) const;
  /// L(q) for q in orig (no time dependence).
  AffineExpr riesz(const Polynomial& q_orig);
  AffineExpr riesz_reduced(const Polynomial& q_reduced);
  AffineMatrix moment_matrix();
  /// Localizing matrix of q (orig, no time) with rows of degree <= half.
  AffineMatrix localizing(const Polynomial& q_orig, int half);
  /// X(t) = sum_j t^j M(g_j) for g_sub(t, .) in orig.
  AffinePolyMatrix localizing_time(const Polynomial& g_sub_orig, int half);

  /// Coordinate values in a program solution.
  Eigen::VectorXd values(const Eigen::VectorXd& x) const;
  double riesz_value(const Polynomial& q_orig, const Eigen::VectorXd& x);

 private:
  TermList terms(const Polynomial& q_reduced) const;

  SpacePtr orig_, reduced_;
  std::vector<Polynomial> images_;
  int time_var_ = -1;
  std::unique_ptr<QuotientMoments> moments_;
  std::vector<AffineExpr> coord_;
  std::vector<bool> pinned_;
  bool allocated_ = false;
};

AffineMatrix to_affine(const MomentBlock& block, const FormMatrix& f);

}  // namespace momentplan
