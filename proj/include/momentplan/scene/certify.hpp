#pragma once

#include "momentplan/poly/univariate.hpp"
#include "momentplan/scene/path.hpp"

namespace momentplan {

inline constexpr double kFeasibilityTol = 1e-6;
// Pieces must meet each other and the endpoints this closely.
inline constexpr double kContinuityTol = 1e-5;

struct FeasibilityReport {
  bool feasible = false;
  double min_margin = 0.0;  // smallest min_t g_k(t, x(t)) over pieces and constraints
  int worst_piece = -1;
  int worst_constraint = -1;
  double worst_time = 0.0;
  double continuity_error = 0.0;  // includes |x(0) - x0| and |x(T) - xT|
};

/// q(t) = g(t, u + t v) as a dense univariate polynomial.
Univariate restrict_to_line(const Polynomial& g, const Eigen::VectorXd& u, const Eigen::VectorXd& v);

/// Exact per-piece minima of every constraint on the closed piece intervals
/// (endpoints and companion-matrix stationary points). Feasible iff the
/// smallest minimum is >= -tol and the path is continuous and pinned to
/// x0, xT within kContinuityTol.
FeasibilityReport certify_path_feasibility(const PiecewiseLinearPath& path, const ProblemData& data,
                                           double tol = kFeasibilityTol);

}  // namespace momentplan
