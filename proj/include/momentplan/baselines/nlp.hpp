#pragma once

#include <cstdint>
#include <optional>

#include "momentplan/scene/certify.hpp"

namespace momentplan {

struct NlpConfig {
  int s = 8;
  int M = 10;  // constraint samples per piece, endpoints included
  double mu0 = 10.0;
  double mu_growth = 10.0;
  double mu_max = 1e8;
  int max_outer = 30;
  int max_inner = 500;
  double eps = 1e-6;     // smoothing of |v_i|
  double tol = 1e-8;     // constraint violation accepted by the outer loop
  double jitter = 1e-3;  // seeded perturbation of the straight-line start
  std::uint64_t seed = 0;

  void validate() const;
};

struct NlpResult {
  std::optional<PiecewiseLinearPath> path;  // set iff the final iterate certifies
  PiecewiseLinearPath final_iterate;
  FeasibilityReport report;
  double max_violation = 0.0;  // over the sampled constraints and equalities
  int outer_iterations = 0;
  double seconds = 0.0;
};

/// min sum_i (T/s) sqrt(|v_i|^2 + eps^2) over uniform s-piece paths, subject
/// to continuity, endpoints and g_k(t_j, x(t_j)) >= 0 at M samples per
/// piece. Augmented Lagrangian outer loop, L-BFGS inner solves, started
/// from the (jittered) straight line.
NlpResult nlp_plan(const ProblemData& data, const NlpConfig& cfg);

}  // namespace momentplan
