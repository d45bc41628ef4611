#pragma once

#include "momentplan/conic/program.hpp"

namespace momentplan {

struct SolverOptions {
  double tol_feas = 1e-7;
  double tol_gap = 1e-8;
  double tol_inaccurate = 1e-5;
  double tol_infeas = 1e-8;
  int max_iter = 150;
  double static_reg = 1e-8;
  int refine_steps = 8;
  bool equilibrate = true;
  bool verbose = false;
};

/// Homogeneous self-dual primal-dual interior-point method with
/// Nesterov-Todd scaling and Mehrotra correction.
Solution solve_ipm(const ConicProgram& program, const SolverOptions& opts = {});

}  // namespace momentplan
