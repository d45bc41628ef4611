#pragma once

#include <string>

#include "momentplan/conic/ipm_solver.hpp"
#include "momentplan/conic/program.hpp"

namespace momentplan {

/// Backend chosen by the MOMENTPLAN_SOLVER environment variable:
///   "ipm" (default)  in-tree interior-point method
///   "sdpa"           export to .dat-s and run the command in
///                    MOMENTPLAN_SDPA_CMD (default: python3 tools/sdpa_solve.py)
std::string solver_backend();

Solution solve(const ConicProgram& program, const SolverOptions& opts = {});

/// Runs an external SDPA-style solver on `program`. The command receives the
/// input .dat-s path and an output path; the output holds the status, the
/// objective and one variable value per line.
Solution solve_external(const ConicProgram& program, const std::string& command);

}  // namespace momentplan
