#pragma once

#include <optional>
#include <string>
#include <vector>

#include "momentplan/conic/solver.hpp"
#include "momentplan/hierarchy/relaxation.hpp"
#include "momentplan/moment/flatness.hpp"

namespace momentplan {

struct LowerBoundCertificate {
  double rho = 0.0;  // +inf when the relaxation is infeasible
  int r = 0, s = 0;
  bool sparse = false;
  SolveStatus status = SolveStatus::Failed;
  double primal_residual = 0.0, dual_residual = 0.0, gap = 0.0;
  double solve_seconds = 0.0;  // solver only
  double build_seconds = 0.0;
  int num_vars = 0;
  bool flat = false;
  std::vector<FlatnessResidual> residuals;  // per piece, empty when not solved
  std::optional<PiecewiseLinearPath> extracted;
  std::string message;

  bool solved() const { return status == SolveStatus::Optimal || status == SolveStatus::Inaccurate; }
  bool infeasible() const { return status == SolveStatus::Infeasible; }
};

struct LowerBoundOptions {
  SolverOptions solver;
  double flat_tol = 1e-6;
  bool extract = true;
};

LowerBoundCertificate solve_lower_bound(const ProblemData& data, const RelaxationConfig& cfg,
                                        const LowerBoundOptions& opts = {});

/// Flatness readout from a solved relaxation: per-piece residuals, and the
/// path x(t) = L(u_i) + t L(v_i) when every piece is flat within tol and the
/// path certifies as feasible.
struct Extraction {
  std::vector<FlatnessResidual> residuals;
  bool flat = false;  // every piece passed the flatness test (path may still fail certification)
  std::optional<PiecewiseLinearPath> path;
  std::string message;
};
Extraction extract_path_if_flat(Relaxation& rel, const Eigen::VectorXd& x, const ProblemData& data, double tol);

/// Same test for an arbitrary Riesz functional over piece variables; used
/// with hand-made moment sequences.
Extraction extract_path_if_flat(const RieszFn& L, const std::vector<PieceForms>& pieces, int r,
                                const ProblemData& data, double tol);

std::string sweep_csv_header();
std::string sweep_csv_row(const LowerBoundCertificate& cert);

}  // namespace momentplan
