#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "momentplan/conic/solver.hpp"
#include "momentplan/hierarchy/moment_block.hpp"
#include "momentplan/moment/pseudo_moments.hpp"
#include "momentplan/scene/certify.hpp"

namespace momentplan {

struct MmpConfig {
  int s = 4;
  int r = 2;
  int N = 20;
  double lambda = 0.1;
  std::uint64_t seed = 0;
  double init_spread = 0.1;  // sigma of the random means
  double init_variance = 1e-2;
  // Multiply lambda by 1.5 and run N more iterations while the final path
  // fails certification, at most max_ramps times.
  bool lambda_ramp = false;
  int max_ramps = 5;
  SolverOptions solver;

  /// Throws std::invalid_argument when r is odd or below 2, lambda <= 0 or N < 1.
  void validate() const;
};

/// Order actually used on a scene: cfg.r raised to the smallest even order
/// that localizes every constraint at least once.
int mmp_order(const ProblemData& data, const MmpConfig& cfg);

/// One pseudo-moment sequence per piece over (u_i, v_i), in that order.
struct IterateState {
  std::vector<PseudoMomentSeq> blocks;
  int iteration = 0;
  std::vector<double> objective_trace;
};

IterateState init_random(const MmpConfig& cfg, const ProblemData& data);

/// J(phi) = sum_i L(|u_i|^r) - |L(u_i)|^r + L(|v_i|^r) - |L(v_i)|^r.
double moment_gap(const IterateState& state);

/// The inner SDP of one MMP iteration and the handles needed to read it.
struct InnerProgram {
  ConicProgram program;
  std::vector<std::unique_ptr<MomentBlock>> blocks;
  std::vector<int> epigraph;  // variable index of the bound on |L(v_i)|
  int r = 2;
  int n = 0;

  /// Full sequences over (u_i, v_i) from a solution vector.
  IterateState read(const Eigen::VectorXd& x) const;
};

InnerProgram build_inner_program(const IterateState& ref, const ProblemData& data, const MmpConfig& cfg);

struct MmpIteration {
  int iteration = 0;
  SolveStatus status = SolveStatus::Failed;
  double objective = 0.0;
  double J = 0.0;
  std::vector<double> min_eig;  // per block
  double lambda = 0.0;
  double seconds = 0.0;
};

struct MmpResult {
  bool completed = false;  // every inner solve succeeded
  std::string message;
  PiecewiseLinearPath path;
  FeasibilityReport report;
  std::vector<MmpIteration> trace;
  IterateState state;
  double final_J = 0.0;
  int order = 2;
  double lambda = 0.0;
  std::uint64_t seed = 0;
  double seconds = 0.0;

  bool success() const { return completed && report.feasible; }
};

MmpResult run_mmp(const ProblemData& data, const MmpConfig& cfg);

/// Independent runs with seeds cfg.seed, cfg.seed + 1, ...; returns the
/// shortest certified-feasible result, or the first run when none is.
MmpResult run_mmp_multistart(const ProblemData& data, const MmpConfig& cfg, int starts, int threads = 1);

/// Path x(t) = L(u_i) + t L(v_i) on the uniform grid.
PiecewiseLinearPath path_from_state(const IterateState& state, int n, double T);

/// iteration,objective,J,lambda,status,min_eig_1..min_eig_s
std::string mmp_diagnostics_csv(const MmpResult& result);

}  // namespace momentplan
