#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "momentplan/hierarchy/lower_bound.hpp"
#include "momentplan/scene/metrics.hpp"
#include "momentplan/scene/scene_io.hpp"

namespace momentplan {

// Exit codes shared by every command.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;     // solver or planner failure, bad input
inline constexpr int kExitInfeasible = 2;  // the scene admits no path

struct PlannerSettings {
  std::string planner = "mmp";  // mmp | rrt | nlp
  int s = 0;                    // 0: planner default (mmp 4, nlp 8)
  int r = 2;                    // mmp relaxation order
  double lambda = 0.1;
  int iters = 0;                // 0: planner default (mmp N, rrt max_iters, nlp outer iterations)
  int starts = 1;               // mmp restarts
  bool lambda_ramp = false;
  double tol = kFeasibilityTol;
};

nlohmann::ordered_json to_json(const PlannerSettings& p);

struct PlanOutcome {
  std::string planner;
  bool success = false;  // a path exists and certifies
  std::optional<PiecewiseLinearPath> path;  // may be uncertified (mmp, nlp final iterate)
  PathMetrics metrics;
  double seconds = 0.0;
  std::string diagnostics_csv;  // mmp per-iteration trace
  nlohmann::ordered_json info = nlohmann::ordered_json::object();
};

PlanOutcome run_planner(const ProblemData& data, const PlannerSettings& settings, std::uint64_t seed);

/// 0 when every order solved, 2 when any relaxation is infeasible, else 1.
int lower_bound_exit_code(const std::vector<LowerBoundCertificate>& certs);
nlohmann::ordered_json to_json(const LowerBoundCertificate& cert);

struct BenchOptions {
  std::vector<int> n_list = {2, 3, 4};
  int instances = 10;
  int obstacles = 10;
  bool dynamic = true;
  std::vector<std::string> planners = {"mmp", "rrt", "nlp"};
  std::uint64_t seed = 0;
  int threads = 1;
  PlannerSettings settings;  // .planner is ignored
};

struct BenchRow {
  int n = 0;
  int instance = 0;
  std::uint64_t scene_seed = 0;
  std::string planner;
  PlanOutcome outcome;
};

struct BenchResult {
  std::vector<BenchRow> rows;  // ordered by (n, instance, planner) regardless of threading
  std::vector<std::string> planners;
  std::vector<int> n_list;
};

/// Scene seed of instance k of dimension n under a root seed; `generate`
/// uses the same rule so bench scenes can be regenerated one at a time.
std::uint64_t bench_scene_seed(std::uint64_t root, int n, int k);
Scene bench_scene(std::uint64_t root, int n, int k, int obstacles, bool dynamic);

BenchResult run_bench(const BenchOptions& opts);
/// n,instance,scene_seed,planner,success,length,smoothness,min_margin,solve_seconds
std::string bench_rows_csv(const BenchResult& result);
/// n,planner,instances,successes,success_rate,mutual_successes,mean_length,mean_smoothness;
/// means over instances where every planner succeeded. Timing-free so that
/// the same seed reproduces it byte for byte.
std::string bench_aggregate_csv(const BenchResult& result);
/// n,planner,mean_solve_seconds
std::string bench_timing_csv(const BenchResult& result);

/// Parses "a,b,c"; empty text gives an empty list.
std::vector<double> parse_double_list(const std::string& text);
std::vector<int> parse_int_list(const std::string& text);

/// Entry point of the momentplan executable.
int run_cli(int argc, char** argv);

}  // namespace momentplan
