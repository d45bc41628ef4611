#pragma once

#include <string>

#include "momentplan/scene/certify.hpp"

namespace momentplan {

struct PathMetrics {
  double length = 0.0;
  double smoothness = 0.0;
  bool feasible = false;
  double min_margin = 0.0;
};

/// sum_i dt_i |v_i|.
double path_length(const PiecewiseLinearPath& path);
/// sum_i dt_i |v_i - vbar|^2 with vbar = (1/T) sum_i dt_i v_i, the closed form
/// of int_0^T |x'(t) - (1/T) int_0^T x'|^2 dt for piecewise-constant x'.
double path_smoothness(const PiecewiseLinearPath& path);

/// Length and smoothness only; feasible/min_margin left unset.
PathMetrics compute_metrics(const PiecewiseLinearPath& path);
/// Adds the certified feasibility verdict against the scene.
PathMetrics compute_metrics(const PiecewiseLinearPath& path, const ProblemData& data, double tol = kFeasibilityTol);

/// Row of the metrics CSV: scene, planner, success, length, smoothness, solve_seconds, min_margin.
std::string metrics_csv_header();
std::string metrics_csv_row(const std::string& scene, const std::string& planner, bool success,
                            const PathMetrics& m, double solve_seconds);

}  // namespace momentplan
