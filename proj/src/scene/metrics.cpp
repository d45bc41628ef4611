#include "momentplan/scene/metrics.hpp"

#include <cstdio>

namespace momentplan {

double path_length(const PiecewiseLinearPath& path) {
  double len = 0.0;
  const auto& br = path.breaks();
  for (int i = 0; i < path.s(); ++i) {
    len += (br[static_cast<std::size_t>(i + 1)] - br[static_cast<std::size_t>(i)]) * path.pieces()[static_cast<std::size_t>(i)].v.norm();
  }
  return len;
}

double path_smoothness(const PiecewiseLinearPath& path) {
  const auto& br = path.breaks();
  Eigen::VectorXd vbar = Eigen::VectorXd::Zero(path.dim());
  for (int i = 0; i < path.s(); ++i) {
    vbar += (br[static_cast<std::size_t>(i + 1)] - br[static_cast<std::size_t>(i)]) * path.pieces()[static_cast<std::size_t>(i)].v;
  }
  vbar /= (br.back() - br.front());
  double sm = 0.0;
  for (int i = 0; i < path.s(); ++i) {
    sm += (br[static_cast<std::size_t>(i + 1)] - br[static_cast<std::size_t>(i)]) *
          (path.pieces()[static_cast<std::size_t>(i)].v - vbar).squaredNorm();
  }
  return sm;
}

PathMetrics compute_metrics(const PiecewiseLinearPath& path) {
  PathMetrics m;
  m.length = path_length(path);
  m.smoothness = path_smoothness(path);
  return m;
}

PathMetrics compute_metrics(const PiecewiseLinearPath& path, const ProblemData& data, double tol) {
  PathMetrics m = compute_metrics(path);
  const auto rep = certify_path_feasibility(path, data, tol);
  m.feasible = rep.feasible;
  m.min_margin = rep.min_margin;
  return m;
}

std::string metrics_csv_header() { return "scene,planner,success,length,smoothness,solve_seconds,min_margin"; }

std::string metrics_csv_row(const std::string& scene, const std::string& planner, bool success,
                            const PathMetrics& m, double solve_seconds) {
  char buf[256];
  std::snprintf(buf, sizeof buf, ",%d,%.10g,%.10g,%.6f,%.10g", success ? 1 : 0, m.length, m.smoothness,
                solve_seconds, m.min_margin);
  return scene + "," + planner + buf;
}

}  // namespace momentplan
