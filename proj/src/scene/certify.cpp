#include "momentplan/scene/certify.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace momentplan {

Univariate restrict_to_line(const Polynomial& g, const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
  const int n = g.num_vars() - 1;
  if (u.size() != n || v.size() != n) throw std::invalid_argument("line dimension does not match polynomial");
  std::vector<Univariate> lines;
  for (int j = 0; j < n; ++j) lines.push_back(Univariate::linear(u[j], v[j]));
  Univariate q;
  for (const auto& [alpha, c] : g.terms()) {
    std::vector<double> mono(static_cast<std::size_t>(alpha[0] + 1), 0.0);
    mono.back() = c;
    Univariate term(std::move(mono));
    for (int j = 0; j < n; ++j) {
      if (alpha[static_cast<std::size_t>(j + 1)] > 0) term = term * lines[static_cast<std::size_t>(j)].pow(alpha[static_cast<std::size_t>(j + 1)]);
    }
    q += term;
  }
  return q;
}

FeasibilityReport certify_path_feasibility(const PiecewiseLinearPath& path, const ProblemData& data, double tol) {
  if (path.dim() != data.n) throw std::invalid_argument("path dimension does not match scene");
  FeasibilityReport rep;
  rep.min_margin = std::numeric_limits<double>::infinity();
  const auto& br = path.breaks();
  for (int i = 0; i < path.s(); ++i) {
    const auto& p = path.pieces()[static_cast<std::size_t>(i)];
    for (std::size_t k = 0; k < data.constraints.size(); ++k) {
      const Univariate q = restrict_to_line(data.constraints[k], p.u, p.v);
      const IntervalMin mn = minimize_on_interval(q, br[static_cast<std::size_t>(i)], br[static_cast<std::size_t>(i + 1)]);
      if (mn.value < rep.min_margin) {
        rep.min_margin = mn.value;
        rep.worst_piece = i;
        rep.worst_constraint = static_cast<int>(k);
        rep.worst_time = mn.argmin;
      }
    }
  }
  rep.continuity_error = std::max({path.continuity_error(), (path.start(0) - data.x0).norm(),
                                   (path.end(path.s() - 1) - data.xT).norm()});
  if (std::abs(path.T() - data.T) > 1e-9 * std::max(1.0, data.T)) {
    rep.continuity_error = std::numeric_limits<double>::infinity();
  }
  rep.feasible = rep.min_margin >= -tol && rep.continuity_error <= kContinuityTol;
  return rep;
}

}  // namespace momentplan
