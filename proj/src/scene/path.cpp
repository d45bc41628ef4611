#include "momentplan/scene/path.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace momentplan {

SpacePtr configuration_space(int n) {
  static std::mutex mu;
  static std::map<int, SpacePtr> cache;
  std::lock_guard lock(mu);
  auto& slot = cache[n];
  if (!slot) slot = make_space(VariableSpace::configuration(n));
  return slot;
}

SpacePtr ProblemData::space() const { return configuration_space(n); }

void ProblemData::validate() const {
  if (n < 1) throw std::invalid_argument("dimension n must be >= 1");
  if (!(T > 0.0) || !std::isfinite(T)) throw std::invalid_argument("horizon T must be positive");
  if (x0.size() != n || xT.size() != n) throw std::invalid_argument("endpoints must have n coordinates");
  if (!x0.allFinite() || !xT.allFinite()) throw std::invalid_argument("endpoints must be finite");
  if (constraints.empty()) throw std::invalid_argument("at least one constraint is required");
  const SpacePtr sp = space();
  for (const auto& g : constraints) {
    if (!same_space(g.space(), sp)) throw std::invalid_argument("constraint lives in the wrong variable space");
  }
}

PiecewiseLinearPath::PiecewiseLinearPath(std::vector<double> breaks, std::vector<PathPiece> pieces)
    : breaks_(std::move(breaks)), pieces_(std::move(pieces)) {
  if (pieces_.empty()) throw std::invalid_argument("path needs at least one piece");
  if (breaks_.size() != pieces_.size() + 1) throw std::invalid_argument("path needs s+1 breakpoints");
  for (std::size_t i = 0; i + 1 < breaks_.size(); ++i) {
    if (!(breaks_[i + 1] > breaks_[i])) throw std::invalid_argument("breakpoints must increase strictly");
  }
  const auto n = pieces_.front().u.size();
  for (const auto& p : pieces_) {
    if (p.u.size() != n || p.v.size() != n) throw std::invalid_argument("pieces have inconsistent dimensions");
  }
}

PiecewiseLinearPath PiecewiseLinearPath::uniform(double T, std::vector<PathPiece> pieces) {
  const int s = static_cast<int>(pieces.size());
  std::vector<double> breaks(static_cast<std::size_t>(s + 1));
  for (int i = 0; i <= s; ++i) breaks[static_cast<std::size_t>(i)] = i * T / s;
  return PiecewiseLinearPath(std::move(breaks), std::move(pieces));
}

PiecewiseLinearPath PiecewiseLinearPath::from_waypoints(const std::vector<double>& times,
                                                        const std::vector<Eigen::VectorXd>& points) {
  if (times.size() != points.size() || times.size() < 2) throw std::invalid_argument("need >= 2 matching waypoints");
  std::vector<PathPiece> pieces;
  for (std::size_t k = 0; k + 1 < times.size(); ++k) {
    const double dt = times[k + 1] - times[k];
    if (!(dt > 0.0)) throw std::invalid_argument("waypoint times must increase strictly");
    PathPiece p;
    p.v = (points[k + 1] - points[k]) / dt;
    p.u = points[k] - times[k] * p.v;
    pieces.push_back(std::move(p));
  }
  return PiecewiseLinearPath(times, std::move(pieces));
}

bool PiecewiseLinearPath::is_uniform(double tol) const {
  const double h = T() / s();
  for (int i = 0; i <= s(); ++i) {
    if (std::abs(breaks_[static_cast<std::size_t>(i)] - i * h) > tol * std::max(1.0, T())) return false;
  }
  return true;
}

int PiecewiseLinearPath::piece_at(double t) const {
  auto it = std::lower_bound(breaks_.begin() + 1, breaks_.end(), t);
  const int i = static_cast<int>(it - breaks_.begin()) - 1;
  return std::clamp(i, 0, s() - 1);
}

Eigen::VectorXd PiecewiseLinearPath::operator()(double t) const {
  const auto& p = pieces_[static_cast<std::size_t>(piece_at(t))];
  return p.u + t * p.v;
}

Eigen::VectorXd PiecewiseLinearPath::start(int i) const {
  const auto& p = pieces_.at(static_cast<std::size_t>(i));
  return p.u + breaks_[static_cast<std::size_t>(i)] * p.v;
}

Eigen::VectorXd PiecewiseLinearPath::end(int i) const {
  const auto& p = pieces_.at(static_cast<std::size_t>(i));
  return p.u + breaks_[static_cast<std::size_t>(i + 1)] * p.v;
}

double PiecewiseLinearPath::continuity_error() const {
  double err = 0.0;
  for (int i = 0; i + 1 < s(); ++i) err = std::max(err, (end(i) - start(i + 1)).norm());
  return err;
}

}  // namespace momentplan
