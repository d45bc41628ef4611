#pragma once

#include <Eigen/Core>

#include <string>
#include <vector>

#include "momentplan/poly/polynomial.hpp"

namespace momentplan {

/// Problem data D = (x0, xT, {g_k}) over the horizon [0, T].
/// Constraints are polynomials in VariableSpace::configuration(n).
struct ProblemData {
  int n = 0;
  double T = 1.0;
  Eigen::VectorXd x0, xT;
  std::vector<Polynomial> constraints;

  SpacePtr space() const;
  /// Throws std::invalid_argument when an invariant is broken.
  void validate() const;
};

/// The (t, x) space shared by all scenes of dimension n.
SpacePtr configuration_space(int n);

struct PathPiece {
  Eigen::VectorXd u, v;  // x(t) = u + t v on the piece's time interval
};

/// x(t) = u_i + t v_i for t in [breaks[i], breaks[i+1]] (global time t).
class PiecewiseLinearPath {
 public:
  PiecewiseLinearPath() = default;
  PiecewiseLinearPath(std::vector<double> breaks, std::vector<PathPiece> pieces);

  /// Pieces on the uniform grid t_i = i T / s.
  static PiecewiseLinearPath uniform(double T, std::vector<PathPiece> pieces);
  /// Linear interpolation of points[k] at times[k] (strictly increasing).
  static PiecewiseLinearPath from_waypoints(const std::vector<double>& times, const std::vector<Eigen::VectorXd>& points);

  int s() const { return static_cast<int>(pieces_.size()); }
  int dim() const { return pieces_.empty() ? 0 : static_cast<int>(pieces_.front().u.size()); }
  double T() const { return breaks_.back(); }
  const std::vector<double>& breaks() const { return breaks_; }
  const std::vector<PathPiece>& pieces() const { return pieces_; }
  bool is_uniform(double tol = 1e-12) const;

  /// Piece containing t (the left one at interior breakpoints).
  int piece_at(double t) const;
  Eigen::VectorXd operator()(double t) const;
  Eigen::VectorXd start(int i) const;
  Eigen::VectorXd end(int i) const;

  /// max_i |end(i) - start(i+1)|.
  double continuity_error() const;

 private:
  std::vector<double> breaks_;
  std::vector<PathPiece> pieces_;
};

}  // namespace momentplan
