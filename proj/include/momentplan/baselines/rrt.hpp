#pragma once

#include <cstdint>
#include <optional>

#include "momentplan/scene/path.hpp"

namespace momentplan {

struct RrtConfig {
  int max_iters = 10000;
  double steer_step = 0.1;  // spatial length of one extension
  double goal_bias = 0.1;
  double time_slope_max = 10.0;  // max |dx/dt| along an edge
  // A new node within this (t, x) distance of (T, xT) tries to connect to it.
  double goal_radius = 0.3;
  std::uint64_t seed = 0;
  // Sampling box; empty means [-1, 1]^n grown to contain x0 and xT.
  Eigen::VectorXd box_lo, box_hi;

  void validate() const;
};

struct RrtResult {
  std::optional<PiecewiseLinearPath> path;  // breakpoints at the tree nodes' times
  int iterations = 0;
  int nodes = 0;
  double seconds = 0.0;
};

/// Tree in (t, x) rooted at (0, x0); every edge strictly increases t and
/// keeps |dx/dt| <= time_slope_max. Edges are collision-checked by sampling
/// every constraint at spacing steer_step / 10 along the edge.
RrtResult rrt_plan(const ProblemData& data, const RrtConfig& cfg);

/// True when every constraint is >= 0 at samples of the segment
/// (t0, x0) -> (t1, x1) spaced at most `spacing` apart in (t, x).
bool segment_clear(const ProblemData& data, double t0, const Eigen::VectorXd& x0, double t1, const Eigen::VectorXd& x1,
                   double spacing);

}  // namespace momentplan
