#pragma once

#include <cstdint>

#include "momentplan/scene/scene_io.hpp"

namespace momentplan {

struct BenchmarkParams {
  int n = 2;
  int obstacles = 10;
  bool dynamic = false;
  std::uint64_t seed = 0;
  double T = 1.0;
  double radius = 0.2;
  int max_retries = 100;  // per obstacle, when it swallows an endpoint
};

/// Box [-1,1]^n from x0 = (-1,...,-1) to xT = (1,...,1) with spherical
/// obstacles |x - (c_k + t w_k)|^2 - radius^2 >= 0; centers uniform in the
/// box, velocities zero (static) or uniform in [-1,1]^n (dynamic).
/// Constraint order: 1 - x_i for all i, then 1 + x_i, then the spheres.
Scene generate_benchmark(const BenchmarkParams& params);

/// Sphere constraint |x - (c + t w)|^2 - radius^2.
Polynomial moving_sphere(const Eigen::VectorXd& center, const Eigen::VectorXd& velocity, double radius);

/// The 2n box faces 1 - x_i, 1 + x_i.
std::vector<Polynomial> box_constraints(int n);

}  // namespace momentplan
