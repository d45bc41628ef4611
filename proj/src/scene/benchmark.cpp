#include "momentplan/scene/benchmark.hpp"

#include <random>
#include <stdexcept>

namespace momentplan {

Polynomial moving_sphere(const Eigen::VectorXd& center, const Eigen::VectorXd& velocity, double radius) {
  const int n = static_cast<int>(center.size());
  const SpacePtr sp = configuration_space(n);
  const Polynomial t = Polynomial::variable(sp, 0);
  Polynomial g = Polynomial::constant(sp, -radius * radius);
  for (int j = 0; j < n; ++j) {
    const Polynomial d = Polynomial::variable(sp, j + 1) - Polynomial::constant(sp, center[j]) - velocity[j] * t;
    g += d * d;
  }
  return g;
}

std::vector<Polynomial> box_constraints(int n) {
  const SpacePtr sp = configuration_space(n);
  const Polynomial one = Polynomial::constant(sp, 1.0);
  std::vector<Polynomial> out;
  for (int j = 0; j < n; ++j) out.push_back(one - Polynomial::variable(sp, j + 1));
  for (int j = 0; j < n; ++j) out.push_back(one + Polynomial::variable(sp, j + 1));
  return out;
}

Scene generate_benchmark(const BenchmarkParams& params) {
  if (params.n < 1) throw std::invalid_argument("benchmark dimension must be >= 1");
  if (params.obstacles < 0) throw std::invalid_argument("obstacle count must be >= 0");
  const int n = params.n;
  Scene scene;
  scene.name = "bench_n" + std::to_string(n) + (params.dynamic ? "_dyn_" : "_static_") + std::to_string(params.seed);
  auto& d = scene.data;
  d.n = n;
  d.T = params.T;
  d.x0 = Eigen::VectorXd::Constant(n, -1.0);
  d.xT = Eigen::VectorXd::Constant(n, 1.0);
  d.constraints = box_constraints(n);

  std::mt19937_64 rng(params.seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  int resampled = 0;
  nlohmann::ordered_json obstacles = nlohmann::ordered_json::array();
  for (int k = 0; k < params.obstacles; ++k) {
    Eigen::VectorXd c(n), w = Eigen::VectorXd::Zero(n);
    for (int attempt = 0;; ++attempt) {
      for (int j = 0; j < n; ++j) c[j] = unit(rng);
      if (params.dynamic) {
        for (int j = 0; j < n; ++j) w[j] = unit(rng);
      }
      // An endpoint inside a sphere at its own time makes the instance trivially infeasible.
      const bool start_hit = (d.x0 - c).norm() < params.radius;
      const bool goal_hit = (d.xT - (c + params.T * w)).norm() < params.radius;
      if (!(start_hit || goal_hit) || attempt >= params.max_retries) break;
      ++resampled;
    }
    d.constraints.push_back(moving_sphere(c, w, params.radius));
    nlohmann::ordered_json o;
    o["center"] = std::vector<double>(c.data(), c.data() + n);
    o["velocity"] = std::vector<double>(w.data(), w.data() + n);
    obstacles.push_back(std::move(o));
  }
  auto& meta = scene.metadata;
  meta["generator"] = "sphere_benchmark";
  meta["seed"] = params.seed;
  meta["dynamic"] = params.dynamic;
  meta["obstacles"] = params.obstacles;
  meta["radius"] = params.radius;
  meta["T"] = params.T;
  meta["resampled"] = resampled;
  meta["spheres"] = std::move(obstacles);
  return scene;
}

}  // namespace momentplan
