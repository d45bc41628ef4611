#include "momentplan/baselines/rrt.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace momentplan {

namespace {

struct Node {
  double t;
  Eigen::VectorXd x;
  int parent;
};

bool point_clear(const ProblemData& d, double t, const Eigen::VectorXd& x, std::vector<double>& buf) {
  buf[0] = t;
  for (int j = 0; j < d.n; ++j) buf[static_cast<std::size_t>(j + 1)] = x[j];
  for (const auto& g : d.constraints) {
    if (g.evaluate(buf) < 0.0) return false;
  }
  return true;
}

double tx_distance(double t0, const Eigen::VectorXd& x0, double t1, const Eigen::VectorXd& x1) {
  return std::sqrt((t1 - t0) * (t1 - t0) + (x1 - x0).squaredNorm());
}

}  // namespace

void RrtConfig::validate() const {
  if (max_iters < 0) throw std::invalid_argument("max_iters must be nonnegative");
  if (!(steer_step > 0.0)) throw std::invalid_argument("steer_step must be positive");
  if (goal_bias < 0.0 || goal_bias >= 1.0) throw std::invalid_argument("goal_bias must lie in [0, 1)");
  if (!(time_slope_max > 0.0)) throw std::invalid_argument("time_slope_max must be positive");
  if (box_lo.size() != box_hi.size()) throw std::invalid_argument("sampling box bounds differ in size");
}

bool segment_clear(const ProblemData& data, double t0, const Eigen::VectorXd& x0, double t1, const Eigen::VectorXd& x1,
                   double spacing) {
  std::vector<double> buf(static_cast<std::size_t>(data.n + 1));
  const double len = tx_distance(t0, x0, t1, x1);
  const int k = std::max(1, static_cast<int>(std::ceil(len / spacing)));
  for (int j = 0; j <= k; ++j) {
    const double a = static_cast<double>(j) / k;
    if (!point_clear(data, t0 + a * (t1 - t0), x0 + a * (x1 - x0), buf)) return false;
  }
  return true;
}

RrtResult rrt_plan(const ProblemData& data, const RrtConfig& cfg) {
  cfg.validate();
  data.validate();
  const auto start = std::chrono::steady_clock::now();
  const int n = data.n;
  const double T = data.T;
  const double spacing = cfg.steer_step / 10.0;

  Eigen::VectorXd lo = cfg.box_lo, hi = cfg.box_hi;
  if (lo.size() == 0) {
    lo = Eigen::VectorXd::Constant(n, -1.0).cwiseMin(data.x0).cwiseMin(data.xT);
    hi = Eigen::VectorXd::Constant(n, 1.0).cwiseMax(data.x0).cwiseMax(data.xT);
  } else if (lo.size() != n) {
    throw std::invalid_argument("sampling box has the wrong dimension");
  }

  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Node> tree = {{0.0, data.x0, -1}};
  RrtResult res;

  auto finish = [&](int goal) {
    if (goal >= 0) {
      std::vector<double> times;
      std::vector<Eigen::VectorXd> points;
      for (int k = goal; k >= 0; k = tree[static_cast<std::size_t>(k)].parent) {
        times.insert(times.begin(), tree[static_cast<std::size_t>(k)].t);
        points.insert(points.begin(), tree[static_cast<std::size_t>(k)].x);
      }
      res.path = PiecewiseLinearPath::from_waypoints(times, points);
    }
    res.nodes = static_cast<int>(tree.size());
    res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return res;
  };

  std::vector<double> buf(static_cast<std::size_t>(n + 1));
  if (!point_clear(data, 0.0, data.x0, buf)) return finish(-1);

  Eigen::VectorXd xs(n);
  for (int iter = 0; iter < cfg.max_iters; ++iter) {
    res.iterations = iter + 1;
    double ts;
    if (unit(rng) < cfg.goal_bias) {
      ts = T;
      xs = data.xT;
    } else {
      ts = T * unit(rng);
      for (int j = 0; j < n; ++j) xs[j] = lo[j] + (hi[j] - lo[j]) * unit(rng);
    }

    // Nearest node that can reach the sample forward in time within the slope bound.
    int near = -1;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < tree.size(); ++k) {
      const Node& nd = tree[k];
      const double dt = ts - nd.t;
      if (dt <= 0.0) continue;
      const double dx = (xs - nd.x).norm();
      if (dx > cfg.time_slope_max * dt) continue;
      const double dist = std::sqrt(dt * dt + dx * dx);
      if (dist < best) {
        best = dist;
        near = static_cast<int>(k);
      }
    }
    if (near < 0) continue;

    const Node& from = tree[static_cast<std::size_t>(near)];
    const double len = (xs - from.x).norm();
    const double lam = len > cfg.steer_step ? cfg.steer_step / len : 1.0;
    const double tn = from.t + lam * (ts - from.t);
    Eigen::VectorXd xn = from.x + lam * (xs - from.x);
    if (!(tn > from.t)) continue;
    if (!segment_clear(data, from.t, from.x, tn, xn, spacing)) continue;
    tree.push_back({tn, std::move(xn), near});
    const int added = static_cast<int>(tree.size()) - 1;
    const Node& nd = tree.back();

    if (nd.t == T && (nd.x - data.xT).norm() == 0.0) return finish(added);
    if (nd.t < T && tx_distance(nd.t, nd.x, T, data.xT) <= cfg.goal_radius &&
        (data.xT - nd.x).norm() <= cfg.time_slope_max * (T - nd.t) &&
        segment_clear(data, nd.t, nd.x, T, data.xT, spacing)) {
      tree.push_back({T, data.xT, added});
      return finish(static_cast<int>(tree.size()) - 1);
    }
  }
  return finish(-1);
}

}  // namespace momentplan
