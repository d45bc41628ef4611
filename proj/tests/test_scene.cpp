#include <cmath>
#include <random>

#include "doctest.h"
#include "momentplan/scene/benchmark.hpp"
#include "momentplan/scene/certify.hpp"
#include "momentplan/scene/metrics.hpp"
#include "momentplan/scene/scene_io.hpp"
#include "test_support.hpp"

using namespace momentplan;
using namespace momentplan::testing;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> xs) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

ProblemData plain_scene(int n, const Eigen::VectorXd& x0, const Eigen::VectorXd& xT) {
  ProblemData d;
  d.n = n;
  d.x0 = x0;
  d.xT = xT;
  d.constraints = box_constraints(n);
  return d;
}

PiecewiseLinearPath straight(const ProblemData& d) {
  return PiecewiseLinearPath::from_waypoints({0.0, d.T}, {d.x0, d.xT});
}

}  // namespace

TEST_CASE("scene documents round-trip byte for byte") {
  const Scene ex = example1_scene();
  const std::string text = serialize_scene(ex);
  const Scene back = parse_scene(text);
  CHECK(serialize_scene(back) == text);
  CHECK(back.data.n == 2);
  CHECK(back.data.constraints.size() == ex.data.constraints.size());
  for (std::size_t k = 0; k < ex.data.constraints.size(); ++k) CHECK(back.data.constraints[k] == ex.data.constraints[k]);

  const Scene b = generate_benchmark({.n = 3, .obstacles = 4, .dynamic = true, .seed = 11});
  const std::string tb = serialize_scene(b);
  CHECK(serialize_scene(parse_scene(tb)) == tb);
}

TEST_CASE("malformed scenes are rejected with the field named") {
  auto doc = nlohmann::json::parse(serialize_scene(example1_scene()));
  auto bad = doc;
  bad["constraints"][0]["terms"][0]["exp"] = {0, 1};
  try {
    parse_scene(bad.dump());
    FAIL("wrong arity accepted");
  } catch (const SceneError& e) {
    CHECK(std::string(e.what()).find("constraints[0].terms[0].exp") != std::string::npos);
  }
  bad = doc;
  bad["constraints"] = nlohmann::json::array();
  CHECK_THROWS_AS(parse_scene(bad.dump()), SceneError);
  bad = doc;
  bad["x0"] = {0.0};
  CHECK_THROWS_AS(parse_scene(bad.dump()), SceneError);
  bad = doc;
  bad["T"] = -1.0;
  CHECK_THROWS_AS(parse_scene(bad.dump()), SceneError);
  CHECK_THROWS_AS(parse_scene("{not json"), SceneError);

  ProblemData d = plain_scene(2, vec({0, 0}), vec({1, 1}));
  d.constraints.clear();
  CHECK_THROWS_AS(d.validate(), std::invalid_argument);
}

TEST_CASE("path documents round-trip") {
  const auto p = PiecewiseLinearPath::from_waypoints({0.0, 0.3, 1.0}, {vec({0, 0}), vec({1, 0.5}), vec({1, 1})});
  const auto q = parse_path(serialize_path(p));
  REQUIRE(q.s() == 2);
  CHECK_FALSE(q.is_uniform());
  for (double t : {0.0, 0.1, 0.3, 0.77, 1.0}) CHECK((q(t) - p(t)).norm() < 1e-12);
  const auto u = PiecewiseLinearPath::uniform(2.0, {{vec({0}), vec({1})}, {vec({0}), vec({1})}});
  CHECK(parse_path(serialize_path(u)).is_uniform());
}

TEST_CASE("benchmark generator counts, determinism and endpoint resampling") {
  const Scene a = generate_benchmark({.n = 2, .obstacles = 10, .dynamic = true, .seed = 5});
  CHECK(a.data.constraints.size() == 14);
  CHECK(generate_benchmark({.n = 4, .obstacles = 10, .seed = 5}).data.constraints.size() == 18);
  CHECK(serialize_scene(generate_benchmark({.n = 2, .obstacles = 10, .dynamic = true, .seed = 5})) == serialize_scene(a));
  CHECK(serialize_scene(generate_benchmark({.n = 2, .obstacles = 10, .dynamic = true, .seed = 6})) != serialize_scene(a));

  // Big spheres force resampling; no accepted sphere may swallow an endpoint.
  int resampled = 0;
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const BenchmarkParams p{.n = 2, .obstacles = 10, .dynamic = seed % 2 == 1, .seed = seed, .radius = 0.6};
    const Scene s = generate_benchmark(p);
    resampled += s.metadata["resampled"].get<int>();
    std::vector<double> pt0 = {0.0, -1.0, -1.0}, ptT = {1.0, 1.0, 1.0};
    for (const auto& g : s.data.constraints) {
      CHECK(g.evaluate(pt0) >= 0.0);
      CHECK(g.evaluate(ptT) >= 0.0);
    }
  }
  CHECK(resampled > 0);
}

TEST_CASE("moving sphere matches its definition") {
  const auto g = moving_sphere(vec({0.2, -0.1}), vec({0.5, 1.0}), 0.3);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(-1, 1);
  for (int k = 0; k < 50; ++k) {
    const double t = 0.5 * (U(rng) + 1), x = U(rng), y = U(rng);
    const double dx = x - (0.2 + 0.5 * t), dy = y - (-0.1 + t);
    const std::vector<double> pt = {t, x, y};
    CHECK(g.evaluate(pt) == doctest::Approx(dx * dx + dy * dy - 0.09).epsilon(1e-12));
  }
}

TEST_CASE("certification margins on analytic cases") {
  SUBCASE("straight line through a static sphere") {
    ProblemData d = plain_scene(2, vec({-1, 0}), vec({1, 0}));
    d.constraints.push_back(moving_sphere(vec({0, 0}), vec({0, 0}), 0.5));
    const auto rep = certify_path_feasibility(straight(d), d);
    CHECK_FALSE(rep.feasible);
    CHECK(rep.min_margin == doctest::Approx(-0.25).epsilon(1e-10));
    CHECK(rep.worst_constraint == 4);
    CHECK(rep.worst_time == doctest::Approx(0.5).epsilon(1e-8));
  }
  SUBCASE("path hugging a box face") {
    const ProblemData d = plain_scene(2, vec({-1, 1}), vec({1, 1}));
    const auto rep = certify_path_feasibility(straight(d), d);
    CHECK(rep.feasible);
    CHECK(std::abs(rep.min_margin) < 1e-12);
  }
  SUBCASE("straight line in an empty box") {
    const ProblemData d = plain_scene(2, vec({-0.5, -0.5}), vec({0.5, 0.25}));
    const auto rep = certify_path_feasibility(straight(d), d);
    CHECK(rep.feasible);
    CHECK(rep.min_margin == doctest::Approx(0.5).epsilon(1e-12));
  }
  SUBCASE("disconnected or unpinned paths fail") {
    const ProblemData d = plain_scene(2, vec({0, 0}), vec({0.5, 0.5}));
    const auto gap = PiecewiseLinearPath(
        {0.0, 0.5, 1.0}, {{vec({0, 0}), vec({0.5, 0.5})}, {vec({0.1, 0}), vec({0.4, 0.5})}});
    CHECK_FALSE(certify_path_feasibility(gap, d).feasible);
    const auto off = PiecewiseLinearPath::from_waypoints({0.0, 1.0}, {vec({0, 0}), vec({0.5, 0.4})});
    CHECK_FALSE(certify_path_feasibility(off, d).feasible);
  }
}

TEST_CASE("certified margin never exceeds the sampled one") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> U(-1, 1);
  for (int trial = 0; trial < 20; ++trial) {
    const Scene sc = generate_benchmark({.n = 2, .obstacles = 6, .dynamic = true, .seed = 100u + trial});
    std::vector<double> times = {0.0};
    std::vector<Eigen::VectorXd> pts = {sc.data.x0};
    for (int k = 1; k < 4; ++k) {
      times.push_back(k / 4.0);
      pts.push_back(vec({U(rng), U(rng)}));
    }
    times.push_back(1.0);
    pts.push_back(sc.data.xT);
    const auto path = PiecewiseLinearPath::from_waypoints(times, pts);
    const auto rep = certify_path_feasibility(path, sc.data);
    CHECK(rep.min_margin <= sampled_min_margin(path, sc.data, 2000) + 1e-9);
    // and the sampled minimum approaches it from above
    CHECK(sampled_min_margin(path, sc.data, 2000) - rep.min_margin < 1e-4);
  }
}

TEST_CASE("length and smoothness") {
  // (0,0) -> (1,0) -> (1,1) over [0,2]: velocities (1,0), (0,1), mean (1/2,1/2).
  const auto p = PiecewiseLinearPath::from_waypoints({0.0, 1.0, 2.0}, {vec({0, 0}), vec({1, 0}), vec({1, 1})});
  CHECK(path_length(p) == doctest::Approx(2.0));
  CHECK(path_smoothness(p) == doctest::Approx(1.0));
  const auto line = PiecewiseLinearPath::from_waypoints({0.0, 0.4, 1.0}, {vec({0, 0}), vec({0.4, 0.8}), vec({1, 2})});
  CHECK(std::abs(path_smoothness(line)) < 1e-14);

  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> U(-1, 1);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> times = {0.0};
    std::vector<Eigen::VectorXd> pts = {vec({U(rng), U(rng), U(rng)})};
    for (int k = 0; k < 5; ++k) {
      times.push_back(times.back() + 0.1 + 0.5 * (U(rng) + 1));
      pts.push_back(vec({U(rng), U(rng), U(rng)}));
    }
    const auto path = PiecewiseLinearPath::from_waypoints(times, pts);
    CHECK(path_smoothness(path) == doctest::Approx(smoothness_by_quadrature(path)).epsilon(1e-8));
    double len = 0.0;
    for (std::size_t k = 0; k + 1 < pts.size(); ++k) len += (pts[k + 1] - pts[k]).norm();
    CHECK(path_length(path) == doctest::Approx(len).epsilon(1e-12));
  }
}

TEST_CASE("restriction to a line agrees with pointwise evaluation") {
  const Scene ex = example1_scene();
  const Eigen::VectorXd u = vec({0.3, -0.7}), v = vec({-0.4, 1.1});
  for (const auto& g : ex.data.constraints) {
    const auto q = restrict_to_line(g, u, v);
    for (double t : {0.0, 0.25, 0.6, 1.0}) {
      const Eigen::VectorXd x = u + t * v;
      const std::vector<double> pt = {t, x[0], x[1]};
      CHECK(q(t) == doctest::Approx(g.evaluate(pt)).epsilon(1e-12));
    }
  }
}
