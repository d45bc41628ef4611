#include <algorithm>
#include <cmath>
#include <limits>

#include "doctest.h"
#include "momentplan/hierarchy/lower_bound.hpp"
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

ProblemData empty_box(const Eigen::VectorXd& x0, const Eigen::VectorXd& xT) {
  ProblemData d;
  d.n = static_cast<int>(x0.size());
  d.x0 = x0;
  d.xT = xT;
  d.constraints = box_constraints(d.n);
  return d;
}

LowerBoundCertificate bound(const ProblemData& d, int s, int r, bool sparse = false, bool eliminate = true) {
  RelaxationConfig cfg;
  cfg.s = s;
  cfg.r = r;
  cfg.sparse = sparse;
  cfg.eliminate_linear = eliminate;
  return solve_lower_bound(d, cfg);
}

// A two-piece detour around the Example 1 obstacle on the right.
PiecewiseLinearPath right_detour() {
  return PiecewiseLinearPath::from_waypoints({0.0, 0.5, 1.0}, {vec({0, -1}), vec({0.6, 0}), vec({0, 1})});
}

// Riesz functional of a mixture of point masses over (u_0, v_0, z_0, u_1, v_1, z_1).
struct PointMasses {
  std::vector<double> weights;
  std::vector<std::vector<double>> points;
  double operator()(const Polynomial& q) const {
    double acc = 0.0;
    for (std::size_t k = 0; k < weights.size(); ++k) acc += weights[k] * q.evaluate(points[k]);
    return acc;
  }
};

std::vector<double> piece_point(const PiecewiseLinearPath& p) {
  std::vector<double> out;
  const double h = p.T() / p.s();
  for (const auto& pc : p.pieces()) {
    for (int j = 0; j < pc.u.size(); ++j) out.push_back(pc.u[j]);
    for (int j = 0; j < pc.v.size(); ++j) out.push_back(pc.v[j]);
    out.push_back(h * pc.v.norm());
  }
  return out;
}

std::vector<PieceForms> piece_forms(const SpacePtr& sp, int n, int s) {
  std::vector<PieceForms> forms(static_cast<std::size_t>(s));
  for (int i = 0; i < s; ++i) {
    auto& f = forms[static_cast<std::size_t>(i)];
    for (int j = 0; j < n; ++j) {
      f.u.push_back(Polynomial::variable(sp, sp->index(VarKind::Position, i, j)));
      f.v.push_back(Polynomial::variable(sp, sp->index(VarKind::Velocity, i, j)));
    }
    f.z = Polynomial::variable(sp, sp->index(VarKind::Length, i));
  }
  return forms;
}

}  // namespace

TEST_CASE("obstacle-free single piece gives the straight-line length") {
  SUBCASE("n = 1") {
    const ProblemData d = empty_box(vec({-0.5}), vec({0.7}));
    const auto c3 = bound(d, 1, 3);
    REQUIRE(c3.solved());
    CHECK(c3.rho == doctest::Approx(1.2).epsilon(1e-5));
    const auto c2 = bound(d, 1, 2);
    REQUIRE(c2.solved());
    CHECK(c2.rho <= 1.2 + 1e-6);
    CHECK(c2.rho >= -1e-6);
  }
  SUBCASE("n = 2, several pieces never exceed the straight line") {
    const ProblemData d = empty_box(vec({-1, -1}), vec({1, 0.5}));
    const double L = (d.xT - d.x0).norm();
    for (int s : {1, 2, 3}) {
      const auto c = bound(d, s, 3);
      REQUIRE(c.solved());
      CHECK(c.rho <= L + 1e-6);
    }
    CHECK(bound(d, 1, 3).rho == doctest::Approx(L).epsilon(1e-5));
  }
}

TEST_CASE("an impossible constraint makes the relaxation infeasible") {
  ProblemData d = empty_box(vec({0, 0}), vec({0.5, 0.5}));
  d.constraints.push_back(Polynomial::constant(d.space(), -1.0));
  const auto c = bound(d, 2, 2);
  CHECK(c.infeasible());
  CHECK(std::isinf(c.rho));
}

TEST_CASE("relaxation order below a constraint's degree is rejected") {
  const Scene ex = example1_scene();
  RelaxationConfig cfg;
  cfg.s = 2;
  cfg.r = 2;
  CHECK_THROWS_AS(build_relaxation(ex.data, cfg), std::invalid_argument);
}

TEST_CASE("continuity relation vanishes on a continuous pinned path") {
  const ProblemData d = empty_box(vec({0, -1}), vec({0, 1}));
  const auto p = right_detour();
  std::vector<int> ids = {0, 1};
  const SpacePtr sp = make_space(VariableSpace::pieces(2, ids, false, false));
  std::vector<double> pt;
  for (const auto& pc : p.pieces()) {
    pt.insert(pt.end(), pc.u.data(), pc.u.data() + 2);
    pt.insert(pt.end(), pc.v.data(), pc.v.data() + 2);
  }
  for (int i = 0; i <= 2; ++i)
    for (const auto& h : continuity_relation(d, 2, i, sp)) CHECK(std::abs(h.evaluate(pt)) < 1e-12);
  pt[0] += 0.1;  // move u_0
  double worst = 0.0;
  for (const auto& h : continuity_relation(d, 2, 0, sp)) worst = std::max(worst, std::abs(h.evaluate(pt)));
  CHECK(worst == doctest::Approx(0.1));
}

TEST_CASE("sparse and dense agree") {
  SUBCASE("s = 1, where the two programs coincide") {
    ProblemData d = empty_box(vec({-1, -1}), vec({1, 1}));
    d.constraints.push_back(moving_sphere(vec({0.8, -0.8}), vec({0, 0}), 0.2));
    const auto a = bound(d, 1, 4), b = bound(d, 1, 4, true);
    REQUIRE(a.solved());
    REQUIRE(b.solved());
    CHECK(std::abs(a.rho - b.rho) < 1e-8);
    CHECK(a.rho == doctest::Approx(std::sqrt(8.0)).epsilon(1e-5));
  }
  SUBCASE("two pieces on Example 1") {
    const Scene ex = example1_scene();
    const auto a = bound(ex.data, 2, 3), b = bound(ex.data, 2, 3, true);
    REQUIRE(a.solved());
    REQUIRE(b.solved());
    CHECK(std::abs(a.rho - b.rho) < 1e-4);
  }
  SUBCASE("a three-piece chain is never tighter than dense") {
    // cliques {1,2}, {2,3}, {3}: a weaker but still valid bound
    const Scene ex = example1_scene();
    const auto a = bound(ex.data, 3, 3), b = bound(ex.data, 3, 3, true);
    REQUIRE(a.solved());
    REQUIRE(b.solved());
    CHECK(b.rho <= a.rho + 1e-5);
    CHECK(b.rho > 0.5 * a.rho);
  }
}

TEST_CASE("eliminated and literal continuity give the same bound") {
  const Scene ex = example1_scene();
  const auto a = bound(ex.data, 2, 3, false, true), b = bound(ex.data, 2, 3, false, false);
  REQUIRE(a.solved());
  REQUIRE(b.solved());
  CHECK(std::abs(a.rho - b.rho) < 1e-5);
  CHECK(b.num_vars > a.num_vars);
}

TEST_CASE("Example 1 bounds rise with r and stay below the gridded optimum") {
  const Scene ex = example1_scene();
  const GridOptimum grid = grid_search_two_pieces(ex.data, 101, -1.0, 1.0);
  REQUIRE(grid.found);
  double prev = -1.0;
  for (int r = 3; r <= 5; ++r) {
    const auto c = bound(ex.data, 2, r);
    REQUIRE(c.solved());
    CHECK(c.rho >= prev - 1e-5);
    CHECK(c.rho <= grid.length + 1e-6);
    prev = c.rho;
  }
}

TEST_CASE("flat hand-made moments extract their path; mixtures do not") {
  const Scene ex = example1_scene();
  const auto path = right_detour();
  REQUIRE(certify_path_feasibility(path, ex.data).feasible);
  std::vector<int> ids = {0, 1};
  const SpacePtr sp = make_space(VariableSpace::pieces(2, ids, false, true));
  const auto forms = piece_forms(sp, 2, 2);

  const PointMasses dirac{{1.0}, {piece_point(path)}};
  const auto ok = extract_path_if_flat(RieszFn(dirac), forms, 4, ex.data, 1e-8);
  CHECK(ok.flat);
  REQUIRE(ok.path.has_value());
  for (double t : {0.0, 0.2, 0.5, 0.9, 1.0}) CHECK(((*ok.path)(t) - path(t)).norm() < 1e-12);
  CHECK(path_length(*ok.path) == doctest::Approx(path_length(path)));

  const auto left = PiecewiseLinearPath::from_waypoints({0.0, 0.5, 1.0}, {vec({0, -1}), vec({-0.95, 0}), vec({0, 1})});
  const PointMasses mix{{0.5, 0.5}, {piece_point(path), piece_point(left)}};
  const auto bad = extract_path_if_flat(RieszFn(mix), forms, 4, ex.data, 1e-8);
  CHECK_FALSE(bad.flat);
  CHECK_FALSE(bad.path.has_value());
  REQUIRE(bad.residuals.size() == 2);
  CHECK(bad.residuals[0].max() > 1e-2);

  // Flat but infeasible: the straight line through the obstacle.
  const auto through = PiecewiseLinearPath::from_waypoints({0.0, 0.5, 1.0}, {vec({0, -1}), vec({0, 0}), vec({0, 1})});
  const PointMasses line{{1.0}, {piece_point(through)}};
  const auto inf = extract_path_if_flat(RieszFn(line), forms, 4, ex.data, 1e-8);
  CHECK(inf.flat);
  CHECK_FALSE(inf.path.has_value());
}

TEST_CASE("sweep CSV rows") {
  const ProblemData d = empty_box(vec({-0.5}), vec({0.7}));
  const auto c = bound(d, 1, 3);
  const std::string row = sweep_csv_row(c);
  CHECK(row.rfind("3,1,", 0) == 0);
  const std::string header = sweep_csv_header();
  CHECK(std::count(row.begin(), row.end(), ',') == std::count(header.begin(), header.end(), ','));
}
