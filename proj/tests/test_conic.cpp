#include <Eigen/Eigenvalues>
#include <random>
#include <sstream>

#include "doctest.h"
#include "momentplan/conic/interval_psd.hpp"
#include "momentplan/conic/ipm_solver.hpp"
#include "momentplan/conic/sdpa.hpp"
#include "momentplan/conic/solver.hpp"
#include "test_support.hpp"

using namespace momentplan;
using namespace momentplan::testing;

TEST_CASE("scalar and PSD programs") {
  {
    ConicProgram p;
    const int x = p.add_variables(1);
    p.set_objective(AffineExpr::var(x));
    p.add_nonnegative(AffineExpr::var(x) - AffineExpr(1.0));
    const Solution s = solve_ipm(p);
    CHECK(s.status == SolveStatus::Optimal);
    CHECK(s.x[x] == doctest::Approx(1.0).epsilon(1e-6));
  }
  {
    ConicProgram p;
    const int y = p.add_variables(1);
    p.set_objective(AffineExpr::var(y, -1.0));
    AffineMatrix M(2);
    M.at(0, 0) = AffineExpr(1.0);
    M.at(1, 1) = AffineExpr(1.0);
    M.at(0, 1) = AffineExpr::var(y);
    p.add_psd(M);
    const Solution s = solve_ipm(p);
    CHECK(s.status == SolveStatus::Optimal);
    CHECK(s.x[y] == doctest::Approx(1.0).epsilon(1e-6));
  }
  {
    ConicProgram p;
    const int x = p.add_variables(1);
    p.add_equality(AffineExpr::var(x) - AffineExpr(1.0));
    p.add_nonnegative(AffineExpr::var(x, -1.0));
    CHECK(solve_ipm(p).status == SolveStatus::Infeasible);
  }
  {
    // min t s.t. t >= |(0.3, 0.4) - w|, w1 + w2 = 0: distance to a line.
    ConicProgram p;
    const int t = p.add_variables(3);
    p.set_objective(AffineExpr::var(t));
    p.add_equality(AffineExpr::var(t + 1) + AffineExpr::var(t + 2));
    p.add_second_order({AffineExpr::var(t), AffineExpr(0.3) - AffineExpr::var(t + 1), AffineExpr(0.4) - AffineExpr::var(t + 2)});
    const Solution s = solve_ipm(p);
    CHECK(s.status == SolveStatus::Optimal);
    CHECK(s.objective_value == doctest::Approx(0.7 / std::sqrt(2.0)).epsilon(1e-6));
  }
}

TEST_CASE("solver is deterministic") {
  std::mt19937_64 rng(1);
  const ConicProgram p = random_program(rng, 4);
  const Solution a = solve_ipm(p), b = solve_ipm(p);
  CHECK(a.x == b.x);
  CHECK(a.objective_value == b.objective_value);
}

TEST_CASE("interval PSD encodings of known matrices") {
  auto feasible = [](const std::vector<std::vector<double>>& coeffs_per_entry, int m, double a, double b) {
    // coeffs_per_entry[(i,j) upper index][power]
    ConicProgram p;
    int d = 0;
    for (const auto& c : coeffs_per_entry) d = std::max(d, static_cast<int>(c.size()) - 1);
    AffinePolyMatrix X(static_cast<std::size_t>(d + 1), AffineMatrix(m));
    int slot = 0;
    for (int i = 0; i < m; ++i)
      for (int j = i; j < m; ++j, ++slot)
        for (std::size_t k = 0; k < coeffs_per_entry[static_cast<std::size_t>(slot)].size(); ++k)
          X[k].at(i, j) = AffineExpr(coeffs_per_entry[static_cast<std::size_t>(slot)][k]);
    encode_interval_psd(p, X, a, b);
    return solve_ipm(p).status;
  };
  CHECK(feasible({{1.0}}, 1, 0.0, 1.0) == SolveStatus::Optimal);
  CHECK(feasible({{0.0, 1.0, -1.0}}, 1, 0.0, 1.0) == SolveStatus::Optimal);
  CHECK(feasible({{-0.5, 1.0}}, 1, 0.0, 1.0) == SolveStatus::Infeasible);
  CHECK(feasible({{1.0}, {0.0, 1.0}, {1.0}}, 2, 0.0, 1.0) == SolveStatus::Optimal);
  // [[1, t],[t, 1]] fails beyond t = 1.
  CHECK(feasible({{1.0}, {0.0, 1.0}, {1.0}}, 2, 0.0, 1.5) == SolveStatus::Infeasible);
  ConicProgram p;
  CHECK_THROWS(encode_interval_psd(p, AffinePolyMatrix{AffineMatrix(1)}, 1.0, 1.0));
}

TEST_CASE("interval PSD certificate sizes") {
  for (int d = 0; d <= 5; ++d) {
    ConicProgram p;
    AffinePolyMatrix X(static_cast<std::size_t>(d + 1), AffineMatrix(2));
    // Generic entries so no endpoint factor divides X.
    for (int k = 0; k <= d; ++k) {
      X[static_cast<std::size_t>(k)].at(0, 0) = AffineExpr(1.0 + k);
      X[static_cast<std::size_t>(k)].at(1, 1) = AffineExpr(2.0 - 0.5 * k);
      X[static_cast<std::size_t>(k)].at(0, 1) = AffineExpr(0.1 * k);
    }
    const auto cert = encode_interval_psd(p, X, 0.0, 1.0);
    CHECK(cert.degree == d);
    if (d % 2 == 0) {
      CHECK(cert.q1_size() == 2 * (d / 2 + 1));
      CHECK(cert.q2_size() == 2 * (d / 2));
    } else {
      CHECK(cert.q1_size() == 2 * ((d - 1) / 2 + 1));
      CHECK(cert.q2_size() == 2 * ((d - 1) / 2 + 1));
    }
  }
}

TEST_CASE("interval PSD soundness and completeness on random matrices") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 12; ++trial) {
    const int m = 1 + trial % 3;
    const double a = -0.5 + 0.1 * trial, b = a + 0.5 + 0.05 * trial;
    const NumericPolyMatrix Y = random_psd_poly_matrix(rng, m, 1 + trial % 2, a, b);
    ConicProgram p;
    const auto cert = encode_interval_psd(p, to_affine_poly(Y), a, b);
    const Solution s = solve_ipm(p);
    REQUIRE(s.status == SolveStatus::Optimal);
    for (int k = 0; k <= 100; ++k) {
      const double t = a + (b - a) * k / 100.0;
      const Eigen::MatrixXd R = reconstruct(cert, s.x, t);
      CHECK(min_eigenvalue(R) >= -1e-6);
      CHECK((R - Y(t)).norm() <= 1e-5 * (1.0 + Y(t).norm()));
    }
    // Shift down until a sampled eigenvalue is clearly negative.
    const NumericPolyMatrix Z = make_indefinite(Y, a, b, 0.05);
    ConicProgram q;
    encode_interval_psd(q, to_affine_poly(Z), a, b);
    CHECK(solve_ipm(q).status == SolveStatus::Infeasible);
  }
}

TEST_CASE("chebyshev and monomial Gram bases agree") {
  std::mt19937_64 rng(5);
  const NumericPolyMatrix Y = random_psd_poly_matrix(rng, 2, 2, 0.0, 3.0);
  for (GramBasis gb : {GramBasis::Monomial, GramBasis::Chebyshev}) {
    ConicProgram p;
    encode_interval_psd(p, to_affine_poly(Y), 0.0, 3.0, gb);
    CHECK(solve_ipm(p).status == SolveStatus::Optimal);
  }
}

TEST_CASE("SDPA export format") {
  ConicProgram p;
  const int x = p.add_variables(1);
  p.set_objective(AffineExpr::var(x));
  AffineMatrix M(1);
  M.at(0, 0) = AffineExpr::var(x) - AffineExpr(2.0);
  p.add_psd(M);
  const std::string text = export_sdpa(p);
  std::vector<std::string> lines;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);)
    if (!l.empty() && l[0] != '*' && l[0] != '"') lines.push_back(l);
  REQUIRE(lines.size() == 6);
  CHECK(lines[0].find('1') != std::string::npos);
  const ConicProgram back = import_sdpa(text);
  CHECK(back.num_vars() == 1);
  CHECK(solve_ipm(back).objective_value == doctest::Approx(2.0).epsilon(1e-7));

  const std::string empty = export_sdpa(ConicProgram{});
  std::istringstream e(empty);
  std::string first;
  do std::getline(e, first);
  while (!first.empty() && (first[0] == '*' || first[0] == '"'));
  CHECK(std::stoi(first) == 0);
}

TEST_CASE("SDPA round trip on random programs") {
  std::mt19937_64 rng(99);
  for (int k = 0; k < 20; ++k) {
    const ConicProgram p = random_program(rng, 2 + k % 4);
    const ConicProgram q = import_sdpa(export_sdpa(p));
    const Solution a = solve_ipm(p), b = solve_ipm(q);
    REQUIRE(a.status == SolveStatus::Optimal);
    REQUIRE(b.status == SolveStatus::Optimal);
    CHECK(std::abs(a.objective_value - b.objective_value) <= 1e-8 * (1.0 + std::abs(a.objective_value)));
  }
}

TEST_CASE("unknown backend is rejected") {
  setenv("MOMENTPLAN_SOLVER", "nonsense", 1);
  ConicProgram p;
  p.add_variables(1);
  CHECK_THROWS(solve(p));
  unsetenv("MOMENTPLAN_SOLVER");
  CHECK(solver_backend() == "ipm");
}
