#include <Eigen/Eigenvalues>
#include <cmath>
#include <random>

#include "doctest.h"
#include "momentplan/moment/flatness.hpp"
#include "momentplan/moment/moment_matrices.hpp"
#include "momentplan/moment/pseudo_moments.hpp"
#include "momentplan/moment/quotient_moments.hpp"

using namespace momentplan;

namespace {

double min_eig(const Eigen::MatrixXd& M) {
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(M, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
}

// Moments of the uniform distribution on [0,1]: int t^k dt = 1/(k+1).
PseudoMomentSeq uniform01(int r) {
  Eigen::VectorXd v(r + 1);
  for (int k = 0; k <= r; ++k) v[k] = 1.0 / (k + 1);
  return PseudoMomentSeq(1, r, v);
}

SpacePtr gen_space(int n) {
  std::vector<std::string> names;
  for (int k = 0; k < n; ++k) names.push_back("y" + std::to_string(k));
  return make_space(VariableSpace::generic(names));
}

}  // namespace

TEST_CASE("riesz functional") {
  const auto sp = gen_space(2);
  const std::vector<Eigen::VectorXd> pts = {Eigen::Vector2d(1.0, 2.0)};
  const std::vector<double> w = {1.0};
  const auto phi = PseudoMomentSeq::from_atoms(w, pts, 3);
  const Polynomial q = Polynomial::monomial(sp, {2, 1});
  CHECK(riesz_apply(phi, q) == doctest::Approx(2.0));

  const std::vector<Eigen::VectorXd> ones = {Eigen::Vector2d(1.0, 1.0)};
  const auto phi1 = PseudoMomentSeq::from_atoms(w, ones, 4);
  const Polynomial p = Polynomial::monomial(sp, {1, 2}, 3.0) + Polynomial::monomial(sp, {0, 1}, -0.5) + Polynomial::constant(sp, 2.0);
  CHECK(riesz_apply(phi1, p) == doctest::Approx(4.5));

  const auto sp1 = gen_space(1);
  CHECK(riesz_apply(uniform01(2), Polynomial::monomial(sp1, {2})) == doctest::Approx(1.0 / 3.0));
  CHECK_THROWS(riesz_apply(uniform01(2), Polynomial::monomial(sp1, {3})));
}

TEST_CASE("riesz functional is linear in phi and q") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> U(-1, 1);
  const auto sp = gen_space(2);
  for (int k = 0; k < 10; ++k) {
    Eigen::VectorXd a = Eigen::VectorXd::NullaryExpr(10, [&]() { return U(rng); });
    Eigen::VectorXd b = Eigen::VectorXd::NullaryExpr(10, [&]() { return U(rng); });
    PseudoMomentSeq pa(2, 3, a), pb(2, 3, b), pab(2, 3, a + 2.0 * b);
    Polynomial q = Polynomial::monomial(sp, {1, 1}, U(rng)) + Polynomial::monomial(sp, {0, 3}, U(rng));
    Polynomial p = Polynomial::monomial(sp, {2, 0}, U(rng)) + Polynomial::constant(sp, U(rng));
    CHECK(riesz_apply(pab, q) == doctest::Approx(riesz_apply(pa, q) + 2.0 * riesz_apply(pb, q)));
    CHECK(riesz_apply(pa, q + 3.0 * p) == doctest::Approx(riesz_apply(pa, q) + 3.0 * riesz_apply(pa, p)));
  }
}

TEST_CASE("moment matrices") {
  const std::vector<double> w = {1.0};
  const Eigen::Vector2d y0(0.5, -1.5);
  const std::vector<Eigen::VectorXd> pts = {y0};
  const auto phi = PseudoMomentSeq::from_atoms(w, pts, 2);
  const Eigen::MatrixXd M = moment_matrix(phi);
  const Eigen::Vector3d vy(1.0, y0[0], y0[1]);
  CHECK((M - vy * vy.transpose()).norm() < 1e-12);

  const Eigen::MatrixXd H = moment_matrix(uniform01(2));
  Eigen::Matrix2d expect;
  expect << 1.0, 0.5, 0.5, 1.0 / 3.0;
  CHECK((H - expect).norm() < 1e-14);
  CHECK(min_eig(H) > 0.0);

  const Eigen::MatrixXd bad = moment_matrix(PseudoMomentSeq(1, 2, Eigen::Vector3d(1.0, 2.0, 1.0)));
  CHECK(bad.determinant() == doctest::Approx(-3.0));
  CHECK(min_eig(bad) < 0.0);
}

TEST_CASE("localizing matrices") {
  const auto sp1 = gen_space(1);
  const auto phi = uniform01(3);
  // q = 1 collapses to the moment matrix at order floor(r/2).
  CHECK((localizing_matrix(phi, Polynomial::constant(sp1, 1.0)) - moment_matrix(phi)).norm() < 1e-14);
  // q = y: entries 1/(a + b + 2).
  const Eigen::MatrixXd L = localizing_matrix(phi, Polynomial::variable(sp1, 0));
  REQUIRE(L.rows() == 2);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) CHECK(L(a, b) == doctest::Approx(1.0 / (a + b + 2)));

  const auto sp = gen_space(2);
  const std::vector<double> w = {1.0};
  const std::vector<Eigen::VectorXd> pts = {Eigen::Vector2d(0.3, 0.4)};
  const auto pm = PseudoMomentSeq::from_atoms(w, pts, 4);
  const Polynomial q = Polynomial::constant(sp, 1.0) - Polynomial::monomial(sp, {2, 0}) - Polynomial::monomial(sp, {0, 2});
  const Eigen::MatrixXd Lq = localizing_matrix(pm, q);
  CHECK(min_eig(Lq) > -1e-12);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Lq);
  CHECK(es.eigenvalues()(Lq.rows() - 2) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(es.eigenvalues().maxCoeff() > 0.0);
}

TEST_CASE("measures give PSD moment and localizing matrices") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> U(-1, 1);
  const auto sp = gen_space(2);
  const Polynomial disk = Polynomial::constant(sp, 2.0) - Polynomial::monomial(sp, {2, 0}) - Polynomial::monomial(sp, {0, 2});
  for (int k = 0; k < 20; ++k) {
    std::vector<double> w(5);
    std::vector<Eigen::VectorXd> pts;
    double total = 0.0;
    for (auto& wi : w) total += (wi = 0.5 * (U(rng) + 1.0) + 0.01);
    for (auto& wi : w) wi /= total;
    for (int a = 0; a < 5; ++a) pts.push_back(Eigen::Vector2d(U(rng), U(rng)));
    const auto phi = PseudoMomentSeq::from_atoms(w, pts, 4);
    CHECK(min_eig(moment_matrix(phi)) >= -1e-9);
    CHECK(min_eig(localizing_matrix(phi, disk)) >= -1e-9);
  }
}

TEST_CASE("time-parameterized localizing matrix") {
  // Space (t, u, v): phi lives on (u, v).
  const auto sp = make_space(VariableSpace::generic({"t", "u", "v"}));
  const auto uv = gen_space(2);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> U(-1, 1);
  std::vector<double> w = {0.3, 0.7};
  std::vector<Eigen::VectorXd> pts = {Eigen::Vector2d(U(rng), U(rng)), Eigen::Vector2d(U(rng), U(rng))};
  const auto phi = PseudoMomentSeq::from_atoms(w, pts, 4);

  const Polynomial g0 = Polynomial::monomial(sp, {0, 2, 0}) + Polynomial::constant(sp, 0.5);
  const PolyMatrix X0 = localizing_time_matrix(phi, g0, 0);
  CHECK(X0.degree() == 0);
  CHECK((X0.coeffs[0] - localizing_matrix(phi, Polynomial::monomial(uv, {2, 0}) + Polynomial::constant(uv, 0.5))).norm() < 1e-14);

  const PolyMatrix Xt = localizing_time_matrix(phi, Polynomial::variable(sp, 0), 0);
  CHECK(Xt.degree() == 1);
  CHECK((Xt(0.7) - 0.7 * moment_matrix(phi)).norm() < 1e-12);

  // Sphere in x = u + t v about c + t w: freeze t and compare.
  const double c = 0.2, wv = -0.4, rho2 = 0.05;
  const Polynomial tt = Polynomial::variable(sp, 0), u = Polynomial::variable(sp, 1), v = Polynomial::variable(sp, 2);
  const Polynomial d = u + tt * v - Polynomial::constant(sp, c) - wv * tt;
  const Polynomial g = d * d - Polynomial::constant(sp, rho2);
  const PolyMatrix X = localizing_time_matrix(phi, g, 0);
  CHECK(X.degree() == 2);
  for (int k = 0; k < 10; ++k) {
    const double ts = 0.5 * (U(rng) + 1.0);
    const Polynomial uu = Polynomial::variable(uv, 0), vv = Polynomial::variable(uv, 1);
    const Polynomial dd = uu + ts * vv - Polynomial::constant(uv, c + wv * ts);
    const Eigen::MatrixXd ref = localizing_matrix(phi, dd * dd - Polynomial::constant(uv, rho2));
    CHECK((X(ts) - ref).norm() < 1e-10);
  }

  // Linear in phi.
  const auto phi2 = PseudoMomentSeq::from_atoms(std::vector<double>{1.0}, std::vector<Eigen::VectorXd>{Eigen::Vector2d(0.1, 0.9)}, 4);
  const PseudoMomentSeq sum(2, 4, phi.values() + phi2.values());
  const PolyMatrix Xs = localizing_time_matrix(sum, g, 0), X2 = localizing_time_matrix(phi2, g, 0);
  for (int j = 0; j <= 2; ++j) CHECK((Xs.coeffs[static_cast<std::size_t>(j)] - X.coeffs[static_cast<std::size_t>(j)] - X2.coeffs[static_cast<std::size_t>(j)]).norm() < 1e-12);
}

TEST_CASE("flatness residuals") {
  // One piece in n = 2: variables (u1, u2, v1, v2, z).
  const auto sp = gen_space(5);
  PieceForms piece;
  for (int j = 0; j < 2; ++j) piece.u.push_back(Polynomial::variable(sp, j));
  for (int j = 0; j < 2; ++j) piece.v.push_back(Polynomial::variable(sp, 2 + j));
  piece.z = Polynomial::variable(sp, 4);

  Eigen::VectorXd A(5), B(5);
  A << 0.0, -1.0, 0.5, 1.0, 1.1180339887;
  B << 0.2, -1.0, -0.3, 1.4, 1.4317821063;
  const std::vector<Eigen::VectorXd> a = {A}, ab = {A, B};
  const auto pa = PseudoMomentSeq::from_atoms(std::vector<double>{1.0}, a, 4);
  const auto pab = PseudoMomentSeq::from_atoms(std::vector<double>{0.5, 0.5}, ab, 4);
  auto L = [](const PseudoMomentSeq& p) { return RieszFn([&p](const Polynomial& q) { return riesz_apply(p, q); }); };

  for (int r : {2, 4}) {
    const auto res = flatness_residual(L(pa), piece, r);
    CHECK(std::abs(res.max()) < 1e-10);
    const auto mix = flatness_residual(L(pab), piece, r);
    CHECK(mix.max() > 1e-3);
  }
  // r = 2: the u residual is the trace of the covariance of u.
  const auto mix2 = flatness_residual(L(pab), piece, 2);
  const Eigen::VectorXd du = (A - B).head(2);
  CHECK(mix2.u == doctest::Approx(0.25 * du.squaredNorm()));
  const Eigen::VectorXd dv = (A - B).segment(2, 2);
  CHECK(mix2.v == doctest::Approx(0.25 * dv.squaredNorm()));
  CHECK(mix2.z == doctest::Approx(0.25 * (A[4] - B[4]) * (A[4] - B[4])));

  CHECK(flatness_degree(5) == 4);
  CHECK(flatness_degree(6) == 6);
  CHECK_THROWS(flatness_residual(L(pa), piece, 3));
  CHECK(is_flat(flatness_residual(L(pa), piece, 4), A[4]));
}

TEST_CASE("quotient moments reproduce the square rule") {
  // Variables (v, z) with z^2 = v^2; compare with moments of atoms on the variety.
  SquareRule rule{1, {{Exponent{2, 0}, 1.0}}};
  QuotientMoments qm(2, 4, {rule});
  // Standard monomials have z exponent <= 1.
  for (const auto& a : qm.standard()) CHECK(a[1] <= 1);
  const std::vector<Eigen::VectorXd> pts = {Eigen::Vector2d(0.7, 0.7), Eigen::Vector2d(-0.4, 0.4)};
  const auto full = PseudoMomentSeq::from_atoms(std::vector<double>{0.25, 0.75}, pts, 4);
  Eigen::VectorXd coords(qm.size());
  for (int k = 0; k < qm.size(); ++k) coords[k] = full[qm.standard()[static_cast<std::size_t>(k)]];
  for (const auto& alpha : enumerate_monomials(2, 4)) {
    CHECK(qm.reduce(alpha).eval(coords) == doctest::Approx(full[alpha]).epsilon(1e-12));
  }
}
