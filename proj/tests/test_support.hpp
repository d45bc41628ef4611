#pragma once

// Test-only oracles and generators shared by the unit tests and the
// acceptance binary. Nothing here calls into the code paths it checks.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "momentplan/conic/program.hpp"
#include "momentplan/scene/path.hpp"

namespace momentplan::testing {

inline double min_eigenvalue(const Eigen::MatrixXd& M) {
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(M, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
}

struct NumericPolyMatrix {
  std::vector<Eigen::MatrixXd> coeffs;
  Eigen::MatrixXd operator()(double t) const {
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(coeffs[0].rows(), coeffs[0].cols());
    double p = 1.0;
    for (const auto& c : coeffs) {
      out += p * c;
      p *= t;
    }
    return out;
  }
};

inline std::vector<Eigen::MatrixXd> poly_mul_t(const std::vector<Eigen::MatrixXd>& A, const std::vector<Eigen::MatrixXd>& B) {
  // sum_ij t^(i+j) A_i^T B_j
  const auto m = A[0].cols();
  std::vector<Eigen::MatrixXd> out(A.size() + B.size() - 1, Eigen::MatrixXd::Zero(m, m));
  for (std::size_t i = 0; i < A.size(); ++i)
    for (std::size_t j = 0; j < B.size(); ++j) out[i + j] += A[i].transpose() * B[j];
  return out;
}

/// B(t)'B(t) + (t-a)(b-t) C(t)'C(t) with random polynomial B (degree e) and C (degree e-1).
inline NumericPolyMatrix random_psd_poly_matrix(std::mt19937_64& rng, int m, int e, double a, double b) {
  std::normal_distribution<double> N(0.0, 1.0);
  auto rand_poly = [&](int deg) {
    std::vector<Eigen::MatrixXd> P;
    for (int k = 0; k <= deg; ++k) P.push_back(Eigen::MatrixXd::NullaryExpr(m, m, [&]() { return N(rng); }));
    return P;
  };
  const auto B = rand_poly(e);
  auto S = poly_mul_t(B, B);
  if (e >= 1) {
    const auto C = rand_poly(e - 1);
    const auto CC = poly_mul_t(C, C);
    // (t-a)(b-t) = -ab + (a+b) t - t^2
    const double w[3] = {-a * b, a + b, -1.0};
    S.resize(std::max(S.size(), CC.size() + 2), Eigen::MatrixXd::Zero(m, m));
    for (std::size_t k = 0; k < CC.size(); ++k)
      for (int j = 0; j < 3; ++j) S[k + static_cast<std::size_t>(j)] += w[j] * CC[k];
  }
  for (auto& s : S) s = 0.5 * (s + s.transpose()).eval();
  return NumericPolyMatrix{S};
}

/// Y - (lambda_min(Y(t*)) + margin) I, where t* minimizes the sampled smallest
/// eigenvalue; the result has eigenvalue -margin at t*.
inline NumericPolyMatrix make_indefinite(const NumericPolyMatrix& Y, double a, double b, double margin) {
  double worst = 1e300;
  for (int k = 0; k <= 1000; ++k) worst = std::min(worst, min_eigenvalue(Y(a + (b - a) * k / 1000.0)));
  NumericPolyMatrix Z = Y;
  Z.coeffs[0] -= (worst + margin) * Eigen::MatrixXd::Identity(Y.coeffs[0].rows(), Y.coeffs[0].cols());
  return Z;
}

inline AffinePolyMatrix to_affine_poly(const NumericPolyMatrix& Y) {
  const int m = static_cast<int>(Y.coeffs[0].rows());
  AffinePolyMatrix X;
  for (const auto& c : Y.coeffs) {
    AffineMatrix A(m);
    for (int i = 0; i < m; ++i)
      for (int j = i; j < m; ++j) A.at(i, j) = AffineExpr(c(i, j));
    X.push_back(A);
  }
  return X;
}

/// Bounded, strictly feasible program mixing every cone kind:
/// min c'x s.t. I + sum x_i A_i PSD, |x_i| <= 1, a'x = 0 and, for k >= 2,
/// (1, x_0, x_1) in the second-order cone.
inline ConicProgram random_program(std::mt19937_64& rng, int k) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  ConicProgram p;
  const int x = p.add_variables(k);
  AffineExpr obj;
  for (int i = 0; i < k; ++i) obj.add(x + i, U(rng));
  obj.constant = U(rng);
  p.set_objective(obj);
  const int m = 3;
  AffineMatrix M(m);
  for (int i = 0; i < m; ++i) M.at(i, i) = AffineExpr(1.0);
  for (int v = 0; v < k; ++v)
    for (int i = 0; i < m; ++i)
      for (int j = i; j < m; ++j) M.at(i, j).add(x + v, 0.4 * U(rng));
  p.add_psd(M);
  for (int i = 0; i < k; ++i) {
    p.add_nonnegative(AffineExpr(1.0) - AffineExpr::var(x + i));
    p.add_nonnegative(AffineExpr(1.0) + AffineExpr::var(x + i));
  }
  AffineExpr eq;
  for (int i = 0; i < k; ++i) eq.add(x + i, U(rng));
  p.add_equality(eq);
  if (k >= 2) p.add_second_order({AffineExpr(1.0), AffineExpr::var(x), AffineExpr::var(x + 1)});
  return p;
}

/// int_0^T |x'(t) - (x(T) - x(0))/T|^2 dt by central differences of the path
/// and 8-point Gauss-Legendre on each breakpoint interval.
inline double smoothness_by_quadrature(const PiecewiseLinearPath& path) {
  static const double nodes[8] = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290, -0.1834346424956498,
                                  0.1834346424956498,  0.5255324099163290,  0.7966664774136267,  0.9602898564975363};
  static const double weights[8] = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873, 0.3626837833783620,
                                    0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};
  const auto& br = path.breaks();
  const double T = br.back() - br.front();
  const Eigen::VectorXd vbar = (path(br.back()) - path(br.front())) / T;
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < br.size(); ++i) {
    const double a = br[i], b = br[i + 1], half = 0.5 * (b - a), mid = 0.5 * (a + b);
    for (int q = 0; q < 8; ++q) {
      const double t = mid + half * nodes[q];
      const double h = 1e-4 * half;
      const Eigen::VectorXd xd = (path(t + h) - path(t - h)) / (2.0 * h);
      total += half * weights[q] * (xd - vbar).squaredNorm();
    }
  }
  return total;
}

/// Smallest sampled value of every constraint along the path.
inline double sampled_min_margin(const PiecewiseLinearPath& path, const ProblemData& d, int samples_per_piece) {
  double worst = 1e300;
  std::vector<double> pt(static_cast<std::size_t>(d.n + 1));
  const auto& br = path.breaks();
  for (std::size_t i = 0; i + 1 < br.size(); ++i) {
    const auto& pc = path.pieces()[i];
    for (int k = 0; k <= samples_per_piece; ++k) {
      const double t = br[i] + (br[i + 1] - br[i]) * k / samples_per_piece;
      pt[0] = t;
      for (int j = 0; j < d.n; ++j) pt[static_cast<std::size_t>(j + 1)] = pc.u[j] + t * pc.v[j];
      for (const auto& g : d.constraints) worst = std::min(worst, g.evaluate(pt));
    }
  }
  return worst;
}

/// Shortest two-segment path (0, x0) -> (T/2, p) -> (T, xT) over a grid of
/// breakpoints p in [lo, hi]^2 that stays feasible at dense time samples.
struct GridOptimum {
  double length = 1e300;
  Eigen::Vector2d point = Eigen::Vector2d::Zero();
  bool found = false;
};

inline GridOptimum grid_search_two_pieces(const ProblemData& d, int grid, double lo, double hi, int samples = 2000) {
  struct Cand {
    double len;
    Eigen::Vector2d p;
  };
  std::vector<Cand> cands;
  for (int a = 0; a < grid; ++a)
    for (int b = 0; b < grid; ++b) {
      const Eigen::Vector2d p(lo + (hi - lo) * a / (grid - 1), lo + (hi - lo) * b / (grid - 1));
      cands.push_back({(p - d.x0).norm() + (d.xT - p).norm(), p});
    }
  std::sort(cands.begin(), cands.end(), [](const Cand& x, const Cand& y) { return x.len < y.len; });
  const double h = d.T / 2;
  std::vector<double> pt(3);
  for (const auto& c : cands) {
    bool ok = true;
    for (int seg = 0; seg < 2 && ok; ++seg) {
      const Eigen::Vector2d A = seg == 0 ? Eigen::Vector2d(d.x0) : c.p, B = seg == 0 ? c.p : Eigen::Vector2d(d.xT);
      for (int k = 0; k <= samples && ok; ++k) {
        const double s = static_cast<double>(k) / samples;
        pt[0] = (seg + s) * h;
        const Eigen::Vector2d x = A + s * (B - A);
        pt[1] = x[0];
        pt[2] = x[1];
        for (const auto& g : d.constraints)
          if (g.evaluate(pt) < -1e-9) {
            ok = false;
            break;
          }
      }
    }
    if (ok) return GridOptimum{c.len, c.p, true};
  }
  return {};
}

}  // namespace momentplan::testing
