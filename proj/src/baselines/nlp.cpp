#include "momentplan/baselines/nlp.hpp"

#include <ceres/gradient_problem.h>
#include <ceres/gradient_problem_solver.h>

#include <chrono>
#include <cmath>
#include <random>
#include <stdexcept>

namespace momentplan {

namespace {

// g and its x-gradient, both evaluated at (t, x).
struct SmoothConstraint {
  Polynomial g;
  std::vector<Polynomial> dg;  // d/dx_j, j = 0..n-1
};

Polynomial partial(const Polynomial& g, int var) {
  Polynomial out(g.space());
  for (const auto& [alpha, c] : g.terms()) {
    const int a = alpha[static_cast<std::size_t>(var)];
    if (a == 0) continue;
    Exponent beta = alpha;
    beta[static_cast<std::size_t>(var)] = a - 1;
    out.add_term(beta, c * a);
  }
  return out;
}

struct Layout {
  int n, s;
  double T;
  int u(int i, int j) const { return 2 * n * i + j; }
  int v(int i, int j) const { return 2 * n * i + n + j; }
  int size() const { return 2 * n * s; }
  double break_time(int i) const { return i * T / s; }
};

class AugmentedLagrangian final : public ceres::FirstOrderFunction {
 public:
  AugmentedLagrangian(const ProblemData& d, const NlpConfig& cfg, const std::vector<SmoothConstraint>& cons)
      : d_(d), cfg_(cfg), cons_(cons), L_{d.n, cfg.s, d.T} {
    lam_eq_.assign(static_cast<std::size_t>((cfg.s + 1) * d.n), 0.0);
    lam_in_.assign(static_cast<std::size_t>(cfg.s * cfg.M) * cons.size(), 0.0);
  }

  int NumParameters() const override { return L_.size(); }

  bool Evaluate(const double* z, double* cost, double* grad) const override {
    const int n = L_.n, s = L_.s;
    Eigen::Map<const Eigen::VectorXd> Z(z, L_.size());
    Eigen::VectorXd G = Eigen::VectorXd::Zero(L_.size());
    double f = 0.0;
    const double w = L_.T / s;
    for (int i = 0; i < s; ++i) {
      const Eigen::VectorXd v = Z.segment(L_.v(i, 0), n);
      const double nv = std::sqrt(v.squaredNorm() + cfg_.eps * cfg_.eps);
      f += w * nv;
      G.segment(L_.v(i, 0), n) += (w / nv) * v;
    }
    // Equalities.
    std::size_t e = 0;
    auto equality = [&](double h, const std::vector<std::pair<int, double>>& dh) {
      const double lam = lam_eq_[e++];
      f += lam * h + 0.5 * mu_ * h * h;
      for (const auto& [k, c] : dh) G[k] += (lam + mu_ * h) * c;
    };
    for (int j = 0; j < n; ++j) equality(d_.x0[j] - z[L_.u(0, j)], {{L_.u(0, j), -1.0}});
    for (int i = 1; i < s; ++i) {
      const double t = L_.break_time(i);
      for (int j = 0; j < n; ++j) {
        const double h = z[L_.u(i - 1, j)] + t * z[L_.v(i - 1, j)] - z[L_.u(i, j)] - t * z[L_.v(i, j)];
        equality(h, {{L_.u(i - 1, j), 1.0}, {L_.v(i - 1, j), t}, {L_.u(i, j), -1.0}, {L_.v(i, j), -t}});
      }
    }
    for (int j = 0; j < n; ++j) {
      equality(z[L_.u(s - 1, j)] + L_.T * z[L_.v(s - 1, j)] - d_.xT[j], {{L_.u(s - 1, j), 1.0}, {L_.v(s - 1, j), L_.T}});
    }
    // Sampled inequalities.
    std::size_t q = 0;
    std::vector<double> pt(static_cast<std::size_t>(n + 1));
    for (int i = 0; i < s; ++i) {
      for (int m = 0; m < cfg_.M; ++m) {
        const double t = sample_time(i, m);
        pt[0] = t;
        for (int j = 0; j < n; ++j) pt[static_cast<std::size_t>(j + 1)] = z[L_.u(i, j)] + t * z[L_.v(i, j)];
        for (const auto& c : cons_) {
          const double g = c.g.evaluate(pt);
          const double lam = lam_in_[q++];
          const double act = std::max(0.0, lam - mu_ * g);
          f += (act * act - lam * lam) / (2.0 * mu_);
          if (act > 0.0 && grad) {
            for (int j = 0; j < n; ++j) {
              const double dgj = c.dg[static_cast<std::size_t>(j)].evaluate(pt);
              G[L_.u(i, j)] -= act * dgj;
              G[L_.v(i, j)] -= act * dgj * t;
            }
          }
        }
      }
    }
    *cost = f;
    if (grad) Eigen::Map<Eigen::VectorXd>(grad, L_.size()) = G;
    return std::isfinite(f);
  }

  double sample_time(int i, int m) const {
    const double a = L_.break_time(i), b = L_.break_time(i + 1);
    return a + (b - a) * m / (cfg_.M - 1);
  }

  // Multiplier update; returns the largest violation at z.
  double update(const Eigen::VectorXd& z, bool apply) {
    const int n = L_.n, s = L_.s;
    std::vector<double> h;
    for (int j = 0; j < n; ++j) h.push_back(d_.x0[j] - z[L_.u(0, j)]);
    for (int i = 1; i < s; ++i) {
      const double t = L_.break_time(i);
      for (int j = 0; j < n; ++j) h.push_back(z[L_.u(i - 1, j)] + t * z[L_.v(i - 1, j)] - z[L_.u(i, j)] - t * z[L_.v(i, j)]);
    }
    for (int j = 0; j < n; ++j) h.push_back(z[L_.u(s - 1, j)] + L_.T * z[L_.v(s - 1, j)] - d_.xT[j]);
    double viol = 0.0;
    for (std::size_t k = 0; k < h.size(); ++k) {
      viol = std::max(viol, std::abs(h[k]));
      if (apply) lam_eq_[k] += mu_ * h[k];
    }
    std::size_t q = 0;
    std::vector<double> pt(static_cast<std::size_t>(n + 1));
    for (int i = 0; i < s; ++i) {
      for (int m = 0; m < cfg_.M; ++m) {
        const double t = sample_time(i, m);
        pt[0] = t;
        for (int j = 0; j < n; ++j) pt[static_cast<std::size_t>(j + 1)] = z[L_.u(i, j)] + t * z[L_.v(i, j)];
        for (const auto& c : cons_) {
          const double g = c.g.evaluate(pt);
          viol = std::max(viol, -g);
          if (apply) lam_in_[q] = std::max(0.0, lam_in_[q] - mu_ * g);
          ++q;
        }
      }
    }
    return viol;
  }

  double mu_ = 10.0;

 private:
  const ProblemData& d_;
  const NlpConfig& cfg_;
  const std::vector<SmoothConstraint>& cons_;
  Layout L_;
  std::vector<double> lam_eq_, lam_in_;
};

}  // namespace

void NlpConfig::validate() const {
  if (s < 1) throw std::invalid_argument("NLP needs at least one piece");
  if (M < 2) throw std::invalid_argument("NLP needs at least two samples per piece");
  if (!(mu0 > 0.0) || !(mu_growth > 1.0)) throw std::invalid_argument("bad penalty schedule");
  if (max_outer < 1 || max_inner < 1) throw std::invalid_argument("iteration limits must be positive");
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
}

NlpResult nlp_plan(const ProblemData& data, const NlpConfig& cfg) {
  cfg.validate();
  data.validate();
  const auto start = std::chrono::steady_clock::now();
  const int n = data.n, s = cfg.s;
  std::vector<SmoothConstraint> cons;
  for (const auto& g : data.constraints) {
    SmoothConstraint c{g, {}};
    for (int j = 0; j < n; ++j) c.dg.push_back(partial(g, j + 1));
    cons.push_back(std::move(c));
  }

  Layout L{n, s, data.T};
  Eigen::VectorXd z(L.size());
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  const Eigen::VectorXd vel = (data.xT - data.x0) / data.T;
  for (int i = 0; i < s; ++i) {
    for (int j = 0; j < n; ++j) {
      z[L.u(i, j)] = data.x0[j] + cfg.jitter * noise(rng);
      z[L.v(i, j)] = vel[j] + cfg.jitter * noise(rng);
    }
  }

  auto* fn = new AugmentedLagrangian(data, cfg, cons);
  fn->mu_ = cfg.mu0;
  ceres::GradientProblem problem(fn);  // takes ownership
  ceres::GradientProblemSolver::Options opts;
  opts.line_search_direction_type = ceres::LBFGS;
  opts.max_num_iterations = cfg.max_inner;
  opts.function_tolerance = 1e-14;
  opts.gradient_tolerance = 1e-12;
  opts.parameter_tolerance = 1e-14;
  opts.logging_type = ceres::SILENT;
  opts.minimizer_progress_to_stdout = false;

  NlpResult res;
  double prev = fn->update(z, false);
  int satisfied = 0;
  for (int outer = 0; outer < cfg.max_outer; ++outer) {
    res.outer_iterations = outer + 1;
    ceres::GradientProblemSolver::Summary summary;
    ceres::Solve(opts, problem, z.data(), &summary);
    const double viol = fn->update(z, true);
    res.max_violation = viol;
    satisfied = viol <= cfg.tol ? satisfied + 1 : 0;
    if (satisfied >= 2) break;
    if (viol > 0.25 * prev) fn->mu_ = std::min(cfg.mu_max, fn->mu_ * cfg.mu_growth);
    prev = viol;
  }

  std::vector<PathPiece> pieces;
  for (int i = 0; i < s; ++i) pieces.push_back({z.segment(L.u(i, 0), n), z.segment(L.v(i, 0), n)});
  res.final_iterate = PiecewiseLinearPath::uniform(data.T, std::move(pieces));
  res.report = certify_path_feasibility(res.final_iterate, data);
  if (res.report.feasible) res.path = res.final_iterate;
  res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return res;
}

}  // namespace momentplan
