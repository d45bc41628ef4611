#include "momentplan/mmp/planner.hpp"

#include <Eigen/Eigenvalues>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <future>
#include <limits>
#include <random>
#include <stdexcept>

#include "momentplan/conic/interval_psd.hpp"
#include "momentplan/mmp/gaussian_moments.hpp"
#include "momentplan/moment/flatness.hpp"
#include "momentplan/moment/moment_matrices.hpp"
#include "momentplan/scene/metrics.hpp"

namespace momentplan {

namespace {

Exponent unit(int nvars, int k) {
  Exponent e(static_cast<std::size_t>(nvars), 0);
  e[static_cast<std::size_t>(k)] = 1;
  return e;
}

// First moments of coordinates [first, first + n) of phi.
Eigen::VectorXd mean_of(const PseudoMomentSeq& phi, int first, int n) {
  Eigen::VectorXd m(n);
  for (int j = 0; j < n; ++j) m[j] = phi[unit(phi.n_vars(), first + j)];
  return m;
}

// L(|y|^r) for y = coordinates [first, first + n) of phi, r even.
double norm_power_moment(const PseudoMomentSeq& phi, int first, int n, int r) {
  double total = 0.0;
  // |y|^r = sum over multinomials of (y_1^2)^{k_1} ... with sum k = r/2
  for (const auto& k : enumerate_monomials(n, r / 2)) {
    if (total_degree(k) != r / 2) continue;
    double coef = std::tgamma(r / 2 + 1.0);
    Exponent alpha(static_cast<std::size_t>(phi.n_vars()), 0);
    for (int j = 0; j < n; ++j) {
      coef /= std::tgamma(k[static_cast<std::size_t>(j)] + 1.0);
      alpha[static_cast<std::size_t>(first + j)] = 2 * k[static_cast<std::size_t>(j)];
    }
    total += coef * phi[alpha];
  }
  return total;
}

Polynomial norm_power(const std::vector<Polynomial>& y, int r) {
  Polynomial sq(y.front().space());
  for (const auto& c : y) sq += c * c;
  return sq.pow(r / 2);
}

bool has_variables(const AffineMatrix& m) {
  for (const auto& e : m.upper()) {
    if (!e.terms.empty()) return true;
  }
  return false;
}

std::vector<Polynomial> piece_vars(const SpacePtr& sp, VarKind kind, int piece, int n) {
  std::vector<Polynomial> out;
  for (int j = 0; j < n; ++j) out.push_back(Polynomial::variable(sp, sp->index(kind, piece, j)));
  return out;
}

// Piece i's block. The end offsets are substituted exactly: u_1 = x0 and
// u_s = xT - T v_s, so constraints active at x0 or xT vanish symbolically there.
std::unique_ptr<MomentBlock> make_piece_block(const ProblemData& d, int s, int i, int r) {
  const int n = d.n;
  const std::vector<int> ids = {i};
  const SpacePtr orig = make_space(VariableSpace::pieces(n, ids, true, false));
  const bool first = i == 0;
  const bool last = i == s - 1;
  const bool fix_u = first || last;
  const bool fix_v = first && last;

  std::vector<VariableInfo> vars = {(*orig)[orig->index(VarKind::Time)]};
  for (int j = 0; j < n && !fix_u; ++j) vars.push_back((*orig)[orig->index(VarKind::Position, i, j)]);
  for (int j = 0; j < n && !fix_v; ++j) vars.push_back((*orig)[orig->index(VarKind::Velocity, i, j)]);
  const SpacePtr red = make_space(VariableSpace(std::move(vars)));

  std::vector<Polynomial> images(static_cast<std::size_t>(orig->size()));
  images[static_cast<std::size_t>(orig->index(VarKind::Time))] = Polynomial::variable(red, red->index(VarKind::Time));
  for (int j = 0; j < n; ++j) {
    Polynomial v = fix_v ? Polynomial::constant(red, (d.xT[j] - d.x0[j]) / d.T)
                         : Polynomial::variable(red, red->index(VarKind::Velocity, i, j));
    Polynomial u = first  ? Polynomial::constant(red, d.x0[j])
                   : last ? Polynomial::constant(red, d.xT[j]) - d.T * v
                          : Polynomial::variable(red, red->index(VarKind::Position, i, j));
    images[static_cast<std::size_t>(orig->index(VarKind::Position, i, j))] = std::move(u);
    images[static_cast<std::size_t>(orig->index(VarKind::Velocity, i, j))] = std::move(v);
  }
  return std::make_unique<MomentBlock>(orig, red, std::move(images), r);
}

double min_eigenvalue(const PseudoMomentSeq& phi) {
  const Eigen::MatrixXd M = moment_matrix(phi);
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(M, Eigen::EigenvaluesOnly).eigenvalues()[0];
}

}  // namespace

void MmpConfig::validate() const {
  if (s < 1) throw std::invalid_argument("MMP needs at least one piece");
  if (r < 2 || r % 2 != 0) throw std::invalid_argument("MMP order must be even and >= 2 (the moment gap is not polynomial for odd r)");
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
  if (N < 1) throw std::invalid_argument("MMP needs at least one iteration");
  if (init_spread < 0.0 || !(init_variance > 0.0)) throw std::invalid_argument("bad initialization parameters");
}

int mmp_order(const ProblemData& data, const MmpConfig& cfg) {
  int deg = 0;
  for (const auto& g : data.constraints) {
    std::vector<bool> mask(static_cast<std::size_t>(g.num_vars()), true);
    mask[0] = false;  // t
    deg = std::max(deg, g.degree_in(mask));
  }
  const int even = deg + (deg % 2);
  return std::max(cfg.r, even);
}

IterateState init_random(const MmpConfig& cfg, const ProblemData& data) {
  const int n = data.n;
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const Eigen::VectorXd mid = 0.5 * (data.x0 + data.xT);
  const Eigen::VectorXd vel = (data.xT - data.x0) / data.T;
  const int r = mmp_order(data, cfg);
  IterateState state;
  for (int i = 0; i < cfg.s; ++i) {
    Eigen::VectorXd mean(2 * n);
    for (int j = 0; j < n; ++j) mean[j] = mid[j] + cfg.init_spread * normal(rng);
    for (int j = 0; j < n; ++j) mean[n + j] = vel[j] + cfg.init_spread * normal(rng);
    state.blocks.push_back(gaussian_moments(mean, cfg.init_variance, r));
  }
  return state;
}

double moment_gap(const IterateState& state) {
  double J = 0.0;
  for (const auto& phi : state.blocks) {
    const int n = phi.n_vars() / 2;
    const int r = flatness_degree(phi.order());
    for (int first : {0, n}) {
      J += norm_power_moment(phi, first, n, r) - std::pow(mean_of(phi, first, n).norm(), r);
    }
  }
  return J;
}

IterateState InnerProgram::read(const Eigen::VectorXd& x) const {
  IterateState st;
  auto basis = shared_basis(2 * n, r);
  for (const auto& block : blocks) {
    const SpacePtr& sp = block->orig_space();
    Eigen::VectorXd phi(basis->size());
    for (int a = 0; a < basis->size(); ++a) {
      Exponent full(static_cast<std::size_t>(sp->size()), 0);
      const Exponent& alpha = (*basis)[a];
      // orig = (t, u, v); alpha = (u, v)
      for (int k = 0; k < 2 * n; ++k) full[static_cast<std::size_t>(k + 1)] = alpha[static_cast<std::size_t>(k)];
      phi[a] = block->riesz_value(Polynomial::monomial(sp, full), x);
    }
    st.blocks.emplace_back(2 * n, r, std::move(phi));
  }
  return st;
}

InnerProgram build_inner_program(const IterateState& ref, const ProblemData& d, const MmpConfig& cfg) {
  cfg.validate();
  const int s = cfg.s;
  const int n = d.n;
  if (static_cast<int>(ref.blocks.size()) != s) throw std::invalid_argument("reference iterate has the wrong number of pieces");
  InnerProgram ip;
  ip.n = n;
  ip.r = mmp_order(d, cfg);
  const int r = ip.r;
  for (const auto& phi : ref.blocks) {
    if (phi.n_vars() != 2 * n || phi.order() < r) throw std::invalid_argument("reference iterate has the wrong shape");
  }
  ConicProgram& P = ip.program;

  for (int i = 0; i < s; ++i) {
    auto block = make_piece_block(d, s, i, r);
    block->allocate(P);
    const AffineMatrix M = block->moment_matrix();
    if (has_variables(M)) P.add_psd(M);
    ip.blocks.push_back(std::move(block));
  }

  // Endpoint matching of consecutive pieces.
  const int match_deg = std::max(1, r - 2);
  const auto alphas = enumerate_monomials(n, match_deg);
  for (int i = 0; i + 1 < s; ++i) {
    const double tb = (i + 1) * d.T / s;
    MomentBlock& L = *ip.blocks[static_cast<std::size_t>(i)];
    MomentBlock& R = *ip.blocks[static_cast<std::size_t>(i + 1)];
    auto endpoint = [&](MomentBlock& b, int piece) {
      const auto u = piece_vars(b.orig_space(), VarKind::Position, piece, n);
      const auto v = piece_vars(b.orig_space(), VarKind::Velocity, piece, n);
      std::vector<Polynomial> e;
      for (int j = 0; j < n; ++j) e.push_back(u[static_cast<std::size_t>(j)] + tb * v[static_cast<std::size_t>(j)]);
      return e;
    };
    const auto el = endpoint(L, i);
    const auto er = endpoint(R, i + 1);
    for (const auto& alpha : alphas) {
      if (total_degree(alpha) == 0) continue;
      Polynomial pl = Polynomial::constant(L.orig_space(), 1.0);
      Polynomial pr = Polynomial::constant(R.orig_space(), 1.0);
      for (int j = 0; j < n; ++j) {
        const int a = alpha[static_cast<std::size_t>(j)];
        if (a == 0) continue;
        pl *= el[static_cast<std::size_t>(j)].pow(a);
        pr *= er[static_cast<std::size_t>(j)].pow(a);
      }
      AffineExpr e = L.riesz(pl) - R.riesz(pr);
      e.compress();
      if (!e.terms.empty() || std::abs(e.constant) > 1e-12) P.add_equality(std::move(e));
    }
  }

  // Obstacles on each piece's interval.
  for (int i = 0; i < s; ++i) {
    MomentBlock& b = *ip.blocks[static_cast<std::size_t>(i)];
    const SpacePtr& sp = b.orig_space();
    std::vector<bool> non_time(static_cast<std::size_t>(sp->size()), true);
    non_time[static_cast<std::size_t>(sp->index(VarKind::Time))] = false;
    const double a = i * d.T / s;
    const double bnd = (i + 1) * d.T / s;
    for (const auto& g : d.constraints) {
      const Polynomial g_sub = substitute_affine_path(g, i, sp);
      const int half = localizing_half_order(r, g_sub.degree_in(non_time));
      encode_interval_psd(P, b.localizing_time(g_sub, half), a, bnd);
    }
  }

  // sum_i |L(v_i)| + lambda * Jbar(phi; ref), Jbar the first-order expansion
  // of J around ref (exact in the L(|y|^r) terms, linear in the means).
  AffineExpr obj;
  double constant = 0.0;
  for (int i = 0; i < s; ++i) {
    MomentBlock& b = *ip.blocks[static_cast<std::size_t>(i)];
    const SpacePtr& sp = b.orig_space();
    const auto u = piece_vars(sp, VarKind::Position, i, n);
    const auto v = piece_vars(sp, VarKind::Velocity, i, n);

    const int tau = P.add_variables(1);
    ip.epigraph.push_back(tau);
    std::vector<AffineExpr> rows = {AffineExpr::var(tau)};
    for (const auto& vj : v) rows.push_back(b.riesz(vj));
    P.add_second_order(std::move(rows));
    obj += AffineExpr::var(tau);

    const PseudoMomentSeq& ref_phi = ref.blocks[static_cast<std::size_t>(i)];
    for (int part = 0; part < 2; ++part) {
      const auto& y = part == 0 ? u : v;
      const Eigen::VectorXd ybar = mean_of(ref_phi, part * n, n);
      const double nb = ybar.norm();
      const double grad_scale = r * std::pow(nb, r - 2);
      AffineExpr term = b.riesz(norm_power(y, r));
      for (int j = 0; j < n; ++j) term -= b.riesz(y[static_cast<std::size_t>(j)]) * (grad_scale * ybar[j]);
      obj += term * cfg.lambda;
      constant += cfg.lambda * (r - 1) * std::pow(nb, r);
    }
  }
  obj.constant += constant;
  obj.compress();
  P.set_objective(std::move(obj));
  return ip;
}

PiecewiseLinearPath path_from_state(const IterateState& state, int n, double T) {
  std::vector<PathPiece> pieces;
  for (const auto& phi : state.blocks) {
    PathPiece p;
    p.u = mean_of(phi, 0, n);
    p.v = mean_of(phi, n, n);
    pieces.push_back(std::move(p));
  }
  return PiecewiseLinearPath::uniform(T, std::move(pieces));
}

MmpResult run_mmp(const ProblemData& data, const MmpConfig& cfg) {
  cfg.validate();
  data.validate();
  const auto t0 = std::chrono::steady_clock::now();
  MmpResult res;
  res.seed = cfg.seed;
  res.order = mmp_order(data, cfg);
  MmpConfig c = cfg;
  IterateState state = init_random(c, data);

  auto finish = [&](bool completed) {
    res.completed = completed;
    res.state = state;
    res.final_J = moment_gap(state);
    res.lambda = c.lambda;
    res.path = path_from_state(state, data.n, data.T);
    res.report = certify_path_feasibility(res.path, data);
    res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  };

  for (int ramp = 0;; ++ramp) {
    for (int k = 0; k < c.N; ++k) {
      MmpIteration it;
      it.iteration = state.iteration + 1;
      it.lambda = c.lambda;
      const auto ts = std::chrono::steady_clock::now();
      try {
        InnerProgram ip = build_inner_program(state, data, c);
        const Solution sol = solve(ip.program, c.solver);
        it.status = sol.status;
        it.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - ts).count();
        if (sol.status != SolveStatus::Optimal && sol.status != SolveStatus::Inaccurate) {
          res.trace.push_back(it);
          res.message = "inner solve " + std::to_string(it.iteration) + " ended " + to_string(sol.status);
          if (!sol.message.empty()) res.message += ": " + sol.message;
          finish(false);
          return res;
        }
        IterateState next = ip.read(sol.x);
        next.iteration = state.iteration + 1;
        next.objective_trace = state.objective_trace;
        next.objective_trace.push_back(sol.objective_value);
        state = std::move(next);
        it.objective = sol.objective_value;
      } catch (const std::exception& e) {
        res.trace.push_back(it);
        res.message = std::string("inner program ") + std::to_string(it.iteration) + " failed: " + e.what();
        finish(false);
        return res;
      }
      it.J = moment_gap(state);
      for (const auto& phi : state.blocks) it.min_eig.push_back(min_eigenvalue(phi));
      res.trace.push_back(std::move(it));
    }
    finish(true);
    if (res.report.feasible || !c.lambda_ramp || ramp >= c.max_ramps) break;
    c.lambda *= 1.5;
  }
  if (!res.report.feasible) res.message = "final path fails certification";
  return res;
}

MmpResult run_mmp_multistart(const ProblemData& data, const MmpConfig& cfg, int starts, int threads) {
  if (starts < 1) throw std::invalid_argument("need at least one start");
  threads = std::max(1, threads);
  std::vector<MmpResult> results(static_cast<std::size_t>(starts));
  for (int lo = 0; lo < starts; lo += threads) {
    std::vector<std::future<MmpResult>> batch;
    for (int k = lo; k < std::min(starts, lo + threads); ++k) {
      MmpConfig c = cfg;
      c.seed = cfg.seed + static_cast<std::uint64_t>(k);
      batch.push_back(std::async(std::launch::async, [&data, c] { return run_mmp(data, c); }));
    }
    for (std::size_t k = 0; k < batch.size(); ++k) results[static_cast<std::size_t>(lo) + k] = batch[k].get();
  }
  int best = -1;
  double best_len = std::numeric_limits<double>::infinity();
  for (int k = 0; k < starts; ++k) {
    const auto& r = results[static_cast<std::size_t>(k)];
    if (!r.success()) continue;
    const double len = path_length(r.path);
    if (len < best_len) {
      best_len = len;
      best = k;
    }
  }
  return std::move(results[static_cast<std::size_t>(best < 0 ? 0 : best)]);
}

std::string mmp_diagnostics_csv(const MmpResult& result) {
  std::string out = "iteration,objective,J,lambda,status";
  std::size_t blocks = result.state.blocks.size();
  for (std::size_t i = 0; i < blocks; ++i) out += ",min_eig_" + std::to_string(i + 1);
  out += "\n";
  char buf[96];
  for (const auto& it : result.trace) {
    std::snprintf(buf, sizeof buf, "%d,%.12g,%.12g,%.6g,", it.iteration, it.objective, it.J, it.lambda);
    out += buf;
    out += to_string(it.status);
    for (std::size_t i = 0; i < blocks; ++i) {
      if (i < it.min_eig.size()) {
        std::snprintf(buf, sizeof buf, ",%.6e", it.min_eig[i]);
        out += buf;
      } else {
        out += ",";
      }
    }
    out += "\n";
  }
  return out;
}

}  // namespace momentplan
