#include "momentplan/hierarchy/lower_bound.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>

#include "momentplan/scene/certify.hpp"

namespace momentplan {

namespace {

// Ls[i] is the functional holding piece i.
Extraction extract_impl(const std::vector<RieszFn>& Ls, const std::vector<PieceForms>& pieces, int r,
                        const ProblemData& data, double tol) {
  Extraction ex;
  const int deg = flatness_degree(r);
  bool flat = true;
  std::vector<PathPiece> path_pieces;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    const RieszFn& L = Ls[i];
    const PieceForms& pf = pieces[i];
    const FlatnessResidual res = flatness_residual(L, pf, deg);
    ex.residuals.push_back(res);
    flat = flat && is_flat(res, pf.z ? L(*pf.z) : 0.0, tol);
    PathPiece p;
    p.u.resize(static_cast<Eigen::Index>(pf.u.size()));
    p.v.resize(static_cast<Eigen::Index>(pf.v.size()));
    for (std::size_t j = 0; j < pf.u.size(); ++j) p.u[static_cast<Eigen::Index>(j)] = L(pf.u[j]);
    for (std::size_t j = 0; j < pf.v.size(); ++j) p.v[static_cast<Eigen::Index>(j)] = L(pf.v[j]);
    path_pieces.push_back(std::move(p));
  }
  if (!flat) {
    ex.message = "flatness test failed";
    return ex;
  }
  ex.flat = true;
  PiecewiseLinearPath path = PiecewiseLinearPath::uniform(data.T, std::move(path_pieces));
  const auto rep = certify_path_feasibility(path, data);
  if (!rep.feasible) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "flat moments but the readout fails certification (margin %.3e, continuity %.3e)",
                  rep.min_margin, rep.continuity_error);
    ex.message = buf;
    return ex;
  }
  ex.path = std::move(path);
  return ex;
}

}  // namespace

Extraction extract_path_if_flat(const RieszFn& L, const std::vector<PieceForms>& pieces, int r,
                                const ProblemData& data, double tol) {
  return extract_impl(std::vector<RieszFn>(pieces.size(), L), pieces, r, data, tol);
}

Extraction extract_path_if_flat(Relaxation& rel, const Eigen::VectorXd& x, const ProblemData& data, double tol) {
  std::vector<RieszFn> Ls;
  std::vector<PieceForms> forms;
  for (int i = 0; i < rel.s; ++i) {
    MomentBlock* block = &rel.block_of(i);
    Ls.push_back([block, &x](const Polynomial& q) { return block->riesz_value(q, x); });
    PieceForms pf;
    for (int j = 0; j < rel.n; ++j) {
      pf.u.push_back(rel.u(i, j));
      pf.v.push_back(rel.v(i, j));
    }
    pf.z = rel.z(i);
    forms.push_back(std::move(pf));
  }
  return extract_impl(Ls, forms, rel.r, data, tol);
}

LowerBoundCertificate solve_lower_bound(const ProblemData& data, const RelaxationConfig& cfg,
                                        const LowerBoundOptions& opts) {
  LowerBoundCertificate cert;
  cert.r = cfg.r;
  cert.s = cfg.s;
  cert.sparse = cfg.sparse;
  const auto t0 = std::chrono::steady_clock::now();
  Relaxation rel = build_relaxation(data, cfg);
  cert.build_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  cert.num_vars = rel.program.num_vars();

  const Solution sol = solve(rel.program, opts.solver);
  cert.status = sol.status;
  cert.primal_residual = sol.primal_residual;
  cert.dual_residual = sol.dual_residual;
  cert.gap = sol.gap;
  cert.solve_seconds = sol.solve_seconds;
  cert.message = sol.message;
  switch (sol.status) {
    case SolveStatus::Infeasible:
      cert.rho = std::numeric_limits<double>::infinity();
      cert.message = "relaxation infeasible: the problem has no s-piece solution";
      return cert;
    case SolveStatus::Optimal:
    case SolveStatus::Inaccurate:
      cert.rho = sol.objective_value;
      break;
    default:
      cert.rho = std::numeric_limits<double>::quiet_NaN();
      return cert;
  }
  if (opts.extract) {
    Extraction ex = extract_path_if_flat(rel, sol.x, data, opts.flat_tol);
    cert.residuals = std::move(ex.residuals);
    cert.flat = ex.flat;
    cert.extracted = std::move(ex.path);
    if (!ex.message.empty()) cert.message += "; " + ex.message;
  }
  return cert;
}

std::string sweep_csv_header() { return "r,s,rho,status,flat,solve_seconds"; }

std::string sweep_csv_row(const LowerBoundCertificate& cert) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%d,%d,%.10g,%s,%d,%.3f", cert.r, cert.s, cert.rho, to_string(cert.status).c_str(),
                cert.flat ? 1 : 0, cert.solve_seconds);
  return buf;
}

}  // namespace momentplan
