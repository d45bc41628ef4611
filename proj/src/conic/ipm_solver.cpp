#include "momentplan/conic/ipm_solver.hpp"

#include <Eigen/OrderingMethods>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>
#include <Eigen/CholmodSupport>
#include <SuiteSparseQR.hpp>

#include <algorithm>
#include <tuple>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <memory>
#include <numeric>

#include "momentplan/conic/cones.hpp"

namespace momentplan {

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;
using Eigen::VectorXd;

struct ConeSlot {
  ConeKind kind;
  int dim;     // svec rows
  int size;    // matrix size for PSD, rows otherwise
  int offset;  // first row in G
};

// min c'x + c0  s.t.  A x = b,  G x + s = h,  s in K.
struct StandardForm {
  int n = 0;
  SpMat A, G;
  VectorXd b, h, c;
  double c0 = 0.0;
  std::vector<ConeSlot> cones;
  int m() const { return static_cast<int>(G.rows()); }
  int p() const { return static_cast<int>(A.rows()); }
};

StandardForm to_standard(const ConicProgram& prog) {
  StandardForm sf;
  sf.n = prog.num_vars();
  sf.c = VectorXd::Zero(sf.n);
  for (const auto& [i, v] : prog.objective().terms) sf.c[i] += v;
  sf.c0 = prog.objective().constant;

  std::vector<Triplet> at;
  const int p = static_cast<int>(prog.equalities().size());
  sf.b.resize(p);
  for (int r = 0; r < p; ++r) {
    const auto& e = prog.equalities()[static_cast<std::size_t>(r)];
    for (const auto& [i, v] : e.terms) at.emplace_back(r, i, v);
    sf.b[r] = -e.constant;
  }
  sf.A.resize(p, sf.n);
  sf.A.setFromTriplets(at.begin(), at.end());

  std::vector<Triplet> gt;
  std::vector<double> h;
  auto push_row = [&](const AffineExpr& e, double scale) {
    const int r = static_cast<int>(h.size());
    for (const auto& [i, v] : e.terms) gt.emplace_back(r, i, -scale * v);
    h.push_back(scale * e.constant);
  };
  // All scalar nonnegativity rows form one orthant placed first.
  int nonneg = 0;
  for (const auto& cone : prog.cones()) {
    if (cone.kind != ConeKind::Nonnegative) continue;
    for (const auto& row : cone.rows) push_row(row, 1.0);
    nonneg += static_cast<int>(cone.rows.size());
  }
  if (nonneg > 0) sf.cones.push_back({ConeKind::Nonnegative, nonneg, nonneg, 0});
  const double sqrt2 = std::sqrt(2.0);
  for (const auto& cone : prog.cones()) {
    if (cone.kind == ConeKind::Nonnegative) continue;
    const int offset = static_cast<int>(h.size());
    if (cone.kind == ConeKind::SecondOrder) {
      for (const auto& row : cone.rows) push_row(row, 1.0);
      sf.cones.push_back({ConeKind::SecondOrder, cone.dim, cone.dim, offset});
    } else {
      int k = 0;
      for (int i = 0; i < cone.dim; ++i) {
        for (int j = i; j < cone.dim; ++j) push_row(cone.rows[static_cast<std::size_t>(k++)], i == j ? 1.0 : sqrt2);
      }
      sf.cones.push_back({ConeKind::Psd, svec_size(cone.dim), cone.dim, offset});
    }
  }
  sf.G.resize(static_cast<int>(h.size()), sf.n);
  sf.G.setFromTriplets(gt.begin(), gt.end());
  sf.h = Eigen::Map<VectorXd>(h.data(), static_cast<Eigen::Index>(h.size()));
  return sf;
}

// Drops linearly dependent equality rows. Returns false when the dropped rows
// are inconsistent with the kept ones.
//
// Rank and the independent rows come from a column-pivoted QR of A' by
// SuiteSparseQR: A' E = Q R. With R_k the leading rank x rank block, the kept
// rows satisfy A_k A_k' = R_k' R_k, so x0 = A_k' R_k^{-1} R_k^{-T} b_k solves
// them without forming Q.
bool drop_dependent_rows(StandardForm& sf) {
  const int p = sf.p();
  if (p == 0) return true;
  using LongMat = Eigen::SparseMatrix<double, Eigen::ColMajor, SuiteSparse_long>;
  LongMat At = sf.A.transpose().cast<double>();
  At.makeCompressed();

  cholmod_common cc;
  cholmod_l_start(&cc);
  cholmod_sparse Ac = Eigen::viewAsCholmod(At);
  cholmod_sparse* Rc = nullptr;
  SuiteSparse_long* E = nullptr;
  const SuiteSparse_long rank_l = SuiteSparseQR<double>(SPQR_ORDERING_DEFAULT, SPQR_DEFAULT_TOL, 0, &Ac, &Rc, &E, &cc);
  if (rank_l < 0 || Rc == nullptr) {
    cholmod_l_finish(&cc);
    return true;  // keep everything, let the IPM cope
  }
  const int rank = static_cast<int>(rank_l);
  std::vector<int> perm(static_cast<std::size_t>(p));
  for (int k = 0; k < p; ++k) perm[static_cast<std::size_t>(k)] = E ? static_cast<int>(E[k]) : k;
  const LongMat R = Eigen::viewAsEigen<double, Eigen::ColMajor, SuiteSparse_long>(*Rc).topLeftCorner(rank, rank);
  cholmod_l_free_sparse(&Rc, &cc);
  if (E) cholmod_l_free(static_cast<std::size_t>(p), sizeof(SuiteSparse_long), E, &cc);
  cholmod_l_finish(&cc);
  if (rank >= p) return true;

  std::vector<int> keep(perm.begin(), perm.begin() + rank);
  std::sort(keep.begin(), keep.end());

  VectorXd pb(rank);
  for (int k = 0; k < rank; ++k) pb[k] = sf.b[perm[static_cast<std::size_t>(k)]];
  const VectorXd w1 = R.transpose().triangularView<Eigen::Lower>().solve(pb);
  const VectorXd w = R.triangularView<Eigen::Upper>().solve(w1);
  VectorXd x0 = VectorXd::Zero(sf.n);
  for (int k = 0; k < rank; ++k) x0 += At.col(perm[static_cast<std::size_t>(k)]) * w[k];
  const VectorXd resid = sf.A * x0 - sf.b;
  const double scale = 1.0 + sf.b.lpNorm<Eigen::Infinity>();
  if (resid.lpNorm<Eigen::Infinity>() > 1e-8 * scale) return false;

  std::vector<Triplet> t;
  std::vector<int> newrow(static_cast<std::size_t>(p), -1);
  for (int k = 0; k < rank; ++k) newrow[static_cast<std::size_t>(keep[static_cast<std::size_t>(k)])] = k;
  for (int col = 0; col < sf.A.outerSize(); ++col) {
    for (SpMat::InnerIterator it(sf.A, col); it; ++it) {
      const int r = newrow[static_cast<std::size_t>(it.row())];
      if (r >= 0) t.emplace_back(r, col, it.value());
    }
  }
  VectorXd b(rank);
  for (int k = 0; k < rank; ++k) b[k] = sf.b[keep[static_cast<std::size_t>(k)]];
  sf.A.resize(rank, sf.n);
  sf.A.setFromTriplets(t.begin(), t.end());
  sf.b = b;
  return true;
}

// Ruiz equilibration; rows of each second-order or PSD block share one factor.
struct Scaling {
  VectorXd D;   // columns
  VectorXd Ea;  // equality rows
  VectorXd Eg;  // cone rows
  double cscale = 1.0;
};

Scaling equilibrate(StandardForm& sf, bool enabled) {
  Scaling sc;
  sc.D = VectorXd::Ones(sf.n);
  sc.Ea = VectorXd::Ones(sf.p());
  sc.Eg = VectorXd::Ones(sf.m());
  if (!enabled) return sc;
  auto clamp = [](double v) { return std::clamp(v, 1e-4, 1e4); };
  for (int iter = 0; iter < 15; ++iter) {
    VectorXd colmax = VectorXd::Zero(sf.n);
    VectorXd rowa = VectorXd::Zero(sf.p());
    VectorXd rowg = VectorXd::Zero(sf.m());
    for (int j = 0; j < sf.n; ++j) {
      for (SpMat::InnerIterator it(sf.A, j); it; ++it) {
        colmax[j] = std::max(colmax[j], std::abs(it.value()));
        rowa[it.row()] = std::max(rowa[it.row()], std::abs(it.value()));
      }
      for (SpMat::InnerIterator it(sf.G, j); it; ++it) {
        colmax[j] = std::max(colmax[j], std::abs(it.value()));
        rowg[it.row()] = std::max(rowg[it.row()], std::abs(it.value()));
      }
    }
    for (const auto& cone : sf.cones) {
      if (cone.kind == ConeKind::Nonnegative) continue;
      const double mx = rowg.segment(cone.offset, cone.dim).maxCoeff();
      rowg.segment(cone.offset, cone.dim).setConstant(mx);
    }
    VectorXd dc(sf.n), da(sf.p()), dg(sf.m());
    for (int j = 0; j < sf.n; ++j) dc[j] = colmax[j] > 0 ? clamp(1.0 / std::sqrt(colmax[j])) : 1.0;
    for (int i = 0; i < sf.p(); ++i) da[i] = rowa[i] > 0 ? clamp(1.0 / std::sqrt(rowa[i])) : 1.0;
    for (int i = 0; i < sf.m(); ++i) dg[i] = rowg[i] > 0 ? clamp(1.0 / std::sqrt(rowg[i])) : 1.0;
    sf.A = da.asDiagonal() * sf.A * dc.asDiagonal();
    sf.G = dg.asDiagonal() * sf.G * dc.asDiagonal();
    sc.D = sc.D.cwiseProduct(dc);
    sc.Ea = sc.Ea.cwiseProduct(da);
    sc.Eg = sc.Eg.cwiseProduct(dg);
  }
  sf.c = sc.D.cwiseProduct(sf.c);
  sf.b = sc.Ea.cwiseProduct(sf.b);
  sf.h = sc.Eg.cwiseProduct(sf.h);
  const double cn = sf.c.lpNorm<Eigen::Infinity>();
  sc.cscale = cn > 0 ? std::clamp(1.0 / cn, 1e-4, 1e4) : 1.0;
  sf.c *= sc.cscale;
  return sc;
}

// Quasi-definite KKT matrix [reg I, A', G'; A, -reg I, 0; G, 0, -(W'W + reg I)].
class Kkt {
 public:
  Kkt(const StandardForm& sf, const std::vector<std::unique_ptr<Cone>>& cones, double reg, int refine)
      : sf_(sf), cones_(cones), reg_(reg), refine_(refine) {
    n_ = sf.n;
    p_ = sf.p();
    m_ = sf.m();
    const int N = n_ + p_ + m_;
    std::vector<Triplet> t;
    for (int i = 0; i < n_; ++i) t.emplace_back(i, i, reg_);
    for (int j = 0; j < n_; ++j) {
      for (SpMat::InnerIterator it(sf.A, j); it; ++it) t.emplace_back(n_ + it.row(), j, it.value());
      for (SpMat::InnerIterator it(sf.G, j); it; ++it) t.emplace_back(n_ + p_ + it.row(), j, it.value());
    }
    for (int i = 0; i < p_; ++i) t.emplace_back(n_ + i, n_ + i, -reg_);
    for (std::size_t k = 0; k < sf.cones.size(); ++k) {
      const auto& cone = sf.cones[k];
      const int o = n_ + p_ + cone.offset;
      if (cone.kind == ConeKind::Nonnegative) {
        for (int i = 0; i < cone.dim; ++i) t.emplace_back(o + i, o + i, -1.0);
      } else {
        for (int j = 0; j < cone.dim; ++j) {
          for (int i = j; i < cone.dim; ++i) t.emplace_back(o + i, o + j, -1.0);
        }
      }
    }
    K_.resize(N, N);
    K_.setFromTriplets(t.begin(), t.end());
    K_.makeCompressed();
    for (std::size_t k = 0; k < sf.cones.size(); ++k) {
      const auto& cone = sf.cones[k];
      const int o = n_ + p_ + cone.offset;
      std::vector<double*> ptrs;
      if (cone.kind == ConeKind::Nonnegative) {
        for (int i = 0; i < cone.dim; ++i) ptrs.push_back(&K_.coeffRef(o + i, o + i));
      } else {
        for (int j = 0; j < cone.dim; ++j) {
          for (int i = j; i < cone.dim; ++i) ptrs.push_back(&K_.coeffRef(o + i, o + j));
        }
      }
      slots_.push_back(std::move(ptrs));
    }
    ldlt_.analyzePattern(K_);
    wtw_.resize(sf.cones.size());
  }

  bool factor() {
    for (std::size_t k = 0; k < sf_.cones.size(); ++k) {
      const auto& cone = sf_.cones[k];
      wtw_[k] = cones_[k]->wtw();
      auto& ptrs = slots_[k];
      if (cone.kind == ConeKind::Nonnegative) {
        for (int i = 0; i < cone.dim; ++i) *ptrs[static_cast<std::size_t>(i)] = -(wtw_[k](i, 0) + reg_);
      } else {
        std::size_t q = 0;
        for (int j = 0; j < cone.dim; ++j) {
          for (int i = j; i < cone.dim; ++i) *ptrs[q++] = -(wtw_[k](i, j) + (i == j ? reg_ : 0.0));
        }
      }
    }
    ldlt_.factorize(K_);
    return ldlt_.info() == Eigen::Success;
  }

  // Solves the unregularized system by refinement on the regularized factor.
  VectorXd solve(const VectorXd& rhs) const {
    VectorXd sol = ldlt_.solve(rhs);
    const double rn = std::max(1.0, rhs.lpNorm<Eigen::Infinity>());
    for (int it = 0; it < refine_; ++it) {
      const VectorXd r = rhs - multiply(sol);
      if (!r.allFinite() || r.lpNorm<Eigen::Infinity>() <= 1e-13 * rn) break;
      sol += ldlt_.solve(r);
    }
    return sol;
  }

 private:
  VectorXd multiply(const VectorXd& v) const {
    const auto x = v.head(n_);
    const auto y = v.segment(n_, p_);
    const auto z = v.tail(m_);
    VectorXd out(n_ + p_ + m_);
    out.head(n_) = sf_.A.transpose() * y + sf_.G.transpose() * z;
    out.segment(n_, p_) = sf_.A * x;
    VectorXd gz = sf_.G * x;
    for (std::size_t k = 0; k < sf_.cones.size(); ++k) {
      const auto& cone = sf_.cones[k];
      if (cone.kind == ConeKind::Nonnegative) {
        gz.segment(cone.offset, cone.dim) -= wtw_[k].col(0).cwiseProduct(z.segment(cone.offset, cone.dim));
      } else {
        gz.segment(cone.offset, cone.dim) -= wtw_[k] * z.segment(cone.offset, cone.dim);
      }
    }
    out.tail(m_) = gz;
    return out;
  }

  const StandardForm& sf_;
  const std::vector<std::unique_ptr<Cone>>& cones_;
  double reg_;
  int refine_;
  int n_, p_, m_;
  SpMat K_;
  std::vector<std::vector<double*>> slots_;
  std::vector<Eigen::MatrixXd> wtw_;
  Eigen::SimplicialLDLT<SpMat, Eigen::Lower, Eigen::AMDOrdering<int>> ldlt_;
};

struct Iterate {
  VectorXd x, y, z, s;
  double tau = 1.0, kappa = 1.0;
};

class ProductCone {
 public:
  explicit ProductCone(const StandardForm& sf) : sf_(sf) {
    for (const auto& c : sf.cones) {
      switch (c.kind) {
        case ConeKind::Nonnegative: cones.push_back(make_nonnegative_cone(c.dim)); break;
        case ConeKind::SecondOrder: cones.push_back(make_second_order_cone(c.dim)); break;
        case ConeKind::Psd: cones.push_back(make_psd_cone(c.size)); break;
      }
      degree += cones.back()->degree();
    }
  }

  template <class F>
  void each(F&& f) const {
    for (std::size_t k = 0; k < cones.size(); ++k) f(*cones[k], sf_.cones[k].offset, sf_.cones[k].dim);
  }

  VectorXd identity() const {
    VectorXd e(sf_.m());
    each([&](const Cone& c, int o, int d) { c.identity(e.segment(o, d)); });
    return e;
  }
  double boundary_shift(const VectorXd& v) const {
    double a = -1e300;
    each([&](const Cone& c, int o, int d) { a = std::max(a, c.boundary_shift(v.segment(o, d))); });
    return a;
  }
  bool update(const VectorXd& s, const VectorXd& z) {
    bool ok = true;
    for (std::size_t k = 0; k < cones.size(); ++k) {
      const auto& slot = sf_.cones[k];
      ok = ok && cones[k]->update_scaling(s.segment(slot.offset, slot.dim), z.segment(slot.offset, slot.dim));
    }
    return ok;
  }
  VectorXd lambda() const {
    VectorXd l(sf_.m());
    each([&](const Cone& c, int o, int d) { l.segment(o, d) = c.lambda(); });
    return l;
  }
  VectorXd w(const VectorXd& v) const {
    VectorXd out(sf_.m());
    each([&](const Cone& c, int o, int d) { c.apply_w(v.segment(o, d), out.segment(o, d)); });
    return out;
  }
  VectorXd wt(const VectorXd& v) const {
    VectorXd out(sf_.m());
    each([&](const Cone& c, int o, int d) { c.apply_wt(v.segment(o, d), out.segment(o, d)); });
    return out;
  }
  VectorXd winv_t(const VectorXd& v) const {
    VectorXd out(sf_.m());
    each([&](const Cone& c, int o, int d) { c.apply_winv_t(v.segment(o, d), out.segment(o, d)); });
    return out;
  }
  VectorXd jordan(const VectorXd& u, const VectorXd& v) const {
    VectorXd out(sf_.m());
    each([&](const Cone& c, int o, int d) { c.jordan_product(u.segment(o, d), v.segment(o, d), out.segment(o, d)); });
    return out;
  }
  VectorXd lambda_div(const VectorXd& v) const {
    VectorXd out(sf_.m());
    each([&](const Cone& c, int o, int d) { c.lambda_div(v.segment(o, d), out.segment(o, d)); });
    return out;
  }
  double step(const VectorXd& v) const {
    double a = kMaxStep;
    each([&](const Cone& c, int o, int d) { a = std::min(a, c.step_length(v.segment(o, d))); });
    return a;
  }

  std::vector<std::unique_ptr<Cone>> cones;
  int degree = 0;

 private:
  const StandardForm& sf_;
};

double inf_norm(const VectorXd& v) { return v.size() ? v.lpNorm<Eigen::Infinity>() : 0.0; }

struct Metrics {
  double pres, dres, gap_abs, gap_rel, pcost, dcost;
};

}  // namespace

Solution solve_ipm(const ConicProgram& program, const SolverOptions& opts) {
  const auto t_start = std::chrono::steady_clock::now();
  Solution sol;
  auto finish = [&](SolveStatus st, std::string msg) {
    sol.status = st;
    sol.message = std::move(msg);
    sol.solve_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return sol;
  };

  const StandardForm original = to_standard(program);
  StandardForm sf = original;
  sol.x = VectorXd::Zero(sf.n);
  if (!drop_dependent_rows(sf)) {
    sol.objective_value = std::numeric_limits<double>::infinity();
    return finish(SolveStatus::Infeasible, "inconsistent linear equalities");
  }
  const StandardForm unscaled = sf;  // after presolve, before scaling
  const Scaling sc = equilibrate(sf, opts.equilibrate);

  const int n = sf.n, p = sf.p(), m = sf.m();
  if (m == 0 && p == 0) {
    if (inf_norm(original.c) == 0.0) {
      sol.objective_value = original.c0;
      return finish(SolveStatus::Optimal, "trivial program");
    }
    sol.objective_value = -std::numeric_limits<double>::infinity();
    return finish(SolveStatus::Unbounded, "free objective with no constraints");
  }

  ProductCone K(sf);
  const VectorXd e = K.identity();
  for (auto& c : K.cones) {
    VectorXd one(c->dim());
    c->identity(one);
    c->update_scaling(one, one);
  }
  Kkt kkt(sf, K.cones, opts.static_reg, opts.refine_steps);
  if (!kkt.factor()) return finish(SolveStatus::Failed, "initial KKT factorization failed");

  // Initial point from two least-squares solves with W = I.
  Iterate it;
  {
    VectorXd rhs = VectorXd::Zero(n + p + m);
    rhs.segment(n, p) = sf.b;
    rhs.tail(m) = sf.h;
    VectorXd d = kkt.solve(rhs);
    it.x = d.head(n);
    VectorXd shat = -d.tail(m);
    rhs.setZero();
    rhs.head(n) = -sf.c;
    d = kkt.solve(rhs);
    it.y = d.segment(n, p);
    VectorXd zhat = d.tail(m);
    const double ap = m ? K.boundary_shift(shat) : -1.0;
    const double ad = m ? K.boundary_shift(zhat) : -1.0;
    it.s = ap < 0 ? shat : VectorXd(shat + (1.0 + ap) * e);
    it.z = ad < 0 ? zhat : VectorXd(zhat + (1.0 + ad) * e);
    it.tau = 1.0;
    it.kappa = 1.0;
  }

  const double bnorm = inf_norm(unscaled.b), hnorm = inf_norm(unscaled.h), cnorm = inf_norm(unscaled.c);

  auto unscale = [&](const Iterate& s_it, VectorXd& x, VectorXd& y, VectorXd& z, VectorXd& s, double div) {
    x = sc.D.cwiseProduct(s_it.x) / div;
    y = sc.Ea.cwiseProduct(s_it.y) / (sc.cscale * div);
    z = sc.Eg.cwiseProduct(s_it.z) / (sc.cscale * div);
    s = s_it.s.cwiseQuotient(sc.Eg) / div;
  };

  auto metrics = [&](const Iterate& s_it) {
    VectorXd x, y, z, s;
    unscale(s_it, x, y, z, s, s_it.tau);
    Metrics mt;
    const double rp = std::max(inf_norm(unscaled.A * x - unscaled.b), inf_norm(unscaled.G * x + s - unscaled.h));
    mt.pres = rp / std::max(1.0, std::max(bnorm, hnorm) + inf_norm(x) + inf_norm(s));
    const VectorXd rd = unscaled.A.transpose() * y + unscaled.G.transpose() * z + unscaled.c;
    mt.dres = inf_norm(rd) / std::max(1.0, cnorm + inf_norm(y) + inf_norm(z));
    mt.pcost = unscaled.c.dot(x) + unscaled.c0;
    mt.dcost = -unscaled.b.dot(y) - unscaled.h.dot(z) + unscaled.c0;
    mt.gap_abs = std::abs(mt.pcost - mt.dcost);
    mt.gap_rel = mt.gap_abs / std::max(1e-12, std::min(std::abs(mt.pcost), std::abs(mt.dcost)));
    return mt;
  };

  auto record = [&](const Iterate& s_it, const Metrics& mt) {
    VectorXd x, y, z, s;
    unscale(s_it, x, y, z, s, s_it.tau);
    sol.x = x;
    sol.objective_value = mt.pcost;
    sol.primal_residual = mt.pres;
    sol.dual_residual = mt.dres;
    sol.gap = std::min(mt.gap_abs, mt.gap_rel);
  };

  // Infeasibility certificates checked on unscaled directions.
  auto primal_infeasible = [&](const Iterate& s_it) {
    VectorXd x, y, z, s;
    unscale(s_it, x, y, z, s, 1.0);
    const double by = unscaled.b.dot(y) + unscaled.h.dot(z);
    if (by >= 0.0) return false;
    const double res = inf_norm(unscaled.A.transpose() * y + unscaled.G.transpose() * z);
    return res <= opts.tol_infeas * (-by);
  };
  auto dual_infeasible = [&](const Iterate& s_it) {
    VectorXd x, y, z, s;
    unscale(s_it, x, y, z, s, 1.0);
    const double cx = unscaled.c.dot(x);
    if (cx >= 0.0) return false;
    const double res = std::max(inf_norm(unscaled.A * x), inf_norm(unscaled.G * x + s));
    return res <= opts.tol_infeas * (-cx);
  };

  Iterate best = it;
  Metrics best_mt = metrics(it);
  auto score = [](const Metrics& mt) { return std::max({mt.pres, mt.dres, std::min(mt.gap_abs, mt.gap_rel)}); };

  const double nu = static_cast<double>(K.degree);
  int recoveries = 0;
  for (int iter = 0; iter <= opts.max_iter; ++iter) {
    sol.iterations = iter;
    const Metrics mt = metrics(it);
    if (score(mt) < score(best_mt)) {
      best = it;
      best_mt = mt;
    }
    if (opts.verbose) {
      std::fprintf(stderr, "%3d  pcost %+.8e  dcost %+.8e  pres %.2e  dres %.2e  gap %.2e  tau %.2e  kap %.2e\n",
                   iter, mt.pcost, mt.dcost, mt.pres, mt.dres, mt.gap_abs, it.tau, it.kappa);
    }
    if (mt.pres <= opts.tol_feas && mt.dres <= opts.tol_feas &&
        (mt.gap_abs <= opts.tol_gap || mt.gap_rel <= opts.tol_gap)) {
      record(it, mt);
      return finish(SolveStatus::Optimal, "converged");
    }
    if (primal_infeasible(it)) {
      sol.objective_value = std::numeric_limits<double>::infinity();
      return finish(SolveStatus::Infeasible, "primal infeasibility certificate");
    }
    if (dual_infeasible(it)) {
      sol.objective_value = -std::numeric_limits<double>::infinity();
      return finish(SolveStatus::Unbounded, "dual infeasibility certificate");
    }
    if (iter == opts.max_iter) break;

    if (!K.update(it.s, it.z)) {
      if (opts.verbose) std::fprintf(stderr, "scaling update failed\n");
      break;
    }
    if (!kkt.factor()) {
      if (opts.verbose) std::fprintf(stderr, "KKT factorization failed\n");
      break;
    }

    const VectorXd rx = sf.A.transpose() * it.y + sf.G.transpose() * it.z + sf.c * it.tau;
    const VectorXd ry = sf.b * it.tau - sf.A * it.x;
    const VectorXd rz = sf.h * it.tau - sf.G * it.x - it.s;
    const double rtau = -sf.c.dot(it.x) - sf.b.dot(it.y) - sf.h.dot(it.z) - it.kappa;
    const double mu = (it.s.dot(it.z) + it.tau * it.kappa) / (nu + 1.0);
    const VectorXd lam = K.lambda();

    VectorXd rhs1(n + p + m);
    rhs1 << -sf.c, sf.b, sf.h;
    const VectorXd d1 = kkt.solve(rhs1);
    const double cx1 = sf.c.dot(d1.head(n)) + sf.b.dot(d1.segment(n, p)) + sf.h.dot(d1.tail(m));

    struct Dir {
      VectorXd x, y, z, s;
      double tau, kappa;
    };
    auto direction = [&](double eta, const VectorXd& ds_target, double dk) {
      const VectorXd ldiv = K.lambda_div(ds_target);
      const VectorXd wt_ldiv = K.wt(ldiv);
      VectorXd rhs2(n + p + m);
      rhs2 << -eta * rx, eta * ry, eta * rz - wt_ldiv;
      const VectorXd d2 = kkt.solve(rhs2);
      const double cx2 = sf.c.dot(d2.head(n)) + sf.b.dot(d2.segment(n, p)) + sf.h.dot(d2.tail(m));
      Dir d;
      d.tau = (-eta * rtau + cx2 + dk / it.tau) / (it.kappa / it.tau - cx1);
      d.x = d2.head(n) + d.tau * d1.head(n);
      d.y = d2.segment(n, p) + d.tau * d1.segment(n, p);
      d.z = d2.tail(m) + d.tau * d1.tail(m);
      // Scaled directions: W^{-T} ds = lambda \ d_s - W dz.
      const VectorXd wdz = K.w(d.z);
      d.s = K.wt(ldiv - wdz);
      d.kappa = (dk - it.kappa * d.tau) / it.tau;
      return std::make_pair(d, std::make_pair(VectorXd(ldiv - wdz), wdz));
    };
    auto max_step = [&](const Dir& d, const VectorXd& ws, const VectorXd& wz) {
      double a = std::min(K.step(ws), K.step(wz));
      if (d.tau < 0) a = std::min(a, -it.tau / d.tau);
      if (d.kappa < 0) a = std::min(a, -it.kappa / d.kappa);
      return a;
    };

    // Predictor.
    const VectorXd ds_aff_target = -K.jordan(lam, lam);
    auto [aff, aff_scaled] = direction(1.0, ds_aff_target, -it.tau * it.kappa);
    const double a_aff = std::min(1.0, max_step(aff, aff_scaled.first, aff_scaled.second));
    const double sigma = std::pow(1.0 - a_aff, 3);

    // Corrector.
    const VectorXd ds_target =
        -K.jordan(lam, lam) - K.jordan(aff_scaled.first, aff_scaled.second) + sigma * mu * e;
    const double dk = -it.tau * it.kappa - aff.tau * aff.kappa + sigma * mu;
    auto [dir, dir_scaled] = direction(1.0 - sigma, ds_target, dk);
    double amax = max_step(dir, dir_scaled.first, dir_scaled.second);
    double alpha = std::min(1.0, 0.99 * amax);
    if (!(alpha > 1e-8) || !dir.x.allFinite()) {
      // Poorly centred iterate: the corrected direction hits the boundary at
      // once. Fall back to a pure centring step (sigma = 1).
      if (opts.verbose) std::fprintf(stderr, "step failed (alpha %.3e), centring\n", alpha);
      if (++recoveries > 20) break;
      std::tie(dir, dir_scaled) = direction(0.0, VectorXd(-K.jordan(lam, lam) + mu * e), -it.tau * it.kappa + mu);
      amax = max_step(dir, dir_scaled.first, dir_scaled.second);
      alpha = std::min(1.0, 0.99 * amax);
      if (!(alpha > 1e-12) || !dir.x.allFinite()) {
        if (opts.verbose) std::fprintf(stderr, "centring failed (alpha %.3e)\n", alpha);
        break;
      }
    }

    // Without a Slater point the full step can land numerically on the
    // boundary; shorten it until the next scaling is computable.
    // Steps are also kept inside a wide neighbourhood of the central path,
    // min eig(lambda)^2 >= beta mu; losing centrality is what makes later
    // corrector steps collapse on degenerate relaxations.
    auto take = [&](double a) {
      Iterate nx = it;
      nx.x += a * dir.x;
      nx.y += a * dir.y;
      nx.z += a * dir.z;
      nx.s += a * dir.s;
      nx.tau += a * dir.tau;
      nx.kappa += a * dir.kappa;
      return nx;
    };
    constexpr double beta = 1e-4;
    Iterate next;
    bool accepted = false;
    for (int shrink = 0; shrink < 20 && !accepted; ++shrink) {
      next = take(alpha * std::pow(0.7, shrink));
      if (!(next.tau > 0.0 && next.kappa > 0.0 && K.update(next.s, next.z))) continue;
      const double mu_next = (next.s.dot(next.z) + next.tau * next.kappa) / (nu + 1.0);
      const double lmin = -K.boundary_shift(K.lambda());
      accepted = lmin * lmin >= beta * mu_next && next.tau * next.kappa >= beta * mu_next;
    }
    for (int shrink = 0; shrink < 10 && !accepted; ++shrink, alpha *= 0.5) {
      next = take(alpha);
      accepted = next.tau > 0.0 && next.kappa > 0.0 && K.update(next.s, next.z);
    }
    if (!accepted) {
      if (opts.verbose) std::fprintf(stderr, "no interior step found\n");
      break;
    }
    it = std::move(next);
  }

  record(best, best_mt);
  if (best_mt.pres <= opts.tol_inaccurate && best_mt.dres <= opts.tol_inaccurate &&
      (best_mt.gap_abs <= opts.tol_inaccurate || best_mt.gap_rel <= opts.tol_inaccurate)) {
    return finish(SolveStatus::Inaccurate, "stopped before reaching full accuracy");
  }
  return finish(SolveStatus::Failed, "numerical breakdown or iteration limit");
}

}  // namespace momentplan
