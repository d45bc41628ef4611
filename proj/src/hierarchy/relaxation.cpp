#include "momentplan/hierarchy/relaxation.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace momentplan {

namespace {

Polynomial var(const SpacePtr& sp, VarKind kind, int piece, int coord = -1) {
  return Polynomial::variable(sp, sp->index(kind, piece, coord));
}

// Pieces touched by continuity relation i.
std::vector<int> relation_pieces(int s, int i) {
  if (i == 0) return {0};
  if (i == s) return {s - 1};
  return {i - 1, i};
}

struct Reduction {
  SpacePtr reduced;
  std::vector<Polynomial> images;
};

// Solves the continuity equalities exactly: the (u, v) coordinates become an
// affine function of free parameters w via reduced row echelon form.
Reduction eliminate(const ProblemData& d, int s, const SpacePtr& orig, const std::vector<int>& relations) {
  std::vector<int> cols;  // orig indices of u/v variables
  std::vector<int> col_of(static_cast<std::size_t>(orig->size()), -1);
  for (int k = 0; k < orig->size(); ++k) {
    const auto kind = (*orig)[k].kind;
    if (kind == VarKind::Position || kind == VarKind::Velocity) {
      col_of[static_cast<std::size_t>(k)] = static_cast<int>(cols.size());
      cols.push_back(k);
    }
  }
  std::vector<Polynomial> rows;
  for (int i : relations) {
    for (auto& h : continuity_relation(d, s, i, orig)) rows.push_back(std::move(h));
  }
  const int nc = static_cast<int>(cols.size());
  const int nr = static_cast<int>(rows.size());
  Eigen::MatrixXd E = Eigen::MatrixXd::Zero(nr, nc + 1);  // [A | rhs], A y = rhs
  for (int r = 0; r < nr; ++r) {
    for (const auto& [alpha, c] : rows[static_cast<std::size_t>(r)].terms()) {
      const int deg = total_degree(alpha);
      if (deg == 0) {
        E(r, nc) = -c;
        continue;
      }
      if (deg != 1) throw std::logic_error("continuity relation is not affine");
      const int k = static_cast<int>(std::find(alpha.begin(), alpha.end(), 1) - alpha.begin());
      E(r, col_of[static_cast<std::size_t>(k)]) = c;
    }
  }

  // Gauss-Jordan with partial pivoting.
  const double tol = 1e-10 * std::max(1.0, E.leftCols(nc).cwiseAbs().maxCoeff());
  std::vector<int> pivot_col;
  int row = 0;
  for (int c = 0; c < nc && row < nr; ++c) {
    Eigen::Index best;
    const double mx = E.col(c).segment(row, nr - row).cwiseAbs().maxCoeff(&best);
    if (mx <= tol) continue;
    E.row(row).swap(E.row(row + static_cast<int>(best)));
    E.row(row) /= E(row, c);
    for (int r = 0; r < nr; ++r) {
      if (r != row && E(r, c) != 0.0) E.row(r) -= E(r, c) * E.row(row);
    }
    E(row, c) = 1.0;
    pivot_col.push_back(c);
    ++row;
  }
  for (int r = row; r < nr; ++r) {
    if (std::abs(E(r, nc)) > 1e-9 * std::max(1.0, E.col(nc).cwiseAbs().maxCoeff())) {
      throw std::runtime_error("continuity equalities are inconsistent");
    }
  }
  E = E.unaryExpr([](double x) { return std::abs(x) < 1e-13 ? 0.0 : x; });

  std::vector<int> free_cols;
  std::vector<int> pivot_row(static_cast<std::size_t>(nc), -1);
  for (std::size_t k = 0; k < pivot_col.size(); ++k) pivot_row[static_cast<std::size_t>(pivot_col[k])] = static_cast<int>(k);
  for (int c = 0; c < nc; ++c) {
    if (pivot_row[static_cast<std::size_t>(c)] < 0) free_cols.push_back(c);
  }

  std::vector<VariableInfo> vars;
  vars.push_back({VarKind::Time, -1, -1, "t"});
  for (std::size_t f = 0; f < free_cols.size(); ++f) {
    vars.push_back({VarKind::Free, -1, static_cast<int>(f), "w" + std::to_string(f + 1)});
  }
  for (int k = 0; k < orig->size(); ++k) {
    if ((*orig)[k].kind == VarKind::Length) vars.push_back((*orig)[k]);
  }
  Reduction red;
  red.reduced = make_space(VariableSpace(std::move(vars)));
  const SpacePtr& R = red.reduced;
  for (int k = 0; k < orig->size(); ++k) {
    const auto& info = (*orig)[k];
    if (info.kind == VarKind::Time) {
      red.images.push_back(Polynomial::variable(R, 0));
    } else if (info.kind == VarKind::Length) {
      red.images.push_back(var(R, VarKind::Length, info.piece));
    } else {
      const int c = col_of[static_cast<std::size_t>(k)];
      const int pr = pivot_row[static_cast<std::size_t>(c)];
      if (pr < 0) {
        const int f = static_cast<int>(std::find(free_cols.begin(), free_cols.end(), c) - free_cols.begin());
        red.images.push_back(Polynomial::variable(R, 1 + f));
        continue;
      }
      Polynomial img = Polynomial::constant(R, E(pr, nc));
      for (std::size_t f = 0; f < free_cols.size(); ++f) {
        const double a = E(pr, free_cols[f]);
        if (a != 0.0) img -= Polynomial::variable(R, 1 + static_cast<int>(f), a);
      }
      red.images.push_back(std::move(img));
    }
  }
  return red;
}

// Exponents over the reduced non-time variables lifted into the reduced space.
Polynomial lift_monomial(const MomentBlock& block, const Exponent& alpha) {
  Exponent full;
  const int tv = block.time_var();
  for (int k = 0, j = 0; k < block.reduced_space()->size(); ++k) {
    full.push_back(k == tv ? 0 : alpha[static_cast<std::size_t>(j++)]);
  }
  return Polynomial::monomial(block.reduced_space(), full);
}

std::vector<Polynomial> all_constraints(const ProblemData& d, const RelaxationConfig& cfg) {
  std::vector<Polynomial> g = d.constraints;
  if (cfg.ball_radius) {
    const SpacePtr sp = d.space();
    Polynomial ball = Polynomial::constant(sp, *cfg.ball_radius * *cfg.ball_radius);
    for (int j = 0; j < d.n; ++j) {
      const Polynomial x = Polynomial::variable(sp, j + 1);
      ball -= x * x;
    }
    g.push_back(std::move(ball));
  }
  return g;
}

// Builds, allocates and constrains the block for one clique of pieces.
std::unique_ptr<MomentBlock> make_block(Relaxation& rel, const ProblemData& d, const RelaxationConfig& cfg,
                                        const std::vector<int>& pieces, const std::vector<int>& relations) {
  const SpacePtr orig = make_space(VariableSpace::pieces(d.n, pieces, true, true));
  Reduction red;
  if (cfg.eliminate_linear) {
    red = eliminate(d, cfg.s, orig, relations);
  } else {
    red.reduced = orig;
    for (int k = 0; k < orig->size(); ++k) red.images.push_back(Polynomial::variable(orig, k));
  }
  const SpacePtr R = red.reduced;
  // z_i^2 = (T/s)^2 |v_i|^2, imposed against every multiplier of degree <= r-2.
  std::vector<std::pair<int, Polynomial>> rules;
  if (cfg.r >= 2) {
    const double h = d.T / cfg.s;
    for (int i : pieces) {
      Polynomial repl(R);
      for (int j = 0; j < d.n; ++j) {
        const Polynomial& vij = red.images[static_cast<std::size_t>(orig->index(VarKind::Velocity, i, j))];
        repl += vij * vij;
      }
      rules.emplace_back(R->index(VarKind::Length, i), repl * (h * h));
    }
  }
  auto block = std::make_unique<MomentBlock>(orig, R, red.images, cfg.r, rules);
  block->allocate(rel.program);
  rel.program.add_psd(block->moment_matrix());

  if (!cfg.eliminate_linear) {
    const auto& std_monos = block->moments().standard();
    const int count = block->moments().prefix_size(cfg.r - 1);
    for (int i : relations) {
      for (const auto& h : continuity_relation(d, cfg.s, i, orig)) {
        for (int k = 0; k < count; ++k) {
          AffineExpr e = block->riesz_reduced(lift_monomial(*block, std_monos[static_cast<std::size_t>(k)]) * h);
          if (!e.terms.empty() || e.constant != 0.0) rel.program.add_equality(std::move(e));
        }
      }
    }
  }
  return block;
}

void add_piece_constraints(Relaxation& rel, MomentBlock& block, const ProblemData& d, const RelaxationConfig& cfg,
                           int piece, const std::vector<Polynomial>& constraints) {
  const SpacePtr& orig = block.orig_space();
  const int half_z = localizing_half_order(cfg.r, 1);
  if (half_z >= 0) rel.program.add_psd(block.localizing(var(orig, VarKind::Length, piece), half_z));

  std::vector<bool> non_time(static_cast<std::size_t>(orig->size()), true);
  non_time[static_cast<std::size_t>(orig->index(VarKind::Time))] = false;
  const double a = piece * d.T / cfg.s;
  const double b = (piece + 1) * d.T / cfg.s;
  for (const auto& g : constraints) {
    const Polynomial g_sub = substitute_affine_path(g, piece, orig);
    const int half = localizing_half_order(cfg.r, g_sub.degree_in(non_time));
    if (half < 0) throw std::invalid_argument("relaxation order is below a constraint's degree");
    rel.certificates.push_back(encode_interval_psd(rel.program, block.localizing_time(g_sub, half), a, b, cfg.gram_basis));
  }
}

void check_config(const ProblemData& d, const RelaxationConfig& cfg) {
  d.validate();
  if (cfg.s < 1) throw std::invalid_argument("number of pieces must be >= 1");
  if (cfg.r < 1) throw std::invalid_argument("relaxation order must be >= 1");
  if (cfg.ball_radius && !(*cfg.ball_radius > 0.0)) throw std::invalid_argument("ball radius must be positive");
}

// Length and obstacle constraints of a piece go into every block that holds
// the piece, so a clique containing all pieces reproduces the dense program.
void finish(Relaxation& rel, const ProblemData& d, const RelaxationConfig& cfg) {
  const auto constraints = all_constraints(d, cfg);
  for (auto& block : rel.blocks) {
    for (int i = 0; i < cfg.s; ++i) {
      if (block->orig_space()->find(VarKind::Length, i)) add_piece_constraints(rel, *block, d, cfg, i, constraints);
    }
  }
  AffineExpr obj;
  for (int i = 0; i < cfg.s; ++i) obj += rel.block_of(i).riesz(rel.z(i));
  obj.compress();
  rel.program.set_objective(std::move(obj));
}

}  // namespace

std::vector<Polynomial> continuity_relation(const ProblemData& d, int s, int i, const SpacePtr& space) {
  if (i < 0 || i > s) throw std::out_of_range("continuity relation index out of range");
  const double ti = i * d.T / s;
  std::vector<Polynomial> out;
  for (int j = 0; j < d.n; ++j) {
    Polynomial h(space);
    if (i == 0) {
      h = Polynomial::constant(space, d.x0[j]) - var(space, VarKind::Position, 0, j);
    } else {
      h = var(space, VarKind::Position, i - 1, j) + ti * var(space, VarKind::Velocity, i - 1, j);
      if (i == s) {
        h -= Polynomial::constant(space, d.xT[j]);
      } else {
        h -= var(space, VarKind::Position, i, j) + ti * var(space, VarKind::Velocity, i, j);
      }
    }
    out.push_back(std::move(h));
  }
  return out;
}

Polynomial Relaxation::u(int piece, int coord) const {
  const auto& sp = blocks[static_cast<std::size_t>(owner[static_cast<std::size_t>(piece)])]->orig_space();
  return var(sp, VarKind::Position, piece, coord);
}

Polynomial Relaxation::v(int piece, int coord) const {
  const auto& sp = blocks[static_cast<std::size_t>(owner[static_cast<std::size_t>(piece)])]->orig_space();
  return var(sp, VarKind::Velocity, piece, coord);
}

Polynomial Relaxation::z(int piece) const {
  const auto& sp = blocks[static_cast<std::size_t>(owner[static_cast<std::size_t>(piece)])]->orig_space();
  return var(sp, VarKind::Length, piece);
}

Relaxation build_dense(const ProblemData& d, const RelaxationConfig& cfg) {
  check_config(d, cfg);
  Relaxation rel;
  rel.n = d.n;
  rel.s = cfg.s;
  rel.r = cfg.r;
  rel.T = d.T;
  std::vector<int> pieces(static_cast<std::size_t>(cfg.s));
  std::vector<int> relations(static_cast<std::size_t>(cfg.s + 1));
  for (int i = 0; i < cfg.s; ++i) pieces[static_cast<std::size_t>(i)] = i;
  for (int i = 0; i <= cfg.s; ++i) relations[static_cast<std::size_t>(i)] = i;
  rel.blocks.push_back(make_block(rel, d, cfg, pieces, relations));
  rel.owner.assign(static_cast<std::size_t>(cfg.s), 0);
  finish(rel, d, cfg);
  return rel;
}

Relaxation build_sparse(const ProblemData& d, const RelaxationConfig& cfg) {
  check_config(d, cfg);
  Relaxation rel;
  rel.n = d.n;
  rel.s = cfg.s;
  rel.r = cfg.r;
  rel.T = d.T;
  const int s = cfg.s;
  for (int c = 0; c < s; ++c) {
    std::vector<int> pieces = {c};
    if (c + 1 < s) pieces.push_back(c + 1);
    // Every continuity relation whose pieces all lie in the clique.
    std::vector<int> relations;
    for (int i = 0; i <= s; ++i) {
      const auto rp = relation_pieces(s, i);
      if (std::all_of(rp.begin(), rp.end(), [&](int p) { return std::find(pieces.begin(), pieces.end(), p) != pieces.end(); })) {
        relations.push_back(i);
      }
    }
    rel.blocks.push_back(make_block(rel, d, cfg, pieces, relations));
    rel.owner.push_back(c);
  }

  // Neighbouring cliques share piece c+1: equate its moments. Monomials with
  // z^2 follow from the common square rule, so z-degree <= 1 suffices.
  const int nv = 2 * d.n + 1;
  for (int c = 0; c + 1 < s; ++c) {
    MomentBlock& left = *rel.blocks[static_cast<std::size_t>(c)];
    MomentBlock& right = *rel.blocks[static_cast<std::size_t>(c + 1)];
    const int p = c + 1;
    auto shared = [&](const SpacePtr& sp) {
      std::vector<Polynomial> vars;
      for (int j = 0; j < d.n; ++j) vars.push_back(var(sp, VarKind::Position, p, j));
      for (int j = 0; j < d.n; ++j) vars.push_back(var(sp, VarKind::Velocity, p, j));
      vars.push_back(var(sp, VarKind::Length, p));
      return vars;
    };
    const auto lv = shared(left.orig_space());
    const auto rv = shared(right.orig_space());
    for (const auto& alpha : enumerate_monomials(nv, cfg.r)) {
      if (cfg.r >= 2 && alpha.back() > 1) continue;
      if (total_degree(alpha) == 0) continue;
      Polynomial ml = Polynomial::constant(left.orig_space(), 1.0);
      Polynomial mr = Polynomial::constant(right.orig_space(), 1.0);
      for (int k = 0; k < nv; ++k) {
        if (alpha[static_cast<std::size_t>(k)] == 0) continue;
        ml *= lv[static_cast<std::size_t>(k)].pow(alpha[static_cast<std::size_t>(k)]);
        mr *= rv[static_cast<std::size_t>(k)].pow(alpha[static_cast<std::size_t>(k)]);
      }
      AffineExpr e = left.riesz(ml) - right.riesz(mr);
      e.compress();
      if (!e.terms.empty() || std::abs(e.constant) > 1e-12) rel.program.add_equality(std::move(e));
    }
  }
  finish(rel, d, cfg);
  return rel;
}

Relaxation build_relaxation(const ProblemData& d, const RelaxationConfig& cfg) {
  return cfg.sparse ? build_sparse(d, cfg) : build_dense(d, cfg);
}

}  // namespace momentplan
