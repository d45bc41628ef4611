#include "momentplan/hierarchy/moment_block.hpp"

#include <stdexcept>

namespace momentplan {

namespace {

int find_time(const VariableSpace& sp) {
  const auto t = sp.find(VarKind::Time);
  return t ? *t : -1;
}

}  // namespace

MomentBlock::MomentBlock(SpacePtr orig, SpacePtr reduced, std::vector<Polynomial> images, int order,
                         const std::vector<std::pair<int, Polynomial>>& rules)
    : orig_(std::move(orig)), reduced_(std::move(reduced)), images_(std::move(images)) {
  if (static_cast<int>(images_.size()) != orig_->size()) throw std::invalid_argument("one image per orig variable");
  for (const auto& img : images_) {
    if (!same_space(img.space(), reduced_)) throw std::invalid_argument("image lives outside the reduced space");
  }
  time_var_ = find_time(*reduced_);
  const int nvars = reduced_->size() - (time_var_ >= 0 ? 1 : 0);
  std::vector<SquareRule> sq;
  for (const auto& [var, repl] : rules) {
    if (var == time_var_) throw std::invalid_argument("time cannot carry a square rule");
    SquareRule r;
    r.var = var - (time_var_ >= 0 && var > time_var_ ? 1 : 0);
    r.replacement = terms(repl);
    sq.push_back(std::move(r));
  }
  moments_ = std::make_unique<QuotientMoments>(nvars, order, std::move(sq));
  coord_.resize(static_cast<std::size_t>(moments_->size()));
  pinned_.assign(coord_.size(), false);
  coord_[0] = AffineExpr(1.0);
  pinned_[0] = true;
}

MomentBlock MomentBlock::plain(SpacePtr space, int order) {
  std::vector<Polynomial> id;
  for (int k = 0; k < space->size(); ++k) id.push_back(Polynomial::variable(space, k));
  return MomentBlock(space, space, std::move(id), order);
}

void MomentBlock::pin(const Exponent& alpha, AffineExpr value) {
  if (allocated_) throw std::logic_error("pin after allocate");
  const int idx = moments_->find(alpha);
  if (idx < 0) throw std::invalid_argument("pinned monomial is not a moment coordinate");
  coord_[static_cast<std::size_t>(idx)] = std::move(value);
  pinned_[static_cast<std::size_t>(idx)] = true;
}

void MomentBlock::allocate(ConicProgram& program) {
  if (allocated_) return;
  int free = 0;
  for (bool p : pinned_) free += p ? 0 : 1;
  int next = program.add_variables(free);
  for (std::size_t k = 0; k < coord_.size(); ++k) {
    if (!pinned_[k]) coord_[k] = AffineExpr::var(next++);
  }
  allocated_ = true;
}

Polynomial MomentBlock::reduce(const Polynomial& q_orig) const {
  if (!same_space(q_orig.space(), orig_)) throw std::invalid_argument("polynomial is not in the block's space");
  return q_orig.substitute(reduced_, images_);
}

TermList MomentBlock::terms(const Polynomial& q_reduced) const {
  if (!same_space(q_reduced.space(), reduced_)) throw std::invalid_argument("polynomial is not in the reduced space");
  return term_list(q_reduced, time_var_);
}

AffineExpr MomentBlock::expr(const MomentForm& f) const {
  if (!allocated_) throw std::logic_error("moment block used before allocate");
  AffineExpr e;
  for (const auto& [i, c] : f.terms) e += coord_[static_cast<std::size_t>(i)] * c;
  e.compress();
  return e;
}

AffineExpr MomentBlock::riesz_reduced(const Polynomial& q_reduced) { return expr(moments_->riesz(terms(q_reduced))); }

AffineExpr MomentBlock::riesz(const Polynomial& q_orig) { return riesz_reduced(reduce(q_orig)); }

AffineMatrix to_affine(const MomentBlock& block, const FormMatrix& f) {
  AffineMatrix out(f.size());
  for (int i = 0; i < f.size(); ++i) {
    for (int j = i; j < f.size(); ++j) out.at(i, j) = block.expr(f.at(i, j));
  }
  return out;
}

AffineMatrix MomentBlock::moment_matrix() {
  TermList one = {{Exponent(static_cast<std::size_t>(moments_->num_vars()), 0), 1.0}};
  return to_affine(*this, moments_->localizing(one, order() / 2));
}

AffineMatrix MomentBlock::localizing(const Polynomial& q_orig, int half) {
  return to_affine(*this, moments_->localizing(terms(reduce(q_orig)), half));
}

AffinePolyMatrix MomentBlock::localizing_time(const Polynomial& g_sub_orig, int half) {
  if (time_var_ < 0) throw std::logic_error("block has no time variable");
  const FormPolyMatrix forms = moments_->localizing_time(reduce(g_sub_orig), time_var_, half);
  AffinePolyMatrix out;
  out.reserve(forms.size());
  for (const auto& f : forms) out.push_back(to_affine(*this, f));
  return out;
}

Eigen::VectorXd MomentBlock::values(const Eigen::VectorXd& x) const {
  Eigen::VectorXd v(static_cast<Eigen::Index>(coord_.size()));
  for (std::size_t k = 0; k < coord_.size(); ++k) v[static_cast<Eigen::Index>(k)] = coord_[k].eval(x);
  return v;
}

double MomentBlock::riesz_value(const Polynomial& q_orig, const Eigen::VectorXd& x) { return riesz(q_orig).eval(x); }

}  // namespace momentplan
