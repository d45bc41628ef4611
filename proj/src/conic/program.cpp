#include "momentplan/conic/program.hpp"

#include <algorithm>
#include <stdexcept>

namespace momentplan {

AffineExpr AffineExpr::var(int index, double coef) {
  AffineExpr e;
  e.terms.emplace_back(index, coef);
  return e;
}

AffineExpr& AffineExpr::add(int index, double coef) {
  if (coef != 0.0) terms.emplace_back(index, coef);
  return *this;
}

AffineExpr& AffineExpr::operator+=(const AffineExpr& o) {
  terms.insert(terms.end(), o.terms.begin(), o.terms.end());
  constant += o.constant;
  return compress();
}

AffineExpr& AffineExpr::operator-=(const AffineExpr& o) {
  for (const auto& [i, c] : o.terms) terms.emplace_back(i, -c);
  constant -= o.constant;
  return compress();
}

AffineExpr& AffineExpr::operator*=(double s) {
  for (auto& t : terms) t.second *= s;
  constant *= s;
  return compress();
}

AffineExpr& AffineExpr::compress() {
  std::sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::size_t w = 0;
  for (std::size_t r = 0; r < terms.size(); ++r) {
    if (w > 0 && terms[w - 1].first == terms[r].first) {
      terms[w - 1].second += terms[r].second;
    } else {
      terms[w++] = terms[r];
    }
  }
  terms.resize(w);
  std::erase_if(terms, [](const auto& t) { return t.second == 0.0; });
  return *this;
}

double AffineExpr::eval(const Eigen::VectorXd& x) const {
  double v = constant;
  for (const auto& [i, c] : terms) v += c * x[i];
  return v;
}

namespace {
std::size_t upper_slot(int m, int i, int j) {
  if (i > j) std::swap(i, j);
  return static_cast<std::size_t>(i * m - i * (i - 1) / 2 + (j - i));
}
}  // namespace

AffineExpr& AffineMatrix::at(int i, int j) { return upper_[upper_slot(m_, i, j)]; }
const AffineExpr& AffineMatrix::at(int i, int j) const { return upper_[upper_slot(m_, i, j)]; }

Eigen::MatrixXd AffineMatrix::eval(const Eigen::VectorXd& x) const {
  Eigen::MatrixXd out(m_, m_);
  for (int i = 0; i < m_; ++i) {
    for (int j = i; j < m_; ++j) out(i, j) = out(j, i) = at(i, j).eval(x);
  }
  return out;
}

bool AffineMatrix::is_zero() const {
  return std::all_of(upper_.begin(), upper_.end(),
                     [](const AffineExpr& e) { return e.terms.empty() && e.constant == 0.0; });
}

int ConicProgram::add_variables(int k) {
  if (k < 0) throw std::invalid_argument("negative variable count");
  const int first = num_vars_;
  num_vars_ += k;
  return first;
}

void ConicProgram::check(const AffineExpr& e) const {
  for (const auto& [i, c] : e.terms) {
    if (i < 0 || i >= num_vars_) throw std::out_of_range("affine expression references unknown variable");
  }
}

void ConicProgram::set_objective(AffineExpr obj) {
  check(obj);
  objective_ = std::move(obj.compress());
}

void ConicProgram::add_equality(AffineExpr expr) {
  check(expr);
  equalities_.push_back(std::move(expr.compress()));
}

void ConicProgram::add_nonnegative(AffineExpr expr) {
  check(expr);
  cones_.push_back({ConeKind::Nonnegative, 1, {std::move(expr.compress())}});
}

void ConicProgram::add_second_order(std::vector<AffineExpr> rows) {
  if (rows.empty()) throw std::invalid_argument("second-order cone needs at least one row");
  for (auto& r : rows) {
    check(r);
    r.compress();
  }
  const int dim = static_cast<int>(rows.size());
  cones_.push_back({ConeKind::SecondOrder, dim, std::move(rows)});
}

void ConicProgram::add_psd(const AffineMatrix& mat) {
  if (mat.size() < 1) throw std::invalid_argument("empty PSD block");
  std::vector<AffineExpr> rows = mat.upper();
  for (auto& r : rows) {
    check(r);
    r.compress();
  }
  cones_.push_back({ConeKind::Psd, mat.size(), std::move(rows)});
}

int ConicProgram::cone_rows() const {
  int total = 0;
  for (const auto& c : cones_) total += static_cast<int>(c.rows.size());
  return total;
}

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::Unbounded: return "unbounded";
    case SolveStatus::Inaccurate: return "inaccurate";
    case SolveStatus::Failed: return "failed";
  }
  return "failed";
}

}  // namespace momentplan
