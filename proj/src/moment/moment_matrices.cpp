#include "momentplan/moment/moment_matrices.hpp"

#include <algorithm>
#include <stdexcept>

namespace momentplan {

double MomentForm::eval(const Eigen::VectorXd& phi) const {
  double s = 0.0;
  for (const auto& [i, c] : terms) s += c * phi[i];
  return s;
}

TermList term_list(const Polynomial& q, int drop_var) {
  TermList out;
  out.reserve(q.num_terms());
  for (const auto& [alpha, c] : q.terms()) {
    if (drop_var < 0) {
      out.emplace_back(alpha, c);
      continue;
    }
    if (alpha[static_cast<std::size_t>(drop_var)] != 0) {
      throw std::invalid_argument("dropped variable appears in polynomial");
    }
    Exponent beta;
    beta.reserve(alpha.size() - 1);
    for (std::size_t k = 0; k < alpha.size(); ++k) {
      if (static_cast<int>(k) != drop_var) beta.push_back(alpha[k]);
    }
    out.emplace_back(std::move(beta), c);
  }
  return out;
}

int term_degree(const TermList& q) {
  int d = 0;
  for (const auto& [alpha, c] : q) d = std::max(d, total_degree(alpha));
  return d;
}

std::size_t FormMatrix::slot(int m, int i, int j) {
  if (i > j) std::swap(i, j);
  // Row-major upper triangle.
  return static_cast<std::size_t>(i * m - i * (i - 1) / 2 + (j - i));
}

MomentForm& FormMatrix::at(int i, int j) { return upper_[slot(m_, i, j)]; }
const MomentForm& FormMatrix::at(int i, int j) const { return upper_[slot(m_, i, j)]; }

Eigen::MatrixXd FormMatrix::eval(const Eigen::VectorXd& phi) const {
  Eigen::MatrixXd out(m_, m_);
  for (int i = 0; i < m_; ++i) {
    for (int j = i; j < m_; ++j) {
      out(i, j) = out(j, i) = at(i, j).eval(phi);
    }
  }
  return out;
}

namespace {

// Merges duplicate indices so a form never repeats a moment.
void compress(MomentForm& f) {
  std::sort(f.terms.begin(), f.terms.end());
  std::size_t w = 0;
  for (std::size_t r = 0; r < f.terms.size(); ++r) {
    if (w > 0 && f.terms[w - 1].first == f.terms[r].first) {
      f.terms[w - 1].second += f.terms[r].second;
    } else {
      f.terms[w++] = f.terms[r];
    }
  }
  f.terms.resize(w);
  std::erase_if(f.terms, [](const auto& t) { return t.second == 0.0; });
}

}  // namespace

MomentForm& MomentForm::compress() {
  momentplan::compress(*this);
  return *this;
}

MomentForm riesz_form(const MonomialBasis& basis, const TermList& q) {
  MomentForm f;
  for (const auto& [alpha, c] : q) {
    if (static_cast<int>(alpha.size()) != basis.num_vars()) {
      throw std::invalid_argument("polynomial arity does not match moment basis");
    }
    const int idx = basis.find(alpha);
    if (idx < 0) throw std::invalid_argument("polynomial degree exceeds moment order");
    f.terms.emplace_back(idx, c);
  }
  compress(f);
  return f;
}

int localizing_half_order(int r, int deg_q) {
  if (deg_q > r) return -1;
  return (r - deg_q) / 2;
}

FormMatrix localizing_forms(const MonomialBasis& basis, const TermList& q, int half) {
  if (half < 0 || 2 * half + term_degree(q) > basis.degree()) {
    throw std::invalid_argument("localizing matrix would exceed moment order");
  }
  const int m = basis.prefix_size(half);
  FormMatrix out(m);
  Exponent gamma(static_cast<std::size_t>(basis.num_vars()));
  for (int i = 0; i < m; ++i) {
    for (int j = i; j < m; ++j) {
      MomentForm& f = out.at(i, j);
      for (const auto& [alpha, c] : q) {
        for (std::size_t k = 0; k < gamma.size(); ++k) gamma[k] = basis[i][k] + basis[j][k] + alpha[k];
        f.terms.emplace_back(basis.index(gamma), c);
      }
      compress(f);
    }
  }
  return out;
}

FormPolyMatrix localizing_time_forms(const MonomialBasis& basis, const Polynomial& g_sub, int time_var) {
  const auto parts = g_sub.split_by_variable(time_var);
  int deg_y = 0;
  for (const auto& p : parts) deg_y = std::max(deg_y, p.degree());
  const int half = localizing_half_order(basis.degree(), deg_y);
  if (half < 0) throw std::invalid_argument("constraint degree exceeds moment order");
  FormPolyMatrix out;
  out.reserve(parts.size());
  for (const auto& p : parts) out.push_back(localizing_forms(basis, term_list(p, time_var), half));
  return out;
}

}  // namespace momentplan
