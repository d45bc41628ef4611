#include "momentplan/moment/quotient_moments.hpp"

#include <algorithm>
#include <stdexcept>

namespace momentplan {

QuotientMoments::QuotientMoments(int num_vars, int order, std::vector<SquareRule> rules)
    : num_vars_(num_vars), order_(order), rules_(std::move(rules)) {
  if (order < 0) throw std::invalid_argument("moment order must be >= 0");
  rule_of_var_.assign(static_cast<std::size_t>(num_vars), -1);
  for (std::size_t k = 0; k < rules_.size(); ++k) {
    const auto& rule = rules_[k];
    if (rule.var < 0 || rule.var >= num_vars) throw std::invalid_argument("square rule variable out of range");
    if (rule_of_var_[static_cast<std::size_t>(rule.var)] >= 0) throw std::invalid_argument("duplicate square rule");
    for (const auto& [alpha, c] : rule.replacement) {
      if (static_cast<int>(alpha.size()) != num_vars) throw std::invalid_argument("square rule arity mismatch");
      if (alpha[static_cast<std::size_t>(rule.var)] != 0) throw std::invalid_argument("square rule is not a rewrite");
      if (total_degree(alpha) > 2) throw std::invalid_argument("square rule replacement has degree > 2");
    }
    rule_of_var_[static_cast<std::size_t>(rule.var)] = static_cast<int>(k);
  }

  prefix_.assign(static_cast<std::size_t>(order + 1), 0);
  for (auto& alpha : enumerate_monomials(num_vars, order)) {
    bool ok = true;
    for (int v = 0; v < num_vars && ok; ++v) {
      ok = rule_of_var_[static_cast<std::size_t>(v)] < 0 || alpha[static_cast<std::size_t>(v)] <= 1;
    }
    if (!ok) continue;
    ++prefix_[static_cast<std::size_t>(total_degree(alpha))];
    lookup_.emplace(alpha, static_cast<int>(standard_.size()));
    standard_.push_back(std::move(alpha));
  }
  for (int d = 1; d <= order; ++d) prefix_[static_cast<std::size_t>(d)] += prefix_[static_cast<std::size_t>(d - 1)];
}

int QuotientMoments::prefix_size(int d) const {
  if (d < 0) return 0;
  if (d >= order_) return size();
  return prefix_[static_cast<std::size_t>(d)];
}

int QuotientMoments::find(const Exponent& alpha) const {
  auto it = lookup_.find(alpha);
  return it == lookup_.end() ? -1 : it->second;
}

const MomentForm& QuotientMoments::reduce(const Exponent& alpha) {
  if (auto it = cache_.find(alpha); it != cache_.end()) return it->second;
  if (static_cast<int>(alpha.size()) != num_vars_) throw std::invalid_argument("exponent arity mismatch");
  if (total_degree(alpha) > order_) throw std::invalid_argument("monomial degree exceeds moment order");

  MomentForm f;
  if (const int idx = find(alpha); idx >= 0) {
    f.terms.emplace_back(idx, 1.0);
  } else {
    // Peel one square of the first ruled variable with exponent >= 2.
    int var = -1;
    for (int v = 0; v < num_vars_; ++v) {
      if (rule_of_var_[static_cast<std::size_t>(v)] >= 0 && alpha[static_cast<std::size_t>(v)] >= 2) {
        var = v;
        break;
      }
    }
    Exponent rest = alpha;
    rest[static_cast<std::size_t>(var)] -= 2;
    const auto& rule = rules_[static_cast<std::size_t>(rule_of_var_[static_cast<std::size_t>(var)])];
    for (const auto& [beta, c] : rule.replacement) {
      // Copy: recursion may rehash the cache.
      const MomentForm sub = reduce(add_exponents(rest, beta));
      for (const auto& [i, ci] : sub.terms) f.terms.emplace_back(i, c * ci);
    }
    f.compress();
  }
  return cache_.emplace(alpha, std::move(f)).first->second;
}

MomentForm QuotientMoments::riesz(const TermList& q) {
  MomentForm f;
  for (const auto& [alpha, c] : q) {
    for (const auto& [i, ci] : reduce(alpha).terms) f.terms.emplace_back(i, c * ci);
  }
  f.compress();
  return f;
}

FormMatrix QuotientMoments::localizing(const TermList& q, int half) {
  if (half < 0 || 2 * half + term_degree(q) > order_) {
    throw std::invalid_argument("localizing matrix would exceed moment order");
  }
  const int m = prefix_size(half);
  FormMatrix out(m);
  for (int i = 0; i < m; ++i) {
    for (int j = i; j < m; ++j) {
      const Exponent ab = add_exponents(standard_[static_cast<std::size_t>(i)], standard_[static_cast<std::size_t>(j)]);
      MomentForm& f = out.at(i, j);
      for (const auto& [alpha, c] : q) {
        for (const auto& [k, ck] : reduce(add_exponents(ab, alpha)).terms) f.terms.emplace_back(k, c * ck);
      }
      f.compress();
    }
  }
  return out;
}

FormPolyMatrix QuotientMoments::localizing_time(const Polynomial& g_sub, int time_var, int half) {
  if (g_sub.num_vars() != num_vars_ + 1) throw std::invalid_argument("g_sub needs the moment variables plus time");
  const auto parts = g_sub.split_by_variable(time_var);
  if (half < 0) {
    int deg_y = 0;
    for (const auto& p : parts) deg_y = std::max(deg_y, p.degree());
    half = localizing_half_order(order_, deg_y);
    if (half < 0) throw std::invalid_argument("constraint degree exceeds moment order");
  }
  FormPolyMatrix out;
  out.reserve(parts.size());
  for (const auto& p : parts) out.push_back(localizing(term_list(p, time_var), half));
  return out;
}

}  // namespace momentplan
