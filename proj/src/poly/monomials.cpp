#include "momentplan/poly/monomials.hpp"

#include <numeric>
#include <stdexcept>

namespace momentplan {

int total_degree(const Exponent& alpha) { return std::accumulate(alpha.begin(), alpha.end(), 0); }

Exponent add_exponents(const Exponent& a, const Exponent& b) {
  if (a.size() != b.size()) throw std::invalid_argument("exponent arity mismatch");
  Exponent out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

bool GradedLexLess::operator()(const Exponent& a, const Exponent& b) const {
  const int da = total_degree(a);
  const int db = total_degree(b);
  if (da != db) return da < db;
  // Larger leading exponent comes first within a degree.
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
    if (a[i] != b[i]) return a[i] > b[i];
  }
  return a.size() < b.size();
}

std::size_t ExponentHash::operator()(const Exponent& alpha) const noexcept {
  std::size_t h = 1469598103934665603ull;
  for (int e : alpha) {
    h ^= static_cast<std::size_t>(e) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  }
  return h;
}

namespace {

// Emits all exponents of exact degree `remaining` over variables [var, n) in
// graded-lex order (leading variable gets the largest power first).
void emit_degree(int var, int remaining, Exponent& current, std::vector<Exponent>& out) {
  const int n = static_cast<int>(current.size());
  if (var == n - 1) {
    current[static_cast<std::size_t>(var)] = remaining;
    out.push_back(current);
    current[static_cast<std::size_t>(var)] = 0;
    return;
  }
  for (int e = remaining; e >= 0; --e) {
    current[static_cast<std::size_t>(var)] = e;
    emit_degree(var + 1, remaining - e, current, out);
  }
  current[static_cast<std::size_t>(var)] = 0;
}

}  // namespace

std::vector<Exponent> enumerate_monomials(int num_vars, int degree) {
  if (degree < 0) throw std::invalid_argument("degree bound must be >= 0");
  if (num_vars < 0) throw std::invalid_argument("number of variables must be >= 0");
  std::vector<Exponent> out;
  out.reserve(binomial(num_vars + degree, degree));
  if (num_vars == 0) {
    out.emplace_back();
    return out;
  }
  Exponent current(static_cast<std::size_t>(num_vars), 0);
  for (int d = 0; d <= degree; ++d) emit_degree(0, d, current, out);
  return out;
}

std::size_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::size_t r = 1;
  for (int i = 1; i <= k; ++i) {
    r = r * static_cast<std::size_t>(n - k + i) / static_cast<std::size_t>(i);
  }
  return r;
}

MonomialBasis::MonomialBasis(int num_vars, int degree)
    : num_vars_(num_vars), degree_(degree), exponents_(enumerate_monomials(num_vars, degree)) {
  lookup_.reserve(exponents_.size());
  for (std::size_t i = 0; i < exponents_.size(); ++i) {
    lookup_.emplace(exponents_[i], static_cast<int>(i));
  }
}

int MonomialBasis::find(const Exponent& alpha) const {
  auto it = lookup_.find(alpha);
  return it == lookup_.end() ? -1 : it->second;
}

int MonomialBasis::index(const Exponent& alpha) const {
  const int i = find(alpha);
  if (i < 0) throw std::out_of_range("monomial outside basis");
  return i;
}

int MonomialBasis::prefix_size(int d) const {
  if (d < 0) return 0;
  if (d >= degree_) return size();
  return static_cast<int>(binomial(num_vars_ + d, d));
}

}  // namespace momentplan
