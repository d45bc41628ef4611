#include "momentplan/poly/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace momentplan {

Polynomial::Polynomial(SpacePtr space) : space_(std::move(space)) {
  if (!space_) throw std::invalid_argument("polynomial needs a variable space");
}

Polynomial Polynomial::constant(SpacePtr space, double c) {
  Polynomial p(std::move(space));
  p.add_term(Exponent(static_cast<std::size_t>(p.num_vars()), 0), c);
  return p;
}

Polynomial Polynomial::variable(SpacePtr space, int index, double scale) {
  Polynomial p(std::move(space));
  if (index < 0 || index >= p.num_vars()) throw std::out_of_range("variable index out of range");
  Exponent alpha(static_cast<std::size_t>(p.num_vars()), 0);
  alpha[static_cast<std::size_t>(index)] = 1;
  p.add_term(alpha, scale);
  return p;
}

Polynomial Polynomial::monomial(SpacePtr space, Exponent alpha, double c) {
  Polynomial p(std::move(space));
  if (static_cast<int>(alpha.size()) != p.num_vars()) {
    throw std::invalid_argument("exponent arity does not match variable space");
  }
  p.add_term(alpha, c);
  return p;
}

int Polynomial::num_vars() const { return space_ ? space_->size() : 0; }

int Polynomial::degree() const {
  // Graded order: the last term has maximal total degree.
  return terms_.empty() ? 0 : total_degree(terms_.rbegin()->first);
}

int Polynomial::degree_in(const std::vector<bool>& mask) const {
  int best = 0;
  for (const auto& [alpha, c] : terms_) {
    int d = 0;
    for (std::size_t i = 0; i < alpha.size(); ++i) {
      if (mask[i]) d += alpha[i];
    }
    best = std::max(best, d);
  }
  return best;
}

int Polynomial::degree_in(int var) const {
  int best = 0;
  for (const auto& [alpha, c] : terms_) best = std::max(best, alpha[static_cast<std::size_t>(var)]);
  return best;
}

double Polynomial::coefficient(const Exponent& alpha) const {
  auto it = terms_.find(alpha);
  return it == terms_.end() ? 0.0 : it->second;
}

double Polynomial::constant_term() const {
  return coefficient(Exponent(static_cast<std::size_t>(num_vars()), 0));
}

void Polynomial::add_term(const Exponent& alpha, double c) {
  if (static_cast<int>(alpha.size()) != num_vars()) {
    throw std::invalid_argument("exponent arity does not match variable space");
  }
  for (int e : alpha) {
    if (e < 0) throw std::invalid_argument("negative exponent");
  }
  if (c == 0.0) return;
  auto [it, inserted] = terms_.try_emplace(alpha, c);
  if (!inserted) it->second += c;
  if (std::abs(it->second) < kCoefficientCleanup) terms_.erase(it);
}

void Polynomial::require_same_space(const Polynomial& other) const {
  if (!same_space(space_, other.space_)) {
    throw std::invalid_argument("polynomials live in different variable spaces");
  }
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
  require_same_space(other);
  for (const auto& [alpha, c] : other.terms_) add_term(alpha, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other) {
  require_same_space(other);
  for (const auto& [alpha, c] : other.terms_) add_term(alpha, -c);
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  a.require_same_space(b);
  Polynomial out(a.space_);
  for (const auto& [alpha, ca] : a.terms_) {
    for (const auto& [beta, cb] : b.terms_) {
      Exponent gamma(alpha.size());
      for (std::size_t i = 0; i < alpha.size(); ++i) gamma[i] = alpha[i] + beta[i];
      auto [it, inserted] = out.terms_.try_emplace(std::move(gamma), ca * cb);
      if (!inserted) it->second += ca * cb;
    }
  }
  std::erase_if(out.terms_, [](const auto& kv) { return std::abs(kv.second) < kCoefficientCleanup; });
  return out;
}

Polynomial& Polynomial::operator*=(const Polynomial& other) {
  *this = *this * other;
  return *this;
}

Polynomial& Polynomial::operator*=(double c) {
  if (c == 0.0) {
    terms_.clear();
    return *this;
  }
  for (auto& [alpha, coef] : terms_) coef *= c;
  std::erase_if(terms_, [](const auto& kv) { return std::abs(kv.second) < kCoefficientCleanup; });
  return *this;
}

Polynomial Polynomial::pow(int e) const {
  if (e < 0) throw std::invalid_argument("negative power");
  Polynomial result = constant(space_, 1.0);
  Polynomial base = *this;
  while (e > 0) {
    if (e & 1) result = result * base;
    e >>= 1;
    if (e > 0) base = base * base;
  }
  return result;
}

double Polynomial::evaluate(std::span<const double> point) const {
  if (static_cast<int>(point.size()) != num_vars()) {
    throw std::invalid_argument("evaluation point has wrong dimension");
  }
  const int n = num_vars();
  const int d = degree();
  // powers[i][k] = point[i]^k
  std::vector<double> powers(static_cast<std::size_t>(n * (d + 1)), 1.0);
  for (int i = 0; i < n; ++i) {
    for (int k = 1; k <= d; ++k) {
      powers[static_cast<std::size_t>(i * (d + 1) + k)] =
          powers[static_cast<std::size_t>(i * (d + 1) + k - 1)] * point[static_cast<std::size_t>(i)];
    }
  }
  double sum = 0.0;
  for (const auto& [alpha, c] : terms_) {
    double term = c;
    for (int i = 0; i < n; ++i) {
      const int e = alpha[static_cast<std::size_t>(i)];
      if (e) term *= powers[static_cast<std::size_t>(i * (d + 1) + e)];
    }
    sum += term;
  }
  return sum;
}

Polynomial Polynomial::substitute(const SpacePtr& target, std::span<const Polynomial> images) const {
  if (static_cast<int>(images.size()) != num_vars()) {
    throw std::invalid_argument("substitution needs one image per variable");
  }
  for (const auto& img : images) {
    if (!same_space(img.space(), target)) {
      throw std::invalid_argument("substitution image lives in the wrong space");
    }
  }
  // Cache image powers lazily: cache[i][k] = images[i]^k.
  std::vector<std::vector<Polynomial>> cache(images.size());
  auto power = [&](std::size_t i, int k) -> const Polynomial& {
    auto& row = cache[i];
    if (row.empty()) row.push_back(constant(target, 1.0));
    while (static_cast<int>(row.size()) <= k) row.push_back(row.back() * images[i]);
    return row[static_cast<std::size_t>(k)];
  };
  Polynomial out(target);
  for (const auto& [alpha, c] : terms_) {
    Polynomial term = constant(target, c);
    for (std::size_t i = 0; i < alpha.size(); ++i) {
      if (alpha[i] > 0) term = term * power(i, alpha[i]);
    }
    out += term;
  }
  return out;
}

std::vector<Polynomial> Polynomial::split_by_variable(int var) const {
  if (var < 0 || var >= num_vars()) throw std::out_of_range("variable index out of range");
  const int d = degree_in(var);
  std::vector<Polynomial> parts(static_cast<std::size_t>(d + 1), Polynomial(space_));
  for (const auto& [alpha, c] : terms_) {
    Exponent beta = alpha;
    const int k = beta[static_cast<std::size_t>(var)];
    beta[static_cast<std::size_t>(var)] = 0;
    parts[static_cast<std::size_t>(k)].add_term(beta, c);
  }
  return parts;
}

Polynomial Polynomial::remap(const SpacePtr& target, std::span<const int> index_map) const {
  if (static_cast<int>(index_map.size()) != num_vars()) {
    throw std::invalid_argument("remap needs one entry per variable");
  }
  Polynomial out(target);
  for (const auto& [alpha, c] : terms_) {
    Exponent beta(static_cast<std::size_t>(target->size()), 0);
    for (std::size_t i = 0; i < alpha.size(); ++i) {
      if (alpha[i] == 0) continue;
      if (index_map[i] < 0) throw std::invalid_argument("remap drops a variable that is in use");
      beta[static_cast<std::size_t>(index_map[i])] += alpha[i];
    }
    out.add_term(beta, c);
  }
  return out;
}

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  os.precision(12);
  bool first = true;
  for (const auto& [alpha, c] : terms_) {
    if (!first) os << (c < 0 ? " - " : " + ");
    else if (c < 0) os << "-";
    first = false;
    const double mag = std::abs(c);
    bool constant_term = total_degree(alpha) == 0;
    if (constant_term || mag != 1.0) os << mag;
    for (std::size_t i = 0; i < alpha.size(); ++i) {
      if (alpha[i] == 0) continue;
      os << (*space_)[static_cast<int>(i)].name;
      if (alpha[i] > 1) os << "^" << alpha[i];
    }
  }
  return os.str();
}

bool Polynomial::operator==(const Polynomial& other) const {
  return same_space(space_, other.space_) && terms_ == other.terms_;
}

Polynomial substitute_affine_path(const Polynomial& g, int piece, const SpacePtr& target) {
  const auto& src = *g.space();
  std::vector<Polynomial> images;
  images.reserve(static_cast<std::size_t>(src.size()));
  const int t_out = target->index(VarKind::Time);
  for (const auto& var : src.variables()) {
    switch (var.kind) {
      case VarKind::Time:
        images.push_back(Polynomial::variable(target, t_out));
        break;
      case VarKind::Config: {
        const int u = target->index(VarKind::Position, piece, var.coord);
        const int v = target->index(VarKind::Velocity, piece, var.coord);
        images.push_back(Polynomial::variable(target, u) +
                         Polynomial::variable(target, t_out) * Polynomial::variable(target, v));
        break;
      }
      default:
        throw std::invalid_argument("substitute_affine_path expects a polynomial in (t, x)");
    }
  }
  return g.substitute(target, images);
}

}  // namespace momentplan
