#include "momentplan/conic/interval_psd.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace momentplan {

std::vector<Univariate> gram_basis(GramBasis basis, int e, double a, double b) {
  std::vector<Univariate> v;
  if (e < 0) return v;
  if (basis == GramBasis::Monomial) {
    for (int k = 0; k <= e; ++k) {
      std::vector<double> c(static_cast<std::size_t>(k + 1), 0.0);
      c[static_cast<std::size_t>(k)] = 1.0;
      v.emplace_back(std::move(c));
    }
    return v;
  }
  // Chebyshev polynomials of s = (2t - a - b)/(b - a).
  const Univariate s = Univariate::linear(-(a + b) / (b - a), 2.0 / (b - a));
  v.push_back(Univariate::constant(1.0));
  if (e >= 1) v.push_back(s);
  for (int k = 2; k <= e; ++k) v.push_back(s * v[static_cast<std::size_t>(k - 1)] * 2.0 + v[static_cast<std::size_t>(k - 2)] * -1.0);
  return v;
}

namespace {

int upper_index(int n, int i, int j) {
  if (i > j) std::swap(i, j);
  return i * n - i * (i - 1) / 2 + (j - i);
}

// Adds an n x n symmetric Gram block of fresh variables constrained PSD.
int add_gram(ConicProgram& program, int n) {
  const int first = program.add_variables(n * (n + 1) / 2);
  AffineMatrix Q(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) Q.at(i, j) = AffineExpr::var(first + upper_index(n, i, j));
  }
  program.add_psd(Q);
  return first;
}

// Subtracts sum_{k,l} coef_j(w v_k v_l) Q[(k,p),(l,q)] from each matching row.
void subtract_gram(std::vector<std::vector<AffineExpr>>& rows, const Univariate& w,
                   const std::vector<Univariate>& v, int m, int offset) {
  const int n = m * static_cast<int>(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) {
    for (std::size_t l = 0; l < v.size(); ++l) {
      const Univariate prod = w * v[k] * v[l];
      const auto& c = prod.coeffs();
      for (std::size_t j = 0; j < c.size(); ++j) {
        if (c[j] == 0.0) continue;
        int slot = 0;
        for (int p = 0; p < m; ++p) {
          for (int q = p; q < m; ++q, ++slot) {
            const int r = static_cast<int>(k) * m + p;
            const int s = static_cast<int>(l) * m + q;
            rows[j][static_cast<std::size_t>(slot)].add(offset + upper_index(n, r, s), -c[j]);
          }
        }
      }
    }
  }
}

double max_coefficient(const AffinePolyMatrix& X) {
  double scale = 0.0;
  for (const auto& M : X) {
    for (const auto& e : M.upper()) {
      scale = std::max(scale, std::abs(e.constant));
      for (const auto& [v, c] : e.terms) scale = std::max(scale, std::abs(c));
    }
  }
  return scale;
}

// True when every entry of X(c) vanishes as an affine expression.
bool vanishes_at(const AffinePolyMatrix& X, double c, double tol) {
  const int m = X.front().size();
  const std::size_t slots = static_cast<std::size_t>(m * (m + 1) / 2);
  for (std::size_t s = 0; s < slots; ++s) {
    AffineExpr v;
    double p = 1.0;
    for (const auto& M : X) {
      v += M.upper()[s] * p;
      p *= c;
    }
    v.compress();
    if (std::abs(v.constant) > tol) return false;
    for (const auto& [var, coef] : v.terms) {
      if (std::abs(coef) > tol) return false;
    }
  }
  return true;
}

// Quotient of X(t) by (t - c), remainder dropped.
AffinePolyMatrix divide_linear(const AffinePolyMatrix& X, double c) {
  const int d = static_cast<int>(X.size()) - 1;
  AffinePolyMatrix Y(static_cast<std::size_t>(d), AffineMatrix(X.front().size()));
  const std::size_t slots = X.front().upper().size();
  for (std::size_t s = 0; s < slots; ++s) {
    AffineExpr carry;
    for (int j = d; j >= 1; --j) {
      carry = X[static_cast<std::size_t>(j)].upper()[s] + carry * c;
      carry.compress();
      Y[static_cast<std::size_t>(j - 1)].upper()[s] = carry;
    }
  }
  return Y;
}

}  // namespace

IntervalPsdCertificate encode_interval_psd(ConicProgram& program, const AffinePolyMatrix& X, double a, double b,
                                           GramBasis basis) {
  if (!(b > a)) throw std::invalid_argument("interval PSD encoding needs a < b");
  if (X.empty()) throw std::invalid_argument("empty polynomial matrix");
  const int m = X.front().size();
  int d = static_cast<int>(X.size()) - 1;
  while (d > 0 && X[static_cast<std::size_t>(d)].is_zero()) --d;

  IntervalPsdCertificate cert;
  cert.a = a;
  cert.b = b;
  cert.m = m;
  cert.degree = d;
  cert.basis = basis;
  const Univariate ta = Univariate::linear(-a, 1.0);  // t - a
  const Univariate bt = Univariate::linear(b, -1.0);  // b - t

  const double tol = 1e-12 * std::max(1.0, max_coefficient(X));
  AffinePolyMatrix trimmed(X.begin(), X.begin() + d + 1);
  if (d == 0 && vanishes_at(trimmed, a, tol)) {
    // X == 0: nothing to certify.
    cert.e1 = -1;
    return cert;
  }
  // Entries that vanish identically at an endpoint (e.g. a path pinned to a
  // constraint boundary) leave the Gram blocks without interior. Pull such
  // endpoint factors out: X = (t-a)^k (b-t)^l Y with Y PSD on [a, b] is
  // equivalent by continuity.
  Univariate factor = Univariate::constant(1.0);
  int reduced = d;
  for (const auto& [c, f] : {std::pair{a, ta}, std::pair{b, bt}}) {
    while (reduced >= 1 && vanishes_at(trimmed, c, tol)) {
      trimmed = divide_linear(trimmed, c);
      factor = factor * f;
      --reduced;
    }
  }
  if (reduced % 2 == 0) {
    cert.w1 = factor;
    cert.w2 = factor * ta * bt;
    cert.e1 = reduced / 2;
    cert.e2 = reduced / 2 - 1;
  } else {
    cert.w1 = factor * ta;
    cert.w2 = factor * bt;
    cert.e1 = (reduced - 1) / 2;
    cert.e2 = (reduced - 1) / 2;
  }

  // rows[j][slot] accumulates X_j[p,q] - (Gram contributions) and must vanish.
  const int slots = m * (m + 1) / 2;
  std::vector<std::vector<AffineExpr>> rows(static_cast<std::size_t>(d + 1), std::vector<AffineExpr>(static_cast<std::size_t>(slots)));
  for (int j = 0; j <= d; ++j) {
    if (X[static_cast<std::size_t>(j)].size() != m) throw std::invalid_argument("inconsistent matrix sizes");
    for (int s = 0; s < slots; ++s) rows[static_cast<std::size_t>(j)][static_cast<std::size_t>(s)] = X[static_cast<std::size_t>(j)].upper()[static_cast<std::size_t>(s)];
  }
  cert.q1_offset = add_gram(program, cert.q1_size());
  subtract_gram(rows, cert.w1, gram_basis(basis, cert.e1, a, b), m, cert.q1_offset);
  if (cert.e2 >= 0) {
    cert.q2_offset = add_gram(program, cert.q2_size());
    subtract_gram(rows, cert.w2, gram_basis(basis, cert.e2, a, b), m, cert.q2_offset);
  }
  for (auto& row : rows) {
    for (auto& e : row) {
      e.compress();
      if (e.terms.empty() && e.constant == 0.0) continue;
      program.add_equality(std::move(e));
    }
  }
  return cert;
}

Eigen::MatrixXd gram_matrix(const IntervalPsdCertificate& cert, const Eigen::VectorXd& x, int k) {
  const int n = k == 1 ? cert.q1_size() : cert.q2_size();
  const int offset = k == 1 ? cert.q1_offset : cert.q2_offset;
  Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) Q(i, j) = Q(j, i) = x[offset + upper_index(n, i, j)];
  }
  return Q;
}

Eigen::MatrixXd reconstruct(const IntervalPsdCertificate& cert, const Eigen::VectorXd& x, double t) {
  auto part = [&](int k, int e, const Univariate& w) {
    Eigen::MatrixXd S = Eigen::MatrixXd::Zero(cert.m, cert.m);
    if (e < 0 || (k == 1 ? cert.q1_offset : cert.q2_offset) < 0) return S;
    const auto v = gram_basis(cert.basis, e, cert.a, cert.b);
    Eigen::MatrixXd V = Eigen::MatrixXd::Zero(cert.m * (e + 1), cert.m);
    for (int i = 0; i <= e; ++i) V.block(i * cert.m, 0, cert.m, cert.m).diagonal().setConstant(v[static_cast<std::size_t>(i)](t));
    return Eigen::MatrixXd(w(t) * (V.transpose() * gram_matrix(cert, x, k) * V));
  };
  return part(1, cert.e1, cert.w1) + part(2, cert.e2, cert.w2);
}

}  // namespace momentplan
