#include "momentplan/conic/cones.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

namespace momentplan {

namespace {
const double kSqrt2 = std::sqrt(2.0);
}

int svec_size(int m) { return m * (m + 1) / 2; }

Eigen::VectorXd svec(const Eigen::MatrixXd& S) {
  const int m = static_cast<int>(S.rows());
  Eigen::VectorXd v(svec_size(m));
  int k = 0;
  for (int i = 0; i < m; ++i) {
    for (int j = i; j < m; ++j) v[k++] = (i == j) ? S(i, i) : kSqrt2 * 0.5 * (S(i, j) + S(j, i));
  }
  return v;
}

Eigen::MatrixXd smat(const Eigen::Ref<const Eigen::VectorXd>& v, int m) {
  Eigen::MatrixXd S(m, m);
  int k = 0;
  for (int i = 0; i < m; ++i) {
    for (int j = i; j < m; ++j) {
      const double val = (i == j) ? v[k] : v[k] / kSqrt2;
      S(i, j) = S(j, i) = val;
      ++k;
    }
  }
  return S;
}

namespace {

class NonnegativeCone final : public Cone {
 public:
  explicit NonnegativeCone(int dim) : dim_(dim), w_(dim), lambda_(dim) {}

  int dim() const override { return dim_; }
  int degree() const override { return dim_; }
  void identity(Eigen::Ref<Eigen::VectorXd> e) const override { e.setOnes(); }
  double boundary_shift(const Eigen::Ref<const Eigen::VectorXd>& v) const override { return -v.minCoeff(); }

  bool update_scaling(const Eigen::Ref<const Eigen::VectorXd>& s,
                      const Eigen::Ref<const Eigen::VectorXd>& z) override {
    if (s.minCoeff() <= 0.0 || z.minCoeff() <= 0.0) return false;
    w_ = (s.array() / z.array()).sqrt();
    lambda_ = (s.array() * z.array()).sqrt();
    return true;
  }
  const Eigen::VectorXd& lambda() const override { return lambda_; }

  void apply_w(const Eigen::Ref<const Eigen::VectorXd>& in, Eigen::Ref<Eigen::VectorXd> out) const override {
    out = w_.array() * in.array();
  }
  void apply_wt(const Eigen::Ref<const Eigen::VectorXd>& in, Eigen::Ref<Eigen::VectorXd> out) const override {
    out = w_.array() * in.array();
  }
  void apply_winv_t(const Eigen::Ref<const Eigen::VectorXd>& in, Eigen::Ref<Eigen::VectorXd> out) const override {
    out = in.array() / w_.array();
  }
  Eigen::MatrixXd wtw() const override { return w_.array().square().matrix(); }
  bool wtw_diagonal() const override { return true; }

  void jordan_product(const Eigen::Ref<const Eigen::VectorXd>& u, const Eigen::Ref<const Eigen::VectorXd>& v,
                      Eigen::Ref<Eigen::VectorXd> out) const override {
    out = u.array() * v.array();
  }
  void lambda_div(const Eigen::Ref<const Eigen::VectorXd>& d, Eigen::Ref<Eigen::VectorXd> out) const override {
    out = d.array() / lambda_.array();
  }
  double step_length(const Eigen::Ref<const Eigen::VectorXd>& d) const override {
    double a = kMaxStep;
    for (int i = 0; i < dim_; ++i) {
      if (d[i] < 0.0) a = std::min(a, -lambda_[i] / d[i]);
    }
    return a;
  }

 private:
  int dim_;
  Eigen::VectorXd w_;
  Eigen::VectorXd lambda_;
};

// Second-order cone {(t, x) : t >= |x|}, scaling in the ECOS form
// W = eta [w0 w1'; w1 I + w1 w1'/(1 + w0)].
class SecondOrderCone final : public Cone {
 public:
  explicit SecondOrderCone(int dim) : dim_(dim), w_(dim), lambda_(dim) {}

  int dim() const override { return dim_; }
  int degree() const override { return 1; }
  void identity(Eigen::Ref<Eigen::VectorXd> e) const override {
    e.setZero();
    e[0] = 1.0;
  }
  double boundary_shift(const Eigen::Ref<const Eigen::VectorXd>& v) const override {
    return v.tail(dim_ - 1).norm() - v[0];
  }

  bool update_scaling(const Eigen::Ref<const Eigen::VectorXd>& s,
                      const Eigen::Ref<const Eigen::VectorXd>& z) override {
    const double sres = s[0] * s[0] - s.tail(dim_ - 1).squaredNorm();
    const double zres = z[0] * z[0] - z.tail(dim_ - 1).squaredNorm();
    if (s[0] <= 0.0 || z[0] <= 0.0 || sres <= 0.0 || zres <= 0.0) return false;
    const Eigen::VectorXd sbar = s / std::sqrt(sres);
    const Eigen::VectorXd zbar = z / std::sqrt(zres);
    const double gamma = std::sqrt(0.5 * (1.0 + sbar.dot(zbar)));
    w_[0] = (sbar[0] + zbar[0]) / (2.0 * gamma);
    w_.tail(dim_ - 1) = (sbar.tail(dim_ - 1) - zbar.tail(dim_ - 1)) / (2.0 * gamma);
    eta_ = std::pow(sres / zres, 0.25);
    Eigen::VectorXd l(dim_);
    apply_w(z, l);
    lambda_ = l;
    return true;
  }
  const Eigen::VectorXd& lambda() const override { return lambda_; }

  void apply_w(const Eigen::Ref<const Eigen::VectorXd>& in, Eigen::Ref<Eigen::VectorXd> out) const override {
    apply(in, out, eta_, 1.0);
  }
  void apply_wt(const Eigen::Ref<const Eigen::VectorXd>& in, Eigen::Ref<Eigen::VectorXd> out) const override {
    apply(in, out, eta_, 1.0);
  }
  void apply_winv_t(const Eigen::Ref<const Eigen::VectorXd>& in, Eigen::Ref<Eigen::VectorXd> out) const override {
    apply(in, out, 1.0 / eta_, -1.0);
  }
  Eigen::MatrixXd wtw() const override {
    Eigen::MatrixXd W(dim_, dim_);
    Eigen::VectorXd e = Eigen::VectorXd::Zero(dim_);
    for (int j = 0; j < dim_; ++j) {
      e.setZero();
      e[j] = 1.0;
      Eigen::VectorXd col(dim_);
      apply_w(e, col);
      W.col(j) = col;
    }
    return W.transpose() * W;
  }

  void jordan_product(const Eigen::Ref<const Eigen::VectorXd>& u, const Eigen::Ref<const Eigen::VectorXd>& v,
                      Eigen::Ref<Eigen::VectorXd> out) const override {
    const double head = u.dot(v);
    out.tail(dim_ - 1) = u[0] * v.tail(dim_ - 1) + v[0] * u.tail(dim_ - 1);
    out[0] = head;
  }
  void lambda_div(const Eigen::Ref<const Eigen::VectorXd>& d, Eigen::Ref<Eigen::VectorXd> out) const override {
    const double l0 = lambda_[0];
    const auto l1 = lambda_.tail(dim_ - 1);
    const double det = l0 * l0 - l1.squaredNorm();
    const double u0 = (l0 * d[0] - l1.dot(d.tail(dim_ - 1))) / det;
    out.tail(dim_ - 1) = (d.tail(dim_ - 1) - u0 * l1) / l0;
    out[0] = u0;
  }
  double step_length(const Eigen::Ref<const Eigen::VectorXd>& d) const override {
    // f(a) = (l0 + a d0)^2 - |l1 + a d1|^2 = qa a^2 + 2 qb a + qc, qc > 0.
    const double qa = d[0] * d[0] - d.tail(dim_ - 1).squaredNorm();
    const double qb = lambda_[0] * d[0] - lambda_.tail(dim_ - 1).dot(d.tail(dim_ - 1));
    const double qc = lambda_[0] * lambda_[0] - lambda_.tail(dim_ - 1).squaredNorm();
    double a = kMaxStep;
    if (qa == 0.0) {
      if (qb < 0.0) a = -qc / (2.0 * qb);
    } else {
      const double disc = qb * qb - qa * qc;
      if (disc >= 0.0) {
        const double sq = std::sqrt(disc);
        const double q = -(qb + (qb >= 0.0 ? sq : -sq));
        for (double root : {q / qa, q != 0.0 ? qc / q : kMaxStep}) {
          if (root > 0.0) a = std::min(a, root);
        }
      }
    }
    // The head must stay positive too (guards the mirrored cone).
    if (d[0] < 0.0) a = std::min(a, -lambda_[0] / d[0]);
    return a;
  }

 private:
  // eta [w0 sgn*w1'; sgn*w1 I + w1 w1'/(1 + w0)] applied to in.
  void apply(const Eigen::Ref<const Eigen::VectorXd>& in, Eigen::Ref<Eigen::VectorXd> out, double eta,
             double sgn) const {
    const double w0 = w_[0];
    const auto w1 = w_.tail(dim_ - 1);
    const auto x1 = in.tail(dim_ - 1);
    const double w1x1 = w1.dot(x1);
    const double head = w0 * in[0] + sgn * w1x1;
    out.tail(dim_ - 1) = eta * (sgn * in[0] * w1 + x1 + (w1x1 / (1.0 + w0)) * w1);
    out[0] = eta * head;
  }

  int dim_;
  Eigen::VectorXd w_;
  double eta_ = 1.0;
  Eigen::VectorXd lambda_;
};

// PSD cone in svec form; W(Z) = R' Z R and W^{-T}(S) = R^{-1} S R^{-T}.
class PsdCone final : public Cone {
 public:
  explicit PsdCone(int m) : m_(m), dim_(svec_size(m)), lambda_(dim_) {}

  int dim() const override { return dim_; }
  int degree() const override { return m_; }
  void identity(Eigen::Ref<Eigen::VectorXd> e) const override { e = svec(Eigen::MatrixXd::Identity(m_, m_)); }
  double boundary_shift(const Eigen::Ref<const Eigen::VectorXd>& v) const override {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(smat(v, m_), Eigen::EigenvaluesOnly);
    return -es.eigenvalues().minCoeff();
  }

  bool update_scaling(const Eigen::Ref<const Eigen::VectorXd>& s,
                      const Eigen::Ref<const Eigen::VectorXd>& z) override {
    Eigen::LLT<Eigen::MatrixXd> ls(smat(s, m_));
    Eigen::LLT<Eigen::MatrixXd> lz(smat(z, m_));
    if (ls.info() != Eigen::Success || lz.info() != Eigen::Success) return false;
    const Eigen::MatrixXd L1 = ls.matrixL();
    const Eigen::MatrixXd L2 = lz.matrixL();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(L2.transpose() * L1, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Eigen::VectorXd lam = svd.singularValues();
    if (lam.minCoeff() <= 0.0) return false;
    const Eigen::VectorXd isq = lam.cwiseSqrt().cwiseInverse();
    R_ = L1 * svd.matrixV() * isq.asDiagonal();
    Rinv_ = isq.asDiagonal() * svd.matrixU().transpose() * L2.transpose();
    lam_ = lam;
    lambda_ = svec(Eigen::MatrixXd(lam.asDiagonal()));
    return true;
  }
  const Eigen::VectorXd& lambda() const override { return lambda_; }

  void apply_w(const Eigen::Ref<const Eigen::VectorXd>& in, Eigen::Ref<Eigen::VectorXd> out) const override {
    out = svec(R_.transpose() * smat(in, m_) * R_);
  }
  void apply_wt(const Eigen::Ref<const Eigen::VectorXd>& in, Eigen::Ref<Eigen::VectorXd> out) const override {
    out = svec(R_ * smat(in, m_) * R_.transpose());
  }
  void apply_winv_t(const Eigen::Ref<const Eigen::VectorXd>& in, Eigen::Ref<Eigen::VectorXd> out) const override {
    out = svec(Rinv_ * smat(in, m_) * Rinv_.transpose());
  }
  Eigen::MatrixXd wtw() const override {
    const Eigen::MatrixXd G = R_ * R_.transpose();
    Eigen::MatrixXd H(dim_, dim_);
    int p = 0;
    for (int i = 0; i < m_; ++i) {
      for (int j = i; j < m_; ++j, ++p) {
        const double cij = (i == j) ? 1.0 : kSqrt2;
        int q = 0;
        for (int k = 0; k < m_; ++k) {
          for (int l = k; l < m_; ++l, ++q) {
            const double ckl = (k == l) ? 1.0 : kSqrt2;
            H(p, q) = 0.5 * cij * ckl * (G(i, k) * G(j, l) + G(i, l) * G(j, k));
          }
        }
      }
    }
    return H;
  }

  void jordan_product(const Eigen::Ref<const Eigen::VectorXd>& u, const Eigen::Ref<const Eigen::VectorXd>& v,
                      Eigen::Ref<Eigen::VectorXd> out) const override {
    const Eigen::MatrixXd U = smat(u, m_);
    const Eigen::MatrixXd V = smat(v, m_);
    out = svec(0.5 * (U * V + V * U));
  }
  void lambda_div(const Eigen::Ref<const Eigen::VectorXd>& d, Eigen::Ref<Eigen::VectorXd> out) const override {
    int k = 0;
    for (int i = 0; i < m_; ++i) {
      for (int j = i; j < m_; ++j, ++k) out[k] = 2.0 * d[k] / (lam_[i] + lam_[j]);
    }
  }
  double step_length(const Eigen::Ref<const Eigen::VectorXd>& d) const override {
    const Eigen::VectorXd isq = lam_.cwiseSqrt().cwiseInverse();
    const Eigen::MatrixXd M = isq.asDiagonal() * smat(d, m_) * isq.asDiagonal();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M, Eigen::EigenvaluesOnly);
    const double lo = es.eigenvalues().minCoeff();
    return lo < 0.0 ? -1.0 / lo : kMaxStep;
  }

 private:
  int m_;
  int dim_;
  Eigen::MatrixXd R_;
  Eigen::MatrixXd Rinv_;
  Eigen::VectorXd lam_;
  Eigen::VectorXd lambda_;
};

}  // namespace

std::unique_ptr<Cone> make_nonnegative_cone(int dim) { return std::make_unique<NonnegativeCone>(dim); }
std::unique_ptr<Cone> make_second_order_cone(int dim) { return std::make_unique<SecondOrderCone>(dim); }
std::unique_ptr<Cone> make_psd_cone(int m) { return std::make_unique<PsdCone>(m); }

}  // namespace momentplan
