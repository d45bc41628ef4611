#pragma once

#include <Eigen/Core>

#include <memory>
#include <vector>

namespace momentplan {

/// svec ordering: upper triangle row-major, off-diagonals scaled by sqrt(2).
int svec_size(int m);
Eigen::VectorXd svec(const Eigen::MatrixXd& S);
Eigen::MatrixXd smat(const Eigen::Ref<const Eigen::VectorXd>& v, int m);

/// One cone of the product cone with its Nesterov-Todd scaling state.
///
/// Vectors passed in and out are this cone's slice. After update_scaling(s, z)
/// the scaled point lambda = W z = W^{-T} s is available.
class Cone {
 public:
  virtual ~Cone() = default;

  virtual int dim() const = 0;
  virtual int degree() const = 0;
  virtual void identity(Eigen::Ref<Eigen::VectorXd> e) const = 0;
  /// inf { a : v + a e in K }; negative when v is interior.
  virtual double boundary_shift(const Eigen::Ref<const Eigen::VectorXd>& v) const = 0;

  /// Returns false if s or z is not strictly interior.
  virtual bool update_scaling(const Eigen::Ref<const Eigen::VectorXd>& s,
                              const Eigen::Ref<const Eigen::VectorXd>& z) = 0;
  virtual const Eigen::VectorXd& lambda() const = 0;

  virtual void apply_w(const Eigen::Ref<const Eigen::VectorXd>& in, Eigen::Ref<Eigen::VectorXd> out) const = 0;
  virtual void apply_wt(const Eigen::Ref<const Eigen::VectorXd>& in, Eigen::Ref<Eigen::VectorXd> out) const = 0;
  virtual void apply_winv_t(const Eigen::Ref<const Eigen::VectorXd>& in, Eigen::Ref<Eigen::VectorXd> out) const = 0;
  /// Dense W^T W (diagonal for the nonnegative orthant).
  virtual Eigen::MatrixXd wtw() const = 0;
  virtual bool wtw_diagonal() const { return false; }

  virtual void jordan_product(const Eigen::Ref<const Eigen::VectorXd>& u, const Eigen::Ref<const Eigen::VectorXd>& v,
                              Eigen::Ref<Eigen::VectorXd> out) const = 0;
  /// Solves lambda o u = d for u.
  virtual void lambda_div(const Eigen::Ref<const Eigen::VectorXd>& d, Eigen::Ref<Eigen::VectorXd> out) const = 0;
  /// Largest a with lambda + a d in K (capped at a large value).
  virtual double step_length(const Eigen::Ref<const Eigen::VectorXd>& d) const = 0;
};

std::unique_ptr<Cone> make_nonnegative_cone(int dim);
std::unique_ptr<Cone> make_second_order_cone(int dim);
std::unique_ptr<Cone> make_psd_cone(int m);

inline constexpr double kMaxStep = 1e30;

}  // namespace momentplan
