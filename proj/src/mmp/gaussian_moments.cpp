#include "momentplan/mmp/gaussian_moments.hpp"

#include <stdexcept>
#include <vector>

namespace momentplan {

PseudoMomentSeq gaussian_moments(const Eigen::VectorXd& mean, double variance, int order) {
  if (variance < 0.0) throw std::invalid_argument("variance must be nonnegative");
  if (order < 0) throw std::invalid_argument("order must be nonnegative");
  const int n = static_cast<int>(mean.size());
  // table[j][k] = E[x_j^k]
  std::vector<std::vector<double>> table(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    auto& m = table[static_cast<std::size_t>(j)];
    m.assign(static_cast<std::size_t>(order + 1), 0.0);
    m[0] = 1.0;
    if (order >= 1) m[1] = mean[j];
    for (int k = 2; k <= order; ++k) {
      const auto uk = static_cast<std::size_t>(k);
      m[uk] = mean[j] * m[uk - 1] + (k - 1) * variance * m[uk - 2];
    }
  }
  auto basis = shared_basis(n, order);
  Eigen::VectorXd phi(basis->size());
  for (int a = 0; a < basis->size(); ++a) {
    double v = 1.0;
    const Exponent& alpha = (*basis)[a];
    for (int j = 0; j < n; ++j) v *= table[static_cast<std::size_t>(j)][static_cast<std::size_t>(alpha[static_cast<std::size_t>(j)])];
    phi[a] = v;
  }
  return PseudoMomentSeq(n, order, std::move(phi));
}

}  // namespace momentplan
