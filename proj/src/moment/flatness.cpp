#include "momentplan/moment/flatness.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace momentplan {

double FlatnessResidual::max() const { return std::max({u, v, z}); }

int flatness_degree(int r) { return std::max(2, r - (r % 2)); }

namespace {

// L(|w|^r) - |L(w)|^r for a vector of linear forms, r even.
double gap(const RieszFn& L, const std::vector<Polynomial>& w, int r) {
  if (w.empty()) return 0.0;
  Polynomial sq = Polynomial(w.front().space());
  double mean_sq = 0.0;
  for (const auto& wj : w) {
    sq += wj * wj;
    const double m = L(wj);
    mean_sq += m * m;
  }
  return L(sq.pow(r / 2)) - std::pow(mean_sq, r / 2);
}

}  // namespace

FlatnessResidual flatness_residual(const RieszFn& L, const PieceForms& piece, int r) {
  if (r < 2 || r % 2 != 0) throw std::invalid_argument("flatness test needs an even order");
  FlatnessResidual res;
  res.degree = r;
  res.u = gap(L, piece.u, r);
  res.v = gap(L, piece.v, r);
  if (piece.z) res.z = L(piece.z->pow(r)) - std::pow(L(*piece.z), r);
  return res;
}

bool is_flat(const FlatnessResidual& res, double z_mean, double tol) {
  const double scaled = tol * (1.0 + std::pow(std::abs(z_mean), res.degree));
  return std::abs(res.u) <= scaled && std::abs(res.v) <= scaled && std::abs(res.z) <= scaled;
}

}  // namespace momentplan
