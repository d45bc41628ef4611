#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "momentplan/poly/polynomial.hpp"

namespace momentplan {

using RieszFn = std::function<double(const Polynomial&)>;

/// Linear forms (usually single variables) giving u_i, v_i and optionally z_i
/// in the space the Riesz functional acts on.
struct PieceForms {
  std::vector<Polynomial> u;
  std::vector<Polynomial> v;
  std::optional<Polynomial> z;
};

struct FlatnessResidual {
  double u = 0.0;
  double v = 0.0;
  double z = 0.0;
  int degree = 0;  // the even degree actually tested

  double max() const;
};

/// (L(|u|^r) - |L(u)|^r, L(|v|^r) - |L(v)|^r, L(z^r) - L(z)^r). r must be even.
FlatnessResidual flatness_residual(const RieszFn& L, const PieceForms& piece, int r);

/// Largest even degree <= r (at least 2).
int flatness_degree(int r);

/// Default per-residual tolerance: tol * (1 + |L(z)|^r).
bool is_flat(const FlatnessResidual& res, double z_mean, double tol = 1e-6);

}  // namespace momentplan
