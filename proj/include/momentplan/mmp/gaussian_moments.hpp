#pragma once

#include <Eigen/Core>

#include "momentplan/moment/pseudo_moments.hpp"

namespace momentplan {

/// Moments up to `order` of N(mean, variance * I). Coordinates are independent,
/// so each moment is a product of univariate ones,
/// m_k = mu m_{k-1} + (k-1) var m_{k-2}.
PseudoMomentSeq gaussian_moments(const Eigen::VectorXd& mean, double variance, int order);

}  // namespace momentplan
