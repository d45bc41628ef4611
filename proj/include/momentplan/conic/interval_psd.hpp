#pragma once

#include <Eigen/Core>

#include "momentplan/conic/program.hpp"
#include "momentplan/poly/univariate.hpp"

namespace momentplan {

enum class GramBasis { Monomial, Chebyshev };

/// Where the Gram matrices of an interval-PSD certificate live in a program.
///
/// Degree d = 2e:   X(t) = S1(t) + (t-a)(b-t) S2(t), bases of degree e and e-1.
/// Degree d = 2e+1: X(t) = (t-a) S1(t) + (b-t) S2(t), both of degree e.
/// S_k(t) = (v(t) (x) I_m)' Q_k (v(t) (x) I_m).
/// Endpoint factors (t-a)^k (b-t)^l that divide X exactly are folded into
/// w1 and w2, and e1 = -1 means X was identically zero.
struct IntervalPsdCertificate {
  double a = 0.0, b = 1.0;
  int m = 0;       // size of X
  int degree = 0;  // degree of X after trimming
  GramBasis basis = GramBasis::Monomial;
  Univariate w1, w2;
  int e1 = 0, e2 = -1;          // basis degrees, -1 when the block is absent
  int q1_offset = -1, q2_offset = -1;  // first variable of each Gram upper triangle

  int q1_size() const { return e1 < 0 ? 0 : m * (e1 + 1); }
  int q2_size() const { return e2 < 0 ? 0 : m * (e2 + 1); }
};

/// Adds Gram variables, their PSD constraints and the coefficient-matching
/// equalities so that feasibility is equivalent to X(t) PSD on [a, b].
IntervalPsdCertificate encode_interval_psd(ConicProgram& program, const AffinePolyMatrix& X, double a, double b,
                                           GramBasis basis = GramBasis::Monomial);

/// Gram matrix k (1 or 2) read from a solution vector.
Eigen::MatrixXd gram_matrix(const IntervalPsdCertificate& cert, const Eigen::VectorXd& x, int k);

/// w1(t) S1(t) + w2(t) S2(t) built from the Gram matrices alone.
Eigen::MatrixXd reconstruct(const IntervalPsdCertificate& cert, const Eigen::VectorXd& x, double t);

/// Basis polynomials v_0..v_e on [a, b].
std::vector<Univariate> gram_basis(GramBasis basis, int e, double a, double b);

}  // namespace momentplan
