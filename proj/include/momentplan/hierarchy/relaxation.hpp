#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "momentplan/conic/interval_psd.hpp"
#include "momentplan/hierarchy/moment_block.hpp"
#include "momentplan/scene/path.hpp"

namespace momentplan {

struct RelaxationConfig {
  int s = 1;
  int r = 2;
  bool sparse = false;
  std::optional<double> ball_radius;  // appends R^2 - |x|^2 when set
  // Substitute the continuity equalities exactly (the default) instead of
  // imposing L(m h) = 0 moment by moment. Both describe the same feasible
  // set; the literal form exists for cross-checks on small instances.
  bool eliminate_linear = true;
  GramBasis gram_basis = GramBasis::Monomial;
};

/// A built relaxation: the program plus the blocks needed to read it back.
struct Relaxation {
  ConicProgram program;
  std::vector<std::unique_ptr<MomentBlock>> blocks;
  std::vector<int> owner;  // owner[i]: block whose z_i enters the objective and the readout
  std::vector<IntervalPsdCertificate> certificates;
  int n = 0, s = 0, r = 0;
  double T = 1.0;

  /// Polynomial u_{i,j}, v_{i,j}, z_i in the orig space of block owner[i].
  Polynomial u(int piece, int coord) const;
  Polynomial v(int piece, int coord) const;
  Polynomial z(int piece) const;
  MomentBlock& block_of(int piece) { return *blocks[static_cast<std::size_t>(owner[static_cast<std::size_t>(piece)])]; }
};

/// SDP(r, s; D): a single moment sequence over (u, v, z) of all pieces.
Relaxation build_dense(const ProblemData& data, const RelaxationConfig& cfg);
/// SparseSDP(r, s; D): one sequence per clique {i, i+1} (the last clique is {s}),
/// with moments of the shared piece equated between neighbours.
Relaxation build_sparse(const ProblemData& data, const RelaxationConfig& cfg);
Relaxation build_relaxation(const ProblemData& data, const RelaxationConfig& cfg);

/// Polynomials of the continuity relation h_i (i = 0..s) in `space`, one
/// per coordinate: h_0 = x0 - u_1, h_i = u_i + t_i v_i - u_{i+1} - t_i v_{i+1},
/// h_s = u_s + T v_s - xT (pieces 1-based in the formulas, 0-based in code).
std::vector<Polynomial> continuity_relation(const ProblemData& data, int s, int i, const SpacePtr& space);

}  // namespace momentplan
