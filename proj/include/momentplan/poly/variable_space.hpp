#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace momentplan {

/// Role of a scalar variable inside a VariableSpace.
enum class VarKind {
  Time,      ///< t
  Config,    ///< x_j, configuration coordinate
  Position,  ///< u_{i,j}, offset of piece i
  Velocity,  ///< v_{i,j}, slope of piece i
  Length,    ///< z_i, lifted length of piece i
  Free       ///< anything else (reduced coordinates, test variables)
};

struct VariableInfo {
  VarKind kind = VarKind::Free;
  int piece = -1;  // 0-based piece index, -1 when not applicable
  int coord = -1;  // 0-based coordinate, -1 when not applicable
  std::string name;

  bool operator==(const VariableInfo&) const = default;
};

/// Ordered list of scalar variables shared by a family of polynomials.
///
/// The order is fixed at construction; exponent vectors of every polynomial
/// living in the space carry exactly one entry per variable, in this order.
class VariableSpace {
 public:
  VariableSpace() = default;
  explicit VariableSpace(std::vector<VariableInfo> vars);

  /// (t, x_1, ..., x_n): the space scene constraints are written in.
  static VariableSpace configuration(int n);

  /// Piece variables for the listed pieces, in the order
  /// [t] u_i, v_i, [z_i] for each listed piece i.
  static VariableSpace pieces(int n, std::span<const int> piece_ids,
                              bool with_time, bool with_lengths);

  /// Unstructured space with the given variable names.
  static VariableSpace generic(const std::vector<std::string>& names);

  int size() const { return static_cast<int>(vars_.size()); }
  const VariableInfo& operator[](int i) const { return vars_.at(static_cast<std::size_t>(i)); }
  const std::vector<VariableInfo>& variables() const { return vars_; }

  std::optional<int> find(VarKind kind, int piece = -1, int coord = -1) const;
  /// Like find() but throws std::out_of_range when absent.
  int index(VarKind kind, int piece = -1, int coord = -1) const;

  bool operator==(const VariableSpace& other) const { return vars_ == other.vars_; }

 private:
  std::vector<VariableInfo> vars_;
};

using SpacePtr = std::shared_ptr<const VariableSpace>;

inline SpacePtr make_space(VariableSpace space) {
  return std::make_shared<const VariableSpace>(std::move(space));
}

/// True when both pointers denote the same variable list.
bool same_space(const SpacePtr& a, const SpacePtr& b);

}  // namespace momentplan
