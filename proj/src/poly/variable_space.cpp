#include "momentplan/poly/variable_space.hpp"

#include <stdexcept>

namespace momentplan {

VariableSpace::VariableSpace(std::vector<VariableInfo> vars) : vars_(std::move(vars)) {}

VariableSpace VariableSpace::configuration(int n) {
  if (n < 1) throw std::invalid_argument("configuration dimension must be >= 1");
  std::vector<VariableInfo> vars;
  vars.push_back({VarKind::Time, -1, -1, "t"});
  for (int j = 0; j < n; ++j) {
    vars.push_back({VarKind::Config, -1, j, "x" + std::to_string(j + 1)});
  }
  return VariableSpace(std::move(vars));
}

VariableSpace VariableSpace::pieces(int n, std::span<const int> piece_ids, bool with_time,
                                    bool with_lengths) {
  std::vector<VariableInfo> vars;
  if (with_time) vars.push_back({VarKind::Time, -1, -1, "t"});
  for (int i : piece_ids) {
    const std::string tag = std::to_string(i + 1);
    for (int j = 0; j < n; ++j) {
      vars.push_back({VarKind::Position, i, j, "u" + tag + "_" + std::to_string(j + 1)});
    }
    for (int j = 0; j < n; ++j) {
      vars.push_back({VarKind::Velocity, i, j, "v" + tag + "_" + std::to_string(j + 1)});
    }
    if (with_lengths) vars.push_back({VarKind::Length, i, -1, "z" + tag});
  }
  return VariableSpace(std::move(vars));
}

VariableSpace VariableSpace::generic(const std::vector<std::string>& names) {
  std::vector<VariableInfo> vars;
  vars.reserve(names.size());
  for (std::size_t k = 0; k < names.size(); ++k) {
    vars.push_back({VarKind::Free, -1, static_cast<int>(k), names[k]});
  }
  return VariableSpace(std::move(vars));
}

std::optional<int> VariableSpace::find(VarKind kind, int piece, int coord) const {
  for (int i = 0; i < size(); ++i) {
    const auto& v = vars_[static_cast<std::size_t>(i)];
    if (v.kind == kind && v.piece == piece && v.coord == coord) return i;
  }
  return std::nullopt;
}

int VariableSpace::index(VarKind kind, int piece, int coord) const {
  if (auto i = find(kind, piece, coord)) return *i;
  throw std::out_of_range("variable not present in space");
}

bool same_space(const SpacePtr& a, const SpacePtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return *a == *b;
}

}  // namespace momentplan
