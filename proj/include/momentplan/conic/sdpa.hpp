#pragma once

#include <string>

#include "momentplan/conic/program.hpp"

namespace momentplan {

/// SDPA sparse (.dat-s) text. Equalities become pairs of diagonal entries,
/// second-order cones become arrow-shaped PSD blocks, and the objective
/// constant is carried in a leading '*' comment.
std::string export_sdpa(const ConicProgram& program);

/// Parses .dat-s text. Diagonal rows that are exact negations of each other
/// are merged back into equalities.
ConicProgram import_sdpa(const std::string& text);

}  // namespace momentplan
