#pragma once

#include <optional>
#include <string>

#include "momentplan/scene/scene_io.hpp"

namespace momentplan {

struct RenderOptions {
  int grid = 256;           // marching-squares cells per side
  int pixels = 512;         // SVG width and height
  int px = 0, py = 1;       // coordinates shown on the horizontal/vertical axes
  double margin = 0.15;     // view padding around [-1,1]^2, x0 and xT
};

/// One SVG frame at time t: zero-level sets of every g_k(t, .) restricted to
/// the (px, py) plane, start and goal markers, and the path prefix on
/// [0, t] when a path is given. For n >= 3 the hidden coordinates are held
/// at x(t) of the path, or at (x0 + xT) / 2 without one.
std::string render_frame(const Scene& scene, const PiecewiseLinearPath* path, double t, const RenderOptions& opts = {});

}  // namespace momentplan
