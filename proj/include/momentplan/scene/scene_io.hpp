#pragma once

#include <stdexcept>
#include <string>

#include "json.hpp"
#include "momentplan/scene/path.hpp"

namespace momentplan {

struct Scene {
  std::string name;
  ProblemData data;
  nlohmann::ordered_json metadata = nlohmann::ordered_json::object();
};

/// Schema or syntax problem; the message names the offending field.
class SceneError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Scene document:
///   {"name", "n", "T", "x0", "xT",
///    "constraints": [{"terms": [{"exp": [e_t, e_x1, ...], "c": coef}, ...]}, ...],
///    "metadata": {...}}
/// Terms are written in graded-lex order, so serialize(parse(text)) == text
/// for any text produced by serialize.
Scene parse_scene(const std::string& text);
std::string serialize_scene(const Scene& scene);

Scene load_scene(const std::string& path);
void save_scene(const Scene& scene, const std::string& path);

/// Path document: {"s", "T", ["breaks",] "pieces": [{"u": [...], "v": [...]}]}.
/// "breaks" is present only for non-uniform paths.
PiecewiseLinearPath parse_path(const std::string& text);
std::string serialize_path(const PiecewiseLinearPath& path);

/// Example 1: x0 = (0,-1), xT = (0,1), box |x_i| <= 1 and the time-varying
/// obstacle (x1+1/3)^2 + (x2-1/5)^2 - t (x1+1/3)^3 - 1/4 >= 0, T = 1.
Scene example1_scene();

/// Writes text to a file, throwing std::runtime_error on failure.
void write_text(const std::string& path, const std::string& text);
std::string read_text(const std::string& path);

}  // namespace momentplan
