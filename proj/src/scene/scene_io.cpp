#include "momentplan/scene/scene_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace momentplan {

using json = nlohmann::ordered_json;

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& what) {
  throw SceneError("field '" + field + "': " + what);
}

const json& require(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) fail(where, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) fail(where.empty() ? key : where + "." + key, "missing");
  return *it;
}

double number(const json& v, const std::string& field) {
  if (!v.is_number()) fail(field, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) fail(field, "must be finite");
  return x;
}

Eigen::VectorXd vector(const json& v, const std::string& field, int n) {
  if (!v.is_array()) fail(field, "expected an array");
  if (n >= 0 && static_cast<int>(v.size()) != n) {
    fail(field, "expected " + std::to_string(n) + " entries, got " + std::to_string(v.size()));
  }
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out[static_cast<Eigen::Index>(i)] = number(v[i], field + "[" + std::to_string(i) + "]");
  return out;
}

json to_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw SceneError(std::string("syntax error: ") + e.what());
  }
}

}  // namespace

Scene parse_scene(const std::string& text) {
  const json doc = parse_json(text);
  if (!doc.is_object()) fail("<root>", "expected an object");
  Scene scene;
  if (auto it = doc.find("name"); it != doc.end()) {
    if (!it->is_string()) fail("name", "expected a string");
    scene.name = it->get<std::string>();
  }
  const json& jn = require(doc, "n", "");
  if (!jn.is_number_integer() || jn.get<int>() < 1) fail("n", "expected an integer >= 1");
  auto& d = scene.data;
  d.n = jn.get<int>();
  d.T = number(require(doc, "T", ""), "T");
  if (!(d.T > 0.0)) fail("T", "must be positive");
  d.x0 = vector(require(doc, "x0", ""), "x0", d.n);
  d.xT = vector(require(doc, "xT", ""), "xT", d.n);

  const json& jc = require(doc, "constraints", "");
  if (!jc.is_array()) fail("constraints", "expected an array");
  if (jc.empty()) fail("constraints", "at least one constraint is required");
  const SpacePtr space = configuration_space(d.n);
  for (std::size_t k = 0; k < jc.size(); ++k) {
    const std::string where = "constraints[" + std::to_string(k) + "]";
    const json& terms = require(jc[k], "terms", where);
    if (!terms.is_array()) fail(where + ".terms", "expected an array");
    Polynomial g(space);
    for (std::size_t j = 0; j < terms.size(); ++j) {
      const std::string tw = where + ".terms[" + std::to_string(j) + "]";
      const json& e = require(terms[j], "exp", tw);
      if (!e.is_array() || static_cast<int>(e.size()) != d.n + 1) {
        fail(tw + ".exp", "expected " + std::to_string(d.n + 1) + " exponents (t, x1..xn)");
      }
      Exponent alpha(e.size());
      for (std::size_t i = 0; i < e.size(); ++i) {
        if (!e[i].is_number_integer() || e[i].get<int>() < 0) fail(tw + ".exp", "exponents must be nonnegative integers");
        alpha[i] = e[i].get<int>();
      }
      g.add_term(alpha, number(require(terms[j], "c", tw), tw + ".c"));
    }
    d.constraints.push_back(std::move(g));
  }
  if (auto it = doc.find("metadata"); it != doc.end()) {
    if (!it->is_object()) fail("metadata", "expected an object");
    scene.metadata = *it;
  }
  return scene;
}

std::string serialize_scene(const Scene& scene) {
  scene.data.validate();
  json doc;
  doc["name"] = scene.name;
  doc["n"] = scene.data.n;
  doc["T"] = scene.data.T;
  doc["x0"] = to_json(scene.data.x0);
  doc["xT"] = to_json(scene.data.xT);
  json cons = json::array();
  for (const auto& g : scene.data.constraints) {
    json terms = json::array();
    for (const auto& [alpha, c] : g.terms()) {
      json t;
      t["exp"] = alpha;
      t["c"] = c;
      terms.push_back(std::move(t));
    }
    json entry;
    entry["terms"] = std::move(terms);
    cons.push_back(std::move(entry));
  }
  doc["constraints"] = std::move(cons);
  doc["metadata"] = scene.metadata;
  return doc.dump(2) + "\n";
}

PiecewiseLinearPath parse_path(const std::string& text) {
  const json doc = parse_json(text);
  const json& js = require(doc, "s", "");
  if (!js.is_number_integer() || js.get<int>() < 1) fail("s", "expected an integer >= 1");
  const int s = js.get<int>();
  const double T = number(require(doc, "T", ""), "T");
  const json& jp = require(doc, "pieces", "");
  if (!jp.is_array() || static_cast<int>(jp.size()) != s) fail("pieces", "expected s entries");
  std::vector<PathPiece> pieces;
  int n = -1;
  for (int i = 0; i < s; ++i) {
    const std::string where = "pieces[" + std::to_string(i) + "]";
    PathPiece p;
    p.u = vector(require(jp[static_cast<std::size_t>(i)], "u", where), where + ".u", n);
    n = static_cast<int>(p.u.size());
    p.v = vector(require(jp[static_cast<std::size_t>(i)], "v", where), where + ".v", n);
    pieces.push_back(std::move(p));
  }
  try {
    if (auto it = doc.find("breaks"); it != doc.end()) {
      const Eigen::VectorXd b = vector(*it, "breaks", s + 1);
      if (std::abs(b[s] - T) > 1e-12 * std::max(1.0, T)) fail("breaks", "last breakpoint must equal T");
      return PiecewiseLinearPath(std::vector<double>(b.data(), b.data() + b.size()), std::move(pieces));
    }
    return PiecewiseLinearPath::uniform(T, std::move(pieces));
  } catch (const std::invalid_argument& e) {
    throw SceneError(std::string("invalid path: ") + e.what());
  }
}

std::string serialize_path(const PiecewiseLinearPath& path) {
  json doc;
  doc["s"] = path.s();
  doc["T"] = path.T();
  if (!path.is_uniform(0.0)) doc["breaks"] = path.breaks();
  json pieces = json::array();
  for (const auto& p : path.pieces()) {
    json e;
    e["u"] = to_json(p.u);
    e["v"] = to_json(p.v);
    pieces.push_back(std::move(e));
  }
  doc["pieces"] = std::move(pieces);
  return doc.dump(2) + "\n";
}

Scene example1_scene() {
  Scene scene;
  scene.name = "example1";
  auto& d = scene.data;
  d.n = 2;
  d.T = 1.0;
  d.x0 = Eigen::Vector2d(0.0, -1.0);
  d.xT = Eigen::Vector2d(0.0, 1.0);
  const SpacePtr sp = configuration_space(2);
  const Polynomial one = Polynomial::constant(sp, 1.0);
  const Polynomial t = Polynomial::variable(sp, 0);
  const Polynomial x1 = Polynomial::variable(sp, 1);
  const Polynomial x2 = Polynomial::variable(sp, 2);
  d.constraints = {one - x1, one - x2, one + x1, one + x2};
  const Polynomial a = x1 + Polynomial::constant(sp, 1.0 / 3.0);
  const Polynomial b = x2 - Polynomial::constant(sp, 1.0 / 5.0);
  d.constraints.push_back(a * a + b * b - t * a.pow(3) - Polynomial::constant(sp, 0.25));
  return scene;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Scene load_scene(const std::string& path) { return parse_scene(read_text(path)); }

void save_scene(const Scene& scene, const std::string& path) { write_text(path, serialize_scene(scene)); }

}  // namespace momentplan
