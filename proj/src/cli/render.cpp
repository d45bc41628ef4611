#include "momentplan/cli/render.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace momentplan {

namespace {

const std::array<const char*, 6> kPalette = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b", "#e377c2"};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

std::string render_frame(const Scene& scene, const PiecewiseLinearPath* path, double t, const RenderOptions& opts) {
  const ProblemData& d = scene.data;
  if (opts.grid < 2) throw std::invalid_argument("render grid needs at least 2 cells");
  if (opts.px < 0 || opts.px >= d.n || (d.n >= 2 && (opts.py < 0 || opts.py >= d.n || opts.px == opts.py))) {
    throw std::invalid_argument("render projection axes out of range");
  }
  if (path && path->dim() != d.n) throw std::invalid_argument("path dimension does not match the scene");
  const int a = opts.px, b = d.n >= 2 ? opts.py : -1;

  // View window.
  double lo[2] = {-1.0, -1.0}, hi[2] = {1.0, 1.0};
  for (int k = 0; k < 2; ++k) {
    const int c = k == 0 ? a : b;
    if (c < 0) continue;
    lo[k] = std::min({lo[k], d.x0[c], d.xT[c]}) - opts.margin;
    hi[k] = std::max({hi[k], d.x0[c], d.xT[c]}) + opts.margin;
  }
  const double W = opts.pixels;
  auto sx = [&](double x) { return (x - lo[0]) / (hi[0] - lo[0]) * W; };
  auto sy = [&](double y) { return W - (y - lo[1]) / (hi[1] - lo[1]) * W; };

  Eigen::VectorXd base = path ? (*path)(std::clamp(t, 0.0, path->T())) : Eigen::VectorXd(0.5 * (d.x0 + d.xT));

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opts.pixels << "\" height=\"" << opts.pixels
      << "\" viewBox=\"0 0 " << opts.pixels << ' ' << opts.pixels << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"8\" y=\"18\" font-family=\"monospace\" font-size=\"13\">" << scene.name << "  t=" << fmt(t) << "</text>\n";

  const int G = opts.grid;
  std::vector<double> val(static_cast<std::size_t>((G + 1) * (G + 1)));
  std::vector<double> pt(static_cast<std::size_t>(d.n + 1));
  for (std::size_t k = 0; k < d.constraints.size(); ++k) {
    const Polynomial& g = d.constraints[k];
    auto eval = [&](double x, double y) {
      pt[0] = t;
      for (int j = 0; j < d.n; ++j) pt[static_cast<std::size_t>(j + 1)] = base[j];
      pt[static_cast<std::size_t>(a + 1)] = x;
      if (b >= 0) pt[static_cast<std::size_t>(b + 1)] = y;
      return g.evaluate(pt);
    };
    auto X = [&](int i) { return lo[0] + (hi[0] - lo[0]) * i / G; };
    auto Y = [&](int j) { return lo[1] + (hi[1] - lo[1]) * j / G; };
    for (int j = 0; j <= G; ++j)
      for (int i = 0; i <= G; ++i) val[static_cast<std::size_t>(j * (G + 1) + i)] = eval(X(i), Y(j));
    auto f = [&](int i, int j) { return val[static_cast<std::size_t>(j * (G + 1) + i)]; };

    std::ostringstream seg;
    int nseg = 0;
    for (int j = 0; j < G; ++j) {
      for (int i = 0; i < G; ++i) {
        const double c[4] = {f(i, j), f(i + 1, j), f(i + 1, j + 1), f(i, j + 1)};
        const bool s[4] = {c[0] >= 0, c[1] >= 0, c[2] >= 0, c[3] >= 0};
        // Edge e joins corners e and e+1 (mod 4): bottom, right, top, left.
        std::array<std::pair<double, double>, 4> cross;
        std::array<bool, 4> has{};
        const double cx[4] = {X(i), X(i + 1), X(i + 1), X(i)}, cy[4] = {Y(j), Y(j), Y(j + 1), Y(j + 1)};
        int count = 0;
        for (int e = 0; e < 4; ++e) {
          const int q = (e + 1) % 4;
          if (s[e] == s[q]) continue;
          const double w = c[e] / (c[e] - c[q]);
          cross[static_cast<std::size_t>(e)] = {cx[e] + w * (cx[q] - cx[e]), cy[e] + w * (cy[q] - cy[e])};
          has[static_cast<std::size_t>(e)] = true;
          ++count;
        }
        auto line = [&](int e1, int e2) {
          const auto& p = cross[static_cast<std::size_t>(e1)];
          const auto& q = cross[static_cast<std::size_t>(e2)];
          seg << 'M' << fmt(sx(p.first)) << ' ' << fmt(sy(p.second)) << 'L' << fmt(sx(q.first)) << ' ' << fmt(sy(q.second));
          ++nseg;
        };
        if (count == 2) {
          int e1 = -1, e2 = -1;
          for (int e = 0; e < 4; ++e) {
            if (!has[static_cast<std::size_t>(e)]) continue;
            (e1 < 0 ? e1 : e2) = e;
          }
          line(e1, e2);
        } else if (count == 4) {
          // Saddle: the center value decides which diagonal pair is joined.
          const bool center = (c[0] + c[1] + c[2] + c[3]) / 4.0 >= 0;
          if (center == s[0]) {
            line(0, 1);
            line(2, 3);
          } else {
            line(3, 0);
            line(1, 2);
          }
        }
      }
    }
    if (nseg > 0) {
      out << "<path class=\"g" << k << "\" fill=\"none\" stroke=\"" << kPalette[k % kPalette.size()]
          << "\" stroke-width=\"1.5\" d=\"" << seg.str() << "\"/>\n";
    }
  }

  auto coord = [&](const Eigen::VectorXd& x) {
    return std::make_pair(sx(x[a]), b >= 0 ? sy(x[b]) : W / 2.0);
  };
  if (path) {
    std::ostringstream pts;
    auto add = [&](double tau) {
      const auto [u, v] = coord((*path)(tau));
      pts << fmt(u) << ',' << fmt(v) << ' ';
    };
    add(0.0);
    const double tend = std::clamp(t, 0.0, path->T());
    for (double br : path->breaks())
      if (br > 0.0 && br < tend) add(br);
    add(tend);
    out << "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"2\" points=\"" << pts.str() << "\"/>\n";
    const auto [u, v] = coord((*path)(tend));
    out << "<circle cx=\"" << fmt(u) << "\" cy=\"" << fmt(v) << "\" r=\"5\" fill=\"black\"/>\n";
  }
  for (const auto& [x, color] : {std::make_pair(d.x0, "#2ca02c"), std::make_pair(d.xT, "#ff7f0e")}) {
    const auto [u, v] = coord(x);
    out << "<rect x=\"" << fmt(u - 5) << "\" y=\"" << fmt(v - 5) << "\" width=\"10\" height=\"10\" fill=\"" << color << "\"/>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace momentplan
