#include "momentplan/conic/sdpa.hpp"

#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace momentplan {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct Entry {
  int mat, blk, i, j;
  double value;
};

// Appends the entries of `expr` placed at (i, j) of block `blk`:
// F_0 carries the negated constant since X = sum F_k x_k - F_0.
void emit(std::vector<Entry>& out, int blk, int i, int j, const AffineExpr& expr) {
  if (expr.constant != 0.0) out.push_back({0, blk, i, j, -expr.constant});
  for (const auto& [var, c] : expr.terms) out.push_back({var + 1, blk, i, j, c});
}

}  // namespace

std::string export_sdpa(const ConicProgram& program) {
  std::vector<int> sizes;
  std::vector<Entry> entries;

  // Diagonal block: nonnegative rows, then each equality as two opposite rows.
  std::vector<AffineExpr> diag;
  for (const auto& cone : program.cones()) {
    if (cone.kind == ConeKind::Nonnegative) diag.insert(diag.end(), cone.rows.begin(), cone.rows.end());
  }
  for (const auto& eq : program.equalities()) {
    diag.push_back(eq);
    diag.push_back(eq * -1.0);
  }
  if (!diag.empty()) {
    sizes.push_back(-static_cast<int>(diag.size()));
    const int blk = static_cast<int>(sizes.size());
    for (std::size_t k = 0; k < diag.size(); ++k) {
      const int idx = static_cast<int>(k) + 1;
      emit(entries, blk, idx, idx, diag[k]);
    }
  }
  for (const auto& cone : program.cones()) {
    if (cone.kind == ConeKind::SecondOrder) {
      // Arrow matrix [t w'; w t I] is PSD iff t >= |w|.
      sizes.push_back(cone.dim);
      const int blk = static_cast<int>(sizes.size());
      for (int k = 0; k < cone.dim; ++k) emit(entries, blk, k + 1, k + 1, cone.rows[0]);
      for (int k = 1; k < cone.dim; ++k) emit(entries, blk, 1, k + 1, cone.rows[static_cast<std::size_t>(k)]);
    } else if (cone.kind == ConeKind::Psd) {
      sizes.push_back(cone.dim);
      const int blk = static_cast<int>(sizes.size());
      int k = 0;
      for (int i = 0; i < cone.dim; ++i) {
        for (int j = i; j < cone.dim; ++j) emit(entries, blk, i + 1, j + 1, cone.rows[static_cast<std::size_t>(k++)]);
      }
    }
  }

  std::ostringstream os;
  os << "* objective constant " << fmt(program.objective().constant) << "\n";
  os << program.num_vars() << "\n" << sizes.size() << "\n";
  for (std::size_t k = 0; k < sizes.size(); ++k) os << (k ? " " : "") << sizes[k];
  os << "\n";
  std::vector<double> c(static_cast<std::size_t>(program.num_vars()), 0.0);
  for (const auto& [var, v] : program.objective().terms) c[static_cast<std::size_t>(var)] += v;
  for (std::size_t k = 0; k < c.size(); ++k) os << (k ? " " : "") << fmt(c[k]);
  os << "\n";
  for (const auto& e : entries) {
    os << e.mat << " " << e.blk << " " << e.i << " " << e.j << " " << fmt(e.value) << "\n";
  }
  return os.str();
}

namespace {

std::string strip_punct(std::string line) {
  for (char& ch : line) {
    if (ch == ',' || ch == '{' || ch == '}' || ch == '(' || ch == ')') ch = ' ';
  }
  return line;
}

}  // namespace

ConicProgram import_sdpa(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  double c0 = 0.0;
  std::vector<std::string> header;
  std::vector<std::string> body;
  bool in_header = true;
  while (std::getline(in, line)) {
    if (in_header && !line.empty() && (line[0] == '"' || line[0] == '*')) {
      const std::string tag = "* objective constant ";
      if (line.rfind(tag, 0) == 0) c0 = std::stod(line.substr(tag.size()));
      continue;
    }
    in_header = false;
    if (header.size() < 4) {
      header.push_back(strip_punct(line));
    } else if (line.find_first_not_of(" \t\r") != std::string::npos) {
      body.push_back(line);
    }
  }
  while (header.size() < 4) header.emplace_back();

  int nvars = 0, nblocks = 0;
  {
    std::istringstream h0(header[0]), h1(header[1]);
    if (!(h0 >> nvars) || !(h1 >> nblocks)) throw std::runtime_error("sdpa: malformed header");
  }
  std::vector<int> sizes;
  {
    std::istringstream h2(header[2]);
    int sz;
    while (h2 >> sz) sizes.push_back(sz);
    if (static_cast<int>(sizes.size()) != nblocks) throw std::runtime_error("sdpa: block size count mismatch");
  }
  std::vector<double> c;
  {
    std::istringstream h3(header[3]);
    double v;
    while (h3 >> v) c.push_back(v);
    if (static_cast<int>(c.size()) != nvars) throw std::runtime_error("sdpa: objective length mismatch");
  }

  ConicProgram prog;
  prog.add_variables(nvars);
  AffineExpr obj(c0);
  for (int k = 0; k < nvars; ++k) obj.add(k, c[static_cast<std::size_t>(k)]);
  prog.set_objective(obj);

  std::vector<AffineMatrix> blocks;
  blocks.reserve(sizes.size());
  for (int sz : sizes) blocks.emplace_back(std::abs(sz));
  for (const auto& l : body) {
    std::istringstream ls(l);
    int mat, blk, i, j;
    double v;
    if (!(ls >> mat >> blk >> i >> j >> v)) throw std::runtime_error("sdpa: malformed entry: " + l);
    if (blk < 1 || blk > nblocks || mat < 0 || mat > nvars) throw std::runtime_error("sdpa: index out of range");
    auto& B = blocks[static_cast<std::size_t>(blk - 1)];
    if (i < 1 || j < 1 || i > B.size() || j > B.size()) throw std::runtime_error("sdpa: entry outside block");
    if (sizes[static_cast<std::size_t>(blk - 1)] < 0 && i != j) throw std::runtime_error("sdpa: off-diagonal entry in diagonal block");
    AffineExpr& e = B.at(i - 1, j - 1);
    if (mat == 0) {
      e.constant -= v;
    } else {
      e.add(mat - 1, v);
    }
  }

  for (std::size_t b = 0; b < blocks.size(); ++b) {
    auto& B = blocks[b];
    for (auto& e : B.upper()) e.compress();
    if (sizes[b] > 0) {
      prog.add_psd(B);
      continue;
    }
    // Pair each diagonal row with a later exact negation into an equality.
    const int m = B.size();
    std::vector<bool> used(static_cast<std::size_t>(m), false);
    std::map<std::pair<std::vector<std::pair<int, double>>, double>, std::vector<int>> index;
    for (int k = 0; k < m; ++k) index[{B.at(k, k).terms, B.at(k, k).constant}].push_back(k);
    for (int k = 0; k < m; ++k) {
      if (used[static_cast<std::size_t>(k)]) continue;
      const AffineExpr& e = B.at(k, k);
      AffineExpr neg = e * -1.0;
      auto it = index.find({neg.terms, neg.constant});
      int partner = -1;
      if (it != index.end()) {
        for (int cand : it->second) {
          if (cand > k && !used[static_cast<std::size_t>(cand)]) {
            partner = cand;
            break;
          }
        }
      }
      used[static_cast<std::size_t>(k)] = true;
      if (partner >= 0) {
        used[static_cast<std::size_t>(partner)] = true;
        prog.add_equality(e);
      } else {
        prog.add_nonnegative(e);
      }
    }
  }
  return prog;
}

}  // namespace momentplan
