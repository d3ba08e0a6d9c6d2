#include "fatmesh/mesh_io.hpp"

#include "fatmesh/error.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace fatmesh {

MeshFormat parse_mesh_format(const std::string& name) {
  std::string lower = name;
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char ch) { return std::tolower(ch); });
  if (lower == "off") return MeshFormat::kOff;
  if (lower == "obj") return MeshFormat::kObj;
  throw MeshIoError("unknown mesh format '" + name + "' (expected off or obj)");
}

MeshFormat mesh_format_of(const std::filesystem::path& path) {
  const auto ext = path.extension().string();
  if (ext.empty()) throw MeshIoError("cannot infer mesh format of " + path.string());
  return parse_mesh_format(ext.substr(1));
}

void write_mesh(std::ostream& out, const SimplicialComplex& c, MeshFormat format) {
  if (c.dim != 2) throw MeshIoError("only triangle complexes can be exported, got dimension " + std::to_string(c.dim));
  if (c.ambient_dim() > 3) throw MeshIoError("only meshes in R^2 or R^3 can be exported");
  for (const auto& cell : c.cells) {
    if (cell.size() != 3) throw MeshIoError("cell with " + std::to_string(cell.size()) + " vertices");
  }
  out << std::setprecision(17);
  auto coords = [&](const Point& p) {
    for (Eigen::Index i = 0; i < 3; ++i) out << (i ? " " : "") << (i < p.size() ? p[i] : 0.0);
    out << '\n';
  };
  if (format == MeshFormat::kOff) {
    out << "OFF\n" << c.vertices.size() << ' ' << c.cells.size() << " 0\n";
    for (const auto& v : c.vertices) coords(v);
    for (const auto& cell : c.cells) out << "3 " << cell[0] << ' ' << cell[1] << ' ' << cell[2] << '\n';
  } else {
    for (const auto& v : c.vertices) {
      out << "v ";
      coords(v);
    }
    for (const auto& cell : c.cells) out << "f " << cell[0] + 1 << ' ' << cell[1] + 1 << ' ' << cell[2] + 1 << '\n';
  }
}

void export_mesh(const SimplicialComplex& c, const std::filesystem::path& path, MeshFormat format) {
  std::ofstream out(path);
  if (!out) throw MeshIoError("cannot open " + path.string() + " for writing");
  write_mesh(out, c, format);
  if (!out) throw MeshIoError("write to " + path.string() + " failed");
}

namespace {

// Next non-empty, non-comment line.
bool next_line(std::istream& in, std::string& line, std::size_t& lineno) {
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
  }
  return false;
}

[[noreturn]] void fail(std::size_t lineno, const std::string& what) {
  throw MeshIoError("line " + std::to_string(lineno) + ": " + what);
}

void add_polygon(ImportedMesh& out, const std::vector<int>& poly, std::size_t lineno) {
  const auto count = static_cast<int>(out.complex.vertices.size());
  for (int v : poly) {
    if (v < 0 || v >= count) fail(lineno, "vertex index " + std::to_string(v) + " out of range");
  }
  if (poly.size() < 3) fail(lineno, "face with fewer than three vertices");
  if (poly.size() > 3) {
    out.warnings.push_back("line " + std::to_string(lineno) + ": " + std::to_string(poly.size()) +
                           "-gon fan-triangulated");
  }
  for (std::size_t k = 1; k + 1 < poly.size(); ++k) out.complex.cells.push_back({poly[0], poly[k], poly[k + 1]});
}

ImportedMesh read_off(std::istream& in) {
  ImportedMesh out;
  std::string line;
  std::size_t lineno = 0;
  if (!next_line(in, line, lineno)) throw MeshIoError("empty OFF file");
  std::istringstream head(line);
  std::string magic;
  head >> magic;
  if (magic != "OFF") fail(lineno, "missing OFF header");
  long nv = -1;
  long nf = -1;
  if (!(head >> nv >> nf)) {
    if (!next_line(in, line, lineno)) fail(lineno, "missing element counts");
    std::istringstream counts(line);
    if (!(counts >> nv >> nf)) fail(lineno, "malformed element counts");
  }
  if (nv < 0 || nf < 0) fail(lineno, "negative element counts");
  for (long i = 0; i < nv; ++i) {
    if (!next_line(in, line, lineno)) fail(lineno, "unexpected end of file in vertex list");
    std::istringstream s(line);
    Point p(3);
    if (!(s >> p[0] >> p[1] >> p[2])) fail(lineno, "malformed vertex");
    out.complex.vertices.push_back(p);
  }
  for (long i = 0; i < nf; ++i) {
    if (!next_line(in, line, lineno)) fail(lineno, "unexpected end of file in face list");
    std::istringstream s(line);
    int k = 0;
    if (!(s >> k) || k < 0) fail(lineno, "malformed face");
    std::vector<int> poly(static_cast<std::size_t>(k));
    for (auto& v : poly) {
      if (!(s >> v)) fail(lineno, "malformed face");
    }
    add_polygon(out, poly, lineno);
  }
  return out;
}

ImportedMesh read_obj(std::istream& in) {
  ImportedMesh out;
  std::string line;
  std::size_t lineno = 0;
  while (next_line(in, line, lineno)) {
    std::istringstream s(line);
    std::string tag;
    s >> tag;
    if (tag == "v") {
      Point p(3);
      if (!(s >> p[0] >> p[1] >> p[2])) fail(lineno, "malformed vertex");
      out.complex.vertices.push_back(p);
    } else if (tag == "f") {
      std::vector<int> poly;
      std::string tok;
      while (s >> tok) {
        const auto slash = tok.find('/');
        int idx = 0;
        try {
          idx = std::stoi(tok.substr(0, slash));
        } catch (const std::exception&) {
          fail(lineno, "malformed face index '" + tok + "'");
        }
        const int count = static_cast<int>(out.complex.vertices.size());
        poly.push_back(idx < 0 ? count + idx : idx - 1);
      }
      add_polygon(out, poly, lineno);
    }
  }
  return out;
}

}  // namespace

ImportedMesh read_mesh(std::istream& in, MeshFormat format) {
  auto out = format == MeshFormat::kOff ? read_off(in) : read_obj(in);
  out.complex.dim = 2;
  return out;
}

ImportedMesh import_mesh(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw MeshIoError("cannot open " + path.string());
  return read_mesh(in, mesh_format_of(path));
}

}  // namespace fatmesh
