#pragma once

// OFF / OBJ triangle surfaces and the ASCII tet format:
//
//   # comments and blank lines are ignored
//   RTET 1
//   vertices N
//   x y z            (N lines)
//   tets M
//   a b c d          (M lines, 0-based, positively oriented)
//   boundary K
//   a b c            (K lines, 0-based, wound outward)

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "reilly/mesh.hpp"

namespace reilly {

enum class MeshFormat { Off, Obj, Tet };

inline MeshFormat format_from_path(const std::filesystem::path& p) {
  auto ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  if (ext == ".off") return MeshFormat::Off;
  if (ext == ".obj") return MeshFormat::Obj;
  if (ext == ".tet" || ext == ".rtet") return MeshFormat::Tet;
  throw MeshError(MeshErrorCode::Io, "unknown mesh extension '" + ext + "'");
}

namespace detail {

// Line reader that skips blanks and '#' comments and tracks line numbers.
class LineReader {
 public:
  explicit LineReader(std::istream& is) : is_(is) {}

  bool next(std::istringstream& out) {
    std::string line;
    while (std::getline(is_, line)) {
      ++line_;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      out.clear();
      out.str(line);
      return true;
    }
    return false;
  }

  std::istringstream require(const char* what) {
    std::istringstream ss;
    if (!next(ss)) throw MeshError(MeshErrorCode::Parse, std::string("unexpected end of file, expected ") + what, line_ + 1);
    return ss;
  }

  int line() const { return line_; }

 private:
  std::istream& is_;
  int line_ = 0;
};

inline void check_index(int idx, std::size_t n, int line) {
  if (idx < 0 || static_cast<std::size_t>(idx) >= n)
    throw MeshError(MeshErrorCode::IndexOutOfRange, "vertex index " + std::to_string(idx) + " out of range", line);
}

}  // namespace detail

inline SurfaceMesh read_off(std::istream& is) {
  detail::LineReader r(is);
  auto ss = r.require("OFF header");
  std::string magic;
  ss >> magic;
  if (magic != "OFF") throw MeshError(MeshErrorCode::Parse, "missing OFF header", r.line());
  long nv = -1, nf = -1, ne = 0;
  if (!(ss >> nv)) {
    ss = r.require("OFF counts");
    ss >> nv;
  }
  if (!(ss >> nf >> ne) || nv < 0 || nf < 0) throw MeshError(MeshErrorCode::Parse, "bad OFF counts", r.line());
  SurfaceMesh m;
  m.vertices.reserve(nv);
  for (long i = 0; i < nv; ++i) {
    ss = r.require("vertex");
    double x, y, z;
    if (!(ss >> x >> y >> z)) throw MeshError(MeshErrorCode::Parse, "bad vertex", r.line());
    m.vertices.emplace_back(x, y, z);
  }
  for (long i = 0; i < nf; ++i) {
    ss = r.require("face");
    int k;
    Tri t;
    if (!(ss >> k)) throw MeshError(MeshErrorCode::Parse, "bad face", r.line());
    if (k != 3) throw MeshError(MeshErrorCode::Parse, "only triangular faces are supported", r.line());
    if (!(ss >> t[0] >> t[1] >> t[2])) throw MeshError(MeshErrorCode::Parse, "bad face indices", r.line());
    for (int v : t) detail::check_index(v, m.vertices.size(), r.line());
    m.faces.push_back(t);
  }
  return m;
}

// Geometry-only OBJ import: v and f records; texture/normal references ignored.
inline SurfaceMesh read_obj(std::istream& is) {
  detail::LineReader r(is);
  SurfaceMesh m;
  std::istringstream ss;
  struct PendingFace {
    std::array<long, 3> idx;
    int line;
  };
  std::vector<PendingFace> pending;
  while (r.next(ss)) {
    std::string tag;
    ss >> tag;
    if (tag == "v") {
      double x, y, z;
      if (!(ss >> x >> y >> z)) throw MeshError(MeshErrorCode::Parse, "bad vertex", r.line());
      m.vertices.emplace_back(x, y, z);
    } else if (tag == "f") {
      std::vector<long> ids;
      std::string tok;
      while (ss >> tok) {
        const auto slash = tok.find('/');
        try {
          long v = std::stol(tok.substr(0, slash));
          if (v < 0) v = static_cast<long>(m.vertices.size()) + v + 1;  // relative index
          ids.push_back(v - 1);
        } catch (const std::exception&) {
          throw MeshError(MeshErrorCode::Parse, "bad face token '" + tok + "'", r.line());
        }
      }
      if (ids.size() != 3) throw MeshError(MeshErrorCode::Parse, "only triangular faces are supported", r.line());
      pending.push_back({{ids[0], ids[1], ids[2]}, r.line()});
    }
    // vt, vn, g, o, s, usemtl, mtllib ... are geometry-irrelevant
  }
  for (const auto& f : pending) {
    Tri t;
    for (int k = 0; k < 3; ++k) {
      detail::check_index(static_cast<int>(f.idx[k]), m.vertices.size(), f.line);
      t[k] = static_cast<int>(f.idx[k]);
    }
    m.faces.push_back(t);
  }
  return m;
}

inline SolidMesh read_tet(std::istream& is) {
  detail::LineReader r(is);
  auto ss = r.require("RTET header");
  std::string magic;
  int version = 0;
  ss >> magic >> version;
  if (magic != "RTET" || version != 1) throw MeshError(MeshErrorCode::Parse, "expected 'RTET 1' header", r.line());
  auto count = [&](const char* key) {
    auto s = r.require(key);
    std::string k;
    long n = -1;
    s >> k >> n;
    if (k != key || n < 0) throw MeshError(MeshErrorCode::Parse, std::string("expected '") + key + " <count>'", r.line());
    return n;
  };
  SolidMesh m;
  const long nv = count("vertices");
  for (long i = 0; i < nv; ++i) {
    ss = r.require("vertex");
    double x, y, z;
    if (!(ss >> x >> y >> z)) throw MeshError(MeshErrorCode::Parse, "bad vertex", r.line());
    m.vertices.emplace_back(x, y, z);
  }
  const long nt = count("tets");
  for (long i = 0; i < nt; ++i) {
    ss = r.require("tet");
    Tet t;
    if (!(ss >> t[0] >> t[1] >> t[2] >> t[3])) throw MeshError(MeshErrorCode::Parse, "bad tet", r.line());
    for (int v : t) detail::check_index(v, m.vertices.size(), r.line());
    m.tets.push_back(t);
  }
  const long nb = count("boundary");
  for (long i = 0; i < nb; ++i) {
    ss = r.require("boundary face");
    Tri t;
    if (!(ss >> t[0] >> t[1] >> t[2])) throw MeshError(MeshErrorCode::Parse, "bad boundary face", r.line());
    for (int v : t) detail::check_index(v, m.vertices.size(), r.line());
    m.boundary_faces.push_back(t);
  }
  return m;
}

namespace detail {
inline std::ifstream open_in(const std::filesystem::path& p) {
  std::ifstream is(p);
  if (!is) throw MeshError(MeshErrorCode::Io, "cannot open '" + p.string() + "'");
  return is;
}
inline std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream os(p);
  if (!os) throw MeshError(MeshErrorCode::Io, "cannot write '" + p.string() + "'");
  os.precision(17);
  return os;
}
}  // namespace detail

// Loads and validates a closed triangle surface.
inline SurfaceComplex load_surface(const std::filesystem::path& p) {
  auto is = detail::open_in(p);
  const auto fmt = format_from_path(p);
  if (fmt == MeshFormat::Tet) throw MeshError(MeshErrorCode::Io, "expected a surface mesh, got a tet mesh");
  return SurfaceComplex(fmt == MeshFormat::Off ? read_off(is) : read_obj(is));
}

inline SolidMesh load_solid(const std::filesystem::path& p) {
  auto is = detail::open_in(p);
  if (format_from_path(p) != MeshFormat::Tet) throw MeshError(MeshErrorCode::Io, "expected a .tet mesh");
  SolidMesh m = read_tet(is);
  validate_solid(m);
  return m;
}

inline void write_off(std::ostream& os, const SurfaceMesh& m) {
  os << "OFF\n" << m.vertices.size() << ' ' << m.faces.size() << " 0\n";
  for (const auto& v : m.vertices) os << v.x() << ' ' << v.y() << ' ' << v.z() << '\n';
  for (const auto& f : m.faces) os << "3 " << f[0] << ' ' << f[1] << ' ' << f[2] << '\n';
}

inline void write_obj(std::ostream& os, const SurfaceMesh& m) {
  for (const auto& v : m.vertices) os << "v " << v.x() << ' ' << v.y() << ' ' << v.z() << '\n';
  for (const auto& f : m.faces) os << "f " << f[0] + 1 << ' ' << f[1] + 1 << ' ' << f[2] + 1 << '\n';
}

inline void write_tet(std::ostream& os, const SolidMesh& m) {
  os << "RTET 1\nvertices " << m.vertices.size() << '\n';
  for (const auto& v : m.vertices) os << v.x() << ' ' << v.y() << ' ' << v.z() << '\n';
  os << "tets " << m.tets.size() << '\n';
  for (const auto& t : m.tets) os << t[0] << ' ' << t[1] << ' ' << t[2] << ' ' << t[3] << '\n';
  os << "boundary " << m.boundary_faces.size() << '\n';
  for (const auto& f : m.boundary_faces) os << f[0] << ' ' << f[1] << ' ' << f[2] << '\n';
}

inline void save_surface(const std::filesystem::path& p, const SurfaceMesh& m) {
  auto os = detail::open_out(p);
  if (format_from_path(p) == MeshFormat::Obj) write_obj(os, m);
  else write_off(os, m);
}

inline void save_solid(const std::filesystem::path& p, const SolidMesh& m) {
  auto os = detail::open_out(p);
  write_tet(os, m);
}

inline nlohmann::json mesh_statistics(const SurfaceComplex& c) {
  double lmin = std::numeric_limits<double>::infinity(), lmax = 0.0;
  for (const auto& e : c.edges()) {
    const double l = (c.vertices()[e.b] - c.vertices()[e.a]).norm();
    lmin = std::min(lmin, l);
    lmax = std::max(lmax, l);
  }
  return {{"kind", "surface"},
          {"vertices", c.num_vertices()},
          {"edges", c.num_edges()},
          {"faces", c.num_faces()},
          {"euler_characteristic", c.euler_characteristic()},
          {"components", c.num_components()},
          {"genus", c.genus()},
          {"area", c.total_area()},
          {"enclosed_volume", c.enclosed_volume()},
          {"edge_length", {{"min", lmin}, {"mean", c.mean_edge_length()}, {"max", lmax}}}};
}

inline nlohmann::json mesh_statistics(const SolidMesh& m) {
  const SurfaceComplex b(m.boundary_surface().first);
  return {{"kind", "solid"},
          {"vertices", m.vertices.size()},
          {"tets", m.tets.size()},
          {"boundary_faces", m.boundary_faces.size()},
          {"volume", m.volume()},
          {"boundary_area", m.boundary_area()},
          {"boundary", mesh_statistics(b)}};
}

}  // namespace reilly
