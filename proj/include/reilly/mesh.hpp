#pragma once

// Triangle surfaces and tetrahedral solids in R^3.
//
// Surfaces store faces with their winding as read or generated; the inner unit
// normal used by curvature and boundary terms is derived per component from
// the sign of the enclosed volume, so it points into the bounded solid.

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace reilly {

using Vec3 = Eigen::Vector3d;
using Tri = std::array<int, 3>;
using Tet = std::array<int, 4>;

enum class MeshErrorCode {
  Io,
  Parse,
  IndexOutOfRange,
  DegenerateFace,
  NonManifoldEdge,
  InconsistentOrientation,
  UnreferencedVertex,
  OpenBoundary,
  InvertedTet,
  DegenerateOneRing,
  NonPositiveWeight,
};

inline const char* to_string(MeshErrorCode c) {
  switch (c) {
    case MeshErrorCode::Io: return "io";
    case MeshErrorCode::Parse: return "parse";
    case MeshErrorCode::IndexOutOfRange: return "index_out_of_range";
    case MeshErrorCode::DegenerateFace: return "degenerate_face";
    case MeshErrorCode::NonManifoldEdge: return "non_manifold_edge";
    case MeshErrorCode::InconsistentOrientation: return "inconsistent_orientation";
    case MeshErrorCode::UnreferencedVertex: return "unreferenced_vertex";
    case MeshErrorCode::OpenBoundary: return "open_boundary";
    case MeshErrorCode::InvertedTet: return "inverted_tet";
    case MeshErrorCode::DegenerateOneRing: return "degenerate_one_ring";
    case MeshErrorCode::NonPositiveWeight: return "non_positive_weight";
  }
  return "unknown";
}

class MeshError : public std::runtime_error {
 public:
  MeshError(MeshErrorCode code, const std::string& what, int line = 0)
      : std::runtime_error(std::string(to_string(code)) + ": " + what +
                           (line > 0 ? " (line " + std::to_string(line) + ")" : "")),
        code_(code),
        line_(line) {}

  MeshErrorCode code() const { return code_; }
  int line() const { return line_; }

 private:
  MeshErrorCode code_;
  int line_;
};

struct SurfaceMesh {
  std::vector<Vec3> vertices;
  std::vector<Tri> faces;
};

struct Edge {
  int a, b;  // a < b; the edge is oriented a -> b
};

// Validated closed (or, on request, open) oriented triangle surface with
// derived incidence tables. Edges are sorted lexicographically by (a, b).
class SurfaceComplex {
 public:
  struct Options {
    bool require_closed = true;
  };

  SurfaceComplex() = default;
  explicit SurfaceComplex(SurfaceMesh mesh) : SurfaceComplex(std::move(mesh), Options{}) {}
  SurfaceComplex(SurfaceMesh mesh, Options opts) : mesh_(std::move(mesh)) { build(opts); }

  const SurfaceMesh& mesh() const { return mesh_; }
  const std::vector<Vec3>& vertices() const { return mesh_.vertices; }
  const std::vector<Tri>& faces() const { return mesh_.faces; }
  const std::vector<Edge>& edges() const { return edges_; }
  int num_vertices() const { return static_cast<int>(mesh_.vertices.size()); }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  int num_faces() const { return static_cast<int>(mesh_.faces.size()); }

  // Edge k of face f (opposite vertex k) and the sign of the face's traversal.
  int face_edge(int f, int k) const { return face_edges_[f][k]; }
  int face_edge_sign(int f, int k) const { return face_edge_signs_[f][k]; }
  const std::vector<int>& edge_faces(int e) const { return edge_faces_[e]; }

  int edge_index(int a, int b) const {
    if (a > b) std::swap(a, b);
    const auto it = edge_lookup_.find({a, b});
    return it == edge_lookup_.end() ? -1 : it->second;
  }

  const std::vector<int>& vertex_faces(int v) const { return vertex_faces_[v]; }
  const std::vector<int>& vertex_neighbors(int v) const { return vertex_neighbors_[v]; }
  bool is_boundary_vertex(int v) const { return boundary_vertex_[v]; }
  bool is_closed() const { return num_boundary_edges_ == 0; }

  int num_components() const { return num_components_; }
  int component_of_vertex(int v) const { return vertex_component_[v]; }
  int euler_characteristic() const { return num_vertices() - num_edges() + num_faces(); }
  // Total genus for closed surfaces: sum over components of (2 - chi_c)/2.
  int genus() const { return (2 * num_components_ - euler_characteristic()) / 2; }
  int first_betti_number() const { return 2 * genus(); }

  // +1 if the face winding normal points out of the enclosed solid of that
  // vertex's component, -1 if it points in.
  int winding_sign(int v) const { return component_winding_[vertex_component_[v]]; }

  Vec3 face_area_normal(int f) const {
    const auto& t = mesh_.faces[f];
    const auto& x = mesh_.vertices;
    return 0.5 * (x[t[1]] - x[t[0]]).cross(x[t[2]] - x[t[0]]);
  }
  double face_area(int f) const { return face_area_normal(f).norm(); }
  double total_area() const {
    double a = 0.0;
    for (int f = 0; f < num_faces(); ++f) a += face_area(f);
    return a;
  }
  double enclosed_volume() const {
    double v = 0.0;
    for (const auto& t : mesh_.faces)
      v += mesh_.vertices[t[0]].dot(mesh_.vertices[t[1]].cross(mesh_.vertices[t[2]])) / 6.0;
    return std::abs(v);
  }
  double mean_edge_length() const {
    double s = 0.0;
    for (const auto& e : edges_) s += (mesh_.vertices[e.b] - mesh_.vertices[e.a]).norm();
    return edges_.empty() ? 0.0 : s / edges_.size();
  }

  // Vertices within `rings` edge hops of v, excluding v, in BFS order.
  std::vector<int> ring(int v, int rings) const {
    std::vector<int> out;
    std::vector<int> frontier{v};
    std::vector<int> seen{v};
    for (int r = 0; r < rings; ++r) {
      std::vector<int> next;
      for (int u : frontier)
        for (int w : vertex_neighbors_[u])
          if (std::find(seen.begin(), seen.end(), w) == seen.end()) {
            seen.push_back(w);
            next.push_back(w);
            out.push_back(w);
          }
      frontier = std::move(next);
    }
    return out;
  }

 private:
  void build(const Options& opts) {
    const int nv = num_vertices();
    std::map<std::pair<int, int>, std::pair<int, int>> directed;  // (a<b) -> (#forward, #backward)
    for (int f = 0; f < num_faces(); ++f) {
      const auto& t = mesh_.faces[f];
      for (int k = 0; k < 3; ++k) {
        if (t[k] < 0 || t[k] >= nv)
          throw MeshError(MeshErrorCode::IndexOutOfRange, "face " + std::to_string(f) + " references vertex " +
                                                              std::to_string(t[k]));
      }
      if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2])
        throw MeshError(MeshErrorCode::DegenerateFace, "face " + std::to_string(f) + " repeats a vertex");
      for (int k = 0; k < 3; ++k) {
        const int a = t[(k + 1) % 3], b = t[(k + 2) % 3];
        auto& cnt = directed[{std::min(a, b), std::max(a, b)}];
        (a < b ? cnt.first : cnt.second) += 1;
      }
    }
    for (const auto& [key, cnt] : directed) {
      const int total = cnt.first + cnt.second;
      if (total > 2)
        throw MeshError(MeshErrorCode::NonManifoldEdge, "edge (" + std::to_string(key.first) + "," +
                                                            std::to_string(key.second) + ") has " +
                                                            std::to_string(total) + " incident faces");
      if (cnt.first > 1 || cnt.second > 1)
        throw MeshError(MeshErrorCode::InconsistentOrientation,
                        "edge (" + std::to_string(key.first) + "," + std::to_string(key.second) +
                            ") is traversed twice in the same direction");
    }
    std::vector<char> used(nv, 0);
    for (const auto& t : mesh_.faces)
      for (int v : t) used[v] = 1;
    for (int v = 0; v < nv; ++v)
      if (!used[v]) throw MeshError(MeshErrorCode::UnreferencedVertex, "vertex " + std::to_string(v) + " is unused");

    edges_.reserve(directed.size());
    edge_faces_.assign(directed.size(), {});
    boundary_vertex_.assign(nv, false);
    num_boundary_edges_ = 0;
    for (const auto& [key, cnt] : directed) {
      edge_lookup_[key] = static_cast<int>(edges_.size());
      edges_.push_back({key.first, key.second});
      if (cnt.first + cnt.second == 1) {
        ++num_boundary_edges_;
        boundary_vertex_[key.first] = boundary_vertex_[key.second] = true;
      }
    }
    if (opts.require_closed && num_boundary_edges_ > 0)
      throw MeshError(MeshErrorCode::OpenBoundary,
                      std::to_string(num_boundary_edges_) + " boundary edges on a surface required to be closed");

    face_edges_.resize(num_faces());
    face_edge_signs_.resize(num_faces());
    vertex_faces_.assign(nv, {});
    vertex_neighbors_.assign(nv, {});
    for (int f = 0; f < num_faces(); ++f) {
      const auto& t = mesh_.faces[f];
      for (int k = 0; k < 3; ++k) {
        const int a = t[(k + 1) % 3], b = t[(k + 2) % 3];
        const int e = edge_index(a, b);
        face_edges_[f][k] = e;
        face_edge_signs_[f][k] = a < b ? 1 : -1;
        edge_faces_[e].push_back(f);
        vertex_faces_[t[k]].push_back(f);
      }
    }
    for (const auto& e : edges_) {
      vertex_neighbors_[e.a].push_back(e.b);
      vertex_neighbors_[e.b].push_back(e.a);
    }

    // Connected components by union-find over edges.
    std::vector<int> parent(nv);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    for (const auto& e : edges_) parent[find(e.a)] = find(e.b);
    std::map<int, int> roots;
    vertex_component_.resize(nv);
    for (int v = 0; v < nv; ++v) {
      const int r = find(v);
      const auto it = roots.try_emplace(r, static_cast<int>(roots.size())).first;
      vertex_component_[v] = it->second;
    }
    num_components_ = static_cast<int>(roots.size());

    std::vector<double> signed_volume(num_components_, 0.0);
    for (const auto& t : mesh_.faces) {
      // Closed components: the signed volume does not depend on the origin.
      const auto& x = mesh_.vertices;
      signed_volume[vertex_component_[t[0]]] += x[t[0]].dot(x[t[1]].cross(x[t[2]])) / 6.0;
    }
    component_winding_.resize(num_components_);
    for (int c = 0; c < num_components_; ++c) component_winding_[c] = signed_volume[c] >= 0 ? 1 : -1;
  }

  SurfaceMesh mesh_;
  std::vector<Edge> edges_;
  std::map<std::pair<int, int>, int> edge_lookup_;
  std::vector<std::array<int, 3>> face_edges_;
  std::vector<std::array<int, 3>> face_edge_signs_;
  std::vector<std::vector<int>> edge_faces_;
  std::vector<std::vector<int>> vertex_faces_;
  std::vector<std::vector<int>> vertex_neighbors_;
  std::vector<bool> boundary_vertex_;
  int num_boundary_edges_ = 0;
  int num_components_ = 0;
  std::vector<int> vertex_component_;
  std::vector<int> component_winding_;
};

inline double tet_signed_volume(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
  return (b - a).dot((c - a).cross(d - a)) / 6.0;
}

// Tetrahedral solid. Tets are positively oriented. Boundary faces carry a
// winding whose right-hand normal points out of the solid; the inner normal
// is its negation.
struct SolidMesh {
  std::vector<Vec3> vertices;
  std::vector<Tet> tets;
  std::vector<Tri> boundary_faces;

  double volume() const {
    double v = 0.0;
    for (const auto& t : tets) v += tet_signed_volume(vertices[t[0]], vertices[t[1]], vertices[t[2]], vertices[t[3]]);
    return v;
  }

  double boundary_area() const {
    double a = 0.0;
    for (const auto& f : boundary_faces)
      a += 0.5 * (vertices[f[1]] - vertices[f[0]]).cross(vertices[f[2]] - vertices[f[0]]).norm();
    return a;
  }

  // Boundary as a standalone surface, with the map back to solid vertex ids.
  std::pair<SurfaceMesh, std::vector<int>> boundary_surface() const {
    std::vector<int> to_local(vertices.size(), -1);
    std::vector<int> to_solid;
    SurfaceMesh s;
    for (const auto& f : boundary_faces) {
      Tri t;
      for (int k = 0; k < 3; ++k) {
        int& l = to_local[f[k]];
        if (l < 0) {
          l = static_cast<int>(to_solid.size());
          to_solid.push_back(f[k]);
          s.vertices.push_back(vertices[f[k]]);
        }
        t[k] = l;
      }
      s.faces.push_back(t);
    }
    return {std::move(s), std::move(to_solid)};
  }
};

// Checks tet orientation, that boundary faces are exactly the faces with one
// incident tet, and that their winding points outward.
inline void validate_solid(const SolidMesh& m) {
  const int nv = static_cast<int>(m.vertices.size());
  std::map<std::array<int, 3>, std::pair<int, int>> face_count;  // sorted face -> (count, outward parity key)
  std::vector<char> used(nv, 0);
  for (std::size_t i = 0; i < m.tets.size(); ++i) {
    const auto& t = m.tets[i];
    for (int v : t) {
      if (v < 0 || v >= nv)
        throw MeshError(MeshErrorCode::IndexOutOfRange, "tet " + std::to_string(i) + " references vertex " +
                                                            std::to_string(v));
      used[v] = 1;
    }
    const double vol = tet_signed_volume(m.vertices[t[0]], m.vertices[t[1]], m.vertices[t[2]], m.vertices[t[3]]);
    if (!(vol > 0.0)) throw MeshError(MeshErrorCode::InvertedTet, "tet " + std::to_string(i) + " has volume " + std::to_string(vol));
    for (int k = 0; k < 4; ++k) {
      std::array<int, 3> f{t[(k + 1) % 4], t[(k + 2) % 4], t[(k + 3) % 4]};
      std::sort(f.begin(), f.end());
      face_count[f].first += 1;
    }
  }
  for (int v = 0; v < nv; ++v)
    if (!used[v]) throw MeshError(MeshErrorCode::UnreferencedVertex, "vertex " + std::to_string(v) + " is in no tet");
  std::size_t exposed = 0;
  for (const auto& [f, c] : face_count) {
    if (c.first > 2) throw MeshError(MeshErrorCode::NonManifoldEdge, "triangle shared by more than two tets");
    if (c.first == 1) ++exposed;
  }
  if (exposed != m.boundary_faces.size())
    throw MeshError(MeshErrorCode::OpenBoundary, "boundary face list has " + std::to_string(m.boundary_faces.size()) +
                                                     " faces, mesh exposes " + std::to_string(exposed));
  for (std::size_t i = 0; i < m.boundary_faces.size(); ++i) {
    auto f = m.boundary_faces[i];
    std::array<int, 3> s = f;
    std::sort(s.begin(), s.end());
    const auto it = face_count.find(s);
    if (it == face_count.end() || it->second.first != 1)
      throw MeshError(MeshErrorCode::OpenBoundary, "boundary face " + std::to_string(i) + " is not exposed");
  }
  // Outward winding <=> the boundary encloses positive volume.
  double v = 0.0;
  for (const auto& f : m.boundary_faces)
    v += m.vertices[f[0]].dot(m.vertices[f[1]].cross(m.vertices[f[2]])) / 6.0;
  if (v <= 0.0) throw MeshError(MeshErrorCode::InconsistentOrientation, "boundary faces are not wound outward");
  SurfaceComplex(m.boundary_surface().first);  // closed, manifold, consistently oriented
}

// ---------------------------------------------------------------------------
// Generators

inline SurfaceMesh icosahedron(double radius = 1.0) {
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  SurfaceMesh m;
  m.vertices = {{-1, t, 0}, {1, t, 0},  {-1, -t, 0}, {1, -t, 0}, {0, -1, t}, {0, 1, t},
                {0, -1, -t}, {0, 1, -t}, {t, 0, -1},  {t, 0, 1},  {-t, 0, -1}, {-t, 0, 1}};
  for (auto& v : m.vertices) v = radius * v.normalized();
  m.faces = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
             {11, 10, 2}, {10, 7, 6}, {7, 1, 8},  {3, 9, 4},  {3, 4, 2},   {3, 2, 6}, {3, 6, 8},
             {3, 8, 9},  {4, 9, 5},  {2, 4, 11},  {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};
  return m;
}

// Loop-style 1:4 split of every face; new vertices at edge midpoints.
inline SurfaceMesh subdivide(const SurfaceMesh& in) {
  SurfaceMesh out;
  out.vertices = in.vertices;
  std::map<std::pair<int, int>, int> mid;
  auto midpoint = [&](int a, int b) {
    const std::pair<int, int> key{std::min(a, b), std::max(a, b)};
    const auto it = mid.find(key);
    if (it != mid.end()) return it->second;
    const int id = static_cast<int>(out.vertices.size());
    out.vertices.push_back(0.5 * (in.vertices[a] + in.vertices[b]));
    mid.emplace(key, id);
    return id;
  };
  out.faces.reserve(in.faces.size() * 4);
  for (const auto& t : in.faces) {
    const int ab = midpoint(t[0], t[1]), bc = midpoint(t[1], t[2]), ca = midpoint(t[2], t[0]);
    out.faces.push_back({t[0], ab, ca});
    out.faces.push_back({t[1], bc, ab});
    out.faces.push_back({t[2], ca, bc});
    out.faces.push_back({ab, bc, ca});
  }
  return out;
}

inline SurfaceMesh generate_icosphere(int subdivisions, double radius = 1.0) {
  if (subdivisions < 0) throw std::invalid_argument("icosphere: negative subdivision level");
  if (!(radius > 0.0)) throw std::invalid_argument("icosphere: radius must be positive");
  SurfaceMesh m = icosahedron(1.0);
  for (int s = 0; s < subdivisions; ++s) {
    m = subdivide(m);
    for (auto& v : m.vertices) v.normalize();
  }
  for (auto& v : m.vertices) v *= radius;
  return m;
}

inline SurfaceMesh generate_ellipsoid(double a, double b, double c, int subdivisions) {
  if (!(a > 0.0 && b > 0.0 && c > 0.0)) throw std::invalid_argument("ellipsoid: semi-axes must be positive");
  SurfaceMesh m = generate_icosphere(subdivisions, 1.0);
  for (auto& v : m.vertices) v = Vec3(a * v.x(), b * v.y(), c * v.z());
  return m;
}

// Torus of revolution about the z axis, major radius R, tube radius r.
// Odd rings are rotated by half a step so the triangles are close to
// equilateral rather than halves of rectangles.
inline SurfaceMesh generate_torus(double major, double minor, int nu, int nv) {
  if (!(major > minor && minor > 0.0) || nu < 3 || nv < 4 || nv % 2 != 0)
    throw std::invalid_argument("torus: need R > r > 0, nu >= 3 and an even nv >= 4");
  SurfaceMesh m;
  const double two_pi = 2.0 * M_PI;
  for (int j = 0; j < nv; ++j)
    for (int i = 0; i < nu; ++i) {
      const double u = two_pi * (i + 0.5 * (j % 2)) / nu, v = two_pi * j / nv;
      m.vertices.emplace_back((major + minor * std::cos(v)) * std::cos(u),
                              (major + minor * std::cos(v)) * std::sin(u), minor * std::sin(v));
    }
  auto id = [&](int i, int j) { return ((j + nv) % nv) * nu + (i + nu) % nu; };
  for (int j = 0; j < nv; ++j)
    for (int i = 0; i < nu; ++i) {
      if (j % 2 == 0) {
        m.faces.push_back({id(i, j), id(i + 1, j), id(i, j + 1)});
        m.faces.push_back({id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)});
      } else {
        m.faces.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
        m.faces.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      }
    }
  return m;
}

inline SurfaceMesh merge(const SurfaceMesh& a, const SurfaceMesh& b) {
  SurfaceMesh out = a;
  const int off = static_cast<int>(a.vertices.size());
  out.vertices.insert(out.vertices.end(), b.vertices.begin(), b.vertices.end());
  for (auto t : b.faces) out.faces.push_back({t[0] + off, t[1] + off, t[2] + off});
  return out;
}

inline SurfaceMesh translated(SurfaceMesh m, const Vec3& shift) {
  for (auto& v : m.vertices) v += shift;
  return m;
}

// Ball of the given radius: the icosphere boundary coned inward through
// `layers` concentric scaled copies. Each radial prism is split into three
// tets by the global-index rule, so neighbouring prisms agree on the
// diagonals of shared quads. Surface vertex ids are preserved, so the
// boundary faces coincide with generate_icosphere(subdivisions).
inline SolidMesh generate_ball(int subdivisions, double radius = 1.0, int layers = -1) {
  const SurfaceMesh shell = generate_icosphere(subdivisions, radius);
  if (layers < 0) layers = std::max(1, 1 << subdivisions);
  const int ns = static_cast<int>(shell.vertices.size());
  SolidMesh m;
  // Layer L is the boundary; layer k < L has radius k/L * radius; center last.
  auto vid = [&](int layer, int v) { return (layers - layer) * ns + v; };
  for (int layer = layers; layer >= 1; --layer)
    for (const auto& v : shell.vertices) m.vertices.push_back(v * (static_cast<double>(layer) / layers));
  const int center = static_cast<int>(m.vertices.size());
  m.vertices.emplace_back(0, 0, 0);

  auto push = [&](Tet t) {
    const auto& x = m.vertices;
    if (tet_signed_volume(x[t[0]], x[t[1]], x[t[2]], x[t[3]]) < 0) std::swap(t[2], t[3]);
    m.tets.push_back(t);
  };
  for (const auto& f : shell.faces) {
    Tri s = f;
    std::sort(s.begin(), s.end());
    for (int layer = 1; layer < layers; ++layer) {
      const int b0 = vid(layer, s[0]), b1 = vid(layer, s[1]), b2 = vid(layer, s[2]);
      const int t0 = vid(layer + 1, s[0]), t1 = vid(layer + 1, s[1]), t2 = vid(layer + 1, s[2]);
      push({b0, b1, b2, t0});
      push({b1, b2, t0, t1});
      push({b2, t0, t1, t2});
    }
    push({center, vid(1, s[0]), vid(1, s[1]), vid(1, s[2])});
  }
  m.boundary_faces = shell.faces;  // vid(layers, v) == v
  return m;
}

inline SolidMesh generate_ellipsoid_solid(double a, double b, double c, int subdivisions) {
  SolidMesh m = generate_ball(subdivisions, 1.0);
  for (auto& v : m.vertices) v = Vec3(a * v.x(), b * v.y(), c * v.z());
  return m;
}

}  // namespace reilly
