#pragma once

// Discrete exterior calculus on a closed oriented triangle surface:
// incidence matrices d0 (edges x vertices), d1 (faces x edges) and diagonal
// circumcentric Hodge stars.

#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Sparse>

#include "reilly/eigensolver.hpp"
#include "reilly/mesh.hpp"

namespace reilly {

struct DecOptions {
  bool strict = false;         // throw on non-positive weights instead of clamping
  double clamp_floor = 1e-10;  // relative to the local scale
};

struct DecOperators {
  SpMat d0, d1;
  Eigen::VectorXd star0, star1, star2;
  int clamped_vertices = 0;
  int clamped_edges = 0;
};

namespace detail {
inline double cot_at(const Vec3& apex, const Vec3& p, const Vec3& q) {
  const Vec3 u = p - apex, v = q - apex;
  return u.dot(v) / u.cross(v).norm();
}
}  // namespace detail

inline DecOperators assemble_dec(const SurfaceComplex& c, const DecOptions& opt = {}) {
  const int nv = c.num_vertices(), ne = c.num_edges(), nf = c.num_faces();
  const auto& x = c.vertices();
  DecOperators op;

  std::vector<Eigen::Triplet<double>> t0, t1;
  t0.reserve(2 * ne);
  for (int e = 0; e < ne; ++e) {
    t0.emplace_back(e, c.edges()[e].a, -1.0);
    t0.emplace_back(e, c.edges()[e].b, 1.0);
  }
  t1.reserve(3 * nf);
  for (int f = 0; f < nf; ++f)
    for (int k = 0; k < 3; ++k) t1.emplace_back(f, c.face_edge(f, k), c.face_edge_sign(f, k));
  op.d0.resize(ne, nv);
  op.d0.setFromTriplets(t0.begin(), t0.end());
  op.d1.resize(nf, ne);
  op.d1.setFromTriplets(t1.begin(), t1.end());

  op.star0 = Eigen::VectorXd::Zero(nv);
  op.star1 = Eigen::VectorXd::Zero(ne);
  op.star2.resize(nf);
  for (int f = 0; f < nf; ++f) {
    const auto& t = c.faces()[f];
    const double area = c.face_area(f);
    op.star2(f) = 1.0 / area;
    for (int k = 0; k < 3; ++k) {
      const int i = t[k], j = t[(k + 1) % 3], o = t[(k + 2) % 3];
      const double cot = detail::cot_at(x[o], x[i], x[j]);
      op.star1(c.edge_index(i, j)) += 0.5 * cot;
      const double quarter = (x[j] - x[i]).squaredNorm() * cot / 8.0;
      op.star0(i) += quarter;
      op.star0(j) += quarter;
    }
  }

  for (int v = 0; v < nv; ++v)
    if (!(op.star0(v) > 0.0)) {
      if (opt.strict)
        throw MeshError(MeshErrorCode::NonPositiveWeight, "dual area of vertex " + std::to_string(v) + " is " +
                                                              std::to_string(op.star0(v)));
      double local = 0.0;
      for (int f : c.vertex_faces(v)) local += c.face_area(f) / 3.0;
      op.star0(v) = opt.clamp_floor * local;
      ++op.clamped_vertices;
    }
  for (int e = 0; e < ne; ++e)
    if (!(op.star1(e) > 0.0)) {
      if (opt.strict)
        throw MeshError(MeshErrorCode::NonPositiveWeight, "cotan weight of edge (" + std::to_string(c.edges()[e].a) +
                                                              "," + std::to_string(c.edges()[e].b) + ") is " +
                                                              std::to_string(op.star1(e)));
      op.star1(e) = opt.clamp_floor;  // the cotan weight is dimensionless
      ++op.clamped_edges;
    }
  return op;
}

}  // namespace reilly
