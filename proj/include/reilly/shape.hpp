#pragma once

// Per-vertex normals and shape operators of a closed triangle surface,
// estimated by osculating-quadric least squares over the two-ring.
// Normals point into the enclosed solid, so convex surfaces have positive
// principal curvatures.

#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "reilly/curvature.hpp"
#include "reilly/mesh.hpp"

namespace reilly {

struct VertexShape {
  Vec3 normal;              // inner unit normal
  Eigen::Matrix<double, 3, 2> frame;  // orthonormal tangent basis, (t1, t2, normal) positive
  Eigen::Matrix2d shape;    // symmetric, in `frame`
  double residual = 0.0;    // rms fit residual of the quadric
};

struct ShapeFitOptions {
  int rings = 2;
  int normal_iterations = 3;
};

namespace detail {

inline Eigen::Matrix<double, 3, 2> tangent_basis(const Vec3& n) {
  const Vec3 a = std::abs(n.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
  const Vec3 t1 = (a - a.dot(n) * n).normalized();
  const Vec3 t2 = n.cross(t1);
  Eigen::Matrix<double, 3, 2> f;
  f.col(0) = t1;
  f.col(1) = t2;
  return f;
}

}  // namespace detail

// Fits h = a u^2 + b uv + c v^2 + d u + e v to the neighbours of `center`,
// with h measured along the normal guess, then tilts the normal by the fitted
// gradient and refits. Throws DegenerateOneRing if the samples cannot
// determine the quadric.
inline VertexShape fit_vertex_shape(const Vec3& center, Vec3 normal, const std::vector<Vec3>& neighbors,
                                    int normal_iterations = 3) {
  if (neighbors.size() < 5) throw MeshError(MeshErrorCode::DegenerateOneRing, "fewer than 5 neighbours for a quadric fit");
  normal.normalize();
  double scale = 0.0;
  for (const auto& q : neighbors) scale += (q - center).norm();
  scale /= static_cast<double>(neighbors.size());
  if (!(scale > 0.0)) throw MeshError(MeshErrorCode::DegenerateOneRing, "coincident neighbours");

  const auto n = static_cast<Eigen::Index>(neighbors.size());
  VertexShape out;
  for (int it = 0; it <= normal_iterations; ++it) {
    const auto frame = detail::tangent_basis(normal);
    Eigen::MatrixXd a(n, 5);
    Eigen::VectorXd h(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const Vec3 d = (neighbors[i] - center) / scale;
      const double u = d.dot(frame.col(0)), v = d.dot(frame.col(1));
      a.row(i) << u * u, u * v, v * v, u, v;
      h(i) = d.dot(normal);
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    if (sv(4) <= 1e-10 * sv(0))
      throw MeshError(MeshErrorCode::DegenerateOneRing, "neighbourhood does not determine a quadric (colinear samples)");
    const Eigen::VectorXd c = svd.solve(h);
    const double gu = c(3), gv = c(4);
    if (it < normal_iterations && std::hypot(gu, gv) > 1e-14) {
      normal = (normal - gu * frame.col(0) - gv * frame.col(1)).normalized();
      continue;
    }
    out.normal = normal;
    out.frame = frame;
    // Second fundamental form of the graph, pulled back to the metric at 0.
    Eigen::Matrix2d hess;
    hess << 2 * c(0), c(1), c(1), 2 * c(2);
    const Eigen::Vector2d g(gu, gv);
    const Eigen::Matrix2d first = Eigen::Matrix2d::Identity() + g * g.transpose();
    Eigen::Matrix2d s = first.inverse() * hess / std::sqrt(1.0 + g.squaredNorm());
    out.shape = 0.5 * (s + s.transpose()) / scale;
    out.residual = (a * c - h).norm() * scale / std::sqrt(static_cast<double>(n));
    break;
  }
  return out;
}

class DiscreteShape {
 public:
  DiscreteShape() = default;

  explicit DiscreteShape(const SurfaceComplex& c, ShapeFitOptions opts = {}) {
    const int nv = c.num_vertices();
    vertices_.resize(nv);
    area_.assign(nv, 0.0);
    std::vector<Vec3> outward(nv, Vec3::Zero());
    for (int f = 0; f < c.num_faces(); ++f) {
      const Vec3 an = c.face_area_normal(f);
      for (int v : c.faces()[f]) {
        outward[v] += an;
        area_[v] += an.norm() / 3.0;
      }
    }
    for (int v = 0; v < nv; ++v) {
      if (outward[v].norm() == 0.0)
        throw MeshError(MeshErrorCode::DegenerateOneRing, "vertex " + std::to_string(v) + " has no normal");
      const Vec3 inner = -c.winding_sign(v) * outward[v].normalized();
      std::vector<Vec3> nb;
      for (int w : c.ring(v, opts.rings)) nb.push_back(c.vertices()[w]);
      try {
        vertices_[v] = fit_vertex_shape(c.vertices()[v], inner, nb, opts.normal_iterations);
      } catch (const MeshError& e) {
        throw MeshError(e.code(), "vertex " + std::to_string(v) + ": " + e.what());
      }
      // Keep the refined normal on the inner side.
      if (vertices_[v].normal.dot(inner) < 0) throw MeshError(MeshErrorCode::DegenerateOneRing, "normal flipped at vertex " + std::to_string(v));
    }
    faces_ = c.faces();
  }

  int size() const { return static_cast<int>(vertices_.size()); }
  const VertexShape& vertex(int v) const { return vertices_[v]; }
  const Vec3& normal(int v) const { return vertices_[v].normal; }
  const Eigen::Matrix2d& shape_matrix(int v) const { return vertices_[v].shape; }
  double area_weight(int v) const { return area_[v]; }

  // Shape operator as a symmetric 3x3 map annihilating the normal.
  Eigen::Matrix3d ambient_shape(int v) const {
    const auto& s = vertices_[v];
    return s.frame * s.shape * s.frame.transpose();
  }

  std::vector<ShapeData> shape_data() const {
    std::vector<ShapeData> out;
    out.reserve(vertices_.size());
    for (const auto& s : vertices_) out.push_back(make_shape_data(Eigen::MatrixXd(s.shape)));
    return out;
  }

  // Barycentric blend inside face f; the normal is renormalized and the shape
  // operator projected onto the blended tangent plane.
  std::pair<Vec3, Eigen::Matrix3d> interpolate(int f, const Eigen::Vector3d& bary) const {
    Vec3 n = Vec3::Zero();
    Eigen::Matrix3d s = Eigen::Matrix3d::Zero();
    for (int k = 0; k < 3; ++k) {
      n += bary(k) * normal(faces_[f][k]);
      s += bary(k) * ambient_shape(faces_[f][k]);
    }
    n.normalize();
    const Eigen::Matrix3d p = Eigen::Matrix3d::Identity() - n * n.transpose();
    return {n, p * s * p};
  }

 private:
  std::vector<VertexShape> vertices_;
  std::vector<double> area_;
  std::vector<Tri> faces_;
};

inline DiscreteShape discrete_shape(const SurfaceComplex& c, ShapeFitOptions opts = {}) { return DiscreteShape(c, opts); }

// Closed-form inner normal and shape operator of the ellipsoid
// x^2/a^2 + y^2/b^2 + z^2/c^2 = 1 at a point on it (or its radial projection).
struct AnalyticEllipsoid {
  double a = 1, b = 1, c = 1;

  Vec3 project(const Vec3& x) const {
    const double s = std::sqrt(x.x() * x.x() / (a * a) + x.y() * x.y() / (b * b) + x.z() * x.z() / (c * c));
    return x / s;
  }
  Vec3 gradient(const Vec3& x) const { return Vec3(2 * x.x() / (a * a), 2 * x.y() / (b * b), 2 * x.z() / (c * c)); }
  Vec3 inner_normal(const Vec3& x) const { return -gradient(x).normalized(); }

  // S = P Hess(F) P / |grad F|, P the tangential projector.
  Eigen::Matrix3d ambient_shape(const Vec3& x) const {
    const Vec3 g = gradient(x);
    const Vec3 n = g.normalized();
    const Eigen::Matrix3d p = Eigen::Matrix3d::Identity() - n * n.transpose();
    const Eigen::Matrix3d hess = Eigen::Vector3d(2 / (a * a), 2 / (b * b), 2 / (c * c)).asDiagonal();
    return p * hess * p / g.norm();
  }

  // Principal curvatures at x, ascending.
  std::array<double, 2> principal(const Vec3& x) const {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(ambient_shape(x));
    // One eigenvalue is the zero of the normal direction; drop it.
    std::array<double, 3> ev{es.eigenvalues()(0), es.eigenvalues()(1), es.eigenvalues()(2)};
    const Vec3 n = inner_normal(x);
    int skip = 0;
    double best = -1;
    for (int k = 0; k < 3; ++k) {
      const double al = std::abs(es.eigenvectors().col(k).dot(n));
      if (al > best) best = al, skip = k;
    }
    std::array<double, 2> out{};
    for (int k = 0, j = 0; k < 3; ++k)
      if (k != skip) out[j++] = ev[k];
    return out;
  }
};

}  // namespace reilly
