#pragma once

// Pointwise calculus on a hypersurface of R^3 given by a normal field N(y)
// defined near the surface. Tangential derivatives of J*w and i_N w are taken
// by differentiating the ambient forms P(y)^* w(y) and P(y)^*(i_{N(y)} w(y)),
// P = I - N N^T, along tangent directions with dual numbers. This path never
// uses the boundary commutation formulas, so it can check them.
//
// Conventions: N is the inner unit normal, S(X) = -D_X N, H = tr(S)/n.
// Forms on the surface are expressed in the tangent frame of tangent_frame(N).

#include <array>
#include <functional>
#include <optional>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "reilly/autodiff.hpp"
#include "reilly/exterior.hpp"
#include "reilly/fields.hpp"
#include "reilly/mesh.hpp"

namespace reilly {

using DualD = Dual<double>;

// A surface described near a point by its unit normal field.
struct SurfaceModel {
  std::function<Point3<DualD>(const Point3<DualD>&)> normal;
  std::string name;
};

namespace detail {

template <class T>
Point3<T> normalized(const Point3<T>& v) {
  using std::sqrt;
  const T n = sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
  return {v[0] / n, v[1] / n, v[2] / n};
}

}  // namespace detail

inline SurfaceModel sphere_model(const Vec3& center = Vec3::Zero(), double radius = 1.0) {
  (void)radius;  // the normal field does not depend on the radius
  return {[center](const Point3<DualD>& y) {
            return detail::normalized(Point3<DualD>{center(0) - y[0], center(1) - y[1], center(2) - y[2]});
          },
          "sphere"};
}

// x^2/a^2 + y^2/b^2 + z^2/c^2 = 1, inner normal -grad F / |grad F|.
inline SurfaceModel ellipsoid_model(double a, double b, double c) {
  return {[a, b, c](const Point3<DualD>& y) {
            return detail::normalized(Point3<DualD>{-y[0] / (a * a), -y[1] / (b * b), -y[2] / (c * c)});
          },
          "ellipsoid"};
}

// Osculating quadric through x with inner normal n0, tangent frame columns of
// `frame` and 2x2 shape operator `shape` in that frame:
// w = (1/2) u^T S u, u = frame^T (y - x), w = n0 . (y - x).
inline SurfaceModel osculating_model(const Vec3& x, const Vec3& n0, const Eigen::Matrix<double, 3, 2>& frame,
                                     const Eigen::Matrix2d& shape) {
  return {[x, n0, frame, shape](const Point3<DualD>& y) {
            const DualD d[3] = {y[0] - x(0), y[1] - x(1), y[2] - x(2)};
            DualD u[2];
            for (int i = 0; i < 2; ++i) u[i] = frame(0, i) * d[0] + frame(1, i) * d[1] + frame(2, i) * d[2];
            Point3<DualD> g{DualD(n0(0)), DualD(n0(1)), DualD(n0(2))};
            for (int i = 0; i < 2; ++i) {
              const DualD su = shape(i, 0) * u[0] + shape(i, 1) * u[1];
              for (int k = 0; k < 3; ++k) g[k] -= su * frame(k, i);
            }
            return detail::normalized(g);
          },
          "osculating-quadric"};
}

// Geometry at one surface point.
struct SurfacePoint {
  Vec3 x;
  Vec3 normal;                          // inner unit normal
  std::vector<std::vector<double>> e;   // tangent frame, (e_1, e_2, N) positive
  Eigen::Matrix2d shape;                // S in the frame
  Eigen::Matrix3d ambient_shape;        // E S E^T

  double mean_curvature() const { return 0.5 * shape.trace(); }
  Vec3 tangent(const Eigen::Vector2d& a) const {
    return a(0) * Vec3(e[0][0], e[0][1], e[0][2]) + a(1) * Vec3(e[1][0], e[1][1], e[1][2]);
  }
};

namespace detail {

inline Point3<DualD> dual_point(const Vec3& x, const Vec3& v) {
  return {DualD(x(0), v(0)), DualD(x(1), v(1)), DualD(x(2), v(2))};
}

inline std::vector<std::vector<DualD>> projector_columns(const Point3<DualD>& n) {
  std::vector<std::vector<DualD>> cols(3, std::vector<DualD>(3));
  for (int c = 0; c < 3; ++c)
    for (int r = 0; r < 3; ++r) cols[c][r] = DualD(r == c ? 1.0 : 0.0) - n[r] * n[c];
  return cols;
}

inline BasicForm<DualD> dual_form(const Form& w, const Form& dw) {
  BasicForm<DualD> out(w.dim(), w.degree());
  for (std::size_t i = 0; i < w.size(); ++i) out[i] = DualD(w[i], dw[i]);
  return out;
}

}  // namespace detail

inline SurfacePoint surface_point(const SurfaceModel& m, const Vec3& x) {
  SurfacePoint p;
  p.x = x;
  const auto n = m.normal(detail::dual_point(x, Vec3::Zero()));
  p.normal = Vec3(n[0].v, n[1].v, n[2].v);
  p.e = tangent_frame(std::vector<double>{p.normal(0), p.normal(1), p.normal(2)});
  for (int j = 0; j < 2; ++j) {
    const Vec3 ej(p.e[j][0], p.e[j][1], p.e[j][2]);
    const auto dn = m.normal(detail::dual_point(x, ej));
    const Vec3 d(dn[0].d, dn[1].d, dn[2].d);
    for (int i = 0; i < 2; ++i) p.shape(i, j) = -(p.e[i][0] * d(0) + p.e[i][1] * d(1) + p.e[i][2] * d(2));
  }
  p.shape = 0.5 * (p.shape + p.shape.transpose());
  Eigen::Matrix<double, 3, 2> e;
  for (int i = 0; i < 2; ++i) e.col(i) = Vec3(p.e[i][0], p.e[i][1], p.e[i][2]);
  p.ambient_shape = e * p.shape * e.transpose();
  return p;
}

// A field and its first derivatives at one point.
struct FieldJet {
  Form value;
  std::array<Form, 3> partial;  // d/dx_k

  Form along(const Vec3& v) const {
    Form out = partial[0] * v(0);
    out += partial[1] * v(1);
    out += partial[2] * v(2);
    return out;
  }
};

inline FieldJet field_jet(const SampledField& f, const Vec3& x, double fd_step = 0.0) {
  return {f.value(x), f.derivatives(x, fd_step)};
}

// ---- ambient operators from a jet ----------------------------------------

inline Form ambient_d(const FieldJet& j) {
  const int p = j.value.degree();
  Form out(3, p + 1);
  if (p + 1 > 3) return Form(3, 3);
  for (int k = 0; k < 3; ++k) out += wedge(Form::basis(3, {k}), j.partial[k]);
  return out;
}

inline Form ambient_delta(const FieldJet& j) {
  const int p = j.value.degree();
  if (p == 0) throw ExteriorError("codifferential of a 0-form");
  Form out(3, p - 1);
  for (int k = 0; k < 3; ++k) out -= interior_product(std::vector<double>{k == 0 ? 1.0 : 0.0, k == 1 ? 1.0 : 0.0, k == 2 ? 1.0 : 0.0}, j.partial[k]);
  return out;
}

// ---- restrictions ----------------------------------------------------------

// Forms on the surface; nullopt stands for the zero form of a degree above n.
using SurfaceForm = std::optional<Form>;

inline std::vector<double> as_std(const Vec3& v) { return {v(0), v(1), v(2)}; }

inline SurfaceForm restrict_tangential(const Form& w, const SurfacePoint& p) {
  if (w.degree() > 2) return std::nullopt;
  return pullback(w, p.e);
}

inline SurfaceForm restrict_normal(const Form& w, const SurfacePoint& p) {
  if (w.degree() == 0) throw ExteriorError("normal part of a 0-form");
  return pullback(interior_product(as_std(p.normal), w), p.e);
}

inline double surface_distance(const SurfaceForm& a, const SurfaceForm& b) {
  if (!a && !b) return 0.0;
  if (!a) return std::sqrt(b->norm_squared());
  if (!b) return std::sqrt(a->norm_squared());
  return std::sqrt((*a - *b).norm_squared());
}

inline double surface_norm(const SurfaceForm& a) { return a ? std::sqrt(a->norm_squared()) : 0.0; }

// ---- tangential derivatives by direct differentiation ----------------------

// nabla^Sigma_X (J* w) in the frame at p, X an ambient tangent vector.
inline SurfaceForm covariant_tangential(const SurfaceModel& m, const SurfacePoint& p, const FieldJet& j,
                                        const Vec3& x_dir) {
  if (j.value.degree() > 2) return std::nullopt;
  const auto n = m.normal(detail::dual_point(p.x, x_dir));
  const auto a = pullback(detail::dual_form(j.value, j.along(x_dir)), detail::projector_columns(n));
  Form da(3, j.value.degree());
  for (std::size_t i = 0; i < da.size(); ++i) da[i] = a[i].d;
  return pullback(da, p.e);
}

// nabla^Sigma_X (i_N w) in the frame at p.
inline SurfaceForm covariant_normal(const SurfaceModel& m, const SurfacePoint& p, const FieldJet& j,
                                    const Vec3& x_dir) {
  if (j.value.degree() == 0) throw ExteriorError("normal part of a 0-form");
  const auto n = m.normal(detail::dual_point(p.x, x_dir));
  const std::vector<DualD> nv(n.begin(), n.end());
  const auto inw = interior_product(nv, detail::dual_form(j.value, j.along(x_dir)));
  const auto b = pullback(inw, detail::projector_columns(n));
  Form db(3, j.value.degree() - 1);
  for (std::size_t i = 0; i < db.size(); ++i) db[i] = b[i].d;
  return pullback(db, p.e);
}

namespace detail {

inline Vec3 frame_vec(const SurfacePoint& p, int i) { return {p.e[i][0], p.e[i][1], p.e[i][2]}; }

inline std::vector<double> unit2(int i) { return {i == 0 ? 1.0 : 0.0, i == 1 ? 1.0 : 0.0}; }

// d = sum e^i ^ nabla_{e_i}, delta = -sum i_{e_i} nabla_{e_i} on the surface.
template <class Cov>
SurfaceForm surface_d(int degree, Cov cov) {
  if (degree + 1 > 2) return std::nullopt;
  Form out(2, degree + 1);
  for (int i = 0; i < 2; ++i) {
    const auto c = cov(i);
    if (c) out += wedge(Form::basis(2, {i}), *c);
  }
  return out;
}

template <class Cov>
SurfaceForm surface_delta(int degree, Cov cov) {
  if (degree == 0) throw ExteriorError("codifferential of a 0-form");
  if (degree - 1 > 2) return std::nullopt;
  Form out(2, degree - 1);
  for (int i = 0; i < 2; ++i) {
    const auto c = cov(i);
    if (c) out -= interior_product(unit2(i), *c);
  }
  return out;
}

}  // namespace detail

// delta^Sigma (J* w), by direct differentiation.
inline SurfaceForm surface_codifferential_tangential(const SurfaceModel& m, const SurfacePoint& p, const FieldJet& j) {
  const int deg = j.value.degree();
  if (deg > 2) return deg - 1 > 2 ? std::nullopt : SurfaceForm(Form(2, deg - 1));
  return detail::surface_delta(deg, [&](int i) { return covariant_tangential(m, p, j, detail::frame_vec(p, i)); });
}

// d^Sigma (i_N w), by direct differentiation.
inline SurfaceForm surface_differential_normal(const SurfaceModel& m, const SurfacePoint& p, const FieldJet& j) {
  const int deg = j.value.degree() - 1;
  return detail::surface_d(deg, [&](int i) { return covariant_normal(m, p, j, detail::frame_vec(p, i)); });
}

// ---- the commutation formulas --------------------------------------------

// delta^Sigma(J* w) = J*(delta w) + J*(i_N nabla_N w) + S^[p-1](i_N w) - nH i_N w
inline SurfaceForm commutation_codifferential_rhs(const SurfacePoint& p, const FieldJet& j) {
  const int deg = j.value.degree();
  if (deg - 1 > 2) return std::nullopt;
  const auto inw = *restrict_normal(j.value, p);
  Form out = *restrict_tangential(ambient_delta(j), p);
  out += *restrict_normal(j.along(p.normal), p);
  out += induced_endomorphism(p.shape, deg - 1).apply(inw);
  out -= inw * p.shape.trace();
  return out;
}

// d^Sigma(i_N w) = -J*(i_N dw) + J*(nabla_N w) - S^[p](J* w)
inline SurfaceForm commutation_differential_rhs(const SurfacePoint& p, const FieldJet& j) {
  const int deg = j.value.degree();
  if (deg > 2) return std::nullopt;
  Form out = *restrict_tangential(j.along(p.normal), p);
  if (deg + 1 <= 3) out -= *restrict_normal(ambient_d(j), p);
  out -= induced_endomorphism(p.shape, deg).apply(*restrict_tangential(j.value, p));
  return out;
}

struct ResidualPair {
  double first = 0.0;   // absolute residual of the first identity
  double second = 0.0;  // absolute residual of the second identity
  double scale = 0.0;   // largest term magnitude seen
};

// Residuals of the two commutation formulas at p (degree 1..3).
inline ResidualPair check_commutation(const SurfaceModel& m, const SurfacePoint& p, const FieldJet& j) {
  if (j.value.degree() < 1) throw ExteriorError("check_commutation: degree must be at least 1");
  const auto l1 = surface_codifferential_tangential(m, p, j);
  const auto r1 = commutation_codifferential_rhs(p, j);
  const auto l2 = surface_differential_normal(m, p, j);
  const auto r2 = commutation_differential_rhs(p, j);
  return {surface_distance(l1, r1), surface_distance(l2, r2),
          std::max({surface_norm(l1), surface_norm(r1), surface_norm(l2), surface_norm(r2)})};
}

// Residuals of
//   nabla^Sigma_X (J* w)  = J*(nabla_X w) + S(X)^flat ^ i_N w
//   nabla^Sigma_X (i_N w) = i_N nabla_X w - i_{S(X)} J* w
// for the tangent vector X = a_1 e_1 + a_2 e_2.
inline ResidualPair check_derivative_formulas(const SurfaceModel& m, const SurfacePoint& p, const FieldJet& j,
                                              const Eigen::Vector2d& a) {
  const int deg = j.value.degree();
  if (deg < 1) throw ExteriorError("check_derivative_formulas: degree must be at least 1");
  const Vec3 x = p.tangent(a);
  const Eigen::Vector2d sx = p.shape * a;
  const Form gx = j.along(x);
  const Form inw = *restrict_normal(j.value, p);

  const auto l1 = covariant_tangential(m, p, j, x);
  SurfaceForm r1;
  if (deg <= 2) r1 = *restrict_tangential(gx, p) + wedge(Form(2, 1, {sx(0), sx(1)}), inw);

  const auto l2 = covariant_normal(m, p, j, x);
  Form r2 = *restrict_normal(gx, p);
  if (deg <= 2) r2 -= interior_product(std::vector<double>{sx(0), sx(1)}, *restrict_tangential(j.value, p));

  return {surface_distance(l1, r1), surface_distance(l2, SurfaceForm(r2)),
          std::max({surface_norm(l1), surface_norm(r1), surface_norm(l2), surface_norm(SurfaceForm(r2))})};
}

// For a constant form xi on a radius-r sphere:
//   delta^Sigma(J* xi) = -(n-p+1) H i_N xi,   d^Sigma(i_N xi) = -p H J* xi,
// both sides from direct differentiation. Returns the worst residuals over
// `samples` random points.
inline ResidualPair parallel_restriction_check(double radius, const Form& xi, int samples = 64,
                                               unsigned seed = 7) {
  if (xi.dim() != 3 || xi.degree() < 1) throw ExteriorError("parallel_restriction_check: need a p-form on R^3, p >= 1");
  const auto model = sphere_model(Vec3::Zero(), radius);
  std::mt19937 rng(seed);
  std::normal_distribution<double> g;
  const int n = 2;
  const int deg = xi.degree();
  FieldJet jet{xi, {Form(3, deg), Form(3, deg), Form(3, deg)}};
  ResidualPair worst;
  for (int s = 0; s < samples; ++s) {
    Vec3 x(g(rng), g(rng), g(rng));
    x = radius * x.normalized();
    const auto p = surface_point(model, x);
    const double h = p.mean_curvature();
    const auto l1 = surface_codifferential_tangential(model, p, jet);
    const SurfaceForm r1 = deg - 1 <= 2 ? SurfaceForm(*restrict_normal(xi, p) * (-(n - deg + 1) * h)) : std::nullopt;
    const auto l2 = surface_differential_normal(model, p, jet);
    SurfaceForm r2;
    if (deg <= 2) r2 = *restrict_tangential(xi, p) * (-deg * h);
    worst.first = std::max(worst.first, surface_distance(l1, r1));
    worst.second = std::max(worst.second, surface_distance(l2, r2));
    worst.scale = std::max({worst.scale, surface_norm(l1), surface_norm(l2)});
  }
  return worst;
}

}  // namespace reilly
