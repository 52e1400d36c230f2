#pragma once

// Term-by-term evaluation of the Reilly identity for p-forms on a Euclidean
// solid,
//   int |dw|^2 + |delta w|^2 = int |nabla w|^2 + <W w, w>
//                              + 2 int_bd <i_N w, delta^bd(J* w)> + int_bd B(w, w),
// its scalar case for w = df, and the integrated Stokes formula.
//
// Interior integrals use a tet rule, boundary integrals a 3-point triangle
// rule on the flat boundary faces. Normals and shape operators at boundary
// points come from a BoundaryGeometry (exact surface or fitted mesh data).

#include <functional>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "reilly/curvature.hpp"
#include "reilly/dec.hpp"
#include "reilly/exterior.hpp"
#include "reilly/fields.hpp"
#include "reilly/mesh.hpp"
#include "reilly/quadrature.hpp"
#include "reilly/shape.hpp"
#include "reilly/surface_calculus.hpp"

namespace reilly {

class ReillyError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// ---- boundary geometry -------------------------------------------------------

struct BoundarySample {
  Vec3 normal;            // inner unit normal
  Eigen::Matrix3d shape;  // ambient shape operator, annihilates the normal
};

// (boundary face index, point on the flat face, barycentrics) -> geometry.
struct BoundaryGeometry {
  std::function<BoundarySample(int, const Vec3&, const Eigen::Vector3d&)> sample;
  std::string name;
};

// Exact geometry of a surface model, evaluated at the closest-point
// projection given by `project`.
inline BoundaryGeometry analytic_boundary(SurfaceModel model, std::function<Vec3(const Vec3&)> project) {
  const std::string name = model.name;
  return {[model = std::move(model), project = std::move(project)](int, const Vec3& x, const Eigen::Vector3d&) {
            const auto p = surface_point(model, project(x));
            return BoundarySample{p.normal, p.ambient_shape};
          },
          name};
}

inline BoundaryGeometry sphere_boundary(const Vec3& center = Vec3::Zero(), double radius = 1.0) {
  return analytic_boundary(sphere_model(center, radius),
                           [center, radius](const Vec3& x) -> Vec3 { return center + radius * (x - center).normalized(); });
}

inline BoundaryGeometry ellipsoid_boundary(double a, double b, double c) {
  const AnalyticEllipsoid e{a, b, c};
  return analytic_boundary(ellipsoid_model(a, b, c), [e](const Vec3& x) { return e.project(x); });
}

// Quadric-fit normals and shape operators blended across each face.
inline BoundaryGeometry discrete_boundary(const SurfaceComplex& boundary, ShapeFitOptions opts = {}) {
  auto shape = std::make_shared<DiscreteShape>(boundary, opts);
  return {[shape](int f, const Vec3&, const Eigen::Vector3d& bary) {
            const auto [n, s] = shape->interpolate(f, bary);
            return BoundarySample{n, s};
          },
          "discrete"};
}

// Flat face normals and zero shape operator: the polyhedron itself.
inline BoundaryGeometry polyhedral_boundary(const SolidMesh& m) {
  std::vector<Vec3> normals;
  for (const auto& f : m.boundary_faces) {
    const Vec3 out = (m.vertices[f[1]] - m.vertices[f[0]]).cross(m.vertices[f[2]] - m.vertices[f[0]]);
    normals.push_back(-out.normalized());
  }
  return {[normals](int f, const Vec3&, const Eigen::Vector3d&) { return BoundarySample{normals[f], Eigen::Matrix3d::Zero()}; },
          "polyhedral"};
}

// ---- options and ledgers ------------------------------------------------------

struct ReillyOptions {
  TetRule tet_rule = TetRule::FourPoint;
  CurvatureTerm curvature = CurvatureTerm::flat();
  bool allow_finite_differences = true;  // h = 1e-5 * diameter when a field lacks derivatives
  DecOptions dec{};
};

struct MeshMetadata {
  int vertices = 0;
  int tets = 0;
  int boundary_faces = 0;
  double mean_boundary_edge = 0.0;
  double volume = 0.0;
  double boundary_area = 0.0;
  std::string boundary_geometry;
  std::string tet_rule;

  nlohmann::json to_json() const {
    return {{"vertices", vertices},         {"tets", tets},
            {"boundary_faces", boundary_faces}, {"mean_boundary_edge", mean_boundary_edge},
            {"volume", volume},             {"boundary_area", boundary_area},
            {"boundary_geometry", boundary_geometry}, {"tet_rule", tet_rule}};
  }
};

struct ReillyLedger {
  std::string field;
  int degree = 0;
  double lhs = 0.0;              // int |dw|^2 + |delta w|^2
  double dirichlet = 0.0;        // int |nabla w|^2
  double curvature_term = 0.0;   // int <W w, w>
  double cross_term = 0.0;       // 2 int_bd <i_N w, delta^bd J* w>, pointwise formula
  double cross_term_dec = 0.0;   // same integral with delta^bd from DEC
  double boundary_term = 0.0;    // int_bd B(w, w), shape operator form
  double boundary_term_alt = 0.0;// int_bd B(w, w), mean curvature form
  double boundary_gap = 0.0;     // max pointwise difference of the two B forms
  std::string curvature_kind;
  MeshMetadata mesh;

  double rhs() const { return dirichlet + curvature_term + cross_term + boundary_term; }
  double rhs_dec() const { return dirichlet + curvature_term + cross_term_dec + boundary_term; }
  double scale() const {
    return std::max({std::abs(lhs), std::abs(dirichlet), std::abs(curvature_term), std::abs(cross_term),
                     std::abs(boundary_term), std::abs(boundary_term_alt)});
  }
  double residual() const { return lhs - rhs(); }
  double residual_dec() const { return lhs - rhs_dec(); }
  double relative_residual() const { return scale() > 0 ? std::abs(residual()) / scale() : 0.0; }
  double relative_residual_dec() const { return scale() > 0 ? std::abs(residual_dec()) / scale() : 0.0; }

  nlohmann::json to_json() const {
    auto term = [](double v, const char* formula) { return nlohmann::json{{"value", v}, {"formula", formula}}; };
    return {{"kind", "p-form"},
            {"field", field},
            {"degree", degree},
            {"curvature_kind", curvature_kind},
            {"terms",
             {{"lhs", term(lhs, "int_O |dw|^2 + |delta w|^2")},
              {"dirichlet", term(dirichlet, "int_O |nabla w|^2")},
              {"curvature_term", term(curvature_term, "int_O <W[p] w, w>")},
              {"cross_term", term(cross_term, "2 int_S <i_N w, delta_S(J* w)> (pointwise commutation formula)")},
              {"cross_term_dec", term(cross_term_dec, "2 int_S <i_N w, delta_S(J* w)> (DEC)")},
              {"boundary_term", term(boundary_term, "int_S <S[p] J*w, J*w> + <S[n+1-p] J*(*w), J*(*w)>")},
              {"boundary_term_alt", term(boundary_term_alt, "int_S <S[p] J*w, J*w> + nH |i_N w|^2 - <S[p-1] i_N w, i_N w>")}}},
            {"boundary_pointwise_gap", boundary_gap},
            {"residual", residual()},
            {"relative_residual", relative_residual()},
            {"residual_dec", residual_dec()},
            {"relative_residual_dec", relative_residual_dec()},
            {"mesh", mesh.to_json()}};
  }
};

struct ClassicalLedger {
  std::string field;
  double laplacian_sq = 0.0;     // int (Delta f)^2
  double hessian_sq = 0.0;       // int |Hess f|^2
  double ricci_term = 0.0;       // int Ric(grad f, grad f)
  double normal_laplacian = 0.0; // 2 int_bd f_N Delta^bd f, pointwise
  double normal_laplacian_dec = 0.0;
  double shape_term = 0.0;       // int_bd <S grad^bd f, grad^bd f>
  double mean_term = 0.0;        // int_bd nH f_N^2
  MeshMetadata mesh;

  double lhs() const { return laplacian_sq - hessian_sq - ricci_term; }
  double rhs() const { return normal_laplacian + shape_term + mean_term; }
  double rhs_dec() const { return normal_laplacian_dec + shape_term + mean_term; }
  double scale() const {
    return std::max({std::abs(laplacian_sq), std::abs(hessian_sq), std::abs(ricci_term), std::abs(normal_laplacian),
                     std::abs(shape_term), std::abs(mean_term)});
  }
  double residual() const { return lhs() - rhs(); }
  double residual_dec() const { return lhs() - rhs_dec(); }
  double relative_residual() const { return scale() > 0 ? std::abs(residual()) / scale() : 0.0; }
  double relative_residual_dec() const { return scale() > 0 ? std::abs(residual_dec()) / scale() : 0.0; }

  nlohmann::json to_json() const {
    auto term = [](double v, const char* formula) { return nlohmann::json{{"value", v}, {"formula", formula}}; };
    return {{"kind", "scalar"},
            {"field", field},
            {"terms",
             {{"laplacian_sq", term(laplacian_sq, "int_O (Delta f)^2")},
              {"hessian_sq", term(hessian_sq, "int_O |Hess f|^2")},
              {"ricci_term", term(ricci_term, "int_O Ric(grad f, grad f)")},
              {"normal_laplacian", term(normal_laplacian, "2 int_S f_N Delta_S f (pointwise)")},
              {"normal_laplacian_dec", term(normal_laplacian_dec, "2 int_S f_N Delta_S f (DEC)")},
              {"shape_term", term(shape_term, "int_S <S grad_S f, grad_S f>")},
              {"mean_term", term(mean_term, "int_S nH f_N^2")}}},
            {"residual", residual()},
            {"relative_residual", relative_residual()},
            {"residual_dec", residual_dec()},
            {"relative_residual_dec", relative_residual_dec()},
            {"mesh", mesh.to_json()}};
  }
};

// ---- shared machinery ---------------------------------------------------------

namespace detail {

inline double mesh_diameter(const SolidMesh& m) {
  Vec3 lo = Vec3::Constant(std::numeric_limits<double>::max()), hi = -lo;
  for (const auto& v : m.vertices) {
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }
  return m.vertices.empty() ? 0.0 : (hi - lo).norm();
}

inline double fd_step(const SolidMesh& m, const ReillyOptions& opt) {
  return opt.allow_finite_differences ? 1e-5 * mesh_diameter(m) : 0.0;
}

inline MeshMetadata metadata(const SolidMesh& m, const SurfaceComplex& bd, const BoundaryGeometry& g,
                             const ReillyOptions& opt) {
  MeshMetadata md;
  md.vertices = static_cast<int>(m.vertices.size());
  md.tets = static_cast<int>(m.tets.size());
  md.boundary_faces = static_cast<int>(m.boundary_faces.size());
  md.mean_boundary_edge = bd.mean_edge_length();
  md.volume = m.volume();
  md.boundary_area = m.boundary_area();
  md.boundary_geometry = g.name;
  md.tet_rule = opt.tet_rule == TetRule::Midpoint ? "midpoint" : "four-point";
  return md;
}

// Calls fn(x, weight) for every interior quadrature point.
template <class Fn>
void for_tet_points(const SolidMesh& m, TetRule rule, Fn&& fn) {
  const auto q = tet_rule(rule);
  for (const auto& t : m.tets) {
    const Vec3* v[4] = {&m.vertices[t[0]], &m.vertices[t[1]], &m.vertices[t[2]], &m.vertices[t[3]]};
    const double vol = std::abs(tet_signed_volume(*v[0], *v[1], *v[2], *v[3]));
    for (const auto& qp : q) {
      const Vec3 x = qp.bary(0) * *v[0] + qp.bary(1) * *v[1] + qp.bary(2) * *v[2] + qp.bary(3) * *v[3];
      fn(x, vol * qp.weight);
    }
  }
}

// Calls fn(face, x, bary, weight) for every boundary quadrature point.
template <class Fn>
void for_boundary_points(const SolidMesh& m, Fn&& fn) {
  const auto q = triangle_rule();
  for (std::size_t f = 0; f < m.boundary_faces.size(); ++f) {
    const auto& t = m.boundary_faces[f];
    const Vec3 &a = m.vertices[t[0]], &b = m.vertices[t[1]], &c = m.vertices[t[2]];
    const double area = 0.5 * (b - a).cross(c - a).norm();
    for (const auto& qp : q) {
      const Eigen::Vector3d bary = qp.bary.head<3>();
      fn(static_cast<int>(f), bary(0) * a + bary(1) * b + bary(2) * c, bary, area * qp.weight);
    }
  }
}

// Surface point built from a boundary sample: frame from the normal, shape
// restricted to the frame.
inline SurfacePoint surface_point_from(const Vec3& x, const BoundarySample& s) {
  SurfacePoint p;
  p.x = x;
  p.normal = s.normal;
  p.e = tangent_frame(as_std(s.normal));
  Eigen::Matrix<double, 3, 2> e;
  for (int i = 0; i < 2; ++i) e.col(i) = Vec3(p.e[i][0], p.e[i][1], p.e[i][2]);
  p.shape = e.transpose() * s.shape * e;
  p.shape = 0.5 * (p.shape + p.shape.transpose());
  p.ambient_shape = e * p.shape * e.transpose();
  return p;
}

// Geometry at a boundary vertex: evaluated at the vertex corner of one incident face.
inline BoundarySample vertex_sample(const SurfaceComplex& bd, const BoundaryGeometry& g, int v) {
  const int f = bd.vertex_faces(v).front();
  Eigen::Vector3d bary = Eigen::Vector3d::Zero();
  for (int k = 0; k < 3; ++k)
    if (bd.faces()[f][k] == v) bary(k) = 1.0;
  return g.sample(f, bd.vertices()[v], bary);
}

inline double form_along(const Form& w, const Vec3& t) {
  return w[0] * t(0) + w[1] * t(1) + w[2] * t(2);
}

// 2-form w on the oriented triangle (a, b, c): w(b - a, c - a) / 2 times the
// average over the rule.
inline double form_on_triangle(const SampledField& f, const Vec3& a, const Vec3& b, const Vec3& c) {
  const Vec3 u = b - a, v = c - a;
  double acc = 0.0;
  for (const auto& qp : triangle_rule()) {
    const Vec3 x = qp.bary(0) * a + qp.bary(1) * b + qp.bary(2) * c;
    const Form w = f.value(x);
    // w(u, v) = sum_{i<j} w_ij (u_i v_j - u_j v_i)
    const double w12 = w[0] * (u(0) * v(1) - u(1) * v(0));
    const double w13 = w[1] * (u(0) * v(2) - u(2) * v(0));
    const double w23 = w[2] * (u(1) * v(2) - u(2) * v(1));
    acc += qp.weight * (w12 + w13 + w23);
  }
  return 0.5 * acc;
}

inline Form hodge_star_ambient(const Form& w) { return hodge_star(w); }

}  // namespace detail

// ---- p-form identity ------------------------------------------------------------

inline void check_curvature_supported(const CurvatureTerm& c) {
  if (!std::holds_alternative<ConstantCurvature>(c.kind()))
    throw ReillyError("curvature term '" + c.name() +
                      "' is not supported: only flat solids and the constant-curvature rule are accepted");
}

inline ReillyLedger evaluate_reilly(const SolidMesh& m, const SampledField& field, const BoundaryGeometry& geom,
                                    const ReillyOptions& opt = {}) {
  const int p = field.degree();
  if (p < 1 || p > 3) throw ReillyError("evaluate_reilly: field degree must be in [1, 3]");
  check_curvature_supported(opt.curvature);
  const double h = detail::fd_step(m, opt);
  const double w_curv = opt.curvature.value(3, p);

  ReillyLedger L;
  L.field = field.name();
  L.degree = p;
  L.curvature_kind = opt.curvature.name();

  std::vector<double> t_lhs, t_dir, t_curv;
  detail::for_tet_points(m, opt.tet_rule, [&](const Vec3& x, double w) {
    const FieldJet j = field_jet(field, x, h);
    double dir = 0.0;
    for (const auto& d : j.partial) dir += d.norm_squared();
    const double dd = p < 3 ? ambient_d(j).norm_squared() : 0.0;
    t_lhs.push_back(w * (dd + ambient_delta(j).norm_squared()));
    t_dir.push_back(w * dir);
    t_curv.push_back(w * w_curv * j.value.norm_squared());
  });
  L.lhs = pairwise_sum(t_lhs);
  L.dirichlet = pairwise_sum(t_dir);
  L.curvature_term = pairwise_sum(t_curv);

  std::vector<double> t_cross, t_b1, t_b2;
  detail::for_boundary_points(m, [&](int f, const Vec3& x, const Eigen::Vector3d& bary, double w) {
    const auto sp = detail::surface_point_from(x, geom.sample(f, x, bary));
    const FieldJet j = field_jet(field, x, h);
    const Form inw = *restrict_normal(j.value, sp);
    const auto delta_j = commutation_codifferential_rhs(sp, j);
    t_cross.push_back(w * 2.0 * (delta_j ? inner(inw, *delta_j) : 0.0));

    double tang = 0.0;
    if (const auto jw = restrict_tangential(j.value, sp)) tang = inner(induced_endomorphism(sp.shape, p).apply(*jw), *jw);
    const Form jstar = *restrict_tangential(hodge_star(j.value), sp);  // degree 3 - p <= 2
    const double b1 = tang + inner(induced_endomorphism(sp.shape, 3 - p).apply(jstar), jstar);
    double b2 = tang + sp.shape.trace() * inw.norm_squared();
    if (p - 1 <= 2) b2 -= inner(induced_endomorphism(sp.shape, p - 1).apply(inw), inw);
    L.boundary_gap = std::max(L.boundary_gap, std::abs(b1 - b2));
    t_b1.push_back(w * b1);
    t_b2.push_back(w * b2);
  });
  L.cross_term = pairwise_sum(t_cross);
  L.boundary_term = pairwise_sum(t_b1);
  L.boundary_term_alt = pairwise_sum(t_b2);

  // DEC path: int <i_N w, delta^bd J* w> = int <d^bd i_N w, J* w> on the closed boundary.
  const auto [bmesh, to_solid] = m.boundary_surface();
  const SurfaceComplex bd(bmesh);
  const auto ops = assemble_dec(bd, opt.dec);
  const auto& V = bd.vertices();
  if (p == 1) {
    Eigen::VectorXd fv(bd.num_vertices());
    for (int v = 0; v < bd.num_vertices(); ++v) {
      const Vec3 n = detail::vertex_sample(bd, geom, v).normal;
      fv(v) = detail::form_along(field.value(V[v]), n);
    }
    Eigen::VectorXd ue(bd.num_edges());
    for (int e = 0; e < bd.num_edges(); ++e) {
      const Vec3 a = V[bd.edges()[e].a], b = V[bd.edges()[e].b];
      double acc = 0.0;
      for (const auto& [t, wt] : segment_rule()) acc += wt * detail::form_along(field.value(a + t * (b - a)), b - a);
      ue(e) = acc;
    }
    const Eigen::VectorXd df = ops.d0 * fv;
    L.cross_term_dec = 2.0 * df.dot(ops.star1.asDiagonal() * ue);
  } else if (p == 2) {
    // i_N w integrated along edges, N from the geometry on an incident face.
    Eigen::VectorXd ge(bd.num_edges());
    for (int e = 0; e < bd.num_edges(); ++e) {
      const int ia = bd.edges()[e].a, ib = bd.edges()[e].b;
      const int f = bd.edge_faces(e).front();
      int ka = 0, kb = 0;
      for (int k = 0; k < 3; ++k) {
        if (bd.faces()[f][k] == ia) ka = k;
        if (bd.faces()[f][k] == ib) kb = k;
      }
      const Vec3 a = V[ia], b = V[ib];
      double acc = 0.0;
      for (const auto& [t, wt] : segment_rule()) {
        Eigen::Vector3d bary = Eigen::Vector3d::Zero();
        bary(ka) = 1.0 - t;
        bary(kb) = t;
        const Vec3 x = a + t * (b - a);
        const Vec3 n = geom.sample(f, x, bary).normal;
        const Form inw = interior_product(as_std(n), field.value(x));
        acc += wt * detail::form_along(inw, b - a);
      }
      ge(e) = acc;
    }
    Eigen::VectorXd cf(bd.num_faces());
    for (int f = 0; f < bd.num_faces(); ++f) {
      const auto& t = bd.faces()[f];
      cf(f) = detail::form_on_triangle(field, V[t[0]], V[t[1]], V[t[2]]);
    }
    const Eigen::VectorXd dg = ops.d1 * ge;
    L.cross_term_dec = 2.0 * dg.dot(ops.star2.asDiagonal() * cf);
  }
  L.mesh = detail::metadata(m, bd, geom, opt);
  return L;
}

// ---- scalar identity ------------------------------------------------------------

inline ClassicalLedger evaluate_classical_reilly(const SolidMesh& m, const ScalarField& f, const BoundaryGeometry& geom,
                                                 const ReillyOptions& opt = {}) {
  check_curvature_supported(opt.curvature);
  const double h = detail::fd_step(m, opt);
  // Ric = n kappa g on a constant-curvature (n+1)-manifold.
  const double ric = opt.curvature.value(3, 1);

  ClassicalLedger L;
  L.field = f.name();
  std::vector<double> t_lap, t_hess, t_ric;
  detail::for_tet_points(m, opt.tet_rule, [&](const Vec3& x, double w) {
    const Eigen::Matrix3d hs = f.hessian(x, h);
    const Vec3 g = f.gradient(x, h);
    t_lap.push_back(w * hs.trace() * hs.trace());
    t_hess.push_back(w * hs.squaredNorm());
    t_ric.push_back(w * ric * g.squaredNorm());
  });
  L.laplacian_sq = pairwise_sum(t_lap);
  L.hessian_sq = pairwise_sum(t_hess);
  L.ricci_term = pairwise_sum(t_ric);

  std::vector<double> t_nl, t_s, t_m;
  detail::for_boundary_points(m, [&](int face, const Vec3& x, const Eigen::Vector3d& bary, double w) {
    const auto s = geom.sample(face, x, bary);
    const Vec3 n = s.normal;
    const Vec3 g = f.gradient(x, h);
    const Eigen::Matrix3d hs = f.hessian(x, h);
    const double fn = g.dot(n);
    const double nh = s.shape.trace();
    const Vec3 gt = g - fn * n;
    // Surface Laplacian (positive spectrum) of the restriction of f.
    const double lap = -(hs.trace() - n.dot(hs * n)) - nh * fn;
    t_nl.push_back(w * 2.0 * fn * lap);
    t_s.push_back(w * gt.dot(s.shape * gt));
    t_m.push_back(w * nh * fn * fn);
  });
  L.normal_laplacian = pairwise_sum(t_nl);
  L.shape_term = pairwise_sum(t_s);
  L.mean_term = pairwise_sum(t_m);

  // DEC: int f_N Delta f = int <grad f_N, grad f> on the closed boundary.
  const auto [bmesh, to_solid] = m.boundary_surface();
  const SurfaceComplex bd(bmesh);
  const auto ops = assemble_dec(bd, opt.dec);
  Eigen::VectorXd fv(bd.num_vertices()), fnv(bd.num_vertices());
  for (int v = 0; v < bd.num_vertices(); ++v) {
    const Vec3& x = bd.vertices()[v];
    fv(v) = f.value(x);
    fnv(v) = f.gradient(x, h).dot(detail::vertex_sample(bd, geom, v).normal);
  }
  const Eigen::VectorXd a = ops.d0 * fnv, b = ops.d0 * fv;
  L.normal_laplacian_dec = 2.0 * a.dot(ops.star1.asDiagonal() * b);
  L.mesh = detail::metadata(m, bd, geom, opt);
  return L;
}

// ---- integrated Stokes formula ------------------------------------------------

struct StokesResult {
  double lhs = 0.0;       // int <d w, phi>
  double interior = 0.0;  // int <w, delta phi>
  double boundary = 0.0;  // int_bd <J* w, i_N phi>
  double rhs() const { return interior - boundary; }
  double residual() const { return lhs - rhs(); }
  double relative_residual() const {
    const double s = std::max({std::abs(lhs), std::abs(interior), std::abs(boundary)});
    return s > 0 ? std::abs(residual()) / s : 0.0;
  }
  nlohmann::json to_json() const {
    return {{"lhs", lhs}, {"interior", interior}, {"boundary", boundary}, {"residual", residual()},
            {"relative_residual", relative_residual()}};
  }
};

// int <dw, phi> = int <w, delta phi> - int_bd <J* w, i_N phi>, w of degree p-1.
// The default geometry is the polyhedron's own face normals.
inline StokesResult check_stokes(const SolidMesh& m, const SampledField& w, const SampledField& phi,
                                 const std::optional<BoundaryGeometry>& geom = std::nullopt,
                                 const ReillyOptions& opt = {}) {
  if (phi.degree() < 1 || w.degree() != phi.degree() - 1)
    throw ReillyError("check_stokes: need deg(w) = deg(phi) - 1 >= 0");
  const double h = detail::fd_step(m, opt);
  const BoundaryGeometry g = geom ? *geom : polyhedral_boundary(m);
  StokesResult r;
  std::vector<double> t_l, t_i, t_b;
  detail::for_tet_points(m, opt.tet_rule, [&](const Vec3& x, double wt) {
    const FieldJet jw = field_jet(w, x, h), jp = field_jet(phi, x, h);
    t_l.push_back(wt * inner(ambient_d(jw), jp.value));
    t_i.push_back(wt * inner(jw.value, ambient_delta(jp)));
  });
  detail::for_boundary_points(m, [&](int f, const Vec3& x, const Eigen::Vector3d& bary, double wt) {
    const auto sp = detail::surface_point_from(x, g.sample(f, x, bary));
    const auto jw = restrict_tangential(w.value(x), sp);
    const auto ip = restrict_normal(phi.value(x), sp);
    t_b.push_back(wt * (jw && ip ? inner(*jw, *ip) : 0.0));
  });
  r.lhs = pairwise_sum(t_l);
  r.interior = pairwise_sum(t_i);
  r.boundary = pairwise_sum(t_b);
  return r;
}

// ---- convergence tables ------------------------------------------------------------

struct ConvergenceRow {
  int level = 0;
  MeshMetadata mesh;
  double lhs = 0.0;
  double residual = 0.0;
  double relative_residual = 0.0;
  double residual_dec = 0.0;
  double relative_residual_dec = 0.0;
};

inline ConvergenceRow convergence_row(int level, const ReillyLedger& l) {
  return {level, l.mesh, l.lhs, l.residual(), l.relative_residual(), l.residual_dec(), l.relative_residual_dec()};
}

inline ConvergenceRow convergence_row(int level, const ClassicalLedger& l) {
  return {level, l.mesh, l.lhs(), l.residual(), l.relative_residual(), l.residual_dec(), l.relative_residual_dec()};
}

inline void write_convergence_csv(std::ostream& os, const std::vector<ConvergenceRow>& rows) {
  os << "level,tets,boundary_faces,mean_boundary_edge,lhs,residual,relative_residual,residual_dec,relative_residual_dec\n";
  os.precision(17);
  for (const auto& r : rows)
    os << r.level << ',' << r.mesh.tets << ',' << r.mesh.boundary_faces << ',' << r.mesh.mean_boundary_edge << ','
       << r.lhs << ',' << r.residual << ',' << r.relative_residual << ',' << r.residual_dec << ','
       << r.relative_residual_dec << '\n';
}

// True when |residual| strictly decreases level to level.
inline bool residuals_decreasing(const std::vector<ConvergenceRow>& rows) {
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (!(std::abs(rows[i].residual) < std::abs(rows[i - 1].residual))) return false;
  return true;
}

}  // namespace reilly
