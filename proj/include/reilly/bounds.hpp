#pragma once

// Eigenvalue inequalities for boundaries of Euclidean domains, evaluated on
// analytic spheres and on meshes, with explicit applicability.

#include <cmath>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "reilly/curvature.hpp"
#include "reilly/mesh.hpp"
#include "reilly/shape.hpp"
#include "reilly/spectrum.hpp"

namespace reilly {

class BoundsError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class VerdictState { Satisfied, Violated, Inapplicable };

inline const char* to_string(VerdictState s) {
  switch (s) {
    case VerdictState::Satisfied: return "satisfied";
    case VerdictState::Violated: return "violated";
    case VerdictState::Inapplicable: return "inapplicable";
  }
  return "unknown";
}

inline constexpr double kMeshTolerance = 0.03;
inline constexpr double kAnalyticTolerance = 1e-12;

struct BoundVerdict {
  std::string name;
  std::string geometry;
  int p = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  std::string lhs_formula;
  std::string rhs_formula;
  VerdictState state = VerdictState::Inapplicable;
  double slack = 0.0;      // >= 0 when the inequality holds
  double tightness = 0.0;  // |slack| / max(|lhs|, |rhs|)
  double tolerance = 0.0;  // relative to max(|lhs|, |rhs|)
  bool equality = false;   // tightness within tolerance
  std::string reason;      // why a verdict is inapplicable

  bool satisfied() const { return state == VerdictState::Satisfied; }
  bool violated() const { return state == VerdictState::Violated; }

  nlohmann::json to_json() const {
    nlohmann::json j{{"name", name},         {"geometry", geometry},   {"p", p},
                     {"state", to_string(state)}, {"tolerance", tolerance}};
    if (state != VerdictState::Inapplicable) {
      j["lhs"] = {{"value", lhs}, {"formula", lhs_formula}};
      j["rhs"] = {{"value", rhs}, {"formula", rhs_formula}};
      j["slack"] = slack;
      j["tightness"] = tightness;
      j["equality"] = equality;
    } else {
      j["reason"] = reason;
    }
    return j;
  }
};

// The data every bound needs about a boundary hypersurface and its domain.
struct GeometryCase {
  std::string name;
  bool analytic = true;
  int n = 2;  // dimension of the boundary
  double radius = 0.0;  // analytic spheres only

  std::vector<double> sigma;   // sigma[p-1]: lowest p-curvature over the surface
  double min_curvature = 0.0;  // lowest principal curvature
  double mean_shape_sq = 0.0;  // int |S|^2 / Vol(boundary)
  std::vector<double> mean_shape_sq_p;  // [k-1]: int |S|_k^2 / Vol(boundary)
  double mean_curvature = 0.0;          // area-weighted mean of H
  double boundary_volume = 0.0;
  double domain_volume = 0.0;

  std::optional<double> lambda1;                 // first positive eigenvalue on functions
  std::map<int, double> lambda_exact;            // first eigenvalue on exact p-forms
  std::map<int, double> lambda_coexact;          // first eigenvalue on coexact p-forms
  std::map<int, bool> cohomology_vanishes;       // H^p(boundary) = 0, supplied per case
  bool curvature_term_nonnegative = true;        // W[p] >= 0 on the domain (flat: true)
  bool ricci_nonnegative = true;
  bool minimal = false;
  double tolerance = kAnalyticTolerance;
  nlohmann::json metadata = nlohmann::json::object();

  double sigma_p(int p) const {
    if (p < 1 || p > n) throw BoundsError("sigma_p: degree out of range");
    return sigma[p - 1];
  }

  // Hodge bookkeeping: lambda_{1,p} = min(exact, coexact) when both are known.
  std::optional<double> lambda_p(int p) const {
    const auto e = lambda_exact.find(p);
    const auto c = lambda_coexact.find(p);
    if (e == lambda_exact.end() || c == lambda_coexact.end()) return std::nullopt;
    return std::min(e->second, c->second);
  }

  nlohmann::json to_json() const {
    nlohmann::json j{{"name", name},
                     {"analytic", analytic},
                     {"n", n},
                     {"sigma", sigma},
                     {"min_curvature", min_curvature},
                     {"mean_shape_sq", mean_shape_sq},
                     {"mean_shape_sq_p", mean_shape_sq_p},
                     {"mean_curvature", mean_curvature},
                     {"boundary_volume", boundary_volume},
                     {"domain_volume", domain_volume},
                     {"minimal", minimal},
                     {"tolerance", tolerance},
                     {"metadata", metadata}};
    if (analytic) j["radius"] = radius;
    if (lambda1) j["lambda1"] = *lambda1;
    for (const auto& [p, v] : lambda_exact) j["lambda_exact"][std::to_string(p)] = v;
    for (const auto& [p, v] : lambda_coexact) j["lambda_coexact"][std::to_string(p)] = v;
    for (const auto& [p, v] : cohomology_vanishes) j["cohomology_vanishes"][std::to_string(p)] = v;
    return j;
  }
};

// ---- closed forms --------------------------------------------------------------------

// Volume of the unit ball in R^d.
inline double unit_ball_volume(int d) {
  return std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d + 1.0);
}

// Round sphere of radius r in R^{n+1} bounding a ball.
inline GeometryCase analytic_sphere(int n, double r = 1.0) {
  if (n < 1) throw BoundsError("analytic_sphere: n must be positive");
  if (!(r > 0)) throw BoundsError("analytic_sphere: radius must be positive");
  GeometryCase g;
  g.name = "sphere(n=" + std::to_string(n) + ",r=" + nlohmann::json(r).dump() + ")";
  g.analytic = true;
  g.n = n;
  g.radius = r;
  for (int p = 1; p <= n; ++p) {
    g.sigma.push_back(p / r);
    g.mean_shape_sq_p.push_back(p / (r * r));
  }
  g.min_curvature = 1.0 / r;
  g.mean_shape_sq = n / (r * r);
  g.mean_curvature = 1.0 / r;
  g.domain_volume = unit_ball_volume(n + 1) * std::pow(r, n + 1);
  g.boundary_volume = (n + 1) * unit_ball_volume(n + 1) * std::pow(r, n);
  g.lambda1 = n / (r * r);
  for (int p = 1; p <= n; ++p) {
    g.lambda_exact[p] = static_cast<double>(sphere_hodge_oracle(n, p).first) / (r * r);
    // Coexact p-forms are Hodge-dual to exact (n-p)-forms.
    if (p < n) g.lambda_coexact[p] = static_cast<double>(sphere_hodge_oracle(n, n - p).first) / (r * r);
  }
  for (int p = 0; p <= n; ++p) g.cohomology_vanishes[p] = p != 0 && p != n;
  g.tolerance = kAnalyticTolerance;
  return g;
}

struct MeshCaseOptions {
  int spectrum_k = 8;
  SpectrumOptions spectrum{};
  ShapeFitOptions fit{};
  bool one_form_spectrum = false;  // also fill lambda_coexact[1] from the 1-form path
  std::optional<AnalyticEllipsoid> exact_curvature;  // use closed-form curvature at vertices
  double tolerance = kMeshTolerance;
};

// Mesh-backed case: curvatures from the fitted shape operator (or a closed
// form), lambda_1 from the cotan spectrum, topology from the genus.
inline GeometryCase mesh_case(const std::string& name, const SurfaceComplex& c, const MeshCaseOptions& opt = {}) {
  if (!c.is_closed()) throw BoundsError("mesh_case: surface must be closed");
  if (c.num_components() != 1) throw BoundsError("mesh_case: surface must be connected");
  GeometryCase g;
  g.name = name;
  g.analytic = false;
  g.n = 2;
  g.tolerance = opt.tolerance;

  const auto shape = discrete_shape(c, opt.fit);
  std::vector<ShapeData> data;
  data.reserve(c.num_vertices());
  for (int v = 0; v < c.num_vertices(); ++v) {
    if (opt.exact_curvature) {
      const auto k = opt.exact_curvature->principal(opt.exact_curvature->project(c.vertices()[v]));
      data.push_back(make_shape_data({k[0], k[1]}));
    } else {
      data.push_back(make_shape_data(Eigen::MatrixXd(shape.shape_matrix(v))));
    }
  }
  double area = 0.0, s2 = 0.0, h = 0.0;
  std::vector<double> s2p(2, 0.0);
  for (int v = 0; v < c.num_vertices(); ++v) {
    const double w = shape.area_weight(v);
    area += w;
    double sq = 0.0;
    for (double e : data[v].principal) sq += e * e;
    s2 += w * sq;
    h += w * data[v].mean;
    for (int k = 1; k <= 2; ++k) s2p[k - 1] += w * s_norm_p(data[v].principal, k);
  }
  for (int p = 1; p <= 2; ++p) g.sigma.push_back(sigma_global(data, p));
  g.min_curvature = g.sigma[0];
  g.mean_shape_sq = s2 / area;
  for (double& x : s2p) x /= area;
  g.mean_shape_sq_p = s2p;
  g.mean_curvature = h / area;
  g.boundary_volume = c.total_area();
  g.domain_volume = std::abs(c.enclosed_volume());

  const auto spec = spectrum_functions(c, opt.spectrum_k, opt.spectrum);
  if (const auto l = spec.first_nonzero()) {
    g.lambda1 = *l;
    g.lambda_exact[1] = *l;  // exact 1-forms are differentials of eigenfunctions
    g.lambda_exact[2] = *l;  // and dual to exact 2-forms on a surface
  }
  if (opt.one_form_spectrum) {
    const auto s1 = spectrum_one_forms(c, opt.spectrum_k + 4 * c.genus(), opt.spectrum);
    if (const auto v = s1.first_of(Family::Coexact)) g.lambda_coexact[1] = *v;
  }
  const bool sphere_like = c.genus() == 0;
  g.cohomology_vanishes = {{0, false}, {1, sphere_like}, {2, false}};
  g.metadata = {{"vertices", c.num_vertices()},
                {"faces", c.num_faces()},
                {"genus", c.genus()},
                {"mean_edge_length", c.mean_edge_length()},
                {"curvature_source", opt.exact_curvature ? "closed-form" : "quadric-fit"},
                {"spectrum_method", spec.method}};
  return g;
}

// ---- verdict construction -----------------------------------------------------------

namespace detail {

// Verdict for lhs >= rhs (or lhs <= rhs when `upper`).
inline BoundVerdict make_verdict(std::string name, const GeometryCase& g, int p, double lhs, double rhs,
                                 std::string lf, std::string rf, bool upper) {
  BoundVerdict v;
  v.name = std::move(name);
  v.geometry = g.name;
  v.p = p;
  v.lhs = lhs;
  v.rhs = rhs;
  v.lhs_formula = std::move(lf);
  v.rhs_formula = std::move(rf);
  v.tolerance = g.tolerance;
  v.slack = upper ? rhs - lhs : lhs - rhs;
  const double scale = std::max(std::abs(lhs), std::abs(rhs));
  v.tightness = scale > 0 ? std::abs(v.slack) / scale : 0.0;
  v.state = v.slack >= -g.tolerance * scale ? VerdictState::Satisfied : VerdictState::Violated;
  v.equality = v.tightness <= g.tolerance;
  return v;
}

inline BoundVerdict inapplicable(std::string name, const GeometryCase& g, int p, std::string reason) {
  BoundVerdict v;
  v.name = std::move(name);
  v.geometry = g.name;
  v.p = p;
  v.tolerance = g.tolerance;
  v.state = VerdictState::Inapplicable;
  v.reason = std::move(reason);
  return v;
}

}  // namespace detail

// lambda'_{1,p} >= sigma_p sigma_{n-p+1} for 1 <= p <= (n+1)/2.
inline BoundVerdict main_lower_bound(const GeometryCase& g, int p) {
  const char* name = "main_lower_bound";
  if (p < 1 || 2 * p > g.n + 1) return detail::inapplicable(name, g, p, "needs 1 <= p <= (n+1)/2");
  if (!g.curvature_term_nonnegative) return detail::inapplicable(name, g, p, "curvature term of the domain not known to be nonnegative");
  if (!(g.sigma_p(p) > 0)) return detail::inapplicable(name, g, p, "boundary is not strictly p-convex (sigma_p <= 0)");
  const auto it = g.lambda_exact.find(p);
  if (it == g.lambda_exact.end()) return detail::inapplicable(name, g, p, "no eigenvalue on exact p-forms available");
  const int q = g.n - p + 1;
  return detail::make_verdict(name, g, p, it->second, g.sigma_p(p) * g.sigma_p(q), "lambda'_{1,p}",
                              "sigma_p * sigma_{n-p+1}", false);
}

// The same bound written in degree n-p+1 (Hodge dual); the right side must not change.
inline double main_lower_bound_dual_rhs(const GeometryCase& g, int p) {
  const int q = g.n - p + 1;
  return g.sigma_p(g.n - q + 1) * g.sigma_p(q);
}

// lambda_1 >= n c^2 for convex boundaries of domains with Ric >= 0.
inline BoundVerdict xia_bound(const GeometryCase& g) {
  const char* name = "xia_bound";
  if (!g.ricci_nonnegative) return detail::inapplicable(name, g, 1, "domain Ricci curvature not known to be nonnegative");
  if (!(g.min_curvature > 0)) return detail::inapplicable(name, g, 1, "boundary not strictly convex (min principal curvature <= 0)");
  if (!g.lambda1) return detail::inapplicable(name, g, 1, "no function eigenvalue available");
  const double c = g.min_curvature;
  return detail::make_verdict(name, g, 1, *g.lambda1, g.n * c * c, "lambda_1", "n c^2", false);
}

// lambda_1 <= n int |S|^2 / Vol when the domain carries a parallel 1-form and H^1 = 0.
inline BoundVerdict upper_bound_degree_one(const GeometryCase& g) {
  const char* name = "upper_bound_degree_one";
  const auto h1 = g.cohomology_vanishes.find(1);
  if (h1 == g.cohomology_vanishes.end()) throw BoundsError("upper_bound_degree_one: case has no H^1 flag");
  if (!h1->second)
    return detail::inapplicable(name, g, 1,
                                "H^1 of the boundary does not vanish; instead dim H^1 >= dim of parallel 1-forms");
  if (!g.lambda1) return detail::inapplicable(name, g, 1, "no function eigenvalue available");
  return detail::make_verdict(name, g, 1, *g.lambda1, g.n * g.mean_shape_sq, "lambda_1", "n int|S|^2 / Vol", true);
}

inline int alpha_p(int n, int p) { return std::max(p, n - p + 1); }

inline double c_np(int n, int p) {
  return std::max(p * (n - p), (p - 1) * (n - p + 1)) / static_cast<double>(n);
}

// lambda'_{1,p} <= alpha(p) int |S|^2_{alpha(p)} / Vol, 2 <= p <= n-1, with
// H^p = H^{n-p+1} = 0. `minimal_variant` uses c(n,p) int |S|^2 / Vol instead.
inline BoundVerdict upper_bound_degree_p(const GeometryCase& g, int p, bool minimal_variant = false) {
  const std::string name = minimal_variant ? "upper_bound_degree_p_minimal" : "upper_bound_degree_p";
  if (p < 2 || p > g.n - 1) throw BoundsError("upper_bound_degree_p: need 2 <= p <= n-1");
  auto flag = [&](int k) {
    const auto it = g.cohomology_vanishes.find(k);
    if (it == g.cohomology_vanishes.end()) throw BoundsError("upper_bound_degree_p: missing cohomology flag");
    return it->second;
  };
  if (!flag(p) || !flag(g.n - p + 1)) return detail::inapplicable(name, g, p, "H^p or H^{n-p+1} of the boundary does not vanish");
  if (minimal_variant && !g.minimal) return detail::inapplicable(name, g, p, "boundary is not minimal");
  const auto it = g.lambda_exact.find(p);
  if (it == g.lambda_exact.end()) return detail::inapplicable(name, g, p, "no eigenvalue on exact p-forms available");
  if (minimal_variant)
    return detail::make_verdict(name, g, p, it->second, c_np(g.n, p) * g.mean_shape_sq, "lambda'_{1,p}",
                                "c(n,p) int|S|^2 / Vol", true);
  const int a = alpha_p(g.n, p);
  return detail::make_verdict(name, g, p, it->second, a * g.mean_shape_sq_p[a - 1], "lambda'_{1,p}",
                              "alpha(p) int|S|^2_alpha(p) / Vol", true);
}

struct SpecialKillingResult {
  double eigenvalue = 0.0;  // c (p+1)(n-p)
  BoundVerdict verdict;
};

// A special Killing p-form with number c on S^n is a coclosed eigenform with
// eigenvalue c(p+1)(n-p). Compared against the first coexact eigenvalue in
// degree p of the round sphere of curvature c, lambda'_{1,p+1}.
inline SpecialKillingResult special_killing_relation(double c, int p, int n) {
  GeometryCase g;
  g.name = "sphere(n=" + std::to_string(n) + ",curvature=" + nlohmann::json(c).dump() + ")";
  g.n = n;
  g.tolerance = kAnalyticTolerance;
  SpecialKillingResult r;
  if (n < 1 || p < 0 || p > n - 1) throw BoundsError("special_killing_relation: need 0 <= p <= n-1");
  if (c < 0) {
    r.verdict = detail::inapplicable("special_killing_relation", g, p, "needs c >= 0");
    return r;
  }
  r.eigenvalue = c * (p + 1) * (n - p);
  const double oracle = c * static_cast<double>(sphere_hodge_oracle(n, p + 1).first);
  r.verdict = detail::make_verdict("special_killing_relation", g, p, oracle, r.eigenvalue, "lambda''_{1,p}(S^n_c)",
                                   "c (p+1)(n-p)", true);
  return r;
}

// Equality geometry: on a round ball vol(bd)/vol = sigma_p + sigma_{n-p+1} = (n+1)/r
// and H = vol(bd) / ((n+1) vol).
struct EqualityDiagnostics {
  std::string geometry;
  int p = 1;
  double volume_ratio = 0.0;   // vol(boundary) / vol(domain)
  double sigma_sum = 0.0;      // sigma_p + sigma_{n-p+1}
  double expected_ratio = 0.0; // (n+1)/r
  double mean_curvature = 0.0;
  double ratio_error = 0.0;    // relative, against expected_ratio
  double sigma_error = 0.0;    // relative, sigma_sum against expected_ratio
  double mean_error = 0.0;     // relative, H against volume_ratio / (n+1)
  double tolerance = 0.0;
  bool passed = false;

  nlohmann::json to_json() const {
    return {{"geometry", geometry},         {"p", p},
            {"volume_ratio", volume_ratio}, {"sigma_sum", sigma_sum},
            {"expected_ratio", expected_ratio}, {"mean_curvature", mean_curvature},
            {"ratio_error", ratio_error},   {"sigma_error", sigma_error},
            {"mean_error", mean_error},     {"tolerance", tolerance},
            {"passed", passed}};
  }
};

// `radius` is the radius of the ball the case represents.
inline EqualityDiagnostics equality_case_diagnostics(const GeometryCase& g, int p, double radius) {
  if (p < 1 || p > g.n) throw BoundsError("equality_case_diagnostics: p out of range");
  EqualityDiagnostics d;
  d.geometry = g.name;
  d.p = p;
  d.tolerance = g.analytic ? kAnalyticTolerance : 0.02;
  d.volume_ratio = g.boundary_volume / g.domain_volume;
  d.sigma_sum = g.sigma_p(p) + g.sigma_p(g.n - p + 1);
  d.expected_ratio = (g.n + 1) / radius;
  d.mean_curvature = g.mean_curvature;
  d.ratio_error = std::abs(d.volume_ratio - d.expected_ratio) / d.expected_ratio;
  d.sigma_error = std::abs(d.sigma_sum - d.expected_ratio) / d.expected_ratio;
  const double ros = d.volume_ratio / (g.n + 1);
  d.mean_error = std::abs(d.mean_curvature - ros) / ros;
  d.passed = d.ratio_error <= d.tolerance && d.sigma_error <= d.tolerance && d.mean_error <= d.tolerance;
  return d;
}

// ---- suites ----------------------------------------------------------------------------

struct SuiteReport {
  std::string suite;
  std::vector<GeometryCase> cases;
  std::vector<BoundVerdict> verdicts;
  std::vector<EqualityDiagnostics> diagnostics;

  bool any_violation() const {
    return std::any_of(verdicts.begin(), verdicts.end(), [](const auto& v) { return v.violated(); });
  }

  nlohmann::json to_json() const {
    nlohmann::json j{{"suite", suite}};
    j["cases"] = nlohmann::json::array();
    for (const auto& c : cases) j["cases"].push_back(c.to_json());
    j["verdicts"] = nlohmann::json::array();
    for (const auto& v : verdicts) j["verdicts"].push_back(v.to_json());
    j["diagnostics"] = nlohmann::json::array();
    for (const auto& d : diagnostics) j["diagnostics"].push_back(d.to_json());
    j["violations"] = std::count_if(verdicts.begin(), verdicts.end(), [](const auto& v) { return v.violated(); });
    return j;
  }

  // Theorem x geometry grid: state and tightness per cell.
  void write_table(std::ostream& os) const {
    std::vector<std::string> rows, cols;
    auto add = [](std::vector<std::string>& v, const std::string& s) {
      if (std::find(v.begin(), v.end(), s) == v.end()) v.push_back(s);
    };
    for (const auto& v : verdicts) {
      add(rows, v.name + " p=" + std::to_string(v.p));
      add(cols, v.geometry);
    }
    std::size_t w0 = 8;
    for (const auto& r : rows) w0 = std::max(w0, r.size());
    auto pad = [](std::string s, std::size_t w) {
      s.resize(std::max(s.size(), w), ' ');
      return s;
    };
    os << pad("theorem", w0);
    for (const auto& c : cols) os << " | " << pad(c, 22);
    os << '\n';
    for (const auto& r : rows) {
      os << pad(r, w0);
      for (const auto& c : cols) {
        std::string cell = "-";
        for (const auto& v : verdicts)
          if (v.geometry == c && v.name + " p=" + std::to_string(v.p) == r) {
            char buf[64];
            if (v.state == VerdictState::Inapplicable)
              cell = "n/a";
            else {
              std::snprintf(buf, sizeof buf, "%s%s %.2e", v.violated() ? "VIOLATED" : "ok", v.equality ? "(=)" : "",
                            v.tightness);
              cell = buf;
            }
          }
        os << " | " << pad(cell, 22);
      }
      os << '\n';
    }
  }
};

// Analytic spheres S^n of radius r for n = 1..max_n.
inline SuiteReport sphere_suite(int max_n = 7, const std::vector<double>& radii = {1.0, 2.5}) {
  SuiteReport rep;
  rep.suite = "spheres";
  for (int n = 1; n <= max_n; ++n)
    for (double r : radii) {
      const auto g = analytic_sphere(n, r);
      rep.cases.push_back(g);
      for (int p = 1; 2 * p <= n + 1; ++p) rep.verdicts.push_back(main_lower_bound(g, p));
      rep.verdicts.push_back(xia_bound(g));
      rep.verdicts.push_back(upper_bound_degree_one(g));
      if (n % 2 == 1 && n >= 3) rep.verdicts.push_back(upper_bound_degree_p(g, (n + 1) / 2));
      for (int p = 1; p <= n; ++p) rep.diagnostics.push_back(equality_case_diagnostics(g, p, r));
    }
  for (int n = 1; n <= max_n; ++n)
    for (int p = 0; p <= n - 1; ++p) rep.verdicts.push_back(special_killing_relation(1.0, p, n).verdict);
  return rep;
}

struct EllipsoidParams {
  double a, b, c;
};

inline const std::vector<EllipsoidParams>& default_ellipsoids() {
  static const std::vector<EllipsoidParams> e = {
      {1.0, 1.0, 1.2}, {1.0, 1.1, 1.2}, {1.0, 1.0, 1.5}, {1.2, 1.0, 0.9}, {1.0, 1.3, 1.6}};
  return e;
}

inline std::string ellipsoid_name(const EllipsoidParams& e) {
  return "ellipsoid(" + nlohmann::json(e.a).dump() + "," + nlohmann::json(e.b).dump() + "," +
         nlohmann::json(e.c).dump() + ")";
}

inline SuiteReport ellipsoid_suite(int subdivisions = 4, const std::vector<EllipsoidParams>& family = default_ellipsoids(),
                                   const MeshCaseOptions& opt = {}) {
  SuiteReport rep;
  rep.suite = "ellipsoids";
  for (const auto& e : family) {
    const SurfaceComplex c(generate_ellipsoid(e.a, e.b, e.c, subdivisions));
    const auto g = mesh_case(ellipsoid_name(e), c, opt);
    rep.cases.push_back(g);
    rep.verdicts.push_back(main_lower_bound(g, 1));
    rep.verdicts.push_back(xia_bound(g));
    rep.verdicts.push_back(upper_bound_degree_one(g));
  }
  return rep;
}

// Mesh ball: equality diagnostics against the unit-ball closed forms.
inline SuiteReport ball_mesh_suite(int subdivisions = 4, const MeshCaseOptions& opt = {}) {
  SuiteReport rep;
  rep.suite = "ball-mesh";
  const SurfaceComplex c(generate_icosphere(subdivisions, 1.0));
  const auto g = mesh_case("icosphere(" + std::to_string(subdivisions) + ")", c, opt);
  rep.cases.push_back(g);
  rep.verdicts.push_back(main_lower_bound(g, 1));
  rep.verdicts.push_back(xia_bound(g));
  rep.verdicts.push_back(upper_bound_degree_one(g));
  for (int p = 1; p <= 2; ++p) rep.diagnostics.push_back(equality_case_diagnostics(g, p, 1.0));
  return rep;
}

}  // namespace reilly
