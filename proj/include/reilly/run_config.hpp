#pragma once

// Parsing of the command-line geometry grammar, level ranges and theorem
// names, plus the builders that turn a geometry spec into meshes.
//
//   icosphere:s[,r]      sphere surface, s subdivisions of the icosahedron
//   ball:s[,r]           solid ball; its boundary is icosphere:s,r
//   ellipsoid:a,b,c,s    semi-axes a,b,c; surface or solid
//   torus:R,r,nu,nv      surface only, nu x nv grid

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "reilly/mesh.hpp"
#include "reilly/reilly.hpp"

namespace reilly {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct GeometrySpec {
  std::string kind;
  std::vector<double> params;
  std::string text;
};

namespace detail {

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

inline double parse_number(const std::string& tok, const std::string& ctx) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(tok, &used);
  } catch (const std::exception&) {
    throw ConfigError(ctx + ": '" + tok + "' is not a number");
  }
  if (used != tok.size() || !std::isfinite(v)) throw ConfigError(ctx + ": '" + tok + "' is not a number");
  return v;
}

inline int as_count(double v, const std::string& what, const std::string& ctx, int lo) {
  if (v != std::floor(v) || v < lo || v > 1e6) throw ConfigError(ctx + ": " + what + " must be an integer >= " + std::to_string(lo));
  return static_cast<int>(v);
}

inline void require_positive(double v, const std::string& what, const std::string& ctx) {
  if (!(v > 0)) throw ConfigError(ctx + ": " + what + " must be positive");
}

}  // namespace detail

inline GeometrySpec parse_geometry_spec(const std::string& text) {
  GeometrySpec g;
  g.text = text;
  const auto colon = text.find(':');
  g.kind = text.substr(0, colon);
  if (colon != std::string::npos)
    for (const auto& tok : detail::split(text.substr(colon + 1), ','))
      g.params.push_back(detail::parse_number(tok, "geometry '" + text + "'"));
  const std::string& ctx = "geometry '" + text + "'";
  const auto n = g.params.size();
  if (g.kind == "icosphere" || g.kind == "ball") {
    if (n < 1 || n > 2) throw ConfigError(ctx + ": expected " + g.kind + ":s[,r]");
    detail::as_count(g.params[0], "subdivisions", ctx, 0);
    if (n == 2) detail::require_positive(g.params[1], "radius", ctx);
  } else if (g.kind == "ellipsoid") {
    if (n != 4) throw ConfigError(ctx + ": expected ellipsoid:a,b,c,s");
    for (int i = 0; i < 3; ++i) detail::require_positive(g.params[i], "semi-axis", ctx);
    detail::as_count(g.params[3], "subdivisions", ctx, 0);
  } else if (g.kind == "torus") {
    if (n != 4) throw ConfigError(ctx + ": expected torus:R,r,nu,nv");
    detail::require_positive(g.params[0], "major radius", ctx);
    detail::require_positive(g.params[1], "minor radius", ctx);
    if (!(g.params[1] < g.params[0])) throw ConfigError(ctx + ": minor radius must be below the major radius");
    detail::as_count(g.params[2], "nu", ctx, 3);
    detail::as_count(g.params[3], "nv", ctx, 3);
  } else {
    throw ConfigError(ctx + ": unknown kind '" + g.kind + "' (icosphere, ball, ellipsoid, torus)");
  }
  return g;
}

inline int spec_subdivisions(const GeometrySpec& g) {
  if (g.kind == "icosphere" || g.kind == "ball") return static_cast<int>(g.params[0]);
  if (g.kind == "ellipsoid") return static_cast<int>(g.params[3]);
  throw ConfigError("geometry '" + g.text + "' has no subdivision level");
}

inline GeometrySpec with_subdivisions(GeometrySpec g, int s) {
  if (s < 0) throw ConfigError("subdivision level must be >= 0");
  if (g.kind == "icosphere" || g.kind == "ball")
    g.params[0] = s;
  else if (g.kind == "ellipsoid")
    g.params[3] = s;
  else
    throw ConfigError("geometry '" + g.text + "' has no subdivision level");
  return g;
}

inline std::string spec_string(const GeometrySpec& g) {
  std::string s = g.kind;
  for (std::size_t i = 0; i < g.params.size(); ++i) s += (i ? "," : ":") + nlohmann::json(g.params[i]).dump();
  return s;
}

inline SurfaceMesh make_surface(const GeometrySpec& g) {
  const auto& q = g.params;
  if (g.kind == "icosphere" || g.kind == "ball") return generate_icosphere(static_cast<int>(q[0]), q.size() > 1 ? q[1] : 1.0);
  if (g.kind == "ellipsoid") return generate_ellipsoid(q[0], q[1], q[2], static_cast<int>(q[3]));
  return generate_torus(q[0], q[1], static_cast<int>(q[2]), static_cast<int>(q[3]));
}

inline SolidMesh make_solid(const GeometrySpec& g) {
  const auto& q = g.params;
  if (g.kind == "icosphere" || g.kind == "ball") return generate_ball(static_cast<int>(q[0]), q.size() > 1 ? q[1] : 1.0);
  if (g.kind == "ellipsoid") return generate_ellipsoid_solid(q[0], q[1], q[2], static_cast<int>(q[3]));
  throw ConfigError("geometry '" + g.text + "' has no solid generator");
}

// Closed-form boundary geometry of a generated solid.
inline BoundaryGeometry exact_boundary(const GeometrySpec& g) {
  const auto& q = g.params;
  if (g.kind == "icosphere" || g.kind == "ball") return sphere_boundary(Vec3::Zero(), q.size() > 1 ? q[1] : 1.0);
  if (g.kind == "ellipsoid") return ellipsoid_boundary(q[0], q[1], q[2]);
  throw ConfigError("geometry '" + g.text + "' has no closed-form boundary");
}

// "3", "1..3", or "1,2,4"; strictly increasing, non-negative.
inline std::vector<int> parse_levels(const std::string& text) {
  std::vector<int> out;
  const std::string ctx = "levels '" + text + "'";
  const auto dots = text.find("..");
  if (dots != std::string::npos) {
    const int a = detail::as_count(detail::parse_number(text.substr(0, dots), ctx), "level", ctx, 0);
    const int b = detail::as_count(detail::parse_number(text.substr(dots + 2), ctx), "level", ctx, 0);
    if (b < a) throw ConfigError(ctx + ": empty range");
    for (int s = a; s <= b; ++s) out.push_back(s);
  } else {
    for (const auto& tok : detail::split(text, ','))
      out.push_back(detail::as_count(detail::parse_number(tok, ctx), "level", ctx, 0));
  }
  if (out.empty()) throw ConfigError(ctx + ": no levels");
  for (std::size_t i = 1; i < out.size(); ++i)
    if (out[i] <= out[i - 1]) throw ConfigError(ctx + ": levels must increase");
  if (out.back() > 7) throw ConfigError(ctx + ": levels above 7 are not supported");
  return out;
}

inline const std::vector<std::string>& theorem_names() {
  static const std::vector<std::string> v = {"main_lower_bound", "xia_bound", "upper_bound_degree_one",
                                             "upper_bound_degree_p", "special_killing_relation"};
  return v;
}

// Canonical theorem name for a name or alias; "all" expands to every theorem.
inline std::vector<std::string> resolve_theorem(const std::string& name) {
  static const std::map<std::string, std::string> alias = {
      {"main", "main_lower_bound"},        {"boundmain", "main_lower_bound"},
      {"xia", "xia_bound"},                {"boundxia", "xia_bound"},
      {"boundone", "upper_bound_degree_one"}, {"upper1", "upper_bound_degree_one"},
      {"boundpi", "upper_bound_degree_p"}, {"upperp", "upper_bound_degree_p"},
      {"killing", "special_killing_relation"}};
  if (name == "all") return theorem_names();
  if (const auto it = alias.find(name); it != alias.end()) return {it->second};
  if (std::find(theorem_names().begin(), theorem_names().end(), name) != theorem_names().end()) return {name};
  throw ConfigError("unknown theorem '" + name + "'");
}

inline std::set<std::string> resolve_theorems(const std::vector<std::string>& names) {
  std::set<std::string> out;
  for (const auto& n : names)
    for (auto& t : resolve_theorem(n)) out.insert(std::move(t));
  return out;
}

}  // namespace reilly
