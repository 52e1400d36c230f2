// reilly-bench: spectra, Reilly ledgers and bound reports from the command line.
//
// Exit codes: 0 ok, 1 usage or configuration error, 2 mesh validation failure,
// 3 eigensolver non-convergence, 4 residual not decreasing across levels,
// 5 an applicable bound is violated.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "reilly/bounds.hpp"
#include "reilly/fields.hpp"
#include "reilly/mesh_io.hpp"
#include "reilly/reilly.hpp"
#include "reilly/run_config.hpp"
#include "reilly/spectrum.hpp"

#ifndef REILLY_VERSION
#define REILLY_VERSION "unknown"
#endif

namespace fs = std::filesystem;
using nlohmann::json;
using namespace reilly;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitMesh = 2;
constexpr int kExitSolver = 3;
constexpr int kExitNotDecreasing = 4;
constexpr int kExitViolation = 5;

// JSON config files: top-level keys are global options, objects are
// subcommand sections, e.g. {"out": "runs", "spectrum": {"geometry": "icosphere:3"}}.
class JsonConfig : public CLI::Config {
 public:
  std::string to_config(const CLI::App*, bool, bool, std::string) const override { return "{}"; }

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    json j;
    try {
      j = json::parse(input);
    } catch (const json::parse_error& e) {
      throw CLI::ConversionError(std::string("config file: ") + e.what());
    }
    if (!j.is_object()) throw CLI::ConversionError("config file: top level must be an object");
    std::vector<CLI::ConfigItem> out;
    collect(j, "", {}, out);
    return out;
  }

 private:
  static std::string scalar(const json& v, const std::string& key) {
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number()) return v.dump();
    if (v.is_string()) return v.get<std::string>();
    throw CLI::ConversionError("config file: unsupported value for '" + key + "'");
  }

  static void collect(const json& j, const std::string& name, std::vector<std::string> parents,
                      std::vector<CLI::ConfigItem>& out) {
    if (j.is_object()) {
      // "++" and "--" open and close a subcommand section.
      if (!name.empty()) {
        parents.push_back(name);
        out.push_back({parents, "++", {}});
      }
      for (auto it = j.begin(); it != j.end(); ++it) collect(*it, it.key(), parents, out);
      if (!name.empty()) out.push_back({parents, "--", {}});
      return;
    }
    CLI::ConfigItem item;
    item.parents = parents;
    item.name = name;
    if (j.is_array())
      for (const auto& v : j) item.inputs.push_back(scalar(v, name));
    else
      item.inputs.push_back(scalar(j, name));
    out.push_back(std::move(item));
  }
};

struct Global {
  std::string out;
  unsigned seed = 12345;
  bool strict_dec = false;
  std::string config_file;
  std::vector<std::string> argv;
};

struct SpectrumConfig {
  std::string geometry = "icosphere:4";
  std::string mesh;
  std::vector<int> degrees{0};
  int k = 10;
  double tol = 1e-10;
  double cluster_gap = 1e-3;
};

struct ReillyConfig {
  std::string geometry = "ball:3";
  std::string mesh;
  std::string field = "linear-x1";
  int p = 0;
  std::string levels;
  std::string boundary = "auto";
  std::string tet_rule = "four-point";
  std::string residual = "quadrature";
  double tol = 1e-12;
};

struct BoundsConfig {
  std::string suite;
  std::string geometry;
  std::string mesh;
  std::vector<std::string> theorems{"all"};
  int p = 0;
  int subdivisions = 4;
  int max_n = 7;
  int k = 8;
  double tol = kMeshTolerance;
};

json global_json(const Global& g) {
  return {{"out", g.out}, {"seed", g.seed}, {"strict_dec", g.strict_dec}, {"config_file", g.config_file}, {"argv", g.argv}};
}

json config_json(const Global& g, const SpectrumConfig& c) {
  return {{"global", global_json(g)},
          {"geometry", c.mesh.empty() ? c.geometry : ""},
          {"mesh", c.mesh},
          {"p", c.degrees},
          {"k", c.k},
          {"tol", c.tol},
          {"cluster_gap", c.cluster_gap}};
}

json config_json(const Global& g, const ReillyConfig& c) {
  return {{"global", global_json(g)}, {"geometry", c.mesh.empty() ? c.geometry : ""},
          {"mesh", c.mesh},          {"field", c.field},
          {"p", c.p},                {"levels", c.levels},
          {"boundary", c.boundary},  {"tet_rule", c.tet_rule},
          {"residual", c.residual},  {"tol", c.tol}};
}

json config_json(const Global& g, const BoundsConfig& c) {
  return {{"global", global_json(g)}, {"suite", c.suite},       {"geometry", c.geometry},
          {"mesh", c.mesh},          {"theorem", c.theorems}, {"p", c.p},
          {"subdivisions", c.subdivisions}, {"max_n", c.max_n}, {"k", c.k},
          {"tol", c.tol}};
}

class Writer {
 public:
  Writer(const Global& g, std::string command, json config)
      : dir_(g.out), command_(std::move(command)), config_(std::move(config)) {
    fs::create_directories(dir_);
  }

  fs::path json_file(const std::string& name, const json& result) const {
    const json doc{{"tool", "reilly-bench"}, {"version", REILLY_VERSION}, {"command", command_},
                   {"config", config_}, {"result", result}};
    return write(name, doc.dump(2) + "\n");
  }

  // Text artifacts carry the same provenance as a leading comment line.
  fs::path text_file(const std::string& name, const std::string& body) const {
    return write(name, "# reilly-bench " + std::string(REILLY_VERSION) + " " + command_ + " config=" + config_.dump() +
                           "\n" + body);
  }

 private:
  fs::path write(const std::string& name, const std::string& body) const {
    const fs::path p = dir_ / name;
    std::ofstream os(p, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write '" + p.string() + "'");
    os << body;
    std::cout << "wrote " << p.string() << '\n';
    return p;
  }

  fs::path dir_;
  std::string command_;
  json config_;
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// ---- spectrum ---------------------------------------------------------------------------

int run_spectrum(const Global& g, const SpectrumConfig& c) {
  const json config = config_json(g, c);
  const SurfaceComplex surf =
      c.mesh.empty() ? SurfaceComplex(make_surface(parse_geometry_spec(c.geometry))) : load_surface(c.mesh);
  SpectrumOptions opt;
  opt.solver.tolerance = c.tol;
  opt.solver.seed = g.seed;
  opt.cluster_gap = c.cluster_gap;
  opt.dec.strict = g.strict_dec;

  json result{{"mesh", mesh_statistics(surf)}, {"genus", surf.genus()}, {"spectra", json::array()}};
  Writer w(g, "spectrum", config);
  for (int p : c.degrees) {
    const SpectrumReport rep = p == 0   ? spectrum_functions(surf, c.k, opt)
                               : p == 1 ? spectrum_one_forms(surf, c.k, opt)
                                        : spectrum_two_forms(surf, c.k, opt);
    result["spectra"].push_back(rep.to_json());
    std::ostringstream csv;
    rep.write_csv(csv);
    w.text_file("spectrum_p" + std::to_string(p) + ".csv", csv.str());
    std::cout << "p=" << p << " harmonic=" << rep.count(Family::Harmonic);
    if (const auto cl = rep.first_nonzero_cluster())
      std::cout << " first nonzero cluster " << fmt(cl->value) << " x" << cl->multiplicity;
    std::cout << '\n';
  }
  w.json_file("spectrum.json", result);
  return 0;
}

// ---- reilly -----------------------------------------------------------------------------

struct LevelResult {
  json ledger;
  ConvergenceRow row;
  double scale = 0.0;
};

int run_reilly(const Global& g, const ReillyConfig& c) {
  const json config = config_json(g, c);
  if (c.p < 0 || c.p > 3) throw ConfigError("--p must be in [0, 3]");

  std::optional<ScalarField> scalar;
  std::optional<SampledField> form;
  try {
    scalar = builtin_scalar_field(c.field);
  } catch (const FieldError&) {
    if (c.field == "poly") {
      if (c.p < 1) throw ConfigError("field 'poly' needs --p in [1, 3]");
      form = random_polynomial_form(c.p, g.seed);
    } else {
      form = builtin_form_field(c.field, g.seed);
      if (c.p != 0 && form->degree() != c.p)
        throw ConfigError("field '" + c.field + "' has degree " + std::to_string(form->degree()) + ", not --p " +
                          std::to_string(c.p));
    }
  }
  if (scalar && c.p > 0) throw ConfigError("field '" + c.field + "' is a function; --p does not apply");

  ReillyOptions opt;
  opt.dec.strict = g.strict_dec;
  if (c.tet_rule == "midpoint")
    opt.tet_rule = TetRule::Midpoint;
  else if (c.tet_rule != "four-point")
    throw ConfigError("--tet-rule must be four-point or midpoint");
  if (c.residual != "quadrature" && c.residual != "dec") throw ConfigError("--residual must be quadrature or dec");

  // (level, solid, boundary geometry) per refinement step.
  std::vector<std::pair<int, SolidMesh>> solids;
  std::optional<GeometrySpec> spec;
  if (!c.mesh.empty()) {
    if (!c.levels.empty()) throw ConfigError("--levels needs a generated --geometry, not --mesh");
    solids.emplace_back(0, load_solid(c.mesh));
  } else {
    spec = parse_geometry_spec(c.geometry);
    const auto levels = c.levels.empty() ? std::vector<int>{spec_subdivisions(*spec)} : parse_levels(c.levels);
    for (int s : levels) solids.emplace_back(s, make_solid(with_subdivisions(*spec, s)));
  }
  std::string boundary = c.boundary;
  if (boundary == "auto") boundary = spec ? "exact" : "fitted";

  std::vector<LevelResult> levels;
  for (const auto& [s, m] : solids) {
    BoundaryGeometry geom;
    if (boundary == "exact") {
      if (!spec) throw ConfigError("--boundary exact needs a generated --geometry");
      geom = exact_boundary(*spec);
    } else if (boundary == "fitted") {
      geom = discrete_boundary(SurfaceComplex(m.boundary_surface().first));
    } else if (boundary == "polyhedral") {
      geom = polyhedral_boundary(m);
    } else {
      throw ConfigError("--boundary must be auto, exact, fitted or polyhedral");
    }
    LevelResult r;
    if (scalar) {
      const auto l = evaluate_classical_reilly(m, *scalar, geom, opt);
      r.ledger = l.to_json();
      r.row = convergence_row(s, l);
      r.scale = l.scale();
    } else {
      const auto l = evaluate_reilly(m, *form, geom, opt);
      r.ledger = l.to_json();
      r.row = convergence_row(s, l);
      r.scale = l.scale();
    }
    r.ledger["level"] = s;
    std::cout << "level " << s << ": lhs " << fmt(r.row.lhs) << " residual " << fmt(r.row.residual) << " (rel "
              << fmt(r.row.relative_residual) << ") dec residual " << fmt(r.row.residual_dec) << '\n';
    levels.push_back(std::move(r));
  }

  // A level counts as improved when its residual shrinks or is already at
  // the rounding floor tol * scale.
  auto chosen = [&](const LevelResult& r) { return std::abs(c.residual == "dec" ? r.row.residual_dec : r.row.residual); };
  bool decreasing = true;
  for (std::size_t i = 1; i < levels.size(); ++i) {
    const double cur = chosen(levels[i]);
    if (!(cur < chosen(levels[i - 1]) || cur <= c.tol * levels[i].scale)) decreasing = false;
  }

  json result{{"field", c.field}, {"boundary", boundary}, {"residual_path", c.residual},
              {"levels", json::array()}, {"decreasing", decreasing}};
  std::vector<ConvergenceRow> rows;
  for (const auto& r : levels) {
    result["levels"].push_back(r.ledger);
    rows.push_back(r.row);
  }
  Writer w(g, "reilly", config);
  std::ostringstream csv;
  write_convergence_csv(csv, rows);
  w.text_file("reilly_convergence.csv", csv.str());
  w.json_file("reilly.json", result);
  if (levels.size() > 1 && !decreasing) {
    std::cerr << "error: " << c.residual << " residual does not decrease across levels\n";
    return kExitNotDecreasing;
  }
  return 0;
}

// ---- bounds -----------------------------------------------------------------------------

int run_bounds(const Global& g, const BoundsConfig& c) {
  const json config = config_json(g, c);
  const auto wanted = resolve_theorems(c.theorems);
  MeshCaseOptions opt;
  opt.spectrum_k = c.k;
  opt.tolerance = c.tol;
  opt.spectrum.solver.seed = g.seed;
  opt.spectrum.dec.strict = g.strict_dec;

  const int sources = !c.suite.empty() + !c.geometry.empty() + !c.mesh.empty();
  if (sources != 1) throw ConfigError("bounds needs exactly one of --suite, --geometry, --mesh");

  SuiteReport rep;
  if (c.suite == "spheres") {
    rep = sphere_suite(c.max_n);
  } else if (c.suite == "ellipsoids") {
    rep = ellipsoid_suite(c.subdivisions, default_ellipsoids(), opt);
  } else if (c.suite == "ball-mesh") {
    rep = ball_mesh_suite(c.subdivisions, opt);
  } else if (!c.suite.empty()) {
    throw ConfigError("unknown suite '" + c.suite + "' (spheres, ellipsoids, ball-mesh)");
  } else {
    const SurfaceComplex surf =
        c.mesh.empty() ? SurfaceComplex(make_surface(parse_geometry_spec(c.geometry))) : load_surface(c.mesh);
    rep.suite = "custom";
    const auto gc = mesh_case(c.mesh.empty() ? c.geometry : c.mesh, surf, opt);
    rep.cases.push_back(gc);
    rep.verdicts.push_back(main_lower_bound(gc, 1));
    rep.verdicts.push_back(xia_bound(gc));
    rep.verdicts.push_back(upper_bound_degree_one(gc));
  }

  std::erase_if(rep.verdicts, [&](const BoundVerdict& v) {
    const std::string base = v.name.rfind("upper_bound_degree_p", 0) == 0 ? "upper_bound_degree_p" : v.name;
    return !wanted.contains(base) || (c.p > 0 && v.p != c.p);
  });
  if (c.p > 0) std::erase_if(rep.diagnostics, [&](const EqualityDiagnostics& d) { return d.p != c.p; });

  std::ostringstream table;
  rep.write_table(table);
  std::cout << table.str();
  Writer w(g, "bounds", config);
  w.text_file("bounds_table.txt", table.str());
  w.json_file("bounds.json", rep.to_json());
  if (rep.any_violation()) {
    std::cerr << "error: an applicable bound is violated\n";
    return kExitViolation;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectra, Reilly ledgers and eigenvalue bounds on meshes and analytic hypersurfaces", "reilly-bench"};
  app.set_version_flag("--version", std::string(REILLY_VERSION));
  app.require_subcommand(1);
  app.fallthrough();
  app.config_formatter(std::make_shared<JsonConfig>());

  Global g;
  if (const char* env = std::getenv("REILLY_OUT_DIR"); env && *env) g.out = env;
  if (g.out.empty()) g.out = ".";
  for (int i = 1; i < argc; ++i) g.argv.emplace_back(argv[i]);

  app.add_option("--out", g.out, "Output directory (default $REILLY_OUT_DIR or .)")->capture_default_str();
  app.add_option("--seed", g.seed, "Seed for solver start vectors and random fields")->capture_default_str();
  app.add_flag("--strict-dec", g.strict_dec, "Fail on non-positive DEC weights instead of clamping");
  app.set_config("--config", "", "JSON config file; command-line flags take precedence")->check(CLI::ExistingFile);

  SpectrumConfig sc;
  auto* spec = app.add_subcommand("spectrum", "Hodge spectra of a closed surface");
  spec->configurable();
  auto* sg = spec->add_option("--geometry", sc.geometry, "Geometry spec, e.g. icosphere:4")->capture_default_str();
  spec->add_option("--mesh", sc.mesh, "Surface mesh (.off or .obj)")->excludes(sg);
  spec->add_option("--p", sc.degrees, "Form degrees (0, 1, 2)")->check(CLI::Range(0, 2))->capture_default_str();
  spec->add_option("--k", sc.k, "Eigenpairs per degree")->check(CLI::PositiveNumber)->capture_default_str();
  spec->add_option("--tol", sc.tol, "Eigensolver residual tolerance")->check(CLI::PositiveNumber)->capture_default_str();
  spec->add_option("--cluster-gap", sc.cluster_gap, "Relative gap separating clusters")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  ReillyConfig rc;
  auto* rei = app.add_subcommand("reilly", "Reilly ledgers over refinement levels");
  rei->configurable();
  auto* rg = rei->add_option("--geometry", rc.geometry, "Solid spec: ball:s[,r] or ellipsoid:a,b,c,s")->capture_default_str();
  rei->add_option("--mesh", rc.mesh, "Solid tet mesh (.tet)")->excludes(rg);
  rei->add_option("--field", rc.field, "Scalar or form field name, or 'poly' with --p")->capture_default_str();
  rei->add_option("--p", rc.p, "Form degree for 'poly'; checked against named fields")->check(CLI::Range(0, 3));
  rei->add_option("--levels", rc.levels, "Subdivision levels: 3, 1..3 or 1,2,4");
  rei->add_option("--boundary", rc.boundary, "auto, exact, fitted or polyhedral")->capture_default_str();
  rei->add_option("--tet-rule", rc.tet_rule, "four-point or midpoint")->capture_default_str();
  rei->add_option("--residual", rc.residual, "Residual checked for decrease: quadrature or dec")->capture_default_str();
  rei->add_option("--tol", rc.tol, "Relative residual treated as converged")->check(CLI::PositiveNumber)->capture_default_str();

  BoundsConfig bc;
  auto* bnd = app.add_subcommand("bounds", "Eigenvalue bound verdicts over geometry suites");
  bnd->configurable();
  bnd->add_option("--suite", bc.suite, "spheres, ellipsoids or ball-mesh");
  bnd->add_option("--geometry", bc.geometry, "Single surface spec instead of a suite");
  bnd->add_option("--mesh", bc.mesh, "Single surface mesh instead of a suite");
  bnd->add_option("--theorem", bc.theorems, "Theorem names or aliases (main, xia, boundone, boundpi, killing, all)")
      ->capture_default_str();
  bnd->add_option("--p", bc.p, "Keep only verdicts of this degree (0 keeps all)")->check(CLI::NonNegativeNumber);
  bnd->add_option("--subdivisions", bc.subdivisions, "Mesh level for mesh suites")
      ->check(CLI::Range(0, 7))
      ->capture_default_str();
  bnd->add_option("--max-n", bc.max_n, "Largest sphere dimension in the sphere suite")
      ->check(CLI::Range(1, 10))
      ->capture_default_str();
  bnd->add_option("--k", bc.k, "Eigenpairs computed per mesh case")->check(CLI::PositiveNumber)->capture_default_str();
  bnd->add_option("--tol", bc.tol, "Relative tolerance of mesh verdicts")->check(CLI::PositiveNumber)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitUsage;
  }
  if (auto* opt = app.get_option("--config"); opt->count() > 0) g.config_file = opt->as<std::string>();

  try {
    if (spec->parsed()) return run_spectrum(g, sc);
    if (rei->parsed()) return run_reilly(g, rc);
    return run_bounds(g, bc);
  } catch (const MeshError& e) {
    std::cerr << "mesh error: " << e.what() << '\n';
    return kExitMesh;
  } catch (const EigenSolverError& e) {
    std::cerr << "eigensolver did not converge: " << e.what() << '\n';
    return kExitSolver;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}
