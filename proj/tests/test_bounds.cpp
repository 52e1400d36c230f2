#include <gtest/gtest.h>

#include <numbers>
#include <sstream>

#include "reilly/bounds.hpp"

using namespace reilly;

TEST(Bounds, SphereCaseClosedForms) {
  const auto g = analytic_sphere(3, 2.0);
  for (int p = 1; p <= 3; ++p) EXPECT_DOUBLE_EQ(g.sigma_p(p), p / 2.0);
  EXPECT_NEAR(g.domain_volume, 0.5 * std::numbers::pi * std::numbers::pi * 16, 1e-12);
  EXPECT_NEAR(g.boundary_volume, 2 * std::numbers::pi * std::numbers::pi * 8, 1e-12);
  EXPECT_DOUBLE_EQ(g.lambda_exact.at(2), 2 * 2 / 4.0);
  EXPECT_FALSE(g.cohomology_vanishes.at(3));
  EXPECT_TRUE(g.cohomology_vanishes.at(2));
}

TEST(Bounds, MainLowerBoundEqualityOnSpheres) {
  for (int n = 1; n <= 9; ++n)
    for (double r : {1.0, 0.5, 3.0}) {
      const auto g = analytic_sphere(n, r);
      for (int p = 1; 2 * p <= n + 1; ++p) {
        const auto v = main_lower_bound(g, p);
        EXPECT_TRUE(v.satisfied());
        EXPECT_TRUE(v.equality);
        EXPECT_LE(v.tightness, 1e-12);
        EXPECT_DOUBLE_EQ(v.rhs, main_lower_bound_dual_rhs(g, p));
      }
    }
}

TEST(Bounds, MainLowerBoundConvexConstant) {
  // Principal curvatures >= c give rhs >= p(n-p+1)c^2.
  GeometryCase g = analytic_sphere(4, 1.0);
  g.name = "synthetic";
  const double c = 0.7;
  g.sigma = {c, 2.3 * c, 3.1 * c, 4.5 * c};
  g.tolerance = kMeshTolerance;
  for (int p = 1; p <= 2; ++p) EXPECT_GE(main_lower_bound(g, p).rhs, p * (4 - p + 1) * c * c);
}

TEST(Bounds, MainLowerBoundApplicability) {
  auto g = analytic_sphere(2);
  EXPECT_EQ(main_lower_bound(g, 2).state, VerdictState::Inapplicable);
  g.sigma[0] = -0.1;
  const auto v = main_lower_bound(g, 1);
  EXPECT_EQ(v.state, VerdictState::Inapplicable);
  EXPECT_NE(v.reason.find("p-convex"), std::string::npos);
  g = analytic_sphere(2);
  g.curvature_term_nonnegative = false;
  EXPECT_EQ(main_lower_bound(g, 1).state, VerdictState::Inapplicable);
}

TEST(Bounds, XiaScalesWithRadius) {
  for (double r : {1.0, 2.0, 0.25}) {
    const auto v = xia_bound(analytic_sphere(2, r));
    EXPECT_NEAR(v.lhs, 2 / (r * r), 1e-14);
    EXPECT_NEAR(v.rhs, 2 / (r * r), 1e-14);
    EXPECT_TRUE(v.equality);
  }
  auto g = analytic_sphere(2);
  g.min_curvature = 0.0;
  EXPECT_EQ(xia_bound(g).state, VerdictState::Inapplicable);
}

TEST(Bounds, UpperBoundDegreeOne) {
  const auto v = upper_bound_degree_one(analytic_sphere(2));
  EXPECT_TRUE(v.satisfied());
  EXPECT_DOUBLE_EQ(v.lhs, 2.0);
  EXPECT_DOUBLE_EQ(v.rhs, 4.0);
  // S^1 bounding a disk: lambda_1 = 1 and n |S|^2 = 1, but H^1(S^1) != 0 gates the verdict.
  const auto c = analytic_sphere(1);
  EXPECT_DOUBLE_EQ(*c.lambda1, 1.0);
  EXPECT_DOUBLE_EQ(c.n * c.mean_shape_sq, 1.0);
  EXPECT_EQ(upper_bound_degree_one(c).state, VerdictState::Inapplicable);
  GeometryCase missing = analytic_sphere(2);
  missing.cohomology_vanishes.clear();
  EXPECT_THROW(upper_bound_degree_one(missing), BoundsError);
}

TEST(Bounds, UpperBoundDegreePSharpInMiddleDegree) {
  EXPECT_EQ(alpha_p(4, 2), 3);
  EXPECT_NEAR(c_np(3, 2), 2.0 / 3.0, 1e-15);
  for (int p = 2; p <= 5; ++p) {
    const auto v = upper_bound_degree_p(analytic_sphere(2 * p - 1), p);
    EXPECT_TRUE(v.equality);
    EXPECT_DOUBLE_EQ(v.lhs, p * p);
    EXPECT_LE(v.tightness, 1e-12);
  }
  // Off the middle degree the bound is strict.
  const auto v = upper_bound_degree_p(analytic_sphere(6), 2);
  EXPECT_TRUE(v.satisfied());
  EXPECT_FALSE(v.equality);
  EXPECT_THROW(upper_bound_degree_p(analytic_sphere(2), 2), BoundsError);
  EXPECT_EQ(upper_bound_degree_p(analytic_sphere(5), 3, true).state, VerdictState::Inapplicable);
}

TEST(Bounds, SpecialKillingRelation) {
  EXPECT_DOUBLE_EQ(special_killing_relation(1, 1, 2).eigenvalue, 2.0);
  for (int n = 2; n <= 8; ++n)
    for (int p = 1; p <= n; ++p) {
      const auto r = special_killing_relation(1, p - 1, n);
      EXPECT_DOUBLE_EQ(r.eigenvalue, p * (n - p + 1));
      EXPECT_TRUE(r.verdict.equality);
    }
  EXPECT_DOUBLE_EQ(special_killing_relation(0, 1, 3).eigenvalue, 0.0);
  EXPECT_EQ(special_killing_relation(-1, 1, 3).verdict.state, VerdictState::Inapplicable);
}

TEST(Bounds, EqualityDiagnosticsOnBalls) {
  const auto d = equality_case_diagnostics(analytic_sphere(2), 1, 1.0);
  EXPECT_NEAR(d.volume_ratio, 3.0, 1e-12);
  EXPECT_NEAR(d.sigma_sum, 3.0, 1e-12);
  EXPECT_TRUE(d.passed);
  const double r = 1.7;
  const auto e = equality_case_diagnostics(analytic_sphere(4, r), 2, r);
  EXPECT_NEAR(e.mean_curvature, e.volume_ratio / 5, 1e-12);
  EXPECT_TRUE(e.passed);
  const auto m = mesh_case("ball", SurfaceComplex(generate_icosphere(3, 1.0)));
  const auto dm = equality_case_diagnostics(m, 1, 1.0);
  EXPECT_NEAR(dm.volume_ratio, 3.0, 0.02 * 3.0);
  EXPECT_TRUE(dm.passed);
}

TEST(Bounds, SphereSuiteAllEqualities) {
  const auto rep = sphere_suite(7);
  EXPECT_FALSE(rep.any_violation());
  for (const auto& v : rep.verdicts) {
    if (v.name == "upper_bound_degree_one" || v.state == VerdictState::Inapplicable) continue;
    EXPECT_TRUE(v.equality) << v.name << " " << v.geometry;
    EXPECT_LE(v.tightness, 1e-12);
  }
  for (const auto& d : rep.diagnostics) EXPECT_TRUE(d.passed);
}

TEST(Bounds, EllipsoidSuiteSatisfied) {
  const auto rep = ellipsoid_suite(3);
  ASSERT_EQ(rep.verdicts.size(), 15u);
  for (const auto& v : rep.verdicts) {
    EXPECT_TRUE(v.satisfied()) << v.name << " " << v.geometry;
    EXPECT_GT(v.slack, 0.0);
  }
}

TEST(Bounds, EllipsoidWithClosedFormCurvature) {
  MeshCaseOptions opt;
  opt.exact_curvature = AnalyticEllipsoid{1.0, 1.3, 1.6};
  const auto g = mesh_case("e", SurfaceComplex(generate_ellipsoid(1.0, 1.3, 1.6, 3)), opt);
  // Lowest principal curvature of the ellipsoid: a / c^2 at the ends of the a-axis.
  EXPECT_NEAR(g.min_curvature, 1.0 / (1.6 * 1.6), 1e-2);
  EXPECT_TRUE(main_lower_bound(g, 1).satisfied());
}

TEST(Bounds, TorusIsGatedByTopology) {
  MeshCaseOptions opt;
  opt.one_form_spectrum = true;
  const auto g = mesh_case("torus", SurfaceComplex(generate_torus(2.0, 0.7, 40, 16)), opt);
  EXPECT_EQ(upper_bound_degree_one(g).state, VerdictState::Inapplicable);
  EXPECT_EQ(xia_bound(g).state, VerdictState::Inapplicable);
  EXPECT_EQ(main_lower_bound(g, 1).state, VerdictState::Inapplicable);
  ASSERT_TRUE(g.lambda_p(1).has_value());
  EXPECT_LE(*g.lambda_p(1), g.lambda_exact.at(1));
}

TEST(Bounds, MeshBallEqualityWithinTolerance) {
  const auto rep = ball_mesh_suite(4);
  EXPECT_FALSE(rep.any_violation());
  for (const auto& d : rep.diagnostics) EXPECT_TRUE(d.passed);
}

TEST(Bounds, ReportsSerializeAndTabulate) {
  const auto rep = sphere_suite(3, {1.0});
  const auto j = rep.to_json();
  EXPECT_EQ(j["violations"], 0);
  EXPECT_EQ(j["verdicts"].size(), rep.verdicts.size());
  std::ostringstream os;
  rep.write_table(os);
  EXPECT_NE(os.str().find("main_lower_bound p=1"), std::string::npos);
  EXPECT_NE(os.str().find("n/a"), std::string::npos);
}
