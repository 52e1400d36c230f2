#include <gtest/gtest.h>

#include "reilly/run_config.hpp"

using namespace reilly;

TEST(GeometrySpec, ParsesEachKind) {
  const auto ico = parse_geometry_spec("icosphere:4");
  EXPECT_EQ(ico.kind, "icosphere");
  EXPECT_EQ(ico.params, std::vector<double>{4});
  EXPECT_EQ(parse_geometry_spec("ball:2,1.5").params, (std::vector<double>{2, 1.5}));
  EXPECT_EQ(parse_geometry_spec("ellipsoid:1,1.1,1.2,3").params.size(), 4u);
  EXPECT_EQ(parse_geometry_spec("torus:2,0.5,16,8").kind, "torus");
}

TEST(GeometrySpec, RejectsMalformedInput) {
  for (const char* bad : {"cube:3", "icosphere", "icosphere:", "icosphere:2.5", "icosphere:-1", "ball:2,0",
                          "ellipsoid:1,1,1", "ellipsoid:1,-1,1,2", "torus:1,2,8,8", "torus:2,1,2,8", "icosphere:3x",
                          "icosphere:1,2,3"})
    EXPECT_THROW(parse_geometry_spec(bad), ConfigError) << bad;
}

TEST(GeometrySpec, BuildsMeshes) {
  EXPECT_EQ(make_surface(parse_geometry_spec("icosphere:2")).vertices.size(), 162u);
  EXPECT_EQ(make_surface(parse_geometry_spec("ball:1")).faces.size(), 80u);
  const auto solid = make_solid(parse_geometry_spec("ellipsoid:1,2,3,1"));
  EXPECT_NO_THROW(validate_solid(solid));
  double zmax = 0;
  for (const auto& v : solid.vertices) zmax = std::max(zmax, v.z());
  EXPECT_DOUBLE_EQ(zmax, 3.0);
  EXPECT_THROW(make_solid(parse_geometry_spec("torus:2,1,8,8")), ConfigError);
}

TEST(GeometrySpec, SubdivisionOverride) {
  const auto e = parse_geometry_spec("ellipsoid:1,1,2,4");
  EXPECT_EQ(spec_subdivisions(e), 4);
  EXPECT_EQ(spec_subdivisions(with_subdivisions(e, 2)), 2);
  EXPECT_EQ(spec_string(with_subdivisions(parse_geometry_spec("ball:3,2"), 1)), "ball:1.0,2.0");
  EXPECT_THROW(spec_subdivisions(parse_geometry_spec("torus:2,1,8,8")), ConfigError);
}

TEST(Levels, RangesAndLists) {
  EXPECT_EQ(parse_levels("1..3"), (std::vector<int>{1, 2, 3}));
  EXPECT_EQ(parse_levels("2"), (std::vector<int>{2}));
  EXPECT_EQ(parse_levels("0,2,4"), (std::vector<int>{0, 2, 4}));
  for (const char* bad : {"3..1", "a..2", "2,2", "3,1", "", "1..9", "-1"}) EXPECT_THROW(parse_levels(bad), ConfigError) << bad;
}

TEST(Theorems, AliasesResolve) {
  EXPECT_EQ(resolve_theorem("boundpi"), std::vector<std::string>{"upper_bound_degree_p"});
  EXPECT_EQ(resolve_theorem("boundone"), std::vector<std::string>{"upper_bound_degree_one"});
  EXPECT_EQ(resolve_theorem("xia_bound"), std::vector<std::string>{"xia_bound"});
  EXPECT_EQ(resolve_theorems({"all"}).size(), theorem_names().size());
  EXPECT_EQ(resolve_theorems({"main", "main_lower_bound", "xia"}).size(), 2u);
  EXPECT_THROW(resolve_theorem("bogus"), ConfigError);
}
