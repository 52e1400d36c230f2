#include <cmath>
#include <numbers>
#include <sstream>

#include <gtest/gtest.h>

#include "reilly/mesh.hpp"
#include "reilly/mesh_io.hpp"

using namespace reilly;

namespace {
MeshErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const MeshError& e) {
    return e.code();
  }
  ADD_FAILURE() << "no MeshError thrown";
  return MeshErrorCode::Io;
}
}  // namespace

TEST(Generators, IcosphereCounts) {
  for (int s = 0; s <= 4; ++s) {
    const SurfaceComplex c(generate_icosphere(s, 2.0));
    const int nf = 20 << (2 * s);
    EXPECT_EQ(c.num_faces(), nf);
    EXPECT_EQ(c.num_vertices(), 10 * (1 << (2 * s)) + 2);
    EXPECT_EQ(c.num_edges(), 3 * nf / 2);
    EXPECT_EQ(c.euler_characteristic(), 2);
    EXPECT_EQ(c.genus(), 0);
    for (const auto& v : c.vertices()) EXPECT_NEAR(v.norm(), 2.0, 1e-14);
    EXPECT_EQ(c.winding_sign(0), 1);
    EXPECT_GT(c.enclosed_volume(), 0.0);
  }
}

TEST(Generators, UnitEllipsoidIsIcosphere) {
  const auto a = generate_icosphere(2), b = generate_ellipsoid(1, 1, 1, 2);
  ASSERT_EQ(a.vertices.size(), b.vertices.size());
  for (std::size_t i = 0; i < a.vertices.size(); ++i) EXPECT_LT((a.vertices[i] - b.vertices[i]).norm(), 1e-15);
  EXPECT_EQ(a.faces, b.faces);
}

TEST(Generators, TorusTopology) {
  const SurfaceComplex c(generate_torus(2.0, 0.5, 40, 12));
  EXPECT_EQ(c.euler_characteristic(), 0);
  EXPECT_EQ(c.genus(), 1);
  EXPECT_EQ(c.first_betti_number(), 2);
  const double exact = 4 * std::numbers::pi * std::numbers::pi * 2.0 * 0.5;
  EXPECT_NEAR(c.total_area(), exact, 0.03 * exact);
}

TEST(Generators, TwoSpheresAreTwoComponents) {
  const SurfaceComplex c(merge(generate_icosphere(1), translated(generate_icosphere(1), {5, 0, 0})));
  EXPECT_EQ(c.num_components(), 2);
  EXPECT_EQ(c.euler_characteristic(), 4);
  EXPECT_EQ(c.genus(), 0);
}

TEST(Generators, BallSolid) {
  for (int s = 1; s <= 3; ++s) {
    const SolidMesh m = generate_ball(s);
    EXPECT_NO_THROW(validate_solid(m));
    EXPECT_EQ(m.boundary_faces.size(), 20u << (2 * s));
    const SurfaceComplex b(m.boundary_surface().first);
    EXPECT_NEAR(b.enclosed_volume(), m.volume(), 1e-12);
    EXPECT_NEAR(b.total_area(), m.boundary_area(), 1e-12);
    if (s == 3) EXPECT_NEAR(m.volume(), 4 * std::numbers::pi / 3, 0.02 * 4 * std::numbers::pi / 3);
  }
}

TEST(Generators, EllipsoidSolidVolume) {
  const SolidMesh m = generate_ellipsoid_solid(1.0, 1.2, 1.5, 3);
  EXPECT_NO_THROW(validate_solid(m));
  EXPECT_NEAR(m.volume(), 4 * std::numbers::pi / 3 * 1.8, 0.02 * 4 * std::numbers::pi / 3 * 1.8);
}

TEST(Validation, FlippedFace) {
  auto m = generate_icosphere(1);
  std::swap(m.faces[3][0], m.faces[3][1]);
  EXPECT_EQ(code_of([&] { SurfaceComplex c(m); }), MeshErrorCode::InconsistentOrientation);
}

TEST(Validation, NonManifoldEdge) {
  auto m = generate_icosphere(0);
  const auto f = m.faces[0];
  m.vertices.emplace_back(3, 3, 3);
  m.faces.push_back({f[1], f[0], static_cast<int>(m.vertices.size()) - 1});
  EXPECT_EQ(code_of([&] { SurfaceComplex c(m); }), MeshErrorCode::NonManifoldEdge);
}

TEST(Validation, UnreferencedVertex) {
  auto m = generate_icosphere(0);
  m.vertices.emplace_back(3, 3, 3);
  EXPECT_EQ(code_of([&] { SurfaceComplex c(m); }), MeshErrorCode::UnreferencedVertex);
}

TEST(Validation, OpenSurface) {
  auto m = generate_icosphere(1);
  m.faces.pop_back();
  EXPECT_EQ(code_of([&] { SurfaceComplex c(m); }), MeshErrorCode::OpenBoundary);
  SurfaceComplex::Options o;
  o.require_closed = false;
  EXPECT_FALSE(SurfaceComplex(m, o).is_closed());
}

TEST(Validation, DegenerateFace) {
  auto m = generate_icosphere(0);
  m.faces[0][1] = m.faces[0][0];
  EXPECT_EQ(code_of([&] { SurfaceComplex c(m); }), MeshErrorCode::DegenerateFace);
}

TEST(Validation, InvertedTet) {
  auto m = generate_ball(1);
  std::swap(m.tets[5][0], m.tets[5][1]);
  EXPECT_EQ(code_of([&] { validate_solid(m); }), MeshErrorCode::InvertedTet);
}

TEST(MeshIo, OffRoundTrip) {
  const auto m = generate_icosphere(2);
  std::stringstream ss;
  ss.precision(17);
  write_off(ss, m);
  const auto r = read_off(ss);
  EXPECT_EQ(r.faces, m.faces);
  for (std::size_t i = 0; i < m.vertices.size(); ++i) EXPECT_EQ(r.vertices[i], m.vertices[i]);
}

TEST(MeshIo, ObjSkipsAttributes) {
  std::istringstream ss(
      "# tetra\nv 0 0 0\nv 1 0 0\nv 0 1 0\nv 0 0 1\nvt 0 0\nvn 0 0 1\n"
      "f 1/1/1 3/1/1 2/1/1\nf 1//1 2//1 4//1\nf 1 4 3\nf -3 -2 -1\n");
  const SurfaceComplex c(read_obj(ss));
  EXPECT_EQ(c.num_faces(), 4);
  EXPECT_EQ(c.euler_characteristic(), 2);
  EXPECT_NEAR(c.enclosed_volume(), 1.0 / 6.0, 1e-15);
}

TEST(MeshIo, ParseErrorsCarryLineNumbers) {
  std::istringstream bad("OFF\n3 1 0\n0 0 0\n1 0 0\n0 x 0\n3 0 1 2\n");
  try {
    read_off(bad);
    FAIL();
  } catch (const MeshError& e) {
    EXPECT_EQ(e.code(), MeshErrorCode::Parse);
    EXPECT_EQ(e.line(), 5);
  }
  std::istringstream range("OFF\n3 1 0\n0 0 0\n1 0 0\n0 1 0\n3 0 1 7\n");
  EXPECT_EQ(code_of([&] { read_off(range); }), MeshErrorCode::IndexOutOfRange);
  std::istringstream quad("v 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\nf 1 2 3 4\n");
  EXPECT_EQ(code_of([&] { read_obj(quad); }), MeshErrorCode::Parse);
}

TEST(MeshIo, TetRoundTripAndStats) {
  const auto m = generate_ball(1);
  std::stringstream ss;
  ss.precision(17);
  write_tet(ss, m);
  const auto r = read_tet(ss);
  EXPECT_EQ(r.tets, m.tets);
  EXPECT_EQ(r.boundary_faces, m.boundary_faces);
  EXPECT_NO_THROW(validate_solid(r));
  const auto j = mesh_statistics(r);
  EXPECT_EQ(j["tets"], m.tets.size());
  EXPECT_EQ(j["boundary"]["euler_characteristic"], 2);
}
