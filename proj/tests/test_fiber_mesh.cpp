#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "slowvol/errors.hpp"
#include "slowvol/fiber_mesh.hpp"
#include "slowvol/volume_growth.hpp"

using namespace slowvol;

TEST(FiberMesh, IcosphereCounts) {
  for (int level = 0; level <= 4; ++level) {
    std::vector<Eigen::Vector3d> v;
    std::vector<std::array<int, 3>> t;
    icosphere(level, v, t);
    const std::size_t expected = 10 * (std::size_t{1} << (2 * level)) + 2;
    EXPECT_EQ(v.size(), expected);
    EXPECT_EQ(t.size(), 2 * expected - 4);  // Euler: V - E + F = 2
    for (const auto& x : v) EXPECT_NEAR(x.norm(), 1.0, 1e-14);
  }
}

TEST(FiberMesh, FlatCircleHasLength2Pi) {
  const auto m = HamiltonianModel::flat_torus(2);
  auto mesh = initial_fiber_sphere(m, Coords::Constant(2, 0.3), 4096);
  EXPECT_EQ(mesh.vertex_count(), 4096u);
  EXPECT_EQ(mesh.simplices.size(), 4096u);
  RefinementConfig r;
  EXPECT_NEAR(measure_volume(m, mesh, r), 2 * M_PI, 1e-5);
}

TEST(FiberMesh, SamplesLieOnUnitLevel) {
  const auto randers = HamiltonianModel::randers_torus2(Eigen::Vector2d(0.4, 0.0));
  const auto mesh = initial_fiber_sphere(randers, Coords::Constant(2, 0.1), 64);
  for (const auto& x : mesh.initial) EXPECT_NEAR(randers.hamiltonian(x), 1.0, 1e-12);
  const auto star = HamiltonianModel::starshaped_torus2({{0, 0, 0, 1.0, 0}, {1, 1, 3, 0.3, 0.1}});
  for (const auto& x : initial_fiber_sphere(star, Coords::Constant(2, 0.2), 32).initial)
    EXPECT_NEAR(star.hamiltonian(x), 1.0, 1e-12);
}

TEST(FiberMesh, NilAtOriginIsRoundSphere) {
  const auto m = HamiltonianModel::nil3();
  const auto mesh = initial_fiber_sphere(m, Coords::Zero(3), 2);
  EXPECT_EQ(mesh.vertex_count(), 162u);
  for (const auto& x : mesh.initial) EXPECT_NEAR(x.p.norm(), 1.0, 1e-14);
}

TEST(FiberMesh, SphereFiberIsTangentCircle) {
  const auto m = HamiltonianModel::round_sphere2();
  Coords q(3);
  q << 0, 0.6, 0.8;
  const auto mesh = initial_fiber_sphere(m, q, 32);
  for (const auto& x : mesh.initial) {
    EXPECT_NEAR(x.q.dot(x.p), 0.0, 1e-14);
    EXPECT_NEAR(m.hamiltonian(x), 1.0, 1e-12);
  }
  Coords off(3);
  off << 0, 0, 2;
  EXPECT_THROW(initial_fiber_sphere(m, off, 32), ConstraintViolation);
}

TEST(FiberMesh, DiscAnnulus) {
  const auto m = HamiltonianModel::flat_torus(2);
  auto disc = initial_fiber_disc(m, Coords::Zero(2), 256, 0.05, 40);
  EXPECT_EQ(disc.simplex_dim, 2);
  EXPECT_EQ(disc.vertex_count(), 256u * 41);
  RefinementConfig r;
  EXPECT_NEAR(measure_volume(m, disc, r), (1 - 0.0025) * M_PI, 1e-3);
  for (const auto& p : disc.params) {
    EXPECT_GE(p.radius, 0.05 - 1e-15);
    EXPECT_LE(p.radius, 1.0 + 1e-15);
  }
}

TEST(FiberMesh, TetrahedralShellVolume) {
  const auto m = HamiltonianModel::flat_torus(3);
  auto disc = initial_fiber_disc(m, Coords::Zero(3), 4, 0.05, 8);
  EXPECT_EQ(disc.simplex_dim, 3);
  RefinementConfig r;
  const double exact = 4.0 / 3.0 * M_PI * (1 - std::pow(0.05, 3));
  EXPECT_NEAR(measure_volume(m, disc, r) / exact, 1.0, 0.01);
}

TEST(FiberMesh, ArgumentChecks) {
  const auto m = HamiltonianModel::flat_torus(2);
  EXPECT_THROW(initial_fiber_sphere(m, Coords::Zero(2), 8), InvalidArgument);
  EXPECT_THROW(initial_fiber_sphere(HamiltonianModel::nil3(), Coords::Zero(3), 1), InvalidArgument);
  EXPECT_THROW(initial_fiber_disc(m, Coords::Zero(2), 32, 1.5), InvalidArgument);
  EXPECT_THROW(initial_fiber_sphere(m, Coords::Zero(3), 32), InvalidArgument);
}

TEST(FiberMesh, Midpoint) {
  FiberParam a{1.0, Coords(2)}, b{0.5, Coords(2)};
  a.direction << 1, 0;
  b.direction << 0, 1;
  const auto c = midpoint(a, b);
  EXPECT_DOUBLE_EQ(c.radius, 0.75);
  EXPECT_NEAR(c.direction(0), std::sqrt(0.5), 1e-15);
  b.direction << -1, 0;
  EXPECT_THROW(midpoint(a, b), InternalError);
}

TEST(FiberMesh, CsvDumps) {
  const auto m = HamiltonianModel::flat_torus(2);
  const auto mesh = initial_fiber_sphere(m, Coords::Zero(2), 16);
  std::ostringstream v, s;
  write_mesh_vertices_csv(v, m, mesh);
  write_mesh_simplices_csv(s, mesh);
  EXPECT_EQ(v.str().substr(0, v.str().find('\n')), "index,radius,u1,u2,q1,q2,p1,p2");
  EXPECT_EQ(s.str().substr(0, s.str().find('\n')), "v0,v1");
  const std::string rows = s.str();
  EXPECT_EQ(std::count(rows.begin(), rows.end(), '\n'), 17);
}
