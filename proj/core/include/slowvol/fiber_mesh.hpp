#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <string_view>
#include <vector>

#include "slowvol/flow_models.hpp"

namespace slowvol {

enum class MeshKind { sphere, punctured_disc };

std::string_view to_string(MeshKind kind);

// Parameter of one mesh vertex: a unit direction in the fiber (coordinates
// with respect to the model's fiber frame) and a radius, which is 1 on the
// fiber sphere and lies in [inner_radius, 1] on the punctured disc.
struct FiberParam {
  double radius = 1.0;
  Coords direction;
};

// Midpoint used by refinement: mean radius, normalized mean direction.
FiberParam midpoint(const FiberParam& a, const FiberParam& b);

struct Insertion {
  int a = 0;
  int b = 0;
  int vertex = 0;
  double time = 0.0;
};

// Simplicial discretization of the fiber sphere Sigma_q (closed polyline for
// 2-dimensional fibers, closed triangulated 2-sphere for 3-dimensional
// fibers) or of the punctured fiber disc (triangulated annulus, or a
// tetrahedral shell for 3-dimensional fibers).
struct FiberSphereMesh {
  Coords base_point;
  MeshKind kind = MeshKind::sphere;
  double inner_radius = 1.0;
  // Columns span the fiber over base_point.
  Eigen::MatrixXd fiber_frame;
  // 1 = segments, 2 = triangles, 3 = tetrahedra.
  int simplex_dim = 1;

  std::vector<FiberParam> params;
  // Lifted phase point of each parameter at t = 0.
  std::vector<PhasePoint> initial;
  // Lifted phase point of each parameter at `time`.
  std::vector<PhasePoint> images;
  // Each simplex uses the first simplex_dim + 1 entries.
  std::vector<std::array<int, 4>> simplices;
  std::vector<Insertion> refinement_log;
  double time = 0.0;
  // Images of the finite-difference neighbours of each parameter; filled only
  // when volumes are measured through tangent maps.
  std::vector<std::vector<PhasePoint>> satellites;

  std::size_t vertex_count() const { return params.size(); }
  int simplex_size() const { return simplex_dim + 1; }
};

// Covector r u / sqrt(H(q, u)) over q for the fiber direction u; throws
// NonPositiveH if H(q, u) <= 0.
PhasePoint fiber_point(const HamiltonianModel& model, const Coords& q,
                       const Eigen::MatrixXd& frame, const FiberParam& param);

// resolution = number of samples (>= 16) when the fiber is 2-dimensional and
// the icosahedral subdivision level (>= 2) when it is 3-dimensional.
FiberSphereMesh initial_fiber_sphere(const HamiltonianModel& model, const Coords& q,
                                     int resolution);

// Punctured disc {r Sigma_q : inner_radius <= r <= 1}. `resolution` has the
// same meaning as for the sphere; radial_layers = 0 picks a layer count that
// keeps the parameter cells roughly isotropic.
FiberSphereMesh initial_fiber_disc(const HamiltonianModel& model, const Coords& q, int resolution,
                                   double inner_radius = 0.05, int radial_layers = 0);

// Unit icosahedron subdivided `level` times, vertices projected to the sphere.
void icosphere(int level, std::vector<Eigen::Vector3d>& vertices,
               std::vector<std::array<int, 3>>& triangles);

// CSV dumps for external plotting: "index,radius,u1..un,q1..qd,p1..pd" with
// reduced image coordinates, and "v0,v1[,v2[,v3]]".
void write_mesh_vertices_csv(std::ostream& out, const HamiltonianModel& model,
                             const FiberSphereMesh& mesh);
void write_mesh_simplices_csv(std::ostream& out, const FiberSphereMesh& mesh);

}  // namespace slowvol
