#include "slowvol/fiber_mesh.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <numbers>
#include <ostream>
#include <string>

#include "slowvol/errors.hpp"

namespace slowvol {

std::string_view to_string(MeshKind kind) {
  return kind == MeshKind::sphere ? "sphere" : "punctured_disc";
}

FiberParam midpoint(const FiberParam& a, const FiberParam& b) {
  FiberParam m;
  m.radius = 0.5 * (a.radius + b.radius);
  m.direction = a.direction + b.direction;
  const double norm = m.direction.norm();
  if (norm < 1e-12) throw InternalError("midpoint of antipodal fiber directions");
  m.direction /= norm;
  return m;
}

PhasePoint fiber_point(const HamiltonianModel& model, const Coords& q,
                       const Eigen::MatrixXd& frame, const FiberParam& param) {
  const Coords u = frame * param.direction;
  const PhasePoint probe{q, u};
  const double h = model.hamiltonian(probe);
  if (!(h > 0.0)) {
    throw NonPositiveH("H(q, u) = " + std::to_string(h) + " is not positive on the fiber");
  }
  return PhasePoint{q, (param.radius / std::sqrt(h)) * u};
}

void icosphere(int level, std::vector<Eigen::Vector3d>& vertices,
               std::vector<std::array<int, 3>>& triangles) {
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  vertices = {{-1, phi, 0}, {1, phi, 0},  {-1, -phi, 0}, {1, -phi, 0},
              {0, -1, phi}, {0, 1, phi},  {0, -1, -phi}, {0, 1, -phi},
              {phi, 0, -1}, {phi, 0, 1},  {-phi, 0, -1}, {-phi, 0, 1}};
  for (auto& v : vertices) v.normalize();
  triangles = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
               {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
               {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
               {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
  for (int l = 0; l < level; ++l) {
    std::map<std::pair<int, int>, int> mids;
    auto mid = [&](int a, int b) {
      const auto key = std::minmax(a, b);
      auto it = mids.find(key);
      if (it != mids.end()) return it->second;
      vertices.push_back((vertices[a] + vertices[b]).normalized());
      const int id = static_cast<int>(vertices.size()) - 1;
      mids.emplace(key, id);
      return id;
    };
    std::vector<std::array<int, 3>> next;
    next.reserve(triangles.size() * 4);
    for (const auto& t : triangles) {
      const int ab = mid(t[0], t[1]);
      const int bc = mid(t[1], t[2]);
      const int ca = mid(t[2], t[0]);
      next.push_back({t[0], ab, ca});
      next.push_back({t[1], bc, ab});
      next.push_back({t[2], ca, bc});
      next.push_back({ab, bc, ca});
    }
    triangles = std::move(next);
  }
}

namespace {

FiberSphereMesh empty_mesh(const HamiltonianModel& model, const Coords& q, MeshKind kind,
                           double inner_radius) {
  if (q.size() != model.dimension()) throw InvalidArgument("base point has wrong dimension");
  if (model.tag() == ModelTag::round_sphere2 && std::abs(q.norm() - 1.0) > 1e-9) {
    throw ConstraintViolation("sphere base point must be a unit vector");
  }
  FiberSphereMesh mesh;
  mesh.base_point = q;
  mesh.kind = kind;
  mesh.inner_radius = inner_radius;
  mesh.fiber_frame = model.fiber_frame(q);
  return mesh;
}

void add_vertex(const HamiltonianModel& model, FiberSphereMesh& mesh, FiberParam param) {
  PhasePoint x = fiber_point(model, mesh.base_point, mesh.fiber_frame, param);
  mesh.params.push_back(std::move(param));
  mesh.initial.push_back(x);
  mesh.images.push_back(std::move(x));
}

FiberParam circle_param(double radius, int k, int n) {
  const double angle = 2.0 * std::numbers::pi * k / n;
  FiberParam p;
  p.radius = radius;
  p.direction = Coords(2);
  p.direction << std::cos(angle), std::sin(angle);
  return p;
}

FiberParam sphere_param(double radius, const Eigen::Vector3d& u) {
  FiberParam p;
  p.radius = radius;
  p.direction = Coords(3);
  p.direction << u(0), u(1), u(2);
  return p;
}

}  // namespace

FiberSphereMesh initial_fiber_sphere(const HamiltonianModel& model, const Coords& q,
                                     int resolution) {
  FiberSphereMesh mesh = empty_mesh(model, q, MeshKind::sphere, 1.0);
  const int n = model.fiber_dimension();
  if (n == 2) {
    if (resolution < 16) throw InvalidArgument("circle resolution must be at least 16");
    mesh.simplex_dim = 1;
    for (int k = 0; k < resolution; ++k) add_vertex(model, mesh, circle_param(1.0, k, resolution));
    for (int k = 0; k < resolution; ++k) mesh.simplices.push_back({k, (k + 1) % resolution, -1, -1});
  } else if (n == 3) {
    if (resolution < 2) throw InvalidArgument("icosahedral subdivision level must be at least 2");
    mesh.simplex_dim = 2;
    std::vector<Eigen::Vector3d> verts;
    std::vector<std::array<int, 3>> tris;
    icosphere(resolution, verts, tris);
    for (const auto& v : verts) add_vertex(model, mesh, sphere_param(1.0, v));
    for (const auto& t : tris) mesh.simplices.push_back({t[0], t[1], t[2], -1});
  } else {
    throw InvalidArgument("fiber spheres are built for fiber dimension 2 or 3");
  }
  return mesh;
}

FiberSphereMesh initial_fiber_disc(const HamiltonianModel& model, const Coords& q, int resolution,
                                   double inner_radius, int radial_layers) {
  if (!(inner_radius > 0.0 && inner_radius < 1.0)) {
    throw InvalidArgument("puncture radius must lie in (0, 1)");
  }
  FiberSphereMesh mesh = empty_mesh(model, q, MeshKind::punctured_disc, inner_radius);
  const int n = model.fiber_dimension();
  auto radius = [&](int j, int layers) {
    return inner_radius + (1.0 - inner_radius) * static_cast<double>(j) / layers;
  };
  if (n == 2) {
    if (resolution < 16) throw InvalidArgument("circle resolution must be at least 16");
    const int layers = radial_layers > 0
                           ? radial_layers
                           : std::max(2, static_cast<int>(std::lround(
                                             resolution * (1.0 - inner_radius) /
                                             (2.0 * std::numbers::pi))));
    mesh.simplex_dim = 2;
    for (int j = 0; j <= layers; ++j) {
      for (int k = 0; k < resolution; ++k) {
        add_vertex(model, mesh, circle_param(radius(j, layers), k, resolution));
      }
    }
    auto id = [&](int j, int k) { return j * resolution + (k % resolution); };
    for (int j = 0; j < layers; ++j) {
      for (int k = 0; k < resolution; ++k) {
        mesh.simplices.push_back({id(j, k), id(j, k + 1), id(j + 1, k + 1), -1});
        mesh.simplices.push_back({id(j, k), id(j + 1, k + 1), id(j + 1, k), -1});
      }
    }
  } else if (n == 3) {
    if (resolution < 2) throw InvalidArgument("icosahedral subdivision level must be at least 2");
    std::vector<Eigen::Vector3d> verts;
    std::vector<std::array<int, 3>> tris;
    icosphere(resolution, verts, tris);
    const int per_layer = static_cast<int>(verts.size());
    const double spacing = std::sqrt(4.0 * std::numbers::pi / static_cast<double>(tris.size()));
    const int layers = radial_layers > 0
                           ? radial_layers
                           : std::max(2, static_cast<int>(std::lround((1.0 - inner_radius) / spacing)));
    mesh.simplex_dim = 3;
    for (int j = 0; j <= layers; ++j) {
      for (const auto& v : verts) add_vertex(model, mesh, sphere_param(radius(j, layers), v));
    }
    // Each prism between consecutive shells is split into three tetrahedra;
    // ordering its base vertices by index makes neighbouring prisms agree on
    // the diagonals of their shared faces.
    for (int j = 0; j < layers; ++j) {
      for (auto t : tris) {
        std::sort(t.begin(), t.end());
        const int a = j * per_layer + t[0];
        const int b = j * per_layer + t[1];
        const int c = j * per_layer + t[2];
        const int a1 = a + per_layer;
        const int b1 = b + per_layer;
        const int c1 = c + per_layer;
        mesh.simplices.push_back({a, b, c, a1});
        mesh.simplices.push_back({b, c, a1, b1});
        mesh.simplices.push_back({c, a1, b1, c1});
      }
    }
  } else {
    throw InvalidArgument("fiber discs are built for fiber dimension 2 or 3");
  }
  return mesh;
}

void write_mesh_vertices_csv(std::ostream& out, const HamiltonianModel& model,
                             const FiberSphereMesh& mesh) {
  const int n = mesh.params.empty() ? 0 : static_cast<int>(mesh.params.front().direction.size());
  const int d = model.dimension();
  out << "index,radius";
  for (int i = 1; i <= n; ++i) out << ",u" << i;
  for (int i = 1; i <= d; ++i) out << ",q" << i;
  for (int i = 1; i <= d; ++i) out << ",p" << i;
  out << '\n' << std::setprecision(17);
  for (std::size_t v = 0; v < mesh.params.size(); ++v) {
    const PhasePoint x = model.reduce(mesh.images[v]);
    out << v << ',' << mesh.params[v].radius;
    for (int i = 0; i < n; ++i) out << ',' << mesh.params[v].direction(i);
    for (int i = 0; i < d; ++i) out << ',' << x.q(i);
    for (int i = 0; i < d; ++i) out << ',' << x.p(i);
    out << '\n';
  }
}

void write_mesh_simplices_csv(std::ostream& out, const FiberSphereMesh& mesh) {
  for (int i = 0; i <= mesh.simplex_dim; ++i) out << (i ? ",v" : "v") << i;
  out << '\n';
  for (const auto& s : mesh.simplices) {
    for (int i = 0; i <= mesh.simplex_dim; ++i) out << (i ? "," : "") << s[i];
    out << '\n';
  }
}

}  // namespace slowvol
