#pragma once

#include <Eigen/Dense>

#include <string>
#include <variant>
#include <vector>

namespace slowvol {

inline constexpr int kMaxConfigDim = 3;

using Coords = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxConfigDim, 1>;
using PhaseVector =
    Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, 2 * kMaxConfigDim, 1>;

// A point (q, p) of the cotangent bundle in chart coordinates. For the round
// sphere q and p are ambient vectors in R^3 subject to |q| = 1, q.p = 0.
struct PhasePoint {
  Coords q;
  Coords p;

  int dimension() const { return static_cast<int>(q.size()); }
  PhaseVector stacked() const;
  static PhasePoint from_stacked(const PhaseVector& x);
};

PhasePoint make_point(std::initializer_list<double> q, std::initializer_list<double> p);

// Cometric G on the flat torus R^d / Z^d: H = p^T G p.
struct FlatTorus {
  Eigen::MatrixXd metric;
};
// Round unit sphere in the ambient chart; H = |q|^2 |p|^2 - (q.p)^2, which is
// |p|^2 on the constraint set and keeps |q| and q.p invariant.
struct RoundSphere2 {};
// Heisenberg group with ds^2 = dx^2 + dy^2 + (dz - x dy)^2, so
// H = p_x^2 + (p_y + x p_z)^2 + p_z^2. The chart is reduced modulo the
// integer lattice acting by left multiplication.
struct Nil3 {};
// Sol with H = e^{-2z} p_x^2 + e^{2z} p_y^2 + p_z^2 in the global chart.
struct Sol3 {};
// Co-Randers norm on T^2: H = (|p| + b.p)^2 with |b| < 1.
struct RandersTorus2 {
  Eigen::Vector2d drift;
};
// One term c cos(phi) + s sin(phi), phi = 2 pi (k1 q1 + k2 q2) + m theta.
struct FourierTerm {
  int k1 = 0;
  int k2 = 0;
  int m = 0;
  double cos_coeff = 0.0;
  double sin_coeff = 0.0;
};
// Fiber radius rho(q, theta) as a truncated Fourier series; the unit level
// set in the fiber over q is {rho(q, theta) (cos theta, sin theta)}, and
// H = |p|^2 / rho(q, arg p)^2.
struct StarshapedTorus2 {
  std::vector<FourierTerm> terms;
  double min_sampled_radius = 0.0;
};

enum class ModelTag { flat_torus, round_sphere2, nil3, sol3, randers_torus2, starshaped_torus2 };

struct Gradient {
  Coords dq;
  Coords dp;
};

// Catalog Hamiltonian on a cotangent bundle, fiberwise homogeneous of degree
// 2. Immutable after construction.
class HamiltonianModel {
 public:
  using Variant = std::variant<FlatTorus, RoundSphere2, Nil3, Sol3, RandersTorus2, StarshapedTorus2>;

  static HamiltonianModel flat_torus(const Eigen::MatrixXd& metric);
  static HamiltonianModel flat_torus(int dimension);
  static HamiltonianModel round_sphere2();
  static HamiltonianModel nil3();
  static HamiltonianModel sol3();
  static HamiltonianModel randers_torus2(const Eigen::Vector2d& drift);
  // Checks rho > 0 on a 16 x 16 x 16 grid over (q1, q2, theta); throws
  // NonPositiveH otherwise.
  static HamiltonianModel starshaped_torus2(std::vector<FourierTerm> terms);

  ModelTag tag() const;
  std::string name() const;
  const Variant& data() const { return model_; }

  static constexpr int homogeneity_degree = 2;

  // Number of chart coordinates of q (3 for the ambient sphere chart).
  int dimension() const;
  // Dimension of the configuration manifold, i.e. of each cotangent fiber.
  int fiber_dimension() const;

  double hamiltonian(const PhasePoint& x) const;
  Gradient gradient(const PhasePoint& x) const;
  // Hamiltonian vector field (dH/dp, -dH/dq) on stacked coordinates.
  PhaseVector vector_field(const PhaseVector& x) const;

  bool has_closed_form_flow() const;
  // Closed-form time-t map in lifted (unreduced) chart coordinates.
  PhasePoint closed_form_flow(const PhasePoint& x, double t) const;

  // Ambient sphere constraint; no-op for the other models.
  bool satisfies_constraint(const PhasePoint& x, double tolerance) const;
  PhasePoint project_to_constraint(const PhasePoint& x) const;

  // Chart reduction into the fundamental domain of the deck group.
  PhasePoint reduce(const PhasePoint& x) const;
  // Differential of the deck transformation that reduces `lifted_base`,
  // applied to a tangent vector at that point.
  PhaseVector chart_tangent(const PhasePoint& lifted_base, const PhaseVector& v) const;
  // Tangent vector at a lifted point written in deck-invariant coordinates,
  // so that Euclidean lengths of the result define a smooth metric on the
  // compact quotient. For Nil these are (x, y, z - x dy, p_x, p_y + x p_z,
  // p_z) differentials; the identity for the other models.
  PhaseVector invariant_tangent(const PhasePoint& lifted_base, const PhaseVector& v) const;
  // Displacement from `from` to the deck translate of `to` closest to it,
  // expressed in the reduced chart at `from`.
  PhaseVector chart_displacement(const PhasePoint& from, const PhasePoint& to) const;
  // q-coordinates that are periodic in the reduced chart.
  bool has_periodic_chart() const;

  // Columns span the cotangent fiber over q in chart coordinates
  // (dimension() x fiber_dimension()).
  Eigen::MatrixXd fiber_frame(const Coords& q) const;

 private:
  explicit HamiltonianModel(Variant m) : model_(std::move(m)) {}

  Variant model_;
};

double hamiltonian(const HamiltonianModel& model, const PhasePoint& x);

}  // namespace slowvol
