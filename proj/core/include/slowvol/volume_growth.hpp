#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "slowvol/errors.hpp"
#include "slowvol/exponent_fit.hpp"
#include "slowvol/fiber_mesh.hpp"
#include "slowvol/integrators.hpp"

namespace slowvol {

// chord: volume of the simplicial image with chart-straight edges.
// jacobian: integral of the image volume density over the parameter mesh,
// using tangent maps of the flow at the vertices. The second one stays
// accurate on images that wind many times around the chart at moderate
// vertex counts.
enum class VolumeMeasure { chord, jacobian };

std::string_view to_string(VolumeMeasure m);
VolumeMeasure parse_volume_measure(std::string_view name);

struct RefinementConfig {
  // Max chart length of an image edge (chord measure).
  double refine_threshold = 0.25;
  std::size_t volume_budget = 200000;
  VolumeMeasure measure = VolumeMeasure::chord;
  // Max change of the image volume density along an edge, relative to the
  // mean density over the whole mesh (jacobian measure).
  double tangent_tolerance = 0.1;
  // Max extent of an edge in any periodic q-coordinate (chord measure).
  double wrap_guard = 0.4;
  // Optional diagonal rescaling of the (q, p) chart metric, 2d entries.
  std::vector<double> metric_weights;
  // Parameter offset for the finite-difference tangent maps.
  double fd_step = 1e-6;
  // Compute resolution_certificate at the final time.
  bool certify = true;
};

void validate(const RefinementConfig& config, int phase_dimension);

struct VolumeSeries {
  std::vector<double> times;
  std::vector<double> volumes;
  std::vector<std::size_t> vertices;
  MeshKind mesh_kind = MeshKind::sphere;
  // |V' - V| / V where V' is the volume after one global refinement at the
  // final time; negative when not computed.
  double resolution_certificate = -1.0;
};

// Thrown when the mesh outgrows the vertex budget. Carries the samples
// measured before that happened.
class VolumeBudgetExceeded : public BudgetExceeded {
 public:
  VolumeBudgetExceeded(const std::string& message, double reached, std::size_t size,
                       VolumeSeries partial)
      : BudgetExceeded(message, reached, size), partial_(std::move(partial)) {}

  const VolumeSeries& partial() const noexcept { return partial_; }

 private:
  VolumeSeries partial_;
};

// Evolves the mesh through `times` (increasing, >= mesh.time), refining from
// the initial parameters, and records the volume at each time.
VolumeSeries evolve_and_measure(const HamiltonianModel& model, FiberSphereMesh& mesh,
                                const std::vector<double>& times, const FlowConfig& flow,
                                const RefinementConfig& refinement);

VolumeSeries evolve_and_measure(const HamiltonianModel& model, FiberSphereMesh& mesh,
                                const std::vector<double>& times, const FlowConfig& flow,
                                double refine_threshold, std::size_t volume_budget);

// Volume of the current images without refinement.
double measure_volume(const HamiltonianModel& model, FiberSphereMesh& mesh,
                      const RefinementConfig& refinement);

// CSV "t,volume,vertices".
void write_volume_csv(std::ostream& out, const VolumeSeries& series);

// t0, t0 r, t0 r^2, ... (count entries).
std::vector<double> geometric_times(double t0, double ratio, int count);

// Requires at least 8 samples spanning a decade in t; throws SeriesTooShort.
ScalingFit slow_vol_fit(const VolumeSeries& series, const FitOptions& options);
ScalingFit slow_vol_fit(const VolumeSeries& series, double window_fraction = 0.5);

struct ReductionSettings {
  int sphere_resolution = 64;
  int disc_resolution = 64;
  int disc_radial_layers = 0;
  double inner_radius = 0.05;
  RefinementConfig sphere;
  RefinementConfig disc;
  FitOptions fit;
};

struct ReductionGap {
  ScalingFit disc;
  ScalingFit sphere;
  VolumeSeries disc_series;
  VolumeSeries sphere_series;

  // disc exponent <= sphere exponent + 1 + tolerance.
  bool consistent(double tolerance) const;
};

ReductionGap reduction_gap(const HamiltonianModel& model, const Coords& q,
                           const std::vector<double>& times, const FlowConfig& flow,
                           const ReductionSettings& settings);

struct IntegralGrowth {
  double integral_exponent = 0.0;
  double function_exponent = 0.0;
};

// Exponents of F(R) = integral_0^R f and of f itself. The integral over
// [0, r_0] is approximated by r_0 f(r_0), the rest by cumulative trapezoids.
IntegralGrowth integral_growth_check(std::span<const double> r, std::span<const double> f,
                                     const FitOptions& options = {});

}  // namespace slowvol
