#pragma once

#include <iosfwd>
#include <string_view>
#include <vector>

#include "slowvol/flow_models.hpp"

namespace slowvol {

enum class Integrator { exact, implicit_midpoint, rk4 };

std::string_view to_string(Integrator integrator);
Integrator parse_integrator(std::string_view name);

struct FlowConfig {
  double step = 1e-3;
  Integrator integrator = Integrator::implicit_midpoint;
  double newton_tolerance = 1e-12;
  // Allowed |H(x(t)) - H(x(0))| per unit time.
  double energy_drift_cap = 1e-6;
  int max_halvings = 6;
  int max_newton_iterations = 60;
  double constraint_tolerance = 1e-9;
};

void validate(const FlowConfig& config);

// Time-t map in lifted chart coordinates (torus and Nil coordinates are not
// reduced, so trajectories stay continuous).
PhasePoint flow_lifted(const HamiltonianModel& model, const PhasePoint& x, double t,
                       const FlowConfig& config);

// Time-t map, reduced into the model's chart.
PhasePoint flow(const HamiltonianModel& model, const PhasePoint& x, double t,
                const FlowConfig& config);

// One step of each scheme, exposed for tests and benchmarks.
PhaseVector implicit_midpoint_step(const HamiltonianModel& model, const PhaseVector& x, double h,
                                   const FlowConfig& config);
PhaseVector rk4_step(const HamiltonianModel& model, const PhaseVector& x, double h);

// Fiber dilation (q, p) -> (q, r p).
PhasePoint dilation(const PhasePoint& x, double r);

// Chart distance between flow(x, r t) and dilation(flow(dilation(x, r), t), 1/r).
double conjugation_residual(const HamiltonianModel& model, const PhasePoint& x, double t, double r,
                            const FlowConfig& config);

struct EulerCheck {
  // dH(q,p)[(0, p)] - 2 H(q,p) from the analytic gradient.
  double residual = 0.0;
  // Max-norm difference between the analytic gradient and central
  // differences with step fd_step.
  double gradient_mismatch = 0.0;
};

EulerCheck euler_residual(const HamiltonianModel& model, const PhasePoint& x,
                          double fd_step = 1e-5);

struct TrajectorySample {
  double t = 0.0;
  PhasePoint x;
};

std::vector<TrajectorySample> sample_trajectory(const HamiltonianModel& model, const PhasePoint& x,
                                                const std::vector<double>& times,
                                                const FlowConfig& config);

// CSV with header "t,q1..qd,p1..pd".
void write_trajectory_csv(std::ostream& out, const std::vector<TrajectorySample>& samples);

}  // namespace slowvol
