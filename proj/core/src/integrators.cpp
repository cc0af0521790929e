#include "slowvol/integrators.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <optional>
#include <ostream>
#include <string>

#include "slowvol/errors.hpp"

namespace slowvol {

namespace {

using Jacobian = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor,
                               2 * kMaxConfigDim, 2 * kMaxConfigDim>;

// Central-difference Jacobian of the vector field. Only used to drive the
// Newton iteration, so its accuracy does not limit the solution accuracy.
Jacobian field_jacobian(const HamiltonianModel& model, const PhaseVector& x) {
  const auto n = x.size();
  Jacobian jac(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double h = 1e-7 * (1.0 + std::abs(x(k)));
    PhaseVector plus = x;
    PhaseVector minus = x;
    plus(k) += h;
    minus(k) -= h;
    jac.col(k) = (model.vector_field(plus) - model.vector_field(minus)) / (2.0 * h);
  }
  return jac;
}

struct StepFailure {};

std::optional<PhaseVector> try_implicit_midpoint(const HamiltonianModel& model,
                                                 const PhaseVector& x, double h,
                                                 const FlowConfig& config) {
  // Solve y = x + h f((x + y) / 2) by simplified Newton, starting from the
  // explicit Euler predictor.
  const PhaseVector fx = model.vector_field(x);
  PhaseVector y = x + h * fx;
  const auto n = x.size();
  const Jacobian jac = field_jacobian(model, x + 0.5 * h * fx);
  const Jacobian system = Jacobian::Identity(n, n) - 0.5 * h * jac;
  const Eigen::PartialPivLU<Jacobian> lu(system);
  for (int it = 0; it < config.max_newton_iterations; ++it) {
    const PhaseVector residual = y - x - h * model.vector_field(0.5 * (x + y));
    const PhaseVector delta = lu.solve(residual);
    y -= delta;
    if (!y.allFinite()) return std::nullopt;
    if (delta.lpNorm<Eigen::Infinity>() <=
        config.newton_tolerance * (1.0 + y.lpNorm<Eigen::Infinity>())) {
      return y;
    }
  }
  return std::nullopt;
}

PhaseVector integrate(const HamiltonianModel& model, const PhaseVector& start, double t,
                      double step, const FlowConfig& config, double energy0) {
  const auto steps = static_cast<long long>(std::ceil(std::abs(t) / step - 1e-12));
  if (steps == 0) return start;
  const double h = t / static_cast<double>(steps);
  const bool sphere = model.tag() == ModelTag::round_sphere2;
  const double allowed = config.energy_drift_cap * std::abs(t) +
                         64.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(energy0));
  PhaseVector x = start;
  for (long long k = 0; k < steps; ++k) {
    if (config.integrator == Integrator::rk4) {
      x = rk4_step(model, x, h);
    } else {
      auto next = try_implicit_midpoint(model, x, h, config);
      if (!next) throw StepFailure{};
      x = *next;
    }
    if (!x.allFinite()) throw StepFailure{};
    if (sphere) x = model.project_to_constraint(PhasePoint::from_stacked(x)).stacked();
    const double drift = std::abs(model.hamiltonian(PhasePoint::from_stacked(x)) - energy0);
    if (drift > allowed) throw StepFailure{};
  }
  return x;
}

}  // namespace

std::string_view to_string(Integrator integrator) {
  switch (integrator) {
    case Integrator::exact: return "exact";
    case Integrator::implicit_midpoint: return "implicit_midpoint";
    case Integrator::rk4: return "rk4";
  }
  return "unknown";
}

Integrator parse_integrator(std::string_view name) {
  if (name == "exact") return Integrator::exact;
  if (name == "implicit_midpoint") return Integrator::implicit_midpoint;
  if (name == "rk4") return Integrator::rk4;
  throw ConfigError("unknown integrator '" + std::string(name) + "'");
}

void validate(const FlowConfig& config) {
  if (!(config.step > 0.0)) throw ConfigError("flow step must be positive");
  if (!(config.newton_tolerance > 0.0)) throw ConfigError("newton_tolerance must be positive");
  if (!(config.energy_drift_cap > 0.0)) throw ConfigError("energy_drift_cap must be positive");
  if (!(config.constraint_tolerance > 0.0)) {
    throw ConfigError("constraint_tolerance must be positive");
  }
  if (config.max_halvings < 0 || config.max_newton_iterations < 1) {
    throw ConfigError("iteration limits must be positive");
  }
}

PhaseVector implicit_midpoint_step(const HamiltonianModel& model, const PhaseVector& x, double h,
                                   const FlowConfig& config) {
  auto y = try_implicit_midpoint(model, x, h, config);
  if (!y) throw EnergyDriftExceeded("implicit midpoint Newton iteration did not converge");
  return *y;
}

PhaseVector rk4_step(const HamiltonianModel& model, const PhaseVector& x, double h) {
  const PhaseVector k1 = model.vector_field(x);
  const PhaseVector k2 = model.vector_field(x + 0.5 * h * k1);
  const PhaseVector k3 = model.vector_field(x + 0.5 * h * k2);
  const PhaseVector k4 = model.vector_field(x + h * k3);
  return x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

PhasePoint flow_lifted(const HamiltonianModel& model, const PhasePoint& x, double t,
                       const FlowConfig& config) {
  validate(config);
  if (x.q.size() != model.dimension() || x.p.size() != model.dimension()) {
    throw InvalidArgument("phase point has wrong dimension for " + model.name());
  }
  if (!model.satisfies_constraint(x, config.constraint_tolerance)) {
    throw ConstraintViolation("point is off the sphere constraint |q| = 1, q.p = 0");
  }
  if (t == 0.0) return x;
  if (config.integrator == Integrator::exact) {
    if (!model.has_closed_form_flow()) {
      throw ConfigError(model.name() + " has no closed-form flow; use implicit_midpoint or rk4");
    }
    return model.closed_form_flow(x, t);
  }
  const double energy0 = model.hamiltonian(x);
  double step = config.step;
  for (int attempt = 0; attempt <= config.max_halvings; ++attempt) {
    try {
      return PhasePoint::from_stacked(integrate(model, x.stacked(), t, step, config, energy0));
    } catch (const StepFailure&) {
      step *= 0.5;
    }
  }
  throw EnergyDriftExceeded("energy drift above " + std::to_string(config.energy_drift_cap) +
                            " per unit time after " + std::to_string(config.max_halvings) +
                            " step halvings");
}

PhasePoint flow(const HamiltonianModel& model, const PhasePoint& x, double t,
                const FlowConfig& config) {
  return model.reduce(flow_lifted(model, x, t, config));
}

PhasePoint dilation(const PhasePoint& x, double r) {
  if (!(r > 0.0)) throw InvalidArgument("dilation factor must be positive");
  return PhasePoint{x.q, r * x.p};
}

double conjugation_residual(const HamiltonianModel& model, const PhasePoint& x, double t, double r,
                            const FlowConfig& config) {
  if (!(r > 0.0)) throw InvalidArgument("dilation factor must be positive");
  const PhasePoint direct = flow(model, x, r * t, config);
  const PhasePoint conjugated = dilation(flow(model, dilation(x, r), t, config), 1.0 / r);
  return model.chart_displacement(direct, conjugated).norm();
}

EulerCheck euler_residual(const HamiltonianModel& model, const PhasePoint& x, double fd_step) {
  if (x.p.squaredNorm() == 0.0) throw ZeroCovector("Euler identity needs p != 0");
  const Gradient g = model.gradient(x);
  const double h = model.hamiltonian(x);
  EulerCheck out;
  out.residual = g.dp.dot(x.p) - static_cast<double>(HamiltonianModel::homogeneity_degree) * h;

  const int n = model.dimension();
  for (int i = 0; i < 2 * n; ++i) {
    PhaseVector plus = x.stacked();
    PhaseVector minus = plus;
    plus(i) += fd_step;
    minus(i) -= fd_step;
    const double fd = (model.hamiltonian(PhasePoint::from_stacked(plus)) -
                       model.hamiltonian(PhasePoint::from_stacked(minus))) /
                      (2.0 * fd_step);
    const double analytic = i < n ? g.dq(i) : g.dp(i - n);
    out.gradient_mismatch = std::max(out.gradient_mismatch, std::abs(fd - analytic));
  }
  return out;
}

std::vector<TrajectorySample> sample_trajectory(const HamiltonianModel& model, const PhasePoint& x,
                                                const std::vector<double>& times,
                                                const FlowConfig& config) {
  std::vector<TrajectorySample> out;
  out.reserve(times.size());
  PhasePoint current = x;
  double now = 0.0;
  for (const double t : times) {
    if (t < now) throw InvalidArgument("trajectory times must be non-decreasing");
    current = flow_lifted(model, current, t - now, config);
    now = t;
    out.push_back({t, model.reduce(current)});
  }
  return out;
}

void write_trajectory_csv(std::ostream& out, const std::vector<TrajectorySample>& samples) {
  const int d = samples.empty() ? 0 : samples.front().x.dimension();
  out << 't';
  for (int i = 1; i <= d; ++i) out << ",q" << i;
  for (int i = 1; i <= d; ++i) out << ",p" << i;
  out << '\n';
  out << std::setprecision(17);
  for (const auto& s : samples) {
    out << s.t;
    for (int i = 0; i < d; ++i) out << ',' << s.x.q(i);
    for (int i = 0; i < d; ++i) out << ',' << s.x.p(i);
    out << '\n';
  }
}

}  // namespace slowvol
