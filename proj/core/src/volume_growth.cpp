#include "slowvol/volume_growth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <map>
#include <ostream>
#include <string>

namespace slowvol {

std::string_view to_string(VolumeMeasure m) {
  return m == VolumeMeasure::chord ? "chord" : "jacobian";
}

VolumeMeasure parse_volume_measure(std::string_view name) {
  if (name == "chord") return VolumeMeasure::chord;
  if (name == "jacobian") return VolumeMeasure::jacobian;
  throw InvalidArgument("unknown volume measure '" + std::string(name) + "'");
}

void validate(const RefinementConfig& c, int phase_dimension) {
  if (!(c.refine_threshold > 0.0)) throw InvalidArgument("refine_threshold must be positive");
  if (c.volume_budget == 0) throw InvalidArgument("volume_budget must be positive");
  if (!(c.tangent_tolerance > 0.0)) throw InvalidArgument("tangent_tolerance must be positive");
  if (!(c.wrap_guard > 0.0 && c.wrap_guard < 0.5)) {
    throw InvalidArgument("wrap_guard must lie in (0, 0.5)");
  }
  if (!(c.fd_step > 0.0)) throw InvalidArgument("fd_step must be positive");
  if (!c.metric_weights.empty()) {
    if (static_cast<int>(c.metric_weights.size()) != phase_dimension) {
      throw InvalidArgument("metric_weights needs one weight per phase coordinate");
    }
    for (double w : c.metric_weights) {
      if (!(w > 0.0)) throw InvalidArgument("metric weights must be positive");
    }
  }
}

namespace {

using EdgeKey = std::pair<int, int>;

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

// k-dimensional volume of the simplex spanned by the columns.
double simplex_volume(const Eigen::MatrixXd& edges) {
  const Eigen::MatrixXd gram = edges.transpose() * edges;
  const double det = gram.determinant();
  return det > 0.0 ? std::sqrt(det) / factorial(static_cast<int>(edges.cols())) : 0.0;
}

// Orthonormal basis of the tangent space of the unit sphere at u (columns).
Eigen::MatrixXd tangent_basis(const Coords& u) {
  const Eigen::Index n = u.size();
  Eigen::MatrixXd basis(n, n - 1);
  if (n == 2) {
    basis.col(0) << -u(1), u(0);
    return basis;
  }
  Eigen::Index axis = 0;
  u.cwiseAbs().minCoeff(&axis);
  const Eigen::Vector3d w(u(0), u(1), u(2));
  Eigen::Vector3d e1 = Eigen::Vector3d::Unit(axis);
  e1 = (e1 - e1.dot(w) * w).normalized();
  basis.col(0) = e1;
  basis.col(1) = w.cross(e1);
  return basis;
}

class Evolver {
 public:
  Evolver(const HamiltonianModel& model, FiberSphereMesh& mesh, const FlowConfig& flow,
          const RefinementConfig& config)
      : model_(model), mesh_(mesh), flow_(flow), config_(config) {
    validate(flow_);
    validate(config_, 2 * model_.dimension());
    if (mesh_.params.empty()) throw InvalidArgument("mesh has no vertices");
    const int n = static_cast<int>(mesh_.params.front().direction.size());
    param_dim_ = mesh_.kind == MeshKind::sphere ? n - 1 : n;
    if (param_dim_ != mesh_.simplex_dim) throw InternalError("mesh parameter/simplex mismatch");
    if (jacobian()) {
      ensure_satellites();
      update_densities(0);
    }
  }

  bool jacobian() const { return config_.measure == VolumeMeasure::jacobian; }

  void advance(double t) {
    if (t < mesh_.time) throw InvalidArgument("times must not precede the mesh time");
    const double dt = t - mesh_.time;
    if (dt != 0.0) {
      for (std::size_t v = 0; v < mesh_.images.size(); ++v) {
        mesh_.images[v] = flow_lifted(model_, mesh_.images[v], dt, flow_);
        if (jacobian()) {
          for (auto& s : mesh_.satellites[v]) s = flow_lifted(model_, s, dt, flow_);
        }
      }
    }
    mesh_.time = t;
    if (jacobian()) update_densities(0);
  }

  // Refines until every edge passes; throws when the budget is exceeded.
  void refine(const VolumeSeries& so_far) {
    std::vector<EdgeKey> candidates = all_edges();
    while (true) {
      if (jacobian()) mean_density_ = volume() / parameter_volume();
      std::vector<EdgeKey> failing;
      for (const auto& e : candidates) {
        if (edge_fails(e.first, e.second)) failing.push_back(e);
      }
      if (failing.empty()) return;
      const int first_new = static_cast<int>(mesh_.params.size());
      if (mesh_.params.size() + failing.size() > config_.volume_budget) {
        throw VolumeBudgetExceeded(
            "mesh would exceed the budget of " + std::to_string(config_.volume_budget) +
                " vertices at t = " + std::to_string(mesh_.time),
            mesh_.time, mesh_.params.size() + failing.size(), so_far);
      }
      split(failing);
      candidates = edges_touching(first_new);
    }
  }

  // Splits every edge once (no budget).
  void refine_globally() { split(all_edges()); }

  double volume() const {
    double total = 0.0;
    const int k = mesh_.simplex_dim;
    const int phase = 2 * model_.dimension();
    Eigen::MatrixXd edges(phase, k);
    Eigen::MatrixXd param_edges(param_embedding(0).size(), k);
    for (const auto& s : mesh_.simplices) {
      if (!jacobian()) {
        const PhasePoint& base = mesh_.images[s[0]];
        for (int i = 1; i <= k; ++i) {
          edges.col(i - 1) = weigh(chord(base, mesh_.images[s[i]]));
        }
        total += simplex_volume(edges);
      } else {
        const Eigen::VectorXd origin = param_embedding(s[0]);
        double mean_density = 0.0;
        for (int i = 0; i <= k; ++i) mean_density += density_[s[i]];
        for (int i = 1; i <= k; ++i) param_edges.col(i - 1) = param_embedding(s[i]) - origin;
        total += simplex_volume(param_edges) * mean_density / (k + 1);
      }
    }
    return total;
  }

 private:
  PhaseVector weigh(PhaseVector v) const {
    for (std::size_t i = 0; i < config_.metric_weights.size(); ++i) v(i) *= config_.metric_weights[i];
    return v;
  }

  PhaseVector chord(const PhasePoint& from, const PhasePoint& to) const {
    return model_.invariant_tangent(from, to.stacked() - from.stacked());
  }

  // Parameter as a point of R^n (sphere) or R^n x R (disc); the product
  // metric there is the one the densities refer to.
  Eigen::VectorXd param_embedding(int v) const {
    const FiberParam& p = mesh_.params[v];
    const Eigen::Index n = p.direction.size();
    Eigen::VectorXd e(mesh_.kind == MeshKind::sphere ? n : n + 1);
    e.head(n) = p.direction;
    if (mesh_.kind != MeshKind::sphere) e(n) = p.radius;
    return e;
  }

  // Image volume density at v with respect to the parameter volume.
  double density(int v) const {
    const Eigen::MatrixXd jac = tangent_map(v);
    Eigen::MatrixXd cols(jac.rows(), jac.cols());
    for (Eigen::Index i = 0; i < jac.cols(); ++i) {
      cols.col(i) = weigh(model_.invariant_tangent(mesh_.images[v], jac.col(i)));
    }
    const double det = (cols.transpose() * cols).determinant();
    return det > 0.0 ? std::sqrt(det) : 0.0;
  }

  double parameter_volume() const {
    const int k = mesh_.simplex_dim;
    Eigen::MatrixXd edges(param_embedding(0).size(), k);
    double total = 0.0;
    for (const auto& s : mesh_.simplices) {
      const Eigen::VectorXd origin = param_embedding(s[0]);
      for (int i = 1; i <= k; ++i) edges.col(i - 1) = param_embedding(s[i]) - origin;
      total += simplex_volume(edges);
    }
    return total;
  }

  void update_densities(std::size_t from) {
    density_.resize(mesh_.params.size());
    for (std::size_t v = from; v < mesh_.params.size(); ++v) density_[v] = density(static_cast<int>(v));
  }

  std::vector<FiberParam> satellite_params(const FiberParam& p) const {
    std::vector<FiberParam> out;
    const Eigen::MatrixXd t = tangent_basis(p.direction);
    const double h = config_.fd_step;
    for (Eigen::Index i = 0; i < t.cols(); ++i) {
      for (double sign : {1.0, -1.0}) {
        FiberParam s = p;
        s.direction = (p.direction + sign * h * t.col(i)).normalized();
        out.push_back(s);
      }
    }
    if (mesh_.kind != MeshKind::sphere) {
      for (double sign : {1.0, -1.0}) {
        FiberParam s = p;
        s.radius = p.radius + sign * h;
        out.push_back(s);
      }
    }
    return out;
  }

  std::vector<PhasePoint> satellites_at(const FiberParam& p, double t) const {
    std::vector<PhasePoint> out;
    for (const auto& s : satellite_params(p)) {
      const PhasePoint x0 = fiber_point(model_, mesh_.base_point, mesh_.fiber_frame, s);
      out.push_back(flow_lifted(model_, x0, t, flow_));
    }
    return out;
  }

  void ensure_satellites() {
    if (mesh_.satellites.size() == mesh_.params.size()) return;
    mesh_.satellites.clear();
    for (const auto& p : mesh_.params) mesh_.satellites.push_back(satellites_at(p, mesh_.time));
  }

  // Lifted tangent map at v, one column per local parameter direction.
  Eigen::MatrixXd tangent_map(int v) const {
    const auto& sats = mesh_.satellites[v];
    const int phase = 2 * model_.dimension();
    Eigen::MatrixXd jac(phase, param_dim_);
    const double h = config_.fd_step;
    for (int i = 0; i < param_dim_; ++i) {
      jac.col(i) = (sats[2 * i].stacked() - sats[2 * i + 1].stacked()) / (2.0 * h);
    }
    return jac;
  }

  bool edge_fails(int a, int b) const {
    if (jacobian()) {
      return std::abs(density_[a] - density_[b]) > config_.tangent_tolerance * mean_density_;
    }
    const PhasePoint& xa = mesh_.images[a];
    const PhaseVector raw = chord(xa, mesh_.images[b]);
    const PhaseVector c = weigh(raw);
    if (c.norm() > config_.refine_threshold) return true;
    if (model_.has_periodic_chart()) {
      const int d = model_.dimension();
      if (raw.head(d).cwiseAbs().maxCoeff() > config_.wrap_guard) return true;
    }
    return false;
  }

  std::vector<EdgeKey> simplex_edges(const std::array<int, 4>& s) const {
    std::vector<EdgeKey> out;
    for (int i = 0; i <= mesh_.simplex_dim; ++i) {
      for (int j = i + 1; j <= mesh_.simplex_dim; ++j) out.push_back(std::minmax(s[i], s[j]));
    }
    return out;
  }

  std::vector<EdgeKey> collect(bool only_new, int first_new) const {
    std::vector<EdgeKey> out;
    for (const auto& s : mesh_.simplices) {
      for (const auto& e : simplex_edges(s)) {
        if (!only_new || e.second >= first_new) out.push_back(e);
      }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  std::vector<EdgeKey> all_edges() const { return collect(false, 0); }
  std::vector<EdgeKey> edges_touching(int first_new) const { return collect(true, first_new); }

  // Bisects the given edges (sorted). Each simplex is split along its marked
  // edges in lexicographic order, so simplices sharing a face split it alike.
  void split(const std::vector<EdgeKey>& marked) {
    std::map<EdgeKey, int> mid;
    const std::size_t first_new = mesh_.params.size();
    for (const auto& e : marked) {
      const int id = static_cast<int>(mesh_.params.size());
      FiberParam p = midpoint(mesh_.params[e.first], mesh_.params[e.second]);
      const PhasePoint x0 = fiber_point(model_, mesh_.base_point, mesh_.fiber_frame, p);
      mesh_.images.push_back(flow_lifted(model_, x0, mesh_.time, flow_));
      mesh_.initial.push_back(x0);
      if (jacobian()) mesh_.satellites.push_back(satellites_at(p, mesh_.time));
      mesh_.params.push_back(std::move(p));
      mesh_.refinement_log.push_back({e.first, e.second, id, mesh_.time});
      mid.emplace(e, id);
    }
    if (jacobian()) update_densities(first_new);
    const int size = mesh_.simplex_size();
    std::vector<std::array<int, 4>> out;
    out.reserve(mesh_.simplices.size() + 2 * marked.size());
    std::vector<std::array<int, 4>> stack;
    for (const auto& s : mesh_.simplices) {
      stack.assign(1, s);
      while (!stack.empty()) {
        const std::array<int, 4> cur = stack.back();
        stack.pop_back();
        // First marked edge of cur in lexicographic order.
        const EdgeKey* best = nullptr;
        int ia = -1, ib = -1;
        for (int i = 0; i < size; ++i) {
          for (int j = 0; j < size; ++j) {
            if (i == j || cur[i] > cur[j]) continue;
            const EdgeKey key{cur[i], cur[j]};
            auto it = mid.find(key);
            if (it == mid.end()) continue;
            if (!best || it->first < *best) {
              best = &it->first;
              ia = i;
              ib = j;
            }
          }
        }
        if (!best) {
          out.push_back(cur);
          continue;
        }
        const int m = mid.at(*best);
        std::array<int, 4> left = cur;
        std::array<int, 4> right = cur;
        left[ib] = m;
        right[ia] = m;
        // Keep the original order of processing: left child first.
        stack.push_back(right);
        stack.push_back(left);
      }
    }
    mesh_.simplices = std::move(out);
  }

  const HamiltonianModel& model_;
  FiberSphereMesh& mesh_;
  const FlowConfig& flow_;
  const RefinementConfig& config_;
  int param_dim_ = 1;
  std::vector<double> density_;
  double mean_density_ = 0.0;
};

}  // namespace

VolumeSeries evolve_and_measure(const HamiltonianModel& model, FiberSphereMesh& mesh,
                                const std::vector<double>& times, const FlowConfig& flow,
                                const RefinementConfig& refinement) {
  if (times.empty()) throw InvalidArgument("no sample times given");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] > 0.0) || (i > 0 && !(times[i] > times[i - 1]))) {
      throw InvalidArgument("sample times must be positive and strictly increasing");
    }
  }
  Evolver evolver(model, mesh, flow, refinement);
  VolumeSeries series;
  series.mesh_kind = mesh.kind;
  for (double t : times) {
    evolver.advance(t);
    evolver.refine(series);
    series.times.push_back(t);
    series.volumes.push_back(evolver.volume());
    series.vertices.push_back(mesh.vertex_count());
  }
  if (refinement.certify) {
    FiberSphereMesh fine = mesh;
    Evolver fine_evolver(model, fine, flow, refinement);
    fine_evolver.refine_globally();
    const double v = series.volumes.back();
    series.resolution_certificate = std::abs(fine_evolver.volume() - v) / v;
  }
  return series;
}

VolumeSeries evolve_and_measure(const HamiltonianModel& model, FiberSphereMesh& mesh,
                                const std::vector<double>& times, const FlowConfig& flow,
                                double refine_threshold, std::size_t volume_budget) {
  RefinementConfig config;
  config.refine_threshold = refine_threshold;
  config.volume_budget = volume_budget;
  return evolve_and_measure(model, mesh, times, flow, config);
}

double measure_volume(const HamiltonianModel& model, FiberSphereMesh& mesh,
                      const RefinementConfig& refinement) {
  FlowConfig flow;
  return Evolver(model, mesh, flow, refinement).volume();
}

void write_volume_csv(std::ostream& out, const VolumeSeries& series) {
  out << "t,volume,vertices\n" << std::setprecision(17);
  for (std::size_t i = 0; i < series.times.size(); ++i) {
    out << series.times[i] << ',' << series.volumes[i] << ',' << series.vertices[i] << '\n';
  }
}

std::vector<double> geometric_times(double t0, double ratio, int count) {
  if (!(t0 > 0.0) || !(ratio > 1.0) || count < 1) {
    throw InvalidArgument("geometric grid needs t0 > 0, ratio > 1, count >= 1");
  }
  std::vector<double> out;
  for (int k = 0; k < count; ++k) out.push_back(t0 * std::pow(ratio, k));
  return out;
}

ScalingFit slow_vol_fit(const VolumeSeries& series, const FitOptions& options) {
  if (series.times.size() < std::max<std::size_t>(8, options.min_samples)) {
    throw SeriesTooShort("volume fit needs at least 8 samples, got " +
                         std::to_string(series.times.size()));
  }
  if (series.times.back() < 10.0 * series.times.front()) {
    throw SeriesTooShort("volume fit needs sample times spanning a decade");
  }
  return fit_scaling_exponent(series.times, series.volumes, options);
}

ScalingFit slow_vol_fit(const VolumeSeries& series, double window_fraction) {
  FitOptions options;
  options.window_fraction = window_fraction;
  return slow_vol_fit(series, options);
}

bool ReductionGap::consistent(double tolerance) const {
  return disc.exponent <= sphere.exponent + 1.0 + tolerance;
}

ReductionGap reduction_gap(const HamiltonianModel& model, const Coords& q,
                           const std::vector<double>& times, const FlowConfig& flow,
                           const ReductionSettings& settings) {
  ReductionGap out;
  FiberSphereMesh sphere = initial_fiber_sphere(model, q, settings.sphere_resolution);
  out.sphere_series = evolve_and_measure(model, sphere, times, flow, settings.sphere);
  out.sphere = slow_vol_fit(out.sphere_series, settings.fit);
  FiberSphereMesh disc = initial_fiber_disc(model, q, settings.disc_resolution,
                                            settings.inner_radius, settings.disc_radial_layers);
  out.disc_series = evolve_and_measure(model, disc, times, flow, settings.disc);
  out.disc = slow_vol_fit(out.disc_series, settings.fit);
  return out;
}

IntegralGrowth integral_growth_check(std::span<const double> r, std::span<const double> f,
                                     const FitOptions& options) {
  if (r.size() != f.size()) throw InvalidArgument("r and f differ in length");
  if (r.empty()) throw SeriesTooShort("no samples");
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (!(r[i] > 0.0) || !(f[i] > 0.0)) throw InvalidArgument("samples must be positive");
    if (i > 0 && !(r[i] > r[i - 1])) throw InvalidArgument("r must be strictly increasing");
  }
  std::vector<double> integral(r.size());
  integral[0] = r[0] * f[0];
  for (std::size_t i = 1; i < r.size(); ++i) {
    integral[i] = integral[i - 1] + 0.5 * (f[i] + f[i - 1]) * (r[i] - r[i - 1]);
  }
  IntegralGrowth out;
  out.integral_exponent = fit_scaling_exponent(r, integral, options).exponent;
  out.function_exponent = fit_scaling_exponent(r, f, options).exponent;
  return out;
}

}  // namespace slowvol
