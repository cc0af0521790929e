#include "slowvol/experiment.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <set>
#include <sstream>

#include "slowvol/errors.hpp"
#include "slowvol/fiber_mesh.hpp"
#include "slowvol/gamma_catalog.hpp"
#include "slowvol/group_growth.hpp"
#include "slowvol/integrators.hpp"
#include "slowvol/volume_growth.hpp"

namespace slowvol {

namespace fs = std::filesystem;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Budget exhaustion is not a measurement: it only passes against an infinite
// bound, through the exponential branch of the verdict rule.
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

const std::set<std::string> kKinds = {"group_growth", "flow_growth", "gamma_eval",
                                      "reduction_check", "integral_lemma"};

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string tok; in >> tok;) out.push_back(tok);
  return out;
}

std::vector<std::string> split_on(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

double to_double(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::logic_error&) {
    throw ConfigError("key '" + key + "': '" + text + "' is not a number");
  }
}

long long to_integer(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::logic_error&) {
    throw ConfigError("key '" + key + "': '" + text + "' is not an integer");
  }
}

std::vector<double> to_doubles(const std::string& key, const std::string& text) {
  std::vector<double> out;
  for (const auto& tok : split_ws(text)) out.push_back(to_double(key, tok));
  return out;
}

// Typed access to a parameter map that remembers which keys were read.
class Params {
 public:
  explicit Params(const std::map<std::string, std::string>& raw) : raw_(raw) {}

  bool has(const std::string& key) const { return raw_.count(key) > 0; }

  std::string text(const std::string& key, const std::string& fallback) {
    used_.insert(key);
    auto it = raw_.find(key);
    return it == raw_.end() ? fallback : it->second;
  }

  std::string required(const std::string& key) {
    used_.insert(key);
    auto it = raw_.find(key);
    if (it == raw_.end() || it->second.empty()) throw ConfigError("missing key '" + key + "'");
    return it->second;
  }

  double positive(const std::string& key, double fallback) {
    const double v = has(key) ? to_double(key, required(key)) : (used_.insert(key), fallback);
    if (!(v > 0.0)) throw ConfigError("key '" + key + "' must be positive");
    return v;
  }

  double non_negative(const std::string& key, double fallback) {
    const double v = has(key) ? to_double(key, required(key)) : (used_.insert(key), fallback);
    if (!(v >= 0.0)) throw ConfigError("key '" + key + "' must be non-negative");
    return v;
  }

  long long positive_int(const std::string& key, long long fallback) {
    const long long v = has(key) ? to_integer(key, required(key)) : (used_.insert(key), fallback);
    if (v <= 0) throw ConfigError("key '" + key + "' must be a positive integer");
    return v;
  }

  bool flag(const std::string& key, bool fallback) {
    if (!has(key)) {
      used_.insert(key);
      return fallback;
    }
    const std::string v = required(key);
    if (v == "true" || v == "yes" || v == "1" || v == "on") return true;
    if (v == "false" || v == "no" || v == "0" || v == "off") return false;
    throw ConfigError("key '" + key + "' must be a boolean");
  }

  void mark(const std::string& key) { used_.insert(key); }

  void reject_unknown() const {
    for (const auto& [k, v] : raw_) {
      if (!used_.count(k)) throw ConfigError("unknown key '" + k + "'");
    }
  }

 private:
  const std::map<std::string, std::string>& raw_;
  std::set<std::string> used_;
};

std::vector<double> parse_times(Params& p) {
  const std::string text = p.text("times", "geometric 1 2 11");
  const auto tokens = split_ws(text);
  std::vector<double> times;
  if (!tokens.empty() && tokens[0] == "geometric") {
    if (tokens.size() != 4) throw ConfigError("times: expected 'geometric t0 ratio count'");
    const double t0 = to_double("times", tokens[1]);
    const double ratio = to_double("times", tokens[2]);
    const long long count = to_integer("times", tokens[3]);
    if (!(t0 > 0.0) || !(ratio > 1.0) || count < 1) {
      throw ConfigError("times: geometric grid needs t0 > 0, ratio > 1, count >= 1");
    }
    times = geometric_times(t0, ratio, static_cast<int>(count));
  } else {
    times = to_doubles("times", text);
  }
  if (times.empty()) throw ConfigError("times: empty grid");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] > 0.0) || (i && !(times[i] > times[i - 1]))) {
      throw ConfigError("times must be positive and strictly increasing");
    }
  }
  return times;
}

HamiltonianModel build_model(Params& p) {
  const std::string name = p.required("model");
  if (name == "flat_torus") {
    const long long d = p.positive_int("dimension", 2);
    if (d > kMaxConfigDim) throw ConfigError("flat_torus dimension must be 1..3");
    if (!p.has("metric")) return HamiltonianModel::flat_torus(static_cast<int>(d));
    const auto rows = split_on(p.required("metric"), ';');
    if (static_cast<long long>(rows.size()) != d) throw ConfigError("metric needs d rows separated by ';'");
    Eigen::MatrixXd g(d, d);
    for (long long i = 0; i < d; ++i) {
      const auto row = to_doubles("metric", rows[i]);
      if (static_cast<long long>(row.size()) != d) throw ConfigError("metric rows need d entries");
      for (long long j = 0; j < d; ++j) g(i, j) = row[j];
    }
    return HamiltonianModel::flat_torus(g);
  }
  if (name == "round_sphere") return HamiltonianModel::round_sphere2();
  if (name == "nil") return HamiltonianModel::nil3();
  if (name == "sol") return HamiltonianModel::sol3();
  if (name == "randers") {
    const auto b = to_doubles("drift", p.text("drift", "0.3 0"));
    if (b.size() != 2) throw ConfigError("drift needs two entries");
    return HamiltonianModel::randers_torus2(Eigen::Vector2d(b[0], b[1]));
  }
  if (name == "starshaped") {
    std::vector<FourierTerm> terms;
    const std::string text = p.text("fourier", "");
    for (const auto& chunk : split_on(text, ';')) {
      const auto tok = split_ws(chunk);
      if (tok.empty()) continue;
      if (tok.size() != 5) throw ConfigError("fourier terms are 'k1 k2 m cos sin' separated by ';'");
      FourierTerm t;
      t.k1 = static_cast<int>(to_integer("fourier", tok[0]));
      t.k2 = static_cast<int>(to_integer("fourier", tok[1]));
      t.m = static_cast<int>(to_integer("fourier", tok[2]));
      t.cos_coeff = to_double("fourier", tok[3]);
      t.sin_coeff = to_double("fourier", tok[4]);
      terms.push_back(t);
    }
    return HamiltonianModel::starshaped_torus2(std::move(terms));
  }
  throw ConfigError("unknown model '" + name +
                    "' (flat_torus, round_sphere, nil, sol, randers, starshaped)");
}

std::string default_descriptor(const HamiltonianModel& model) {
  switch (model.tag()) {
    case ModelTag::flat_torus: return "T(" + std::to_string(model.dimension()) + ")";
    case ModelTag::round_sphere2: return "S(2)";
    case ModelTag::nil3: return "Nil(1)";
    case ModelTag::sol3: return "Fast(3)";
    default: return "T(2)";
  }
}

Coords base_point(Params& p, const HamiltonianModel& model) {
  Coords q = Coords::Zero(model.dimension());
  if (model.tag() == ModelTag::round_sphere2) q << 0.0, 0.0, 1.0;
  if (p.has("base_point")) {
    const auto v = to_doubles("base_point", p.required("base_point"));
    if (static_cast<int>(v.size()) != model.dimension()) throw ConfigError("base_point has wrong length");
    for (int i = 0; i < model.dimension(); ++i) q(i) = v[i];
  } else {
    p.mark("base_point");
  }
  return q;
}

FlowConfig flow_config(Params& p, const HamiltonianModel& model) {
  FlowConfig c;
  const std::string fallback = model.has_closed_form_flow() ? "exact" : "implicit_midpoint";
  try {
    c.integrator = parse_integrator(p.text("integrator", fallback));
  } catch (const Error& e) {
    throw ConfigError(e.message());
  }
  c.step = p.positive("step", c.step);
  c.newton_tolerance = p.positive("newton_tolerance", c.newton_tolerance);
  c.energy_drift_cap = p.positive("energy_drift_cap", c.energy_drift_cap);
  return c;
}

RefinementConfig refinement_config(Params& p, const std::string& prefix = "") {
  RefinementConfig r;
  auto key = [&](const char* k) {
    const std::string specific = prefix + k;
    return !prefix.empty() && p.has(specific) ? specific : std::string(k);
  };
  r.refine_threshold = p.positive(key("refine_threshold"), r.refine_threshold);
  r.volume_budget = static_cast<std::size_t>(p.positive_int(key("volume_budget"), 200000));
  r.tangent_tolerance = p.positive(key("tangent_tolerance"), r.tangent_tolerance);
  r.wrap_guard = p.positive(key("wrap_guard"), r.wrap_guard);
  r.fd_step = p.positive(key("fd_step"), r.fd_step);
  try {
    r.measure = parse_volume_measure(p.text(key("measure"), "chord"));
  } catch (const Error& e) {
    throw ConfigError(e.message());
  }
  r.certify = p.flag("certify", true);
  if (p.has("metric_weights")) {
    r.metric_weights = to_doubles("metric_weights", p.required("metric_weights"));
  } else {
    p.mark("metric_weights");
  }
  return r;
}

FitOptions fit_options(Params& p, FitOptions base) {
  base.window_fraction = p.positive("window_fraction", base.window_fraction);
  if (base.window_fraction > 1.0) throw ConfigError("window_fraction must lie in (0, 1]");
  base.finite_size_correction = p.flag("finite_size_correction", base.finite_size_correction);
  base.residual_cap = p.positive("residual_cap", base.residual_cap);
  return base;
}

std::ofstream open_csv(const fs::path& out_dir, const std::string& name) {
  std::ofstream out(out_dir / name);
  if (!out) throw ConfigError("cannot write " + (out_dir / name).string());
  return out;
}

void write_fit_csv(const fs::path& out_dir, const std::string& name, const ScalingFit& fit) {
  auto out = open_csv(out_dir, name);
  out << "exponent,window_lo,window_hi,residual,linear_slope,linear_residual,classification\n"
      << std::setprecision(17) << fit.exponent << ',' << fit.window_lo << ',' << fit.window_hi
      << ',' << fit.residual << ',' << fit.linear_slope << ',' << fit.linear_residual << ','
      << to_string(fit.classification) << '\n';
}

double bound_value(ExtendedNat b) { return b.infinite ? kInf : static_cast<double>(b.value); }

void set_measurement(SummaryRow& row, const ScalingFit& fit) {
  row.classification = std::string(to_string(fit.classification));
  row.measured = fit.exponent;
}

void run_group_growth(Params& p, const ExperimentConfig& cfg, const fs::path& out, SummaryRow& row) {
  const std::string source = p.required("generators");
  GeneratorSet gens(1);
  if (source.rfind("catalog:", 0) == 0) {
    const auto spec = split_ws(source.substr(8));
    const std::string name = spec.empty() ? "" : spec[0];
    const long long arg = spec.size() > 1 ? to_integer("generators", spec[1]) : 0;
    if (name == "heisenberg") gens = catalog::heisenberg();
    else if (name == "free_abelian" && arg > 0) gens = catalog::free_abelian(arg);
    else if (name == "free_abelian2_redundant") gens = catalog::free_abelian2_redundant();
    else if (name == "unitriangular" && arg > 1) gens = catalog::unitriangular(arg);
    else if (name == "higher_heisenberg" && arg > 0) gens = catalog::higher_heisenberg(arg);
    else if (name == "sanov") gens = catalog::sanov_free_group();
    else throw ConfigError("unknown catalog group '" + source + "'");
  } else {
    const fs::path path = fs::path(source).is_absolute() ? fs::path(source) : cfg.base_dir / source;
    if (!fs::exists(path)) throw ConfigError("generator file " + path.string() + " does not exist");
    gens = load_generator_set(path.string());
  }
  const auto m_max = static_cast<std::size_t>(p.positive_int("m_max", 20));
  const auto budget = static_cast<std::size_t>(p.positive_int("element_budget", 20000000));
  FitOptions opts = fit_options(p, default_group_fit_options());
  row.tolerance = p.non_negative("tolerance", 0.1);

  ExtendedNat bound = ExtendedNat::infinity();
  if (p.has("bound")) {
    const std::string b = p.required("bound");
    bound = b == "inf" ? ExtendedNat::infinity()
                       : ExtendedNat::finite(static_cast<std::uint64_t>(to_integer("bound", b)));
  } else {
    p.mark("bound");
    if (!gens.unitriangular()) throw ConfigError("set 'bound' for a non-unitriangular generator set");
    bound = ExtendedNat::finite(bass_guivarch(malcev_lcs_ranks(gens)));
  }
  row.bound = bound_value(bound);
  p.reject_unknown();

  GrowthSeries series;
  try {
    series = ball_counts(gens, m_max, budget);
  } catch (const BudgetExceeded& e) {
    row.classification = "budget_exhausted";
    row.measured = kNaN;
    row.message = e.what();
    return;
  }
  auto csv = open_csv(out, cfg.id + "_growth.csv");
  write_growth_csv(csv, series);
  const ScalingFit fit = slow_growth_exponent(series, opts);
  write_fit_csv(out, cfg.id + "_fit.csv", fit);
  set_measurement(row, fit);
}

void run_flow_growth(Params& p, const ExperimentConfig& cfg, const fs::path& out, SummaryRow& row) {
  const HamiltonianModel model = build_model(p);
  const Coords q = base_point(p, model);
  const std::vector<double> times = parse_times(p);
  const FlowConfig flow = flow_config(p, model);
  const RefinementConfig refinement = refinement_config(p);
  const std::string mesh_kind = p.text("mesh", "sphere");
  const double inner = p.positive("inner_radius", 0.05);
  const int default_res = model.fiber_dimension() == 2 ? 64 : 3;
  const int resolution = static_cast<int>(p.positive_int("resolution", default_res));
  const FitOptions opts = fit_options(p, FitOptions{});
  const std::string descriptor = p.text("descriptor", default_descriptor(model));
  row.tolerance = p.non_negative("tolerance", 0.1);
  const bool dump_mesh = p.flag("dump_mesh", false);
  const bool trajectory = p.flag("trajectory", false);
  p.reject_unknown();
  row.bound = bound_value(theorem_bound(*parse_descriptor(descriptor)));

  FiberSphereMesh mesh;
  if (mesh_kind == "sphere") mesh = initial_fiber_sphere(model, q, resolution);
  else if (mesh_kind == "disc") mesh = initial_fiber_disc(model, q, resolution, inner);
  else throw ConfigError("mesh must be 'sphere' or 'disc'");

  if (trajectory) {
    auto csv = open_csv(out, cfg.id + "_trajectory.csv");
    write_trajectory_csv(csv, sample_trajectory(model, mesh.initial.front(), times, flow));
  }

  VolumeSeries series;
  bool exhausted = false;
  try {
    series = evolve_and_measure(model, mesh, times, flow, refinement);
  } catch (const VolumeBudgetExceeded& e) {
    series = e.partial();
    exhausted = true;
    row.message = e.what();
  }
  {
    auto csv = open_csv(out, cfg.id + "_volume.csv");
    write_volume_csv(csv, series);
  }
  if (dump_mesh) {
    auto v = open_csv(out, cfg.id + "_mesh_vertices.csv");
    write_mesh_vertices_csv(v, model, mesh);
    auto s = open_csv(out, cfg.id + "_mesh_simplices.csv");
    write_mesh_simplices_csv(s, mesh);
  }
  if (exhausted) {
    // Budget exhaustion is the exponential signal unless an earlier fit
    // already says so.
    row.classification = "budget_exhausted";
    row.measured = kNaN;
    try {
      const ScalingFit fit = slow_vol_fit(series, opts);
      if (fit.classification == GrowthClass::exponential) set_measurement(row, fit);
    } catch (const SeriesTooShort&) {
    }
    return;
  }
  const ScalingFit fit = slow_vol_fit(series, opts);
  write_fit_csv(out, cfg.id + "_fit.csv", fit);
  set_measurement(row, fit);
  if (series.resolution_certificate >= 0.0) {
    std::ostringstream msg;
    msg << "certificate " << std::setprecision(3) << series.resolution_certificate;
    row.message = msg.str();
  }
}

void run_gamma_eval(Params& p, const ExperimentConfig& cfg, const fs::path& out, SummaryRow& row) {
  const auto descriptor = parse_descriptor(p.required("descriptor"));
  const GammaResult g = gamma(*descriptor);
  row.tolerance = 0.0;
  row.measured = bound_value(g.gamma_total);
  row.classification = g.slow ? "slow" : "fast";
  if (p.has("expected")) {
    const std::string e = p.required("expected");
    row.bound = e == "inf" ? kInf : to_double("expected", e);
  } else {
    p.mark("expected");
    row.bound = row.measured;
  }
  p.reject_unknown();
  auto csv = open_csv(out, cfg.id + "_gamma.csv");
  csv << "descriptor,dimension,gamma_pi1,gamma_loop,gamma_total,theorem_bound,dimension_bound_ok\n"
      << '"' << descriptor->to_string() << "\"," << g.dimension << ',' << g.gamma_pi1 << ','
      << g.gamma_loop << ',' << g.gamma_total << ',' << g.theorem_bound << ','
      << (cross_check_dimension_bound(*descriptor) ? "true" : "false") << '\n';
}

void run_reduction(Params& p, const ExperimentConfig& cfg, const fs::path& out, SummaryRow& row) {
  const HamiltonianModel model = build_model(p);
  const Coords q = base_point(p, model);
  const std::vector<double> times = parse_times(p);
  const FlowConfig flow = flow_config(p, model);
  ReductionSettings s;
  s.sphere = refinement_config(p, "sphere_");
  s.disc = refinement_config(p, "disc_");
  const int default_res = model.fiber_dimension() == 2 ? 64 : 2;
  s.sphere_resolution = static_cast<int>(p.positive_int("sphere_resolution", default_res));
  s.disc_resolution = static_cast<int>(p.positive_int("disc_resolution", default_res));
  s.disc_radial_layers = static_cast<int>(p.has("radial_layers") ? p.positive_int("radial_layers", 1)
                                                                  : (p.mark("radial_layers"), 0));
  s.inner_radius = p.positive("inner_radius", 0.05);
  s.fit = fit_options(p, FitOptions{});
  row.tolerance = p.non_negative("tolerance", 0.1);
  p.reject_unknown();

  const ReductionGap gap = reduction_gap(model, q, times, flow, s);
  {
    auto csv = open_csv(out, cfg.id + "_sphere_volume.csv");
    write_volume_csv(csv, gap.sphere_series);
  }
  {
    auto csv = open_csv(out, cfg.id + "_disc_volume.csv");
    write_volume_csv(csv, gap.disc_series);
  }
  write_fit_csv(out, cfg.id + "_sphere_fit.csv", gap.sphere);
  write_fit_csv(out, cfg.id + "_disc_fit.csv", gap.disc);
  // Sphere exponent checked against the disc exponent minus one.
  set_measurement(row, gap.sphere);
  row.bound = gap.disc.exponent - 1.0;
  std::ostringstream msg;
  msg << std::setprecision(4) << "disc " << gap.disc.exponent << " sphere " << gap.sphere.exponent;
  row.message = msg.str();
}

void run_integral(Params& p, const ExperimentConfig& cfg, const fs::path& out, SummaryRow& row) {
  const std::string fn = p.text("function", "power 3");
  const auto tok = split_ws(fn);
  const auto r = parse_times(p);
  row.tolerance = p.non_negative("tolerance", 0.05);
  const FitOptions opts = fit_options(p, FitOptions{});
  p.reject_unknown();
  std::vector<double> f;
  for (double x : r) {
    if (tok.size() == 2 && tok[0] == "power") {
      f.push_back(std::pow(x, to_double("function", tok[1])));
    } else if (tok.size() == 2 && tok[0] == "oscillating") {
      f.push_back(std::pow(x, to_double("function", tok[1])) * (2.0 + std::sin(std::log(x))));
    } else {
      throw ConfigError("function must be 'power k' or 'oscillating k'");
    }
  }
  auto csv = open_csv(out, cfg.id + "_integral.csv");
  csv << "r,f\n" << std::setprecision(17);
  for (std::size_t i = 0; i < r.size(); ++i) csv << r[i] << ',' << f[i] << '\n';
  const IntegralGrowth g = integral_growth_check(r, f, opts);
  // The integral gains at most one degree: f exponent >= integral exponent - 1.
  row.measured = g.function_exponent;
  row.bound = g.integral_exponent - 1.0;
  row.classification = "polynomial";
  std::ostringstream msg;
  msg << std::setprecision(4) << "integral " << g.integral_exponent << " function "
      << g.function_exponent;
  row.message = msg.str();
}

}  // namespace

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "PASS";
    case Verdict::fail: return "FAIL";
    case Verdict::error: return "ERROR";
  }
  return "?";
}

Verdict decide(double measured, bool exponential, double bound, double tolerance) {
  if (exponential && std::isinf(bound)) return Verdict::pass;
  return measured >= bound - tolerance ? Verdict::pass : Verdict::fail;
}

RunConfig parse_run_config(std::istream& in, const fs::path& base_dir) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  RunConfig run;
  for (const auto& [section, body] : tree) {
    if (body.empty()) throw ConfigError("key '" + section + "' outside any section");
    if (section == "run") {
      for (const auto& [k, v] : body) {
        if (k != "out") throw ConfigError("[run]: unknown key '" + k + "'");
        run.out_dir = v.data();
      }
      continue;
    }
    ExperimentConfig e;
    e.id = section;
    e.base_dir = base_dir;
    for (const auto& [k, v] : body) e.params[k] = v.data();
    auto kind = e.params.find("kind");
    if (kind == e.params.end()) throw ConfigError("[" + section + "]: missing key 'kind'");
    if (!kKinds.count(kind->second)) {
      throw ConfigError("[" + section + "]: unknown kind '" + kind->second + "'");
    }
    e.kind = kind->second;
    e.params.erase(kind);
    run.experiments.push_back(std::move(e));
  }
  if (run.out_dir.is_relative()) run.out_dir = base_dir / run.out_dir;
  return run;
}

RunConfig load_run_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  return parse_run_config(in, path.parent_path().empty() ? fs::path(".") : path.parent_path());
}

HamiltonianModel model_from_params(const std::map<std::string, std::string>& params) {
  Params p(params);
  return build_model(p);
}

SummaryRow run_experiment(const ExperimentConfig& config, const fs::path& out_dir) {
  SummaryRow row;
  row.id = config.id;
  row.kind = config.kind;
  const auto start = std::chrono::steady_clock::now();
  try {
    fs::create_directories(out_dir);
    Params p(config.params);
    if (config.kind == "group_growth") run_group_growth(p, config, out_dir, row);
    else if (config.kind == "flow_growth") run_flow_growth(p, config, out_dir, row);
    else if (config.kind == "gamma_eval") run_gamma_eval(p, config, out_dir, row);
    else if (config.kind == "reduction_check") run_reduction(p, config, out_dir, row);
    else if (config.kind == "integral_lemma") run_integral(p, config, out_dir, row);
    else throw ConfigError("unknown kind '" + config.kind + "'");
    const bool exponential =
        row.classification == "exponential" || row.classification == "budget_exhausted" ||
        row.classification == "fast";
    row.verdict = decide(row.measured, exponential, row.bound, row.tolerance);
  } catch (const std::exception& e) {
    row.verdict = Verdict::error;
    row.message = e.what();
  }
  row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return row;
}

std::vector<SummaryRow> run(const RunConfig& config) {
  fs::create_directories(config.out_dir);
  std::vector<SummaryRow> rows;
  for (const auto& e : config.experiments) rows.push_back(run_experiment(e, config.out_dir));
  std::ofstream summary(config.out_dir / "summary.txt", std::ios::app);
  if (!summary) throw ConfigError("cannot write summary.txt in " + config.out_dir.string());
  write_summary(summary, rows);
  return rows;
}

void write_summary(std::ostream& out, const std::vector<SummaryRow>& rows) {
  auto num = [](double v) {
    if (std::isnan(v)) return std::string("-");
    if (std::isinf(v)) return std::string(v > 0 ? "inf" : "-inf");
    std::ostringstream s;
    s << std::fixed << std::setprecision(3) << v;
    return s.str();
  };
  out << std::left << std::setw(24) << "experiment" << std::setw(17) << "kind" << std::setw(10)
      << "measured" << std::setw(17) << "class" << std::setw(9) << "bound" << std::setw(7)
      << "tol" << std::setw(8) << "verdict" << std::setw(10) << "seconds"
      << "note\n";
  for (const auto& r : rows) {
    out << std::left << std::setw(24) << r.id << std::setw(17) << r.kind << std::setw(10)
        << num(r.measured) << std::setw(17) << r.classification << std::setw(9) << num(r.bound)
        << std::setw(7) << num(r.tolerance) << std::setw(8) << to_string(r.verdict)
        << std::setw(10) << num(r.seconds) << r.message << '\n';
  }
}

}  // namespace slowvol
