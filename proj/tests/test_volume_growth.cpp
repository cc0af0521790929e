#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "slowvol/errors.hpp"
#include "slowvol/volume_growth.hpp"

using namespace slowvol;

namespace {

FlowConfig exact() {
  FlowConfig c;
  c.integrator = Integrator::exact;
  return c;
}

double circle_length(double t) { return 2 * M_PI * std::sqrt(1 + 4 * t * t); }
double annulus_area(double t, double eps) { return (1 - eps * eps) * M_PI * (1 + 4 * t * t); }

VolumeSeries flat_circle(int resolution, const RefinementConfig& r) {
  const auto m = HamiltonianModel::flat_torus(2);
  auto mesh = initial_fiber_sphere(m, Coords::Constant(2, 0.25), resolution);
  return evolve_and_measure(m, mesh, geometric_times(1, 2, 8), exact(), r);
}

}  // namespace

TEST(VolumeGrowth, GeometricTimes) {
  EXPECT_EQ(geometric_times(1, 2, 4), (std::vector<double>{1, 2, 4, 8}));
  EXPECT_THROW(geometric_times(1, 0.5, 4), InvalidArgument);
}

TEST(VolumeGrowth, FlatCircleMatchesClosedForm) {
  RefinementConfig r;
  const auto s = flat_circle(128, r);
  ASSERT_EQ(s.volumes.size(), 8u);
  for (std::size_t i = 0; i < s.times.size(); ++i)
    EXPECT_NEAR(s.volumes[i] / circle_length(s.times[i]), 1.0, 1e-3) << "t=" << s.times[i];
  EXPECT_GE(s.resolution_certificate, 0.0);
  EXPECT_LT(s.resolution_certificate, 0.01);
}

TEST(VolumeGrowth, FlatDiscMatchesClosedForm) {
  const auto m = HamiltonianModel::flat_torus(2);
  auto mesh = initial_fiber_disc(m, Coords::Constant(2, 0.25), 128);
  RefinementConfig r;
  r.measure = VolumeMeasure::jacobian;
  r.tangent_tolerance = std::numeric_limits<double>::infinity();
  const auto s = evolve_and_measure(m, mesh, geometric_times(1, 2, 8), exact(), r);
  for (std::size_t i = 0; i < s.times.size(); ++i)
    EXPECT_NEAR(s.volumes[i] / annulus_area(s.times[i], 0.05), 1.0, 1e-3) << "t=" << s.times[i];
}

TEST(VolumeGrowth, JacobianAgreesWithChordOnCircle) {
  RefinementConfig r;
  r.measure = VolumeMeasure::jacobian;
  const auto s = flat_circle(256, r);
  for (std::size_t i = 0; i < s.times.size(); ++i)
    EXPECT_NEAR(s.volumes[i] / circle_length(s.times[i]), 1.0, 1e-3);
}

TEST(VolumeGrowth, ImagesAreFlowsOfInitialData) {
  const auto m = HamiltonianModel::randers_torus2(Eigen::Vector2d(0.3, 0.1));
  auto mesh = initial_fiber_sphere(m, Coords::Constant(2, 0.1), 16);
  RefinementConfig r;
  evolve_and_measure(m, mesh, {1.0, 3.0}, exact(), r);
  EXPECT_GT(mesh.vertex_count(), 16u);
  EXPECT_FALSE(mesh.refinement_log.empty());
  for (std::size_t v = 0; v < mesh.vertex_count(); ++v) {
    const auto start = fiber_point(m, mesh.base_point, mesh.fiber_frame, mesh.params[v]);
    EXPECT_LT((start.stacked() - mesh.initial[v].stacked()).norm(), 1e-14);
    const auto expected = flow_lifted(m, start, 3.0, exact());
    EXPECT_LT((expected.stacked() - mesh.images[v].stacked()).norm(), 1e-12);
  }
  for (const auto& ins : mesh.refinement_log) {
    EXPECT_LT(ins.a, ins.vertex);
    EXPECT_LT(ins.b, ins.vertex);
    const auto mid = midpoint(mesh.params[ins.a], mesh.params[ins.b]);
    EXPECT_LT((mid.direction - mesh.params[ins.vertex].direction).norm(), 1e-15);
  }
}

TEST(VolumeGrowth, HalvingThresholdChangesLittle) {
  RefinementConfig coarse;
  RefinementConfig fine;
  fine.refine_threshold = coarse.refine_threshold / 2;
  const auto a = flat_circle(32, coarse);
  const auto b = flat_circle(32, fine);
  for (std::size_t i = 0; i < a.volumes.size(); ++i)
    EXPECT_LT(std::abs(a.volumes[i] - b.volumes[i]) / b.volumes[i], 0.01);
}

TEST(VolumeGrowth, ExponentsAndMetricRobustness) {
  RefinementConfig plain;
  const double base = slow_vol_fit(flat_circle(64, plain)).exponent;
  EXPECT_NEAR(base, 1.0, 0.05);
  for (const std::vector<double>& w :
       {std::vector<double>{0.5, 2.0, 1.0, 1.5}, std::vector<double>{2.0, 2.0, 0.5, 0.5}}) {
    RefinementConfig r;
    r.metric_weights = w;
    EXPECT_NEAR(slow_vol_fit(flat_circle(64, r)).exponent, base, 0.05);
  }
  RefinementConfig bad;
  bad.metric_weights = {1.0, 1.0};
  EXPECT_THROW(flat_circle(64, bad), InvalidArgument);
}

TEST(VolumeGrowth, TimeRescalingKeepsExponent) {
  RefinementConfig r;
  auto s = flat_circle(64, r);
  auto doubled = s;
  for (double& t : doubled.times) t *= 2;
  EXPECT_NEAR(slow_vol_fit(s).exponent, slow_vol_fit(doubled).exponent, 1e-12);
}

TEST(VolumeGrowth, RoundSphereIsPeriodic) {
  const auto m = HamiltonianModel::round_sphere2();
  Coords q(3);
  q << 0, 0, 1;
  auto mesh = initial_fiber_sphere(m, q, 64);
  RefinementConfig r;
  const double v0 = measure_volume(m, mesh, r);
  std::vector<double> times;
  for (int k = 1; k <= 8; ++k) times.push_back(k * M_PI);
  const auto s = evolve_and_measure(m, mesh, times, exact(), r);
  for (double v : s.volumes) EXPECT_NEAR(v / v0, 1.0, 0.01);
}

TEST(VolumeGrowth, BudgetCarriesPartialSeries) {
  const auto m = HamiltonianModel::sol3();
  auto mesh = initial_fiber_sphere(m, Coords::Zero(3), 2);
  FlowConfig c;
  c.integrator = Integrator::rk4;
  c.step = 0.01;
  RefinementConfig r;
  r.volume_budget = 2000;
  r.certify = false;
  try {
    evolve_and_measure(m, mesh, {0.5, 1, 2, 4, 8}, c, r);
    FAIL() << "expected budget exhaustion";
  } catch (const VolumeBudgetExceeded& e) {
    EXPECT_EQ(e.kind(), ErrorKind::budget_exceeded);
    EXPECT_LT(e.partial().times.size(), 5u);
    EXPECT_EQ(e.partial().times.size(), e.partial().volumes.size());
    EXPECT_GT(e.reached(), 0.0);
  }
}

TEST(VolumeGrowth, FitNeedsLongSeries) {
  VolumeSeries s;
  s.times = {1, 2, 3, 4, 5, 6, 7, 8, 9};
  s.volumes = {1, 2, 3, 4, 5, 6, 7, 8, 9};
  EXPECT_THROW(slow_vol_fit(s), SeriesTooShort);  // less than a decade
  s.times = {1, 2, 4};
  s.volumes = {1, 2, 4};
  EXPECT_THROW(slow_vol_fit(s), SeriesTooShort);
}

TEST(VolumeGrowth, Deterministic) {
  RefinementConfig r;
  std::ostringstream a, b;
  write_volume_csv(a, flat_circle(40, r));
  write_volume_csv(b, flat_circle(40, r));
  EXPECT_EQ(a.str(), b.str());
  EXPECT_EQ(a.str().substr(0, a.str().find('\n')), "t,volume,vertices");
}

TEST(VolumeGrowth, FlatReductionGapIsOne) {
  const auto m = HamiltonianModel::flat_torus(2);
  ReductionSettings s;
  s.disc.measure = VolumeMeasure::jacobian;
  s.disc.tangent_tolerance = std::numeric_limits<double>::infinity();
  const auto gap = reduction_gap(m, Coords::Constant(2, 0.25), geometric_times(1, 2, 8), exact(), s);
  EXPECT_NEAR(gap.disc.exponent, 2.0, 0.05);
  EXPECT_NEAR(gap.sphere.exponent, 1.0, 0.05);
  EXPECT_TRUE(gap.consistent(0.1));
}

TEST(IntegralLemma, PowerLaws) {
  const auto r = geometric_times(1, 2, 9);
  for (int k : {0, 1, 3}) {
    std::vector<double> f;
    for (double x : r) f.push_back(std::pow(x, k));
    const auto g = integral_growth_check(r, f);
    EXPECT_NEAR(g.function_exponent, k, 0.05);
    EXPECT_NEAR(g.integral_exponent, k + 1, 0.05);
  }
}

TEST(IntegralLemma, OscillatingFactor) {
  std::vector<double> r, f;
  for (int i = 0; i <= 400; ++i) {
    const double x = std::pow(2.0, i / 50.0);
    r.push_back(x);
    f.push_back(x * x * (2 + std::sin(std::log(x))));
  }
  FitOptions loose;
  loose.residual_cap = 1.0;
  const auto g = integral_growth_check(r, f, loose);
  EXPECT_LE(g.integral_exponent, 3.05);
}

TEST(VolumeGrowth, RoundSphereDiscAgainstQuadrature) {
  // Reference areas from a 4000 x 64 tensor quadrature of the closed-form
  // Gram determinant over (r, theta).
  const auto m = HamiltonianModel::round_sphere2();
  Coords q(3);
  q << 0, 0, 1;
  auto disc = initial_fiber_disc(m, q, 64, 0.05, 400);
  RefinementConfig r;
  r.measure = VolumeMeasure::jacobian;
  r.tangent_tolerance = std::numeric_limits<double>::infinity();
  const auto s = evolve_and_measure(m, disc, {1.0, 16.0, 128.0}, exact(), r);
  EXPECT_NEAR(s.volumes[0] / 11.945983818, 1.0, 2e-3);
  EXPECT_NEAR(s.volumes[1] / 177.652088608, 1.0, 2e-3);
  EXPECT_NEAR(s.volumes[2] / 1421.826667739, 1.0, 2e-3);
}
