#include <benchmark/benchmark.h>

#include <limits>

#include "slowvol/gamma_catalog.hpp"
#include "slowvol/group_growth.hpp"
#include "slowvol/integrators.hpp"
#include "slowvol/volume_growth.hpp"

using namespace slowvol;

static void BM_HeisenbergBall(benchmark::State& state) {
  const auto gens = catalog::heisenberg();
  const auto m = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(ball_counts(gens, m, 100000000).counts.back());
}
BENCHMARK(BM_HeisenbergBall)->Arg(10)->Arg(20)->Arg(30)->Unit(benchmark::kMillisecond);

static void BM_MalcevRanks(benchmark::State& state) {
  const auto gens = catalog::unitriangular(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(malcev_lcs_ranks(gens));
}
BENCHMARK(BM_MalcevRanks)->Arg(4)->Arg(6);

static void BM_ImplicitMidpointStep(benchmark::State& state) {
  const auto m = HamiltonianModel::nil3();
  const PhaseVector x = make_point({0.2, 0.3, 0.1}, {0.5, -0.4, 0.7}).stacked();
  FlowConfig c;
  for (auto _ : state) benchmark::DoNotOptimize(implicit_midpoint_step(m, x, 1e-3, c));
}
BENCHMARK(BM_ImplicitMidpointStep);

static void BM_Rk4Step(benchmark::State& state) {
  const auto m = HamiltonianModel::sol3();
  const PhaseVector x = make_point({0.2, 0.3, 0.1}, {0.5, -0.4, 0.7}).stacked();
  for (auto _ : state) benchmark::DoNotOptimize(rk4_step(m, x, 1e-2));
}
BENCHMARK(BM_Rk4Step);

static void BM_NilClosedForm(benchmark::State& state) {
  const auto m = HamiltonianModel::nil3();
  const auto x = make_point({0.2, 0.3, 0.1}, {0.5, -0.4, 0.7});
  for (auto _ : state) benchmark::DoNotOptimize(m.closed_form_flow(x, 100.0));
}
BENCHMARK(BM_NilClosedForm);

static void BM_FlatCircleSeries(benchmark::State& state) {
  const auto m = HamiltonianModel::flat_torus(2);
  FlowConfig c;
  c.integrator = Integrator::exact;
  RefinementConfig r;
  r.certify = false;
  for (auto _ : state) {
    auto mesh = initial_fiber_sphere(m, Coords::Constant(2, 0.25), 64);
    benchmark::DoNotOptimize(evolve_and_measure(m, mesh, geometric_times(1, 2, 8), c, r));
  }
}
BENCHMARK(BM_FlatCircleSeries)->Unit(benchmark::kMillisecond);

static void BM_NilSphereJacobian(benchmark::State& state) {
  const auto m = HamiltonianModel::nil3();
  FlowConfig c;
  c.integrator = Integrator::exact;
  RefinementConfig r;
  r.measure = VolumeMeasure::jacobian;
  r.tangent_tolerance = std::numeric_limits<double>::infinity();
  r.certify = false;
  for (auto _ : state) {
    auto mesh = initial_fiber_sphere(m, Coords::Zero(3), static_cast<int>(state.range(0)));
    benchmark::DoNotOptimize(evolve_and_measure(m, mesh, {16.0, 32.0}, c, r));
  }
}
BENCHMARK(BM_NilSphereJacobian)->Arg(3)->Arg(5)->Unit(benchmark::kMillisecond);

static void BM_GammaParse(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(gamma(std::string_view("cover:(T(2) x S(2)) x Nil(1) x CP(3)")));
}
BENCHMARK(BM_GammaParse);
BENCHMARK_MAIN();
