#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>
#include <vector>

#include "slowvol/errors.hpp"
#include "slowvol/flow_models.hpp"
#include "slowvol/integrators.hpp"

using namespace slowvol;

namespace {

std::vector<HamiltonianModel> models() {
  return {HamiltonianModel::flat_torus(2),
          HamiltonianModel::flat_torus(3),
          HamiltonianModel::nil3(),
          HamiltonianModel::sol3(),
          HamiltonianModel::randers_torus2(Eigen::Vector2d(0.3, 0.1)),
          HamiltonianModel::starshaped_torus2({{0, 0, 0, 1.0, 0.0}, {1, 0, 2, 0.2, 0.0},
                                               {0, 1, 1, 0.0, 0.1}})};
}

PhasePoint random_point(const HamiltonianModel& m, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const int n = m.dimension();
  PhasePoint x{Coords(n), Coords(n)};
  for (int i = 0; i < n; ++i) {
    x.q(i) = u(rng);
    x.p(i) = u(rng);
  }
  if (m.tag() == ModelTag::round_sphere2) {
    x.q.normalize();
    x.p -= x.q.dot(x.p) * x.q;
  }
  return x;
}

FlowConfig config(Integrator integrator, double step) {
  FlowConfig c;
  c.integrator = integrator;
  c.step = step;
  return c;
}

}  // namespace

TEST(FlowModels, FlatHamiltonianValue) {
  Eigen::Matrix2d g;
  g << 2, 1, 1, 3;
  const auto m = HamiltonianModel::flat_torus(g);
  // p = (1, 2): 2 + 2*2 + 3*4 = 18.
  EXPECT_DOUBLE_EQ(m.hamiltonian(make_point({0.3, 0.4}, {1, 2})), 18.0);
  EXPECT_DOUBLE_EQ(HamiltonianModel::flat_torus(2).hamiltonian(make_point({0, 0}, {3, 4})), 25.0);
}

TEST(FlowModels, NilIsInverseOfLeftInvariantMetric) {
  const auto m = HamiltonianModel::nil3();
  for (double x : {-0.7, 0.0, 0.4, 0.9}) {
    Eigen::Matrix3d g;
    g << 1, 0, 0, 0, 1 + x * x, -x, 0, -x, 1;
    const Eigen::Matrix3d cometric = g.inverse();
    const Eigen::Vector3d p(0.3, -1.1, 0.8);
    EXPECT_NEAR(m.hamiltonian(make_point({x, 0.2, 0.1}, {p(0), p(1), p(2)})),
                p.dot(cometric * p), 1e-12);
  }
}

TEST(FlowModels, HomogeneityAndEuler) {
  std::mt19937_64 rng(7);
  for (const auto& m : models()) {
    for (int k = 0; k < 100; ++k) {
      const auto x = random_point(m, rng);
      const double r = 0.1 + 3.0 * std::uniform_real_distribution<double>(0, 1)(rng);
      const double h = m.hamiltonian(x);
      EXPECT_NEAR(m.hamiltonian(dilation(x, r)), r * r * h, 1e-10 * (1 + r * r * h)) << m.name();
      const auto e = euler_residual(m, x);
      EXPECT_NEAR(e.residual, 0.0, 1e-10 * (1 + h)) << m.name();
      EXPECT_LT(e.gradient_mismatch, 1e-5 * (1 + h)) << m.name();
    }
  }
}

TEST(FlowModels, ZeroCovector) {
  EXPECT_THROW(euler_residual(HamiltonianModel::flat_torus(2), make_point({0, 0}, {0, 0})),
               ZeroCovector);
  EXPECT_THROW(HamiltonianModel::randers_torus2(Eigen::Vector2d(0.2, 0))
                   .gradient(make_point({0, 0}, {0, 0})),
               ZeroCovector);
}

TEST(FlowModels, InvalidModels) {
  EXPECT_THROW(HamiltonianModel::starshaped_torus2({{0, 0, 0, 0.1, 0}, {1, 0, 0, 0.5, 0}}),
               NonPositiveH);
  EXPECT_THROW(HamiltonianModel::randers_torus2(Eigen::Vector2d(1.0, 0.0)), InvalidArgument);
  Eigen::Matrix2d bad;
  bad << 1, 2, 2, 1;
  EXPECT_THROW(HamiltonianModel::flat_torus(bad), InvalidArgument);
}

TEST(Integrators, FlatExactExample) {
  const auto m = HamiltonianModel::flat_torus(2);
  const auto x = make_point({0.1, 0.2}, {1.0, 0.5});
  const auto y = flow_lifted(m, x, 0.3, config(Integrator::exact, 1e-3));
  EXPECT_NEAR(y.q(0), 0.7, 1e-15);
  EXPECT_NEAR(y.q(1), 0.5, 1e-15);
  const auto r = flow(m, x, 0.3, config(Integrator::exact, 1e-3));
  EXPECT_NEAR(r.q(0), 0.7, 1e-15);
  const auto far = flow(m, x, 2.0, config(Integrator::exact, 1e-3));
  EXPECT_NEAR(far.q(0), 0.1, 1e-12);  // 0.1 + 4 reduced mod 1
}

TEST(Integrators, UnitSpeedIsTwiceTime) {
  const auto m = HamiltonianModel::flat_torus(3);
  const auto x = make_point({0, 0, 0}, {0.6, 0.8, 0});
  for (double t : {0.5, 1.0, 7.0}) {
    const auto y = flow_lifted(m, x, t, config(Integrator::implicit_midpoint, 1e-2));
    EXPECT_NEAR((y.q - x.q).norm(), 2 * t, 1e-10);
  }
}

TEST(Integrators, GroupPropertyAndReversibility) {
  std::mt19937_64 rng(11);
  for (const auto& m : models()) {
    const auto x = random_point(m, rng);
    const auto c = config(Integrator::implicit_midpoint, 1e-3);
    const auto ab = flow_lifted(m, flow_lifted(m, x, 0.3, c), 0.2, c);
    const auto direct = flow_lifted(m, x, 0.5, c);
    EXPECT_LT((ab.stacked() - direct.stacked()).norm(), 1e-6) << m.name();
    const auto back = flow_lifted(m, direct, -0.5, c);
    EXPECT_LT((back.stacked() - x.stacked()).norm(), 1e-8) << m.name();
  }
}

TEST(Integrators, SpherePeriodIsPi) {
  const auto m = HamiltonianModel::round_sphere2();
  const auto x = make_point({0, 0, 1}, {1, 0, 0});
  const auto exact = flow(m, x, M_PI, config(Integrator::exact, 1e-3));
  EXPECT_LT((exact.stacked() - x.stacked()).norm(), 1e-12);
  const auto coarse = flow(m, x, M_PI, config(Integrator::implicit_midpoint, 2e-3));
  const auto fine = flow(m, x, M_PI, config(Integrator::implicit_midpoint, 1e-3));
  const double e1 = (coarse.stacked() - x.stacked()).norm();
  const double e2 = (fine.stacked() - x.stacked()).norm();
  EXPECT_LT(e2, 1e-4);
  EXPECT_NEAR(e1 / e2, 4.0, 0.3);
  const auto half = flow(m, x, M_PI / 2, config(Integrator::exact, 1e-3));
  EXPECT_NEAR(half.q(2), -1.0, 1e-12);
}

TEST(Integrators, SphereConstraint) {
  const auto m = HamiltonianModel::round_sphere2();
  EXPECT_THROW(flow(m, make_point({0, 0, 2}, {1, 0, 0}), 1.0, FlowConfig{}), ConstraintViolation);
  EXPECT_THROW(flow(m, make_point({0, 0, 1}, {0, 0, 1}), 1.0, FlowConfig{}), ConstraintViolation);
}

TEST(Integrators, NilClosedFormMatchesRk4) {
  const auto m = HamiltonianModel::nil3();
  std::mt19937_64 rng(3);
  for (int k = 0; k < 10; ++k) {
    const auto x = random_point(m, rng);
    const auto e = flow_lifted(m, x, 2.0, config(Integrator::exact, 1e-3));
    const auto n = flow_lifted(m, x, 2.0, config(Integrator::rk4, 1e-3));
    EXPECT_LT((e.stacked() - n.stacked()).norm(), 1e-9);
  }
  // Vertical covector: p_z = 0 branch of the closed form.
  const auto x = make_point({0.2, 0.1, 0.3}, {1.0, 0.5, 0.0});
  const auto e = flow_lifted(m, x, 1.0, config(Integrator::exact, 1e-3));
  const auto n = flow_lifted(m, x, 1.0, config(Integrator::rk4, 1e-3));
  EXPECT_LT((e.stacked() - n.stacked()).norm(), 1e-10);
}

TEST(Integrators, NilReductionIsDeckInvariant) {
  const auto m = HamiltonianModel::nil3();
  const auto x = make_point({0.3, 0.6, 0.2}, {0.7, -0.2, 0.9});
  const auto c = config(Integrator::exact, 1e-3);
  const auto y = flow_lifted(m, x, 3.0, c);
  const auto r = m.reduce(y);
  EXPECT_NEAR(m.hamiltonian(r), m.hamiltonian(x), 1e-10);
  for (int i = 0; i < 3; ++i) {
    EXPECT_GE(r.q(i), 0.0);
    EXPECT_LT(r.q(i), 1.0);
  }
}

TEST(Integrators, EnergyDrift) {
  std::mt19937_64 rng(5);
  for (const auto& m : models()) {
    const auto x = random_point(m, rng);
    const auto y = flow_lifted(m, x, 5.0, config(Integrator::implicit_midpoint, 1e-3));
    EXPECT_LT(std::abs(m.hamiltonian(y) - m.hamiltonian(x)), 5e-6) << m.name();
  }
  FlowConfig strict = config(Integrator::rk4, 0.5);
  strict.energy_drift_cap = 1e-16;
  strict.max_halvings = 1;
  EXPECT_THROW(flow_lifted(HamiltonianModel::sol3(), make_point({0, 0, 0}, {1, 1, 1}), 3.0, strict),
               EnergyDriftExceeded);
}

TEST(Integrators, ExactNeedsClosedForm) {
  EXPECT_THROW(flow(HamiltonianModel::sol3(), make_point({0, 0, 0}, {1, 0, 0}), 1.0,
                    config(Integrator::exact, 1e-3)),
               ConfigError);
  EXPECT_THROW(parse_integrator("euler"), ConfigError);
  EXPECT_EQ(parse_integrator("rk4"), Integrator::rk4);
}

TEST(Integrators, DilationConjugation) {
  const auto c = config(Integrator::implicit_midpoint, 1e-4);
  for (const auto& m : {HamiltonianModel::nil3(), HamiltonianModel::randers_torus2({0.3, 0.1}),
                        HamiltonianModel::flat_torus(2)}) {
    const int n = m.dimension();
    PhasePoint x{Coords::Constant(n, 0.25), Coords::Constant(n, 0.6)};
    EXPECT_LT(conjugation_residual(m, x, 1.0, 0.5, c), 1e-6) << m.name();
  }
}

TEST(Integrators, ConjugationErrorIsSecondOrder) {
  const auto m = HamiltonianModel::nil3();
  const auto x = make_point({0.25, 0.25, 0.25}, {0.6, 0.6, 0.6});
  const double coarse = conjugation_residual(m, x, 1.0, 0.5, config(Integrator::implicit_midpoint, 2e-2));
  const double fine = conjugation_residual(m, x, 1.0, 0.5, config(Integrator::implicit_midpoint, 1e-2));
  EXPECT_NEAR(coarse / fine, 4.0, 0.5);
}

TEST(Integrators, TrajectoryCsv) {
  const auto m = HamiltonianModel::flat_torus(2);
  const auto s = sample_trajectory(m, make_point({0, 0}, {1, 0}), {0.0, 0.25},
                                   config(Integrator::exact, 1e-3));
  ASSERT_EQ(s.size(), 2u);
  std::ostringstream out;
  write_trajectory_csv(out, s);
  EXPECT_EQ(out.str().substr(0, out.str().find('\n')), "t,q1,q2,p1,p2");
  EXPECT_THROW(sample_trajectory(m, make_point({0, 0}, {1, 0}), {1.0, 0.5}, FlowConfig{}),
               InvalidArgument);
}
