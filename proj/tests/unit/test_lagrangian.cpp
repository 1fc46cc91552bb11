#include <gtest/gtest.h>

#include <cmath>

#include "mep/errors.hpp"
#include "mep/lagrangian.hpp"
#include "mep/presets.hpp"
#include "mep/spectral.hpp"

using namespace mep;

TEST(Lagrangian, SeriesEvaluatorMatchesClosedForm) {
  const Grid g(1, 16);
  const RealField f = RealField::sample(g, [](double x) { return 0.5 + std::sin(3.0 * x) + 0.25 * std::cos(8.0 * x); });
  const SeriesEvaluator e(f);
  for (double x : {0.1, 1.3, 4.0}) {
    EXPECT_NEAR(e.value(x), 0.5 + std::sin(3.0 * x) + 0.25 * std::cos(8.0 * x), 1e-13);
    EXPECT_NEAR(e.value_and_derivative(x).second, 3.0 * std::cos(3.0 * x) - 2.0 * std::sin(8.0 * x), 1e-12);
  }
}

TEST(Lagrangian, ComposeWithShift) {
  const Grid g(1, 32);
  const RealField f = RealField::sample(g, [](double x) { return std::sin(2.0 * x); });
  const RealField p = RealField::constant(g, 0.3);
  const RealField expect = RealField::sample(g, [](double x) { return std::sin(2.0 * (x + 0.3)); });
  EXPECT_LT(max_abs_difference(compose(f, p), expect), 1e-13);
  EXPECT_LT(max_abs_difference(compose(f, RealField(g)), f), 1e-14);
}

TEST(Lagrangian, InvertFlowRoundTrip) {
  const Grid g(1, 64);
  const RealField p = RealField::sample(g, [](double x) { return 0.4 * std::sin(x) + 0.1 * std::cos(3.0 * x); });
  const RealField q = invert_flow(p);
  // gamma(gamma^{-1}(x_j)) = x_j  <=>  q_j + p(x_j + q_j) = 0
  const SeriesEvaluator pe(p);
  for (int j = 0; j < 64; ++j) {
    const double x = g.coordinate(j);
    EXPECT_NEAR(q.samples()[j] + pe.value(x + q.samples()[j]), 0.0, 1e-12);
  }
}

TEST(Lagrangian, InvertFlowDetectsFolding) {
  const Grid g(1, 32);
  const RealField p = RealField::sample(g, [](double x) { return 1.5 * std::sin(x); });
  EXPECT_LT(min_flow_jacobian(p), 0.0);
  EXPECT_THROW(invert_flow(p), BreakdownError);
}

TEST(Lagrangian, RhsAtIdentity) {
  const State s = make_preset("analytic", Grid(1, 32));
  const FlowTendency t = lagrangian_rhs(FlowState::identity(s));
  EXPECT_LT(max_abs_difference(t.dp, s.v), 1e-15);
  const RealField compression =
      RealField::sample(s.grid(), [](double x) { return -(1.0 + 0.2 * std::cos(x)) * 0.1 * std::cos(x); });
  EXPECT_LT(max_abs_difference(t.dzeta, compression), 1e-14);
  const RealField force = RealField::sample(s.grid(), [](double x) { return 0.1 * std::sin(x); });
  EXPECT_LT(max_abs_difference(t.deta, force), 1e-14);
}

TEST(Lagrangian, MatchesEulerianOnShortRun) {
  SolverConfig cfg;
  cfg.dt = 0.01;
  cfg.t_end = 0.2;
  cfg.output_stride = 5;
  const CrossValidationReport r = cross_validate(make_preset("analytic", Grid(1, 64)), cfg);
  ASSERT_TRUE(r.completed());
  EXPECT_EQ(r.times.size(), 5u);
  EXPECT_LT(r.max_discrepancy(), 1e-9);
}

TEST(Lagrangian, GuardBandStopsCompressingFlow) {
  const Grid g(1, 64);
  State s = make_preset("steady", g);
  s.v = RealField::sample(g, [](double x) { return -std::sin(x); });
  SolverConfig cfg;
  cfg.dt = 0.01;
  cfg.t_end = 3.0;
  const FlowTrajectory tr = evolve_lagrangian(FlowState::identity(s), cfg);
  ASSERT_TRUE(tr.event.has_value());
  EXPECT_EQ(tr.event->kind, EventKind::diffeomorphism_breakdown);
  EXPECT_LE(tr.event->value, kFlowJacobianGuard);
}

TEST(Lagrangian, RejectsTwoDimensionalState) {
  const State s = make_preset("analytic", Grid(2, 16));
  EXPECT_THROW(FlowState::identity(s), InvalidInput);
}
