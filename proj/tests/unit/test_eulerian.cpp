#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "mep/errors.hpp"
#include "mep/eulerian.hpp"
#include "mep/presets.hpp"
#include "mep/random_fields.hpp"
#include "mep/spectral.hpp"

using namespace mep;

namespace {

State analytic(int n, double a, double b) {
  const Grid g(1, n);
  return {RealField::sample(g, [a](double x) { return 1.0 + a * std::cos(x); }),
          RealField::sample(g, [b](double x) { return b * std::sin(x); }), 0.0};
}

}  // namespace

TEST(Eulerian, SteadyStateIsFixedPoint) {
  for (int m : {1, 2}) {
    const State s = make_preset("steady", Grid(m, 16));
    const Tendency t = mep_rhs(s);
    EXPECT_EQ(t.dn.max_abs(), 0.0);
    EXPECT_EQ(t.dv.max_abs(), 0.0);
  }
}

TEST(Eulerian, RhsMatchesHandComputation) {
  // n = 1 + a cos x, v = b sin x:
  //   n_t = -(b cos x + a b cos 2x)
  //   v_t = -b^2 sin x cos x + (a/2) sin x
  const double a = 0.3, b = 0.2;
  const State s = analytic(32, a, b);
  const Tendency t = mep_rhs(s);
  const Grid& g = s.grid();
  const RealField dn = RealField::sample(g, [&](double x) { return -(b * std::cos(x) + a * b * std::cos(2.0 * x)); });
  const RealField dv =
      RealField::sample(g, [&](double x) { return -b * b * std::sin(x) * std::cos(x) + 0.5 * a * std::sin(x); });
  EXPECT_LT(max_abs_difference(t.dn, dn), 1e-14);
  EXPECT_LT(max_abs_difference(t.dv, dv), 1e-14);
}

TEST(Eulerian, RhsRejectsMismatchedState) {
  State s = analytic(32, 0.1, 0.1);
  s.v = RealField(Grid(1, 16));
  EXPECT_THROW(mep_rhs(s), InvalidInput);
  State t = analytic(32, 0.1, 0.1);
  t.n.samples()[3] = INFINITY;
  EXPECT_THROW(mep_rhs(t), InvalidInput);
}

TEST(Eulerian, LocalPotentialSolvesScreenedPoisson) {
  std::mt19937_64 rng(1);
  const RealField n = RealField::constant(Grid(1, 64), 1.0) + random_band_limited(Grid(1, 64), 10, rng, 0.1, false);
  const RealField phi = local_potential_solve(n);
  EXPECT_LT(max_abs_difference(laplacian(phi) - phi + n, RealField(n.grid())), 1e-13);
}

TEST(Eulerian, EulerPoissonPotentialAgainstReferenceSolution) {
  // Reference: Newton solve of phi'' - exp(phi) + n = 0 for n = 1 + 0.1 cos x
  // with an independent collocation code gives max |phi - 0.05 cos x| = 7.59e-4.
  const Grid g(1, 64);
  const RealField n = RealField::sample(g, [](double x) { return 1.0 + 0.1 * std::cos(x); });
  const RealField phi = ep_potential_solve(n);
  const RealField linear = RealField::sample(g, [](double x) { return 0.05 * std::cos(x); });
  const double dev = max_abs_difference(phi, linear);
  EXPECT_GT(dev, 5e-4);
  EXPECT_LT(dev, 1e-3);
  RealField residual = laplacian(phi) + n;
  for (std::size_t i = 0; i < residual.samples().size(); ++i) residual.samples()[i] -= std::exp(phi.samples()[i]);
  EXPECT_LT(residual.max_abs(), 1e-11);
}

TEST(Eulerian, EulerPoissonNeedsPositiveDensity) {
  const Grid g(1, 32);
  const RealField n = RealField::sample(g, [](double x) { return 0.5 + std::cos(x); });
  EXPECT_THROW(ep_potential_solve(n), InvalidInput);
}

TEST(Eulerian, EulerPoissonReducesToModifiedSystemForSmallData) {
  // Differences are quadratic in the amplitude.
  double prev = 0.0;
  for (double a : {1e-2, 1e-3}) {
    const State s = analytic(32, a, a);
    const Tendency m = mep_rhs(s), e = ep_rhs(s);
    const double d = max_abs_difference(m.dv, e.dv);
    if (prev > 0.0) {
      EXPECT_NEAR(prev / d, 100.0, 5.0);
    }
    prev = d;
  }
}

TEST(Eulerian, Rk4IsReversibleToRoundOff) {
  const State s0 = analytic(64, 0.2, 0.1);
  const Rhs rhs = make_rhs(SolverConfig{});
  State s = s0;
  for (int i = 0; i < 20; ++i) s = rk4_step(s, 0.01, rhs);
  for (int i = 0; i < 20; ++i) s = rk4_step(s, -0.01, rhs);
  // RK4 is not symmetric; the defect is O(dt^5) per step.
  EXPECT_LT(max_abs_difference(s.n, s0.n), 1e-9);
}

TEST(Eulerian, TailFraction) {
  const Grid g(1, 64);
  const RealField low = RealField::sample(g, [](double x) { return std::cos(2.0 * x); });
  EXPECT_LT(tail_energy_fraction(low), 1e-28);
  // Tail starts above 2 (N/3) / 3 = 14.
  const RealField mixed = RealField::sample(g, [](double x) { return std::cos(2.0 * x) + std::cos(20.0 * x); });
  EXPECT_NEAR(tail_energy_fraction(mixed), 0.5, 1e-14);
}

TEST(Eulerian, BlowupDetection) {
  State s = analytic(64, 0.2, 0.1);
  EXPECT_FALSE(blowup_detect(s, 1e6).has_value());
  const auto ev = blowup_detect(s, 1e-3);
  ASSERT_TRUE(ev.has_value());
  EXPECT_EQ(ev->kind, EventKind::blowup_norm);
  s.v.samples()[0] = NAN;
  EXPECT_EQ(blowup_detect(s, 1e6)->kind, EventKind::non_finite);
}

TEST(Eulerian, EvolveRecordsStrideAndFinal) {
  SolverConfig cfg;
  cfg.dt = 0.01;
  cfg.t_end = 0.25;
  cfg.output_stride = 10;
  const Trajectory tr = evolve(analytic(32, 0.2, 0.1), cfg);
  ASSERT_EQ(tr.samples.size(), 4u);  // steps 0, 10, 20, 25
  EXPECT_DOUBLE_EQ(tr.samples[1].t, 0.1);
  EXPECT_DOUBLE_EQ(tr.final.t, 0.25);
  EXPECT_EQ(tr.steps, 25);
  EXPECT_FALSE(tr.event.has_value());
}

TEST(Eulerian, EvolveIsDeterministic) {
  SolverConfig cfg;
  cfg.dt = 0.01;
  cfg.t_end = 0.2;
  const Trajectory a = evolve(analytic(32, 0.2, 0.1), cfg);
  const Trajectory b = evolve(analytic(32, 0.2, 0.1), cfg);
  EXPECT_EQ(max_abs_difference(a.final.n, b.final.n), 0.0);
  EXPECT_EQ(max_abs_difference(a.final.v, b.final.v), 0.0);
}

TEST(Eulerian, MassConservedExactly) {
  for (int m : {1, 2}) {
    std::mt19937_64 rng(4);
    const Grid g(m, 16);
    const State s{RealField::constant(g, 1.0) + random_band_limited(g, 3, rng, 0.1, false),
                  random_band_limited_vector(g, 3, rng, 0.1), 0.0};
    SolverConfig cfg;
    cfg.dt = 0.01;
    cfg.t_end = 0.2;
    const Trajectory tr = evolve(s, cfg);
    EXPECT_NEAR(integral(tr.final.n), integral(s.n), 1e-13);
  }
}

TEST(Eulerian, BlowupEndsRunWithEvent) {
  SolverConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_end = 2.0;
  const State s = make_preset("large", Grid(1, 64));
  const Trajectory tr = evolve(s, cfg);
  ASSERT_TRUE(tr.event.has_value());
  EXPECT_TRUE(tr.event->kind == EventKind::blowup_tail || tr.event->kind == EventKind::blowup_norm);
  EXPECT_LT(tr.final.t, 2.0);
  EXPECT_DOUBLE_EQ(tr.samples.back().t, tr.final.t);
}

TEST(Eulerian, EvolveRejectsBadConfig) {
  SolverConfig cfg;
  cfg.dt = -0.1;
  EXPECT_THROW(evolve(analytic(16, 0.1, 0.1), cfg), InvalidInput);
}
