#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "mep/errors.hpp"
#include "mep/hamiltonian.hpp"
#include "mep/presets.hpp"
#include "mep/random_fields.hpp"
#include "mep/spectral.hpp"

using namespace mep;

namespace {

constexpr double kPi = std::numbers::pi;

State random_state(int n, std::uint64_t seed, double amp = 0.05) {
  std::mt19937_64 rng(seed);
  const Grid g(1, n);
  return {RealField::constant(g, 1.0) + random_band_limited(g, n / 8, rng, amp, false),
          random_band_limited(g, n / 8, rng, amp), 0.0};
}

Covector random_covector(const Grid& g, std::mt19937_64& rng, int band) {
  return {random_band_limited(g, band, rng), random_band_limited(g, band, rng)};
}

}  // namespace

TEST(Hamiltonian, FunctionalsClosedForm) {
  const double a = 0.3, b = 0.2;
  const State s = make_preset("analytic", Grid(1, 32), a, b);
  EXPECT_NEAR(eval_functional(FunctionalKind::H1, s), kPi * (b * b / 2 + a * a / 4 + 1.0), 1e-13);
  EXPECT_NEAR(eval_functional(FunctionalKind::H2, s), 0.0, 1e-14);
  EXPECT_NEAR(eval_functional(FunctionalKind::mass, s), 2 * kPi, 1e-13);
  EXPECT_NEAR(eval_functional(FunctionalKind::momentum, s), 0.0, 1e-14);
}

TEST(Hamiltonian, CubicTermIsResolutionIndependent) {
  std::mt19937_64 r1(8), r2(8);
  const Grid g1(1, 32), g2(1, 128);
  const State a{RealField::constant(g1, 1.0) + random_band_limited(g1, 15, r1, 0.1, false), random_band_limited(g1, 15, r1, 0.1), 0.0};
  const State b{RealField::constant(g2, 1.0) + random_band_limited(g2, 15, r2, 0.1, false), random_band_limited(g2, 15, r2, 0.1), 0.0};
  EXPECT_NEAR(eval_functional(FunctionalKind::H1, a), eval_functional(FunctionalKind::H1, b), 1e-13);
}

TEST(Hamiltonian, VariationalDerivativesMatchFiniteDifferences) {
  const State s = random_state(32, 2);
  for (FunctionalKind k : {FunctionalKind::H1, FunctionalKind::H2, FunctionalKind::mass, FunctionalKind::momentum}) {
    const Covector exact = var_deriv(k, s);
    const Covector fd = fd_var_deriv(k, s);
    const double scale = std::max(exact.theta_v.max_abs(), exact.theta_n.max_abs());
    EXPECT_LT(max_abs_difference(exact.theta_v, fd.theta_v), 1e-6 * scale) << to_string(k);
    EXPECT_LT(max_abs_difference(exact.theta_n, fd.theta_n), 1e-6 * scale) << to_string(k);
  }
}

TEST(Hamiltonian, RhsConsistencyWithFrozenSign) {
  for (std::uint64_t seed : {1, 2, 3}) {
    const ConsistencyReport r = rhs_consistency(random_state(64, seed));
    EXPECT_TRUE(r.passed) << r.rhs_vs_d1 << ' ' << r.rhs_vs_d2 << ' ' << r.d1_vs_d2;
  }
}

TEST(Hamiltonian, OtherSignBreaksConsistencyByTwiceTheForce) {
  const State s = random_state(64, 4);
  const ConsistencyReport r = rhs_consistency(s, D2Sign::plus);
  EXPECT_FALSE(r.passed);
  const double force = partial(bessel_potential(s.n, -2.0), 0).max_abs();
  EXPECT_NEAR(r.rhs_vs_d2, 2.0 * force, 1e-12);
  EXPECT_LT(r.rhs_vs_d1, 1e-10 * r.scale);
}

TEST(Hamiltonian, OperatorsAreSkewAdjoint) {
  const State s = random_state(64, 5);
  std::mt19937_64 rng(6);
  for (PoissonOperator::Kind kind : {PoissonOperator::Kind::D1, PoissonOperator::Kind::D2, PoissonOperator::Kind::pencil}) {
    for (D2Sign sign : {D2Sign::plus, D2Sign::minus}) {
      const PoissonOperator op{kind, 0.7, sign};
      const Covector a = random_covector(s.grid(), rng, 8);
      const Covector b = random_covector(s.grid(), rng, 8);
      EXPECT_LT(skew_residual(op, s, a, b), 1e-13);
    }
  }
}

TEST(Hamiltonian, ConstantCoefficientOperatorSatisfiesJacobi) {
  const State s = random_state(64, 7);
  std::mt19937_64 rng(8);
  std::vector<CovectorTriple> t;
  for (int i = 0; i < 3; ++i) t.push_back({random_covector(s.grid(), rng, 6), random_covector(s.grid(), rng, 6), random_covector(s.grid(), rng, 6)});
  EXPECT_LT(jacobi_residual(s, t, {PoissonOperator::Kind::D1}), 1e-14);
}

TEST(Hamiltonian, WeakLiePoissonResidualIsRoundOff) {
  const State s = random_state(64, 9);
  std::mt19937_64 rng(10);
  std::vector<Covector> tests;
  for (int i = 0; i < 6; ++i) tests.push_back(random_covector(s.grid(), rng, 8));
  EXPECT_LT(weak_lie_poisson_residual(s, tests), 1e-12);
}

TEST(Hamiltonian, WeakResidualDetectsWrongDynamics) {
  // A density with a sign change is rejected outright.
  State s = random_state(32, 11);
  s.n = RealField::sample(s.grid(), [](double x) { return std::cos(x); });
  std::mt19937_64 rng(1);
  const std::vector<Covector> tests{random_covector(s.grid(), rng, 3)};
  EXPECT_THROW(weak_lie_poisson_residual(s, tests), InvalidInput);
}

TEST(Hamiltonian, ConservationAuditOnShortRun) {
  SolverConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_end = 0.1;
  cfg.output_stride = 10;
  const Trajectory tr = evolve(make_preset("analytic", Grid(1, 64)), cfg);
  const DriftTable d = conservation_audit(tr.samples);
  EXPECT_LT(d.max(), 1e-12);
}

TEST(Hamiltonian, RequiresOneDimension) {
  const State s = make_preset("analytic", Grid(2, 16));
  EXPECT_THROW(eval_functional(FunctionalKind::H1, s), InvalidInput);
}

TEST(Hamiltonian, D2ConstantEntryActsAlone) {
  const Grid g(1, 32);
  const State zero{RealField(g), RealField(g), 0.0};
  const Covector c{RealField::sample(g, [](double x) { return std::cos(x); }), RealField(g)};
  const Tangent t = apply_D2(zero, c);
  // -L^-2 d cos x = sin(x) / 2
  EXPECT_LT(max_abs_difference(t.dv, RealField::sample(g, [](double x) { return 0.5 * std::sin(x); })), 1e-15);
  EXPECT_EQ(t.dn.max_abs(), 0.0);
  const Tangent p = apply_D2(zero, c, D2Sign::plus);
  EXPECT_LT(max_abs_difference(p.dv, RealField::sample(g, [](double x) { return -0.5 * std::sin(x); })), 1e-15);
}

TEST(Hamiltonian, D2DensityRowAtUnitState) {
  const Grid g(1, 32);
  const State unit{RealField::constant(g, 1.0), RealField(g), 0.0};
  const RealField theta = RealField::sample(g, [](double x) { return std::sin(2.0 * x); });
  const Tangent t = apply_D2(unit, {RealField(g), theta});
  EXPECT_LT(t.dv.max_abs(), 1e-15);
  EXPECT_LT(max_abs_difference(t.dn, -2.0 * partial(theta, 0)), 1e-14);
}
