#include "mep/lagrangian.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "mep/errors.hpp"
#include "mep/spectral.hpp"

namespace mep {

namespace {

void require_1d(const Grid& grid) {
  if (grid.dimension() != 1) throw InvalidInput("flow-map solver supports m = 1 only");
}

RealField pointwise_product(const RealField& a, const RealField& b) {
  RealField out = a;
  for (std::size_t i = 0; i < out.samples().size(); ++i) out.samples()[i] *= b.samples()[i];
  return out;
}

FlowState add_scaled(const FlowState& F, double a, const FlowTendency& k) {
  FlowState out = F;
  out.p.axpy(a, k.dp);
  out.zeta.axpy(a, k.dzeta);
  out.eta.axpy(a, k.deta);
  return out;
}

}  // namespace

FlowState FlowState::identity(const State& s) {
  require_1d(s.grid());
  return FlowState{RealField(s.grid()), s.n, s.v, s.t};
}

SeriesEvaluator::SeriesEvaluator(const RealField& f) {
  require_1d(f.grid());
  if (!f.is_scalar()) throw InvalidInput("series evaluation of a scalar field only");
  const SpectralField F = to_spectral(f);
  const int half = f.grid().nyquist();
  coeffs_.resize(half + 1);
  for (int k = 0; k <= half; ++k) coeffs_[k] = F.at(0, k);
  // Real data: the Nyquist coefficient is real up to round-off.
  coeffs_[half] = coeffs_[half].real();
  for (int k = 1; k < half; ++k) bound_ += 2.0 * std::abs(coeffs_[k]);
  bound_ += std::abs(coeffs_[half]);
}

std::pair<double, double> SeriesEvaluator::value_and_derivative(double x) const {
  const int half = static_cast<int>(coeffs_.size()) - 1;
  std::complex<double> sum = 0.0;
  std::complex<double> dsum = 0.0;
  const std::complex<double> step = std::polar(1.0, x);
  std::complex<double> z = step;
  for (int k = 1; k < half; ++k) {
    // Resynchronise the recurrence to bound round-off growth.
    if (k % 16 == 0) z = std::polar(1.0, k * x);
    const std::complex<double> term = coeffs_[k] * z;
    sum += term;
    dsum += static_cast<double>(k) * term;
    z *= step;
  }
  const double nyq = coeffs_[half].real();
  const double value = coeffs_[0].real() + 2.0 * sum.real() + nyq * std::cos(half * x);
  // d/dx 2 Re(c e^{ikx}) = -2 k Im(c e^{ikx})
  const double deriv = -2.0 * dsum.imag() - nyq * half * std::sin(half * x);
  return {value, deriv};
}

double SeriesEvaluator::value(double x) const { return value_and_derivative(x).first; }

RealField compose(const RealField& f, const RealField& p) {
  require_1d(f.grid());
  if (!(f.grid() == p.grid())) throw InvalidInput("compose: field and flow on different grids");
  const SeriesEvaluator eval(f);
  const Grid& grid = f.grid();
  RealField out(grid);
  for (int j = 0; j < grid.points_per_axis(); ++j) {
    out.samples()[j] = eval.value(grid.coordinate(j) + p.samples()[j]);
  }
  return out;
}

double min_flow_jacobian(const RealField& p) {
  const RealField dp = partial(p, 0);
  const auto x = dp.samples();
  return 1.0 + *std::min_element(x.begin(), x.end());
}

RealField invert_flow(const RealField& p) {
  require_1d(p.grid());
  const double jac = min_flow_jacobian(p);
  if (!(jac > 0.0)) {
    std::ostringstream msg;
    msg << "flow map is not a diffeomorphism: min gamma' = " << jac;
    throw BreakdownError(msg.str(), jac);
  }
  const Grid& grid = p.grid();
  const SeriesEvaluator eval(p);
  const double mean = to_spectral(p).at(0, 0).real();
  const double reach = std::abs(mean) + eval.amplitude_bound() + 1e-12;

  RealField q(grid);
  double worst = 0.0;
  for (int j = 0; j < grid.points_per_axis(); ++j) {
    const double x = grid.coordinate(j);
    auto gamma_minus_x = [&](double y) { return y + eval.value(y) - x; };

    double y = x - p.samples()[j];
    bool ok = false;
    for (int it = 0; it < 50; ++it) {
      const auto [val, der] = eval.value_and_derivative(y);
      const double g = y + val - x;
      const double slope = 1.0 + der;
      if (!(slope > 0.0) || !std::isfinite(g)) break;
      const double dy = g / slope;
      y -= dy;
      if (std::abs(dy) <= 1e-14 * (1.0 + std::abs(y))) {
        ok = true;
        break;
      }
    }
    if (!ok || std::abs(gamma_minus_x(y)) > 1e-13) {
      // gamma(x - reach) <= x <= gamma(x + reach) since |p - 0| <= reach.
      double lo = x - reach;
      double hi = x + reach;
      for (int it = 0; it < 200 && hi - lo > 1e-15 * (1.0 + std::abs(x)); ++it) {
        const double mid = 0.5 * (lo + hi);
        (gamma_minus_x(mid) < 0.0 ? lo : hi) = mid;
      }
      y = 0.5 * (lo + hi);
    }
    worst = std::max(worst, std::abs(gamma_minus_x(y)));
    q.samples()[j] = y - x;
  }
  if (!(worst <= 1e-12)) {
    std::ostringstream msg;
    msg << "flow inversion failed: worst residual " << worst;
    throw ConvergenceError(msg.str(), worst);
  }
  return q;
}

FlowTendency lagrangian_rhs(const FlowState& F) {
  const RealField q = invert_flow(F.p);
  const RealField n = compose(F.zeta, q);
  const RealField v = compose(F.eta, q);
  const RealField flux_term = pointwise_product(n, partial(v, 0));
  const RealField force = partial(bessel_potential(n, -2.0), 0);
  FlowTendency out{F.eta, -compose(flux_term, F.p), -compose(force, F.p)};
  if (!out.dzeta.all_finite() || !out.deta.all_finite()) {
    throw BlowupError("non-finite Lagrangian tendency", F.t, std::max(out.dzeta.max_abs(), out.deta.max_abs()));
  }
  return out;
}

FlowState rk4_step(const FlowState& F, double dt) {
  const FlowTendency k1 = lagrangian_rhs(F);
  FlowState F2 = add_scaled(F, 0.5 * dt, k1);
  F2.t = F.t + 0.5 * dt;
  const FlowTendency k2 = lagrangian_rhs(F2);
  FlowState F3 = add_scaled(F, 0.5 * dt, k2);
  F3.t = F2.t;
  const FlowTendency k3 = lagrangian_rhs(F3);
  FlowState F4 = add_scaled(F, dt, k3);
  F4.t = F.t + dt;
  const FlowTendency k4 = lagrangian_rhs(F4);

  FlowState out = F;
  out.p.axpy(dt / 6.0, k1.dp).axpy(dt / 3.0, k2.dp).axpy(dt / 3.0, k3.dp).axpy(dt / 6.0, k4.dp);
  out.zeta.axpy(dt / 6.0, k1.dzeta).axpy(dt / 3.0, k2.dzeta).axpy(dt / 3.0, k3.dzeta).axpy(dt / 6.0, k4.dzeta);
  out.eta.axpy(dt / 6.0, k1.deta).axpy(dt / 3.0, k2.deta).axpy(dt / 3.0, k3.deta).axpy(dt / 6.0, k4.deta);
  out.t = F.t + dt;
  return out;
}

State to_eulerian(const FlowState& F) {
  const RealField q = invert_flow(F.p);
  return State{compose(F.zeta, q), compose(F.eta, q), F.t};
}

FlowTrajectory evolve_lagrangian(const FlowState& F0, const SolverConfig& cfg, const FlowObserver& observer,
                                 long first_step) {
  require_1d(F0.p.grid());
  if (!(cfg.dt > 0.0)) throw InvalidInput("dt must be positive");
  if (cfg.output_stride < 1) throw InvalidInput("output stride must be at least 1");
  if (cfg.model != Model::mep) throw InvalidInput("the flow-map solver implements the mEP model only");

  const long last = total_steps(cfg);
  FlowTrajectory traj{{}, F0, std::nullopt, first_step};
  FlowState F = F0;
  F.t = static_cast<double>(first_step) * cfg.dt;

  auto record = [&](const FlowState& st, long step) {
    traj.samples.push_back(st);
    if (observer) observer(st, step);
  };
  auto guard = [&](const FlowState& st) -> std::optional<Event> {
    const double jac = min_flow_jacobian(st.p);
    if (!(jac > kFlowJacobianGuard)) {
      return Event{EventKind::diffeomorphism_breakdown, st.t, jac, "min gamma' below guard band"};
    }
    if (!st.zeta.all_finite() || !st.eta.all_finite()) {
      return Event{EventKind::non_finite, st.t, 0.0, "non-finite Lagrangian sample"};
    }
    return std::nullopt;
  };

  record(F, first_step);
  if (auto ev = guard(F)) {
    traj.event = ev;
    return traj;
  }
  for (long step = first_step + 1; step <= last; ++step) {
    try {
      F = rk4_step(F, cfg.dt);
    } catch (const BreakdownError& e) {
      traj.event = Event{EventKind::diffeomorphism_breakdown, F.t, e.min_jacobian(), e.what()};
      break;
    } catch (const BlowupError& e) {
      traj.event = Event{EventKind::non_finite, e.time(), e.norm(), e.what()};
      break;
    } catch (const ConvergenceError& e) {
      traj.event = Event{EventKind::solver_failure, F.t, e.residual(), e.what()};
      break;
    }
    F.t = static_cast<double>(step) * cfg.dt;
    traj.steps = step;
    auto ev = guard(F);
    if (ev || step % cfg.output_stride == 0 || step == last) record(F, step);
    if (ev) {
      traj.event = ev;
      break;
    }
  }
  traj.final = F;
  return traj;
}

double CrossValidationReport::final_discrepancy() const {
  if (times.empty()) return 0.0;
  return std::max(density_discrepancy.back(), velocity_discrepancy.back());
}

double CrossValidationReport::max_discrepancy() const {
  double m = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    m = std::max({m, density_discrepancy[i], velocity_discrepancy[i]});
  }
  return m;
}

CrossValidationReport cross_validate(const State& s0, const SolverConfig& cfg) {
  require_1d(s0.grid());
  CrossValidationReport report;
  const Trajectory euler = evolve(s0, cfg);
  const FlowTrajectory lagr = evolve_lagrangian(FlowState::identity(s0), cfg);
  report.eulerian_event = euler.event;
  report.lagrangian_event = lagr.event;

  const std::size_t shared = std::min(euler.samples.size(), lagr.samples.size());
  for (std::size_t i = 0; i < shared; ++i) {
    const State& e = euler.samples[i];
    const FlowState& l = lagr.samples[i];
    if (std::abs(e.t - l.t) > 1e-12) break;
    const State le = to_eulerian(l);
    report.times.push_back(e.t);
    report.density_discrepancy.push_back(max_abs_difference(e.n, le.n));
    report.velocity_discrepancy.push_back(max_abs_difference(e.v, le.v));
  }
  return report;
}

}  // namespace mep
