#pragma once

#include <optional>
#include <vector>

#include "mep/eulerian.hpp"

namespace mep {

/// Lagrangian unknowns on the 1-D torus. The flow map is gamma(x) = x + p(x)
/// with p periodic; zeta and eta are density and velocity carried by the flow.
struct FlowState {
  RealField p;
  RealField zeta;
  RealField eta;
  double t = 0.0;

  /// gamma = id, zeta = n, eta = v.
  static FlowState identity(const State& s);
};

struct FlowTendency {
  RealField dp;
  RealField dzeta;
  RealField deta;
};

/// Evaluates a scalar field's trigonometric interpolant and its derivative at
/// arbitrary points. The Nyquist mode enters as a cosine.
class SeriesEvaluator {
 public:
  explicit SeriesEvaluator(const RealField& f);

  double value(double x) const;
  /// Returns {f(x), f'(x)}.
  std::pair<double, double> value_and_derivative(double x) const;
  /// Sum of coefficient magnitudes; bounds |f - mean| everywhere.
  double amplitude_bound() const noexcept { return bound_; }

 private:
  std::vector<std::complex<double>> coeffs_;  // k = 0 .. N/2
  double bound_ = 0.0;
};

/// Samples f(gamma(x_j)) with gamma = id + p, by direct evaluation of the
/// truncated Fourier series of f. O(N^2).
RealField compose(const RealField& f, const RealField& p);

/// min_j (1 + p'(x_j)).
double min_flow_jacobian(const RealField& p);

/// Periodic part q of gamma^{-1} = id + q. Newton per node with bisection
/// fallback. Throws BreakdownError if min gamma' <= 0 and ConvergenceError
/// if max_j |gamma(gamma^{-1}(x_j)) - x_j| > 1e-12.
RealField invert_flow(const RealField& p);

FlowTendency lagrangian_rhs(const FlowState& F);

FlowState rk4_step(const FlowState& F, double dt);

State to_eulerian(const FlowState& F);

struct FlowTrajectory {
  std::vector<FlowState> samples;
  FlowState final;
  std::optional<Event> event;
  long steps = 0;
};

/// Guard band: the run stops with a diffeomorphism_breakdown event once
/// min gamma' <= kFlowJacobianGuard.
inline constexpr double kFlowJacobianGuard = 0.1;

using FlowObserver = std::function<void(const FlowState&, long step)>;

FlowTrajectory evolve_lagrangian(const FlowState& F0, const SolverConfig& cfg, const FlowObserver& observer = {},
                                 long first_step = 0);

struct CrossValidationReport {
  std::vector<double> times;
  std::vector<double> density_discrepancy;
  std::vector<double> velocity_discrepancy;
  std::optional<Event> eulerian_event;
  std::optional<Event> lagrangian_event;

  double final_discrepancy() const;
  double max_discrepancy() const;
  bool completed() const noexcept { return !eulerian_event && !lagrangian_event; }
};

/// Runs both solvers from s0 (m = 1) and compares (n, v) in max norm at the
/// shared output times.
CrossValidationReport cross_validate(const State& s0, const SolverConfig& cfg);

}  // namespace mep
