#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mep/field.hpp"

namespace mep {

/// Eulerian unknowns: density n (scalar) and velocity v (m components).
struct State {
  RealField n;
  RealField v;
  double t = 0.0;

  const Grid& grid() const noexcept { return n.grid(); }
};

/// Checks shared grid, component counts and finiteness; throws InvalidInput.
void validate(const State& s);

struct Tendency {
  RealField dn;
  RealField dv;
};

enum class Model { mep, euler_poisson };

struct SolverConfig {
  double dt = 1e-3;
  double t_end = 1.0;
  Model model = Model::mep;
  double blowup_threshold = 1e6;
  /// Fraction of fluctuation energy in the top third of the retained band.
  double tail_fraction = 0.1;
  /// Sobolev index for blow-up monitoring: |v|_{H^sigma}, |n|_{H^{sigma-1}}.
  double sigma = 2.0;
  double newton_tol = 1e-12;
  int newton_max_iter = 50;
  int output_stride = 100;
};

/// dn = -div(n v), dv = -(v.grad)v - grad Lambda^{-2} n, with 2/3-rule products.
Tendency mep_rhs(const State& s);

/// phi = Lambda^{-2} n, the solution of Lap(phi) - phi + n = 0. Throws
/// ConvergenceError if the residual exceeds 1e-11 |n|_{L2}.
RealField local_potential_solve(const RealField& n);

/// Newton solve of Lap(phi) - exp(phi) + n = 0 for min n > 0. Each Newton
/// correction is computed by a defect-correction loop preconditioned with the
/// spectral inverse of (Lap - c), c the mean of exp(phi), and stopped once the
/// linear residual is below 0.1 of the nonlinear one.
RealField ep_potential_solve(const RealField& n, double tol = 1e-12, int max_iter = 50);

/// Full Euler-Poisson tendency with phi from ep_potential_solve.
Tendency ep_rhs(const State& s, double tol = 1e-12, int max_iter = 50);

using Rhs = std::function<Tendency(const State&)>;

Rhs make_rhs(const SolverConfig& cfg);

/// Classical four-stage Runge-Kutta step. Negative dt integrates backwards.
State rk4_step(const State& s, double dt, const Rhs& rhs);

enum class EventKind { blowup_norm, blowup_tail, non_finite, diffeomorphism_breakdown, solver_failure };

std::string to_string(EventKind kind);

/// Terminal event of a run.
struct Event {
  EventKind kind;
  double t = 0.0;
  /// Triggering quantity (norm, tail fraction, min Jacobian, residual).
  double value = 0.0;
  std::string detail;
};

double tail_energy_fraction(const RealField& f);

std::optional<Event> blowup_detect(const State& s, double threshold, double sigma = 2.0,
                                   double tail_fraction = 0.1);

struct Trajectory {
  /// States at every output stride, starting with the initial state; the
  /// final state is appended when it does not fall on the stride.
  std::vector<State> samples;
  State final;
  std::optional<Event> event;
  long steps = 0;
};

using Observer = std::function<void(const State&, long step)>;

/// Fixed-step march with t = step * dt until t_end or a blow-up event.
/// `first_step` resumes a run whose initial state sits at step `first_step`.
Trajectory evolve(const State& s0, const SolverConfig& cfg, const Observer& observer = {}, long first_step = 0);

long total_steps(const SolverConfig& cfg);

}  // namespace mep
