#include "mep/eulerian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "mep/errors.hpp"
#include "mep/spectral.hpp"

namespace mep {

namespace {

void check_finite(const Tendency& t, const State& s) {
  if (!t.dn.all_finite() || !t.dv.all_finite()) {
    throw BlowupError("non-finite tendency", s.t, std::max(t.dn.max_abs(), t.dv.max_abs()));
  }
}

double min_sample(const RealField& f) {
  const auto x = f.samples();
  return *std::min_element(x.begin(), x.end());
}

// (v.grad) v, each product dealiased.
RealField advection(const RealField& v) {
  const int m = v.grid().dimension();
  std::vector<RealField> parts;
  for (int i = 0; i < m; ++i) {
    const RealField vi = v.extract(i);
    RealField acc(v.grid());
    for (int j = 0; j < m; ++j) acc += dealiased_product(v.extract(j), partial(vi, j));
    parts.push_back(std::move(acc));
  }
  return stack(parts);
}

State add_scaled(const State& s, double a, const Tendency& k) {
  State out = s;
  out.n.axpy(a, k.dn);
  out.v.axpy(a, k.dv);
  return out;
}

}  // namespace

void validate(const State& s) {
  if (!s.n.is_scalar()) throw InvalidInput("density must be a scalar field");
  if (!(s.n.grid() == s.v.grid())) throw InvalidInput("density and velocity on different grids");
  if (s.v.components() != s.grid().dimension()) {
    throw InvalidInput("velocity must have one component per dimension");
  }
  if (const long bad = s.n.first_non_finite(); bad >= 0) {
    throw InvalidInput("non-finite density sample at index " + std::to_string(bad));
  }
  if (const long bad = s.v.first_non_finite(); bad >= 0) {
    throw InvalidInput("non-finite velocity sample at index " + std::to_string(bad));
  }
}

Tendency mep_rhs(const State& s) {
  Tendency out{-divergence(dealiased_product(s.n, s.v)),
               -(advection(s.v) + gradient(bessel_potential(s.n, -2.0)))};
  check_finite(out, s);
  return out;
}

RealField local_potential_solve(const RealField& n) {
  RealField phi = bessel_potential(n, -2.0);
  const RealField residual = laplacian(phi) - phi + n;
  const double scale = sobolev_norm(n, 0.0);
  const double r = sobolev_norm(residual, 0.0);
  if (r > 1e-11 * scale) {
    throw ConvergenceError("local potential residual above 1e-11 relative", r);
  }
  return phi;
}

RealField ep_potential_solve(const RealField& n, double tol, int max_iter) {
  if (!n.is_scalar()) throw InvalidInput("ep_potential_solve expects a scalar density");
  const double n_min = min_sample(n);
  if (!(n_min > 0.0)) {
    std::ostringstream msg;
    msg << "Euler-Poisson potential requires min n > 0, got " << n_min;
    throw InvalidInput(msg.str());
  }
  const Grid& grid = n.grid();
  const double target = tol * sobolev_norm(n, 0.0);

  RealField phi(grid);
  for (std::size_t i = 0; i < grid.size(); ++i) phi.samples()[i] = std::log(n.samples()[i]);

  auto exp_of = [](const RealField& f) {
    RealField e = f;
    for (double& x : e.samples()) x = std::exp(x);
    return e;
  };
  auto times = [](const RealField& a, const RealField& b) {
    RealField out = a;
    for (std::size_t i = 0; i < out.samples().size(); ++i) out.samples()[i] *= b.samples()[i];
    return out;
  };

  double residual_norm = 0.0;
  for (int iter = 0; iter <= max_iter; ++iter) {
    const RealField e = exp_of(phi);
    const RealField G = laplacian(phi) - e + n;
    residual_norm = sobolev_norm(G, 0.0);
    if (residual_norm <= target) return phi;
    if (iter == max_iter) break;

    // Solve (Lap - e) delta = -G by preconditioned defect correction.
    const double c = integral(e) / grid.volume();
    const RealField rhs = -G;
    RealField delta(grid);
    const double inner_target = 0.1 * residual_norm;
    bool converged = false;
    for (int inner = 0; inner < 200; ++inner) {
      const RealField defect = rhs - (laplacian(delta) - times(e, delta));
      const double d = sobolev_norm(defect, 0.0);
      if (d <= inner_target) {
        converged = true;
        break;
      }
      if (!std::isfinite(d)) break;
      delta += shifted_laplacian_inverse(defect, c);
    }
    if (!converged) {
      throw ConvergenceError("Newton correction for the Euler-Poisson potential stalled", residual_norm);
    }
    phi += delta;
  }
  std::ostringstream msg;
  msg << "Euler-Poisson Newton did not converge in " << max_iter << " iterations, residual " << residual_norm;
  throw ConvergenceError(msg.str(), residual_norm);
}

Tendency ep_rhs(const State& s, double tol, int max_iter) {
  const RealField phi = ep_potential_solve(s.n, tol, max_iter);
  Tendency out{-divergence(dealiased_product(s.n, s.v)), -(advection(s.v) + gradient(phi))};
  check_finite(out, s);
  return out;
}

Rhs make_rhs(const SolverConfig& cfg) {
  if (cfg.model == Model::euler_poisson) {
    return [tol = cfg.newton_tol, iters = cfg.newton_max_iter](const State& s) { return ep_rhs(s, tol, iters); };
  }
  return [](const State& s) { return mep_rhs(s); };
}

State rk4_step(const State& s, double dt, const Rhs& rhs) {
  const Tendency k1 = rhs(s);
  State s2 = add_scaled(s, 0.5 * dt, k1);
  s2.t = s.t + 0.5 * dt;
  const Tendency k2 = rhs(s2);
  State s3 = add_scaled(s, 0.5 * dt, k2);
  s3.t = s2.t;
  const Tendency k3 = rhs(s3);
  State s4 = add_scaled(s, dt, k3);
  s4.t = s.t + dt;
  const Tendency k4 = rhs(s4);

  State out = s;
  out.n.axpy(dt / 6.0, k1.dn).axpy(dt / 3.0, k2.dn).axpy(dt / 3.0, k3.dn).axpy(dt / 6.0, k4.dn);
  out.v.axpy(dt / 6.0, k1.dv).axpy(dt / 3.0, k2.dv).axpy(dt / 3.0, k3.dv).axpy(dt / 6.0, k4.dv);
  out.t = s.t + dt;
  return out;
}

std::string to_string(EventKind kind) {
  switch (kind) {
    case EventKind::blowup_norm: return "blowup_norm";
    case EventKind::blowup_tail: return "blowup_tail";
    case EventKind::non_finite: return "non_finite";
    case EventKind::diffeomorphism_breakdown: return "diffeomorphism_breakdown";
    case EventKind::solver_failure: return "solver_failure";
  }
  return "unknown";
}

double tail_energy_fraction(const RealField& f) {
  const Grid& grid = f.grid();
  const int n = grid.points_per_axis();
  const int tail_start = (2 * grid.dealias_cutoff()) / 3;
  const SpectralField F = to_spectral(f);
  double total = 0.0;
  double tail = 0.0;
  for (int c = 0; c < F.components(); ++c) {
    const auto coeffs = F.component(c);
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
      const int k0 = std::abs(grid.wavenumber(static_cast<int>(i % n)));
      const int k1 = grid.dimension() == 2 ? std::abs(grid.wavenumber(static_cast<int>(i / n))) : 0;
      if (k0 == 0 && k1 == 0) continue;
      const double e = std::norm(coeffs[i]);
      total += e;
      if (std::max(k0, k1) > tail_start) tail += e;
    }
  }
  return total > 0.0 ? tail / total : 0.0;
}

std::optional<Event> blowup_detect(const State& s, double threshold, double sigma, double tail_fraction) {
  if (!s.n.all_finite() || !s.v.all_finite()) {
    return Event{EventKind::non_finite, s.t, std::numeric_limits<double>::quiet_NaN(), "non-finite sample"};
  }
  const double nv = sobolev_norm(s.v, sigma);
  const double nn = sobolev_norm(s.n, sigma - 1.0);
  if (!(nv <= threshold)) return Event{EventKind::blowup_norm, s.t, nv, "velocity Sobolev norm above threshold"};
  if (!(nn <= threshold)) return Event{EventKind::blowup_norm, s.t, nn, "density Sobolev norm above threshold"};
  const double tail = std::max(tail_energy_fraction(s.n), tail_energy_fraction(s.v));
  if (tail > tail_fraction) return Event{EventKind::blowup_tail, s.t, tail, "spectral tail energy above threshold"};
  return std::nullopt;
}

long total_steps(const SolverConfig& cfg) { return std::lround(cfg.t_end / cfg.dt); }

Trajectory evolve(const State& s0, const SolverConfig& cfg, const Observer& observer, long first_step) {
  if (!(cfg.dt > 0.0)) throw InvalidInput("dt must be positive");
  if (!(cfg.t_end >= 0.0)) throw InvalidInput("t_end must be non-negative");
  if (cfg.output_stride < 1) throw InvalidInput("output stride must be at least 1");
  validate(s0);
  if (cfg.model == Model::euler_poisson && !(min_sample(s0.n) > 0.0)) {
    throw InvalidInput("Euler-Poisson runs require min n > 0");
  }

  const Rhs rhs = make_rhs(cfg);
  const long last = total_steps(cfg);
  Trajectory traj{{}, s0, std::nullopt, first_step};
  State s = s0;
  s.t = static_cast<double>(first_step) * cfg.dt;

  auto record = [&](const State& st, long step) {
    traj.samples.push_back(st);
    if (observer) observer(st, step);
  };
  record(s, first_step);
  if (auto ev = blowup_detect(s, cfg.blowup_threshold, cfg.sigma, cfg.tail_fraction)) {
    traj.event = ev;
    traj.final = s;
    return traj;
  }

  for (long step = first_step + 1; step <= last; ++step) {
    try {
      s = rk4_step(s, cfg.dt, rhs);
    } catch (const BlowupError& e) {
      traj.event = Event{EventKind::non_finite, e.time(), e.norm(), e.what()};
      break;
    } catch (const ConvergenceError& e) {
      traj.event = Event{EventKind::solver_failure, s.t, e.residual(), e.what()};
      break;
    } catch (const InvalidInput& e) {
      traj.event = Event{EventKind::solver_failure, s.t, 0.0, e.what()};
      break;
    }
    s.t = static_cast<double>(step) * cfg.dt;
    traj.steps = step;
    auto ev = blowup_detect(s, cfg.blowup_threshold, cfg.sigma, cfg.tail_fraction);
    if (ev || step % cfg.output_stride == 0 || step == last) record(s, step);
    if (ev) {
      traj.event = ev;
      break;
    }
  }
  traj.final = s;
  return traj;
}

}  // namespace mep
