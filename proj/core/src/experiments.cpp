#include "mep/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "mep/diagnostics.hpp"
#include "mep/errors.hpp"
#include "mep/gevrey.hpp"
#include "mep/hamiltonian.hpp"
#include "mep/presets.hpp"
#include "mep/random_fields.hpp"
#include "mep/snapshot.hpp"
#include "mep/spectral.hpp"

namespace mep {

namespace fs = std::filesystem;

namespace {

constexpr const char* kResolvedName = "config.resolved";

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << text;
}

int exit_code_for(const std::optional<Event>& ev) { return ev ? kExitBlowup : kExitOk; }

// Writes each record once the next one arrives, so the last row can carry
// the terminal event.
class DiagnosticsSink {
 public:
  DiagnosticsSink(const fs::path& path, bool append, double sigma) : writer_(path, append), sigma_(sigma) {}

  void push(const State& s) {
    flush();
    pending_ = make_record(s, sigma_);
  }

  void finish(const State& final_state, const std::optional<Event>& ev) {
    if (!pending_ || pending_->t != final_state.t) push(final_state);
    if (ev) pending_->event = to_string(ev->kind);
    flush();
  }

 private:
  void flush() {
    if (pending_) writer_.write(*pending_);
    pending_.reset();
  }

  DiagnosticsWriter writer_;
  double sigma_;
  std::optional<DiagnosticsRecord> pending_;
};

RunOutcome run_from(const RunConfig& cfg, const State& s0, const std::optional<FlowState>& f0, long first_step,
                    bool resuming) {
  const fs::path dir = cfg.output_dir;
  fs::create_directories(dir);
  if (!resuming) write_text(dir / kResolvedName, to_text(cfg));
  const SolverConfig scfg = solver_config(cfg);
  DiagnosticsSink sink(dir / "diagnostics.csv", resuming, scfg.sigma);

  auto snapshot = [&](const State& s, const std::optional<FlowState>& flow, long step) {
    write_snapshot(dir / snapshot_name(step), Snapshot{kSnapshotVersion, step, s, flow});
  };

  if (cfg.solver == SolverKind::lagrangian) {
    const FlowState start = f0 ? *f0 : FlowState::identity(s0);
    const FlowTrajectory traj = evolve_lagrangian(
        start, scfg,
        [&](const FlowState& F, long step) {
          if (resuming && step == first_step) return;
          const State s = to_eulerian(F);
          sink.push(s);
          snapshot(s, F, step);
        },
        first_step);
    const State final_state = to_eulerian(traj.final);
    sink.finish(final_state, traj.event);
    return {exit_code_for(traj.event), traj.event, traj.steps, final_state};
  }

  const Trajectory traj = evolve(
      s0, scfg,
      [&](const State& s, long step) {
        if (resuming && step == first_step) return;
        sink.push(s);
        snapshot(s, std::nullopt, step);
      },
      first_step);
  sink.finish(traj.final, traj.event);
  return {exit_code_for(traj.event), traj.event, traj.steps, traj.final};
}

// Shared output times only: a run that stops early contributes what it has.
void write_compare_files(const RunConfig& cfg, const CrossValidationReport& r, int exit_code) {
  const fs::path dir = cfg.output_dir;
  fs::create_directories(dir);
  write_text(dir / kResolvedName, to_text(cfg));
  std::ostringstream csv;
  csv << "t,density,velocity,max\n";
  for (std::size_t i = 0; i < r.times.size(); ++i) {
    csv << format_double(r.times[i]) << ',' << format_double(r.density_discrepancy[i]) << ','
        << format_double(r.velocity_discrepancy[i]) << ','
        << format_double(std::max(r.density_discrepancy[i], r.velocity_discrepancy[i])) << '\n';
  }
  write_text(dir / "compare.csv", csv.str());
  auto event_text = [](const std::optional<Event>& e) {
    return e ? to_string(e->kind) + " t=" + format_double(e->t) : std::string("none");
  };
  std::ostringstream rep;
  rep << "final_discrepancy = " << format_double(r.times.empty() ? NAN : r.final_discrepancy()) << '\n'
      << "max_discrepancy = " << format_double(r.times.empty() ? NAN : r.max_discrepancy()) << '\n'
      << "tolerance = " << format_double(cfg.compare_tolerance) << '\n'
      << "eulerian_event = " << event_text(r.eulerian_event) << '\n'
      << "lagrangian_event = " << event_text(r.lagrangian_event) << '\n'
      << "exit_code = " << exit_code << '\n';
  write_text(dir / "compare.report", rep.str());
}

// Final state of a plain run, without storing intermediate samples.
State final_state_of(const State& s0, SolverConfig scfg) {
  scfg.output_stride = static_cast<int>(std::max(1L, total_steps(scfg)));
  const Trajectory traj = evolve(s0, scfg);
  if (traj.event) throw Error("run stopped early: " + to_string(traj.event->kind) + " " + traj.event->detail);
  return traj.final;
}

double max_abs_of(const RealField& f) { return f.max_abs(); }

}  // namespace

State initial_state(const RunConfig& cfg) {
  const Grid grid(cfg.dimension, cfg.grid_n);
  const PresetDefaults d = preset_defaults(cfg.preset);
  return make_preset(cfg.preset, grid, cfg.amplitude_n.value_or(d.amplitude_n),
                     cfg.amplitude_v.value_or(d.amplitude_v), cfg.seed);
}

RunOutcome run_simulation(const RunConfig& cfg) {
  if (cfg.solver == SolverKind::compare) {
    const CompareOutcome c = run_compare(cfg);
    const std::optional<Event> ev = c.report.eulerian_event ? c.report.eulerian_event : c.report.lagrangian_event;
    return {c.exit_code, ev, 0, initial_state(cfg)};
  }
  return run_from(cfg, initial_state(cfg), std::nullopt, 0, false);
}

RunOutcome resume_simulation(const fs::path& snapshot) {
  const fs::path dir = snapshot.parent_path().empty() ? fs::path(".") : snapshot.parent_path();
  RunConfig cfg = load_config(dir / kResolvedName);
  cfg.output_dir = dir.string();
  const Snapshot snap = read_snapshot(snapshot, Grid(cfg.dimension, cfg.grid_n));
  if (cfg.solver == SolverKind::lagrangian && !snap.flow) throw SnapshotError("Lagrangian run needs a flow snapshot");
  if (std::abs(snap.state.t - static_cast<double>(snap.step) * cfg.dt) > 1e-12 * std::max(1.0, snap.state.t)) {
    throw SnapshotError("snapshot time does not match step * dt");
  }

  // Keep rows up to and including the snapshot time.
  const fs::path csv = dir / "diagnostics.csv";
  std::vector<DiagnosticsRecord> kept;
  if (fs::exists(csv)) {
    for (const DiagnosticsRecord& r : read_diagnostics(csv)) {
      if (r.t <= snap.state.t) kept.push_back(r);
    }
  }
  {
    DiagnosticsWriter w(csv);
    for (DiagnosticsRecord r : kept) {
      r.event = "none";
      w.write(r);
    }
  }
  return run_from(cfg, snap.state, snap.flow, snap.step, true);
}

CompareOutcome run_compare(const RunConfig& cfg) {
  if (cfg.dimension != 1) throw ConfigError("compare needs dimension = 1");
  CrossValidationReport r = cross_validate(initial_state(cfg), solver_config(cfg));
  int code = kExitOk;
  if (!r.completed()) code = kExitBlowup;
  else if (!(r.final_discrepancy() <= cfg.compare_tolerance)) code = kExitTolerance;
  write_compare_files(cfg, r, code);
  return {code, std::move(r)};
}

// ---------------------------------------------------------------- checks

bool CheckReport::passed() const {
  return std::all_of(items.begin(), items.end(), [](const CheckItem& i) { return i.passed || i.informational; });
}

std::string CheckReport::to_text() const {
  std::ostringstream os;
  for (const CheckItem& i : items) {
    const std::string key = suite + "." + i.name;
    os << key << ".residual = " << format_double(i.residual) << '\n'
       << key << ".tolerance = " << format_double(i.tolerance) << '\n'
       << key << ".status = " << (i.informational ? "reported" : i.passed ? "pass" : "fail") << '\n';
  }
  os << suite << ".passed = " << (passed() ? "true" : "false") << '\n';
  return os.str();
}

namespace {

CheckItem item(std::string name, double residual, double tolerance) {
  return {std::move(name), residual, tolerance, residual <= tolerance, false};
}

CheckItem info(std::string name, double residual) {
  return {std::move(name), residual, std::numeric_limits<double>::infinity(), true, true};
}

State random_state(const Grid& grid, std::mt19937_64& rng, double amplitude) {
  const int band = std::max(1, grid.points_per_axis() / 8);
  return State{RealField::constant(grid, 1.0) + random_band_limited(grid, band, rng, amplitude, false),
               random_band_limited(grid, band, rng, amplitude), 0.0};
}

Covector random_covector(const Grid& grid, std::mt19937_64& rng, int band) {
  return {random_band_limited(grid, band, rng), random_band_limited(grid, band, rng)};
}

double rel_max_diff(const Covector& a, const Covector& b) {
  const double scale = std::max({a.theta_v.max_abs(), a.theta_n.max_abs(), 1e-300});
  return std::max(max_abs_difference(a.theta_v, b.theta_v), max_abs_difference(a.theta_n, b.theta_n)) / scale;
}

CheckReport hamiltonian_suite(std::uint64_t seed, int n) {
  CheckReport rep{"hamiltonian", {}};
  const Grid grid(1, n);
  std::mt19937_64 rng(seed);
  const int band = std::max(1, n / 8);

  double consistency = 0.0;
  double skew_d1 = 0.0, skew_d2 = 0.0, jac_d1 = 0.0, jac_d2 = 0.0, weak = 0.0;
  const PoissonOperator d1{PoissonOperator::Kind::D1};
  const PoissonOperator d2{PoissonOperator::Kind::D2};
  for (int trial = 0; trial < 4; ++trial) {
    const State s = random_state(grid, rng, 0.05);
    const ConsistencyReport c = rhs_consistency(s);
    consistency = std::max(consistency, std::max({c.rhs_vs_d1, c.rhs_vs_d2, c.d1_vs_d2}) / c.scale);
    for (int pair = 0; pair < 3; ++pair) {
      const Covector a = random_covector(grid, rng, band);
      const Covector b = random_covector(grid, rng, band);
      skew_d1 = std::max(skew_d1, skew_residual(d1, s, a, b));
      skew_d2 = std::max(skew_d2, skew_residual(d2, s, a, b));
    }
    std::vector<CovectorTriple> triples;
    for (int t = 0; t < 2; ++t) {
      triples.push_back({random_covector(grid, rng, band), random_covector(grid, rng, band),
                         random_covector(grid, rng, band)});
    }
    jac_d1 = std::max(jac_d1, jacobi_residual(s, triples, d1));
    jac_d2 = std::max(jac_d2, jacobi_residual(s, triples, d2));
    std::vector<Covector> tests;
    for (int t = 0; t < 4; ++t) tests.push_back(random_covector(grid, rng, band));
    weak = std::max(weak, weak_lie_poisson_residual(s, tests));
  }
  rep.items.push_back(item("rhs_consistency", consistency, 1e-10));
  rep.items.push_back(item("skew_D1", skew_d1, 1e-12));
  rep.items.push_back(item("skew_D2", skew_d2, 1e-12));
  rep.items.push_back(item("jacobi_D1", jac_d1, 1e-12));
  rep.items.push_back(info("jacobi_D2", jac_d2));
  rep.items.push_back(item("weak_lie_poisson", weak, 1e-8));

  const State s = random_state(grid, rng, 0.05);
  for (FunctionalKind kind : {FunctionalKind::H1, FunctionalKind::H2, FunctionalKind::mass, FunctionalKind::momentum}) {
    const double err = rel_max_diff(var_deriv(kind, s), fd_var_deriv(kind, s));
    rep.items.push_back(item("gradient_" + to_string(kind), err, 1e-6));
  }

  SolverConfig scfg;
  scfg.dt = 1e-3;
  scfg.t_end = 0.05;
  scfg.output_stride = 10;
  const Trajectory traj = evolve(make_preset("analytic", grid), scfg);
  const DriftTable drift = conservation_audit(traj.samples);
  rep.items.push_back(item("drift_mass", drift.mass, 1e-12));
  rep.items.push_back(item("drift_momentum", drift.momentum, 1e-12));
  rep.items.push_back(item("drift_H1", drift.H1, 1e-8));
  return rep;
}

RealField synthetic_analytic(const Grid& grid, double sigma0, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  SpectralField F(grid);
  for (int k = 1; k < grid.nyquist(); ++k) {
    const std::complex<double> c = std::polar(std::exp(-sigma0 * k), phase(rng));
    F.at(0, k) = c;
    F.at(0, grid.points_per_axis() - k) = std::conj(c);
  }
  return to_grid(F);
}

CheckReport gevrey_suite(std::uint64_t seed, int n) {
  CheckReport rep{"gevrey", {}};
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  double worst_alg = 0.0;
  for (int pair = 0; pair < 50; ++pair) {
    const double s = 0.05 + 0.9 * unit(rng);
    const double sp = s * (0.01 + 0.98 * unit(rng));
    for (int k = 0; k <= 200; ++k) {
      const AlgSides sides = alg_inequality_sides(k, s, sp);
      worst_alg = std::max(worst_alg, static_cast<double>(sides.lhs / sides.rhs));
    }
  }
  rep.items.push_back(item("alg_inequality_ratio", worst_alg, 1.0));

  const Grid grid(1, n);
  const int band = std::max(1, n / 8);
  double mono = 0.0, p3 = 0.0, lemma_min = std::numeric_limits<double>::infinity(), lemma_max = 0.0;
  ScaleParams params;
  for (int f = 0; f < 10; ++f) {
    const RealField u = random_band_limited(grid, band, rng, 1.0, false);
    const RealField v = random_band_limited(grid, band, rng, 1.0, false);
    const double s_hi = 0.2 + 0.7 * unit(rng);
    const double s_lo = s_hi * unit(rng);
    params.s = std::max(s_lo, 1e-3);
    const double lo = es_norm(u, params).value;
    params.s = s_hi;
    const double hi = es_norm(u, params).value;
    mono = std::max(mono, (lo - hi) / hi);
    p3 = std::max(p3, operator_bound_check(GevreyOperator::P3, u, nullptr, s_hi, 0.0, params).ratio);
    const double ratio = product_lemma_check(u, v, params).ratio;
    lemma_min = std::min(lemma_min, ratio);
    lemma_max = std::max(lemma_max, ratio);
  }
  rep.items.push_back(item("es_norm_monotone_in_s", mono, 1e-12));
  rep.items.push_back(item("P3_ratio", p3, 1.0));
  rep.items.push_back(info("product_lemma_ratio_max", lemma_max));
  rep.items.push_back(info("product_lemma_ratio_min", lemma_min));

  double recovery = 0.0;
  for (double sigma0 : {0.2, 0.5, 1.0}) {
    const AnalyticityEstimate e = analyticity_radius(synthetic_analytic(grid, sigma0, rng));
    recovery = std::max(recovery, e.conclusive ? std::abs(e.sigma_fit - sigma0) : INFINITY);
  }
  rep.items.push_back(item("radius_recovery", recovery, 1e-3));
  return rep;
}

CheckReport spectral_suite(std::uint64_t seed, int n) {
  CheckReport rep{"spectral", {}};
  std::mt19937_64 rng(seed);
  for (int m : {1, 2}) {
    const Grid grid(m, m == 1 ? n : std::max(8, n / 4));
    const std::string tag = m == 1 ? "1d_" : "2d_";
    const RealField f = random_band_limited(grid, grid.nyquist() - 1, rng);
    const double scale = f.max_abs();
    rep.items.push_back(item(tag + "roundtrip", max_abs_difference(to_grid(to_spectral(f)), f) / scale, 1e-13));

    const SpectralField F = to_spectral(f);
    double spectral_energy = 0.0;
    for (const auto& c : F.coefficients()) spectral_energy += std::norm(c);
    spectral_energy *= grid.volume();
    const double physical = inner_product(f, f);
    rep.items.push_back(item(tag + "parseval", std::abs(physical - spectral_energy) / physical, 1e-13));

    const RealField smooth = bessel_potential(f, -2.0);
    rep.items.push_back(item(tag + "bessel_inverse", max_abs_difference(smooth - laplacian(smooth), f) / scale, 1e-12));
  }

  // Dealiased product of band-limited factors against direct convolution.
  const Grid grid(1, n);
  const int K = grid.dealias_cutoff();
  const RealField a = random_band_limited(grid, K, rng);
  const RealField b = random_band_limited(grid, K, rng);
  const SpectralField A = to_spectral(a);
  const SpectralField B = to_spectral(b);
  SpectralField C(grid);
  for (int p = -K; p <= K; ++p) {
    for (int q = -K; q <= K; ++q) {
      const int k = p + q;
      if (std::abs(k) > K) continue;
      C.at(0, (k + n) % n) += A.at(0, (p + n) % n) * B.at(0, (q + n) % n);
    }
  }
  const RealField direct = to_grid(C);
  rep.items.push_back(item("dealias_vs_convolution",
                           max_abs_difference(dealiased_product(a, b), direct) / std::max(direct.max_abs(), 1e-300),
                           1e-13));

  const RealField s3 = RealField::sample(grid, [](double x) { return std::sin(3.0 * x); });
  const RealField c3 = RealField::sample(grid, [](double x) { return 3.0 * std::cos(3.0 * x); });
  rep.items.push_back(item("derivative_exact", max_abs_difference(partial(s3, 0), c3) / 3.0, 1e-13));

  const double expected = 2.0 * std::numbers::pi * std::pow(1.0 + 9.0, 2.0) * 0.5;
  rep.items.push_back(item("sobolev_norm_exact", std::abs(sobolev_norm(s3, 2.0) - std::sqrt(expected)) / std::sqrt(expected), 1e-13));
  return rep;
}

}  // namespace

CheckReport run_check_suite(const std::string& suite, std::uint64_t seed, int n) {
  if (n < 16 || (n & (n - 1)) != 0) throw InvalidInput("check suites need N a power of two >= 16");
  if (suite == "hamiltonian") return hamiltonian_suite(seed, n);
  if (suite == "gevrey") return gevrey_suite(seed, n);
  if (suite == "spectral") return spectral_suite(seed, n);
  throw InvalidInput("unknown suite '" + suite + "'");
}

// ---------------------------------------------------------------- dispersion

double predicted_omega(int k) { return k / std::sqrt(1.0 + static_cast<double>(k) * k); }

namespace {

struct SinusoidFit {
  double residual = 0.0;
  double amplitude = 0.0;
};

// Linear least squares of y on {cos wt, sin wt, 1}.
SinusoidFit fit_at(double w, const std::vector<double>& t, const std::vector<double>& y) {
  double M[3][3] = {};
  double r[3] = {};
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double b[3] = {std::cos(w * t[i]), std::sin(w * t[i]), 1.0};
    for (int p = 0; p < 3; ++p) {
      r[p] += b[p] * y[i];
      for (int q = 0; q < 3; ++q) M[p][q] += b[p] * b[q];
    }
  }
  // Gaussian elimination with partial pivoting on the 3x3 normal equations.
  int idx[3] = {0, 1, 2};
  for (int c = 0; c < 3; ++c) {
    int piv = c;
    for (int p = c + 1; p < 3; ++p) {
      if (std::abs(M[idx[p]][c]) > std::abs(M[idx[piv]][c])) piv = p;
    }
    std::swap(idx[c], idx[piv]);
    for (int p = c + 1; p < 3; ++p) {
      const double f = M[idx[p]][c] / M[idx[c]][c];
      for (int q = c; q < 3; ++q) M[idx[p]][q] -= f * M[idx[c]][q];
      r[idx[p]] -= f * r[idx[c]];
    }
  }
  double x[3];
  for (int c = 2; c >= 0; --c) {
    double acc = r[idx[c]];
    for (int q = c + 1; q < 3; ++q) acc -= M[idx[c]][q] * x[q];
    x[c] = acc / M[idx[c]][c];
  }
  SinusoidFit fit;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double e = y[i] - (x[0] * std::cos(w * t[i]) + x[1] * std::sin(w * t[i]) + x[2]);
    fit.residual += e * e;
  }
  fit.residual = std::sqrt(fit.residual / static_cast<double>(t.size()));
  fit.amplitude = std::hypot(x[0], x[1]);
  return fit;
}

}  // namespace

DispersionResult measure_dispersion(int k, double amplitude, int n, double dt, int periods) {
  if (k < 1) throw InvalidInput("k must be >= 1");
  if (!(amplitude > 0.0)) throw InvalidInput("amplitude must be positive");
  const Grid grid(1, n);
  if (k >= grid.dealias_cutoff()) throw InvalidInput("k must lie inside the dealiased band");
  DispersionResult out;
  out.k = k;
  out.amplitude = amplitude;
  out.omega_predicted = predicted_omega(k);

  // The window spans `periods` periods of the predicted frequency; the fit
  // itself scans a wide band around it.
  const double window = periods * 2.0 * std::numbers::pi / out.omega_predicted;
  const long steps = std::lround(window / dt);
  State s{RealField::sample(grid, [&](double x) { return 1.0 + amplitude * std::cos(k * x); }), RealField(grid, 1), 0.0};
  const Rhs rhs = make_rhs(SolverConfig{});
  std::vector<double> ts, ys;
  ts.reserve(steps + 1);
  ys.reserve(steps + 1);
  for (long step = 0; step <= steps; ++step) {
    if (step > 0) {
      s = rk4_step(s, dt, rhs);
      s.t = step * dt;
    }
    ts.push_back(s.t);
    ys.push_back(to_spectral(s.n).at(0, k).real() / amplitude);
  }

  const double w0 = out.omega_predicted;
  double best_w = w0, best_r = INFINITY;
  for (int i = 0; i <= 400; ++i) {
    const double w = w0 * (0.5 + i / 400.0);
    const double r = fit_at(w, ts, ys).residual;
    if (r < best_r) {
      best_r = r;
      best_w = w;
    }
  }
  double lo = best_w - w0 / 400.0, hi = best_w + w0 / 400.0;
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
    const double a = hi - g * (hi - lo);
    const double b = lo + g * (hi - lo);
    if (fit_at(a, ts, ys).residual < fit_at(b, ts, ys).residual) hi = b;
    else lo = a;
  }
  out.omega_measured = 0.5 * (lo + hi);
  const SinusoidFit fit = fit_at(out.omega_measured, ts, ys);
  out.fit_residual = fit.residual;
  out.fit_ok = fit.amplitude > 0.1 && fit.residual < 1e-2 * fit.amplitude;
  return out;
}

ScalingResult ep_mep_scaling(const std::vector<double>& amplitudes, int n) {
  const Grid grid(1, n);
  ScalingResult out;
  for (double a : amplitudes) {
    const State s{RealField::sample(grid, [&](double x) { return 1.0 + a * std::cos(x); }),
                  RealField::sample(grid, [&](double x) { return a * std::sin(x); }), 0.0};
    const Tendency m = mep_rhs(s);
    const Tendency e = ep_rhs(s);
    out.amplitudes.push_back(a);
    out.differences.push_back(std::max(max_abs_difference(m.dn, e.dn), max_abs_difference(m.dv, e.dv)));
  }
  out.slope = loglog_slope(out.amplitudes, out.differences);
  return out;
}

// ---------------------------------------------------------------- convergence

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw InvalidInput("slope needs at least two points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double m = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

double state_distance(const State& a, const State& b) {
  const int na = a.grid().points_per_axis();
  const int nb = b.grid().points_per_axis();
  if (na == nb) return std::max(max_abs_difference(a.n, b.n), max_abs_difference(a.v, b.v));
  const State& coarse = na < nb ? a : b;
  const State& fine = na < nb ? b : a;
  const int n = coarse.grid().points_per_axis();
  return std::max(max_abs_difference(coarse.n, resample(fine.n, n)), max_abs_difference(coarse.v, resample(fine.v, n)));
}

std::string ConvergenceResult::to_text() const {
  std::ostringstream os;
  os << "mode = " << mode << '\n';
  for (std::size_t i = 0; i < parameters.size(); ++i) {
    os << (mode == "temporal" ? "dt" : "n") << '[' << i << "] = " << format_double(parameters[i]) << '\n'
       << "error[" << i << "] = " << format_double(errors[i]) << '\n';
  }
  for (std::size_t i = 0; i < orders.size(); ++i) os << "order[" << i << "] = " << format_double(orders[i]) << '\n';
  if (!std::isnan(observed_order)) os << "observed_order = " << format_double(observed_order) << '\n';
  return os.str();
}

ConvergenceResult temporal_convergence(const RunConfig& cfg, int halvings) {
  if (halvings < 1) throw InvalidInput("need at least one halving");
  ConvergenceResult out;
  out.mode = "temporal";
  const State s0 = initial_state(cfg);
  SolverConfig scfg = solver_config(cfg);
  scfg.dt = cfg.dt / std::pow(2.0, halvings) / 16.0;
  const State ref = final_state_of(s0, scfg);
  for (int h = 0; h <= halvings; ++h) {
    scfg.dt = cfg.dt / std::pow(2.0, h);
    out.parameters.push_back(scfg.dt);
    out.errors.push_back(state_distance(final_state_of(s0, scfg), ref));
  }
  for (std::size_t i = 1; i < out.errors.size(); ++i) out.orders.push_back(std::log2(out.errors[i - 1] / out.errors[i]));
  out.observed_order = loglog_slope(out.parameters, out.errors);
  return out;
}

ConvergenceResult spatial_convergence(const RunConfig& cfg, const std::vector<int>& sizes) {
  if (sizes.empty()) throw InvalidInput("need at least one grid size");
  ConvergenceResult out;
  out.mode = "spatial";
  RunConfig c = cfg;
  const SolverConfig scfg = solver_config(cfg);
  c.grid_n = 2 * *std::max_element(sizes.begin(), sizes.end());
  const State ref = final_state_of(initial_state(c), scfg);
  for (int n : sizes) {
    c.grid_n = n;
    out.parameters.push_back(n);
    out.errors.push_back(state_distance(final_state_of(initial_state(c), scfg), ref));
  }
  // Errors fall exponentially until round-off; an algebraic order means nothing here.
  out.observed_order = std::numeric_limits<double>::quiet_NaN();
  return out;
}

double AmplificationResult::spread() const {
  const auto [lo, hi] = std::minmax_element(factors.begin(), factors.end());
  return *hi / *lo;
}

AmplificationResult perturbation_amplification(const RunConfig& cfg, const std::vector<double>& deltas,
                                               std::uint64_t seed) {
  const State s0 = initial_state(cfg);
  const SolverConfig scfg = solver_config(cfg);
  const State base = final_state_of(s0, scfg);
  std::mt19937_64 rng(seed);
  const int band = std::max(1, cfg.grid_n / 8);
  RealField wn = random_band_limited(s0.grid(), band, rng, 1.0, false);
  RealField wv = random_band_limited_vector(s0.grid(), band, rng);
  const double norm = std::max(max_abs_of(wn), max_abs_of(wv));
  wn *= 1.0 / norm;
  wv *= 1.0 / norm;
  AmplificationResult out;
  for (double d : deltas) {
    State p = s0;
    p.n.axpy(d, wn);
    p.v.axpy(d, wv);
    out.deltas.push_back(d);
    out.factors.push_back(state_distance(final_state_of(p, scfg), base) / d);
  }
  return out;
}

DriftStudy h1_drift_study(const RunConfig& cfg, const std::vector<double>& dts) {
  DriftStudy out;
  const State s0 = initial_state(cfg);
  const double h0 = eval_functional(FunctionalKind::H1, s0);
  for (double dt : dts) {
    SolverConfig scfg = solver_config(cfg);
    scfg.dt = dt;
    scfg.output_stride = 1;
    // The endpoint alone can sit near a zero crossing of the error; take the
    // worst step instead.
    double worst = 0.0;
    const Trajectory traj = evolve(s0, scfg, [&](const State& s, long) {
      worst = std::max(worst, std::abs(eval_functional(FunctionalKind::H1, s) - h0) / std::abs(h0));
    });
    if (traj.event) throw Error("drift study run stopped early: " + to_string(traj.event->kind));
    out.dts.push_back(dt);
    out.h1_drift.push_back(worst);
  }
  out.observed_order = loglog_slope(out.dts, out.h1_drift);
  return out;
}

}  // namespace mep
