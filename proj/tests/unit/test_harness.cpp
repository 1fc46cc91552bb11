#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "mep/config.hpp"
#include "mep/diagnostics.hpp"
#include "mep/errors.hpp"
#include "mep/experiments.hpp"
#include "mep/hamiltonian.hpp"
#include "mep/presets.hpp"
#include "mep/snapshot.hpp"
#include "mep/spectral.hpp"

using namespace mep;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("mep_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

RunConfig small_run(const fs::path& dir, const std::string& preset = "analytic") {
  RunConfig c;
  c.grid_n = 32;
  c.dt = 0.01;
  c.t_end = 0.3;
  c.output_stride = 5;
  c.preset = preset;
  c.output_dir = dir.string();
  return c;
}

}  // namespace

TEST(Config, DefaultsAndComments) {
  const RunConfig c = parse_config("# nothing but a comment\n\n  dt = 0.5e-3  # trailing\npreset=gaussian\n");
  EXPECT_DOUBLE_EQ(c.dt, 5e-4);
  EXPECT_EQ(c.preset, "gaussian");
  EXPECT_EQ(c.grid_n, 256);
  EXPECT_EQ(c.dimension, 1);
  EXPECT_FALSE(c.amplitude_n.has_value());
}

TEST(Config, RejectsUnknownAndMalformed) {
  EXPECT_THROW(parse_config("grid.size = 64\n"), ConfigError);
  EXPECT_THROW(parse_config("dt\n"), ConfigError);
  EXPECT_THROW(parse_config("dt = fast\n"), ConfigError);
  EXPECT_THROW(parse_config("grid.n = 100\n"), ConfigError);
  EXPECT_THROW(parse_config("dt = 1\ndt = 2\n"), ConfigError);
  EXPECT_THROW(parse_config("model = navier_stokes\n"), ConfigError);
  EXPECT_THROW(parse_config("preset = nope\n"), ConfigError);
  EXPECT_THROW(parse_config("dimension = 2\nsolver = lagrangian\n"), ConfigError);
}

TEST(Config, ResolvedEchoRoundTrips) {
  RunConfig c = parse_config("grid.n = 64\nmodel = euler_poisson\nseed = 9\npreset = large\n");
  const RunConfig back = parse_config(to_text(c));
  EXPECT_EQ(to_text(back), to_text(c));
  EXPECT_DOUBLE_EQ(*back.amplitude_n, 5.0);
  EXPECT_EQ(back.model, Model::euler_poisson);
}

TEST(Config, Overrides) {
  RunConfig c;
  apply_override(c, "grid.n=64");
  EXPECT_EQ(c.grid_n, 64);
  EXPECT_THROW(apply_override(c, "bogus=1"), ConfigError);
}

TEST(Presets, DefinitionsAndDefaults) {
  const Grid g(1, 32);
  const State a = make_preset("analytic", g);
  EXPECT_NEAR(a.n.samples()[0], 1.2, 1e-15);
  EXPECT_NEAR(a.v.samples()[8], 0.1, 1e-15);  // x = pi/2
  const State b = make_preset("gaussian", g);
  EXPECT_NEAR(b.n.samples()[0], 1.2, 1e-15);
  EXPECT_NEAR(b.n.samples()[16], 1.0 + 0.2 * std::exp(-2.0 * kGaussianWidth), 1e-15);
  EXPECT_DOUBLE_EQ(preset_defaults("large").amplitude_n, 5.0);
  const State c = make_preset("analytic", Grid(2, 16));
  EXPECT_EQ(c.v.components(), 2);
  EXPECT_THROW(make_preset("nope", g), InvalidInput);
}

TEST(Presets, RandomIsSeeded) {
  const Grid g(1, 32);
  const State a = make_preset("random", g, 0.1, 0.1, 3);
  const State b = make_preset("random", g, 0.1, 0.1, 3);
  const State c = make_preset("random", g, 0.1, 0.1, 4);
  EXPECT_EQ(max_abs_difference(a.n, b.n), 0.0);
  EXPECT_GT(max_abs_difference(a.n, c.n), 0.0);
}

TEST(Diagnostics, RowRoundTripsLosslessly) {
  DiagnosticsRecord r;
  r.t = 0.1;
  r.H1 = 1.0 / 3.0;
  r.sigma_n = INFINITY;
  r.event = "blowup_tail";
  const DiagnosticsRecord back = parse_csv_row(to_csv_row(r));
  EXPECT_EQ(back.t, r.t);
  EXPECT_EQ(back.H1, r.H1);
  EXPECT_TRUE(std::isinf(back.sigma_n));
  EXPECT_EQ(back.event, "blowup_tail");
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
}

TEST(Snapshot, RoundTripIsExact) {
  const State s = make_preset("random", Grid(1, 32), 0.3, 0.2, 1);
  const Snapshot snap{kSnapshotVersion, 17, s, FlowState::identity(s)};
  const Snapshot back = deserialize(serialize(snap));
  EXPECT_EQ(back.step, 17);
  EXPECT_EQ(max_abs_difference(back.state.n, s.n), 0.0);
  EXPECT_EQ(max_abs_difference(back.state.v, s.v), 0.0);
  ASSERT_TRUE(back.flow.has_value());
  EXPECT_EQ(max_abs_difference(back.flow->eta, s.v), 0.0);
}

TEST(Snapshot, RejectsVersionGridAndCorruption) {
  const fs::path dir = fresh_dir("snapshot");
  const State s = make_preset("analytic", Grid(1, 16));
  const fs::path p = dir / "s.txt";
  write_snapshot(p, Snapshot{kSnapshotVersion, 0, s, std::nullopt});
  EXPECT_NO_THROW(read_snapshot(p, Grid(1, 16)));
  EXPECT_THROW(read_snapshot(p, Grid(1, 32)), SnapshotError);

  std::string text = slurp(p);
  std::string corrupted = text;
  corrupted[corrupted.find("field n") + 20] ^= 0x01;
  EXPECT_THROW(deserialize(corrupted), SnapshotError);
  EXPECT_THROW(deserialize(text.substr(0, text.size() / 2)), SnapshotError);

  Snapshot future{2, 0, s, std::nullopt};
  EXPECT_THROW(deserialize(serialize(future)), SnapshotError);
}

TEST(Run, SteadyPresetKeepsH1Constant) {
  const fs::path dir = fresh_dir("steady");
  RunConfig c = small_run(dir, "steady");
  c.t_end = 1.0;
  const RunOutcome r = run_simulation(c);
  EXPECT_EQ(r.exit_code, kExitOk);
  const auto rows = read_diagnostics(dir / "diagnostics.csv");
  ASSERT_FALSE(rows.empty());
  for (const auto& row : rows) EXPECT_NEAR(row.H1, rows.front().H1, 1e-12 * std::abs(rows.front().H1));
  EXPECT_DOUBLE_EQ(rows.back().t, 1.0);
  EXPECT_TRUE(fs::exists(dir / "config.resolved"));
  EXPECT_TRUE(fs::exists(dir / snapshot_name(100)));
}

TEST(Run, DiagnosticsHeaderAndMonotoneTime) {
  const fs::path dir = fresh_dir("header");
  run_simulation(small_run(dir));
  std::ifstream in(dir / "diagnostics.csv");
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "t,H1,H2,mass,momentum,sobolev_v,sobolev_n,sigma_n,sigma_v,event");
  const auto rows = read_diagnostics(dir / "diagnostics.csv");
  EXPECT_EQ(rows.size(), 7u);
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_GT(rows[i].t, rows[i - 1].t);
}

TEST(Run, IdenticalConfigGivesIdenticalCsv) {
  const fs::path a = fresh_dir("det_a"), b = fresh_dir("det_b");
  RunConfig ca = small_run(a, "random"), cb = small_run(b, "random");
  run_simulation(ca);
  run_simulation(cb);
  EXPECT_EQ(slurp(a / "diagnostics.csv"), slurp(b / "diagnostics.csv"));
}

TEST(Run, LargeAmplitudeExitsWithBlowupRow) {
  const fs::path dir = fresh_dir("large");
  RunConfig c = small_run(dir, "large");
  c.grid_n = 64;
  c.dt = 1e-3;
  c.t_end = 2.0;
  c.output_stride = 100;
  const RunOutcome r = run_simulation(c);
  EXPECT_EQ(r.exit_code, kExitBlowup);
  ASSERT_TRUE(r.event.has_value());
  const auto rows = read_diagnostics(dir / "diagnostics.csv");
  EXPECT_EQ(rows.back().event, to_string(r.event->kind));
  for (std::size_t i = 0; i + 1 < rows.size(); ++i) EXPECT_EQ(rows[i].event, "none");
}

TEST(Run, TwoDimensionalRun) {
  const fs::path dir = fresh_dir("twod");
  RunConfig c = small_run(dir);
  c.dimension = 2;
  c.grid_n = 16;
  const RunOutcome r = run_simulation(c);
  EXPECT_EQ(r.exit_code, kExitOk);
  const auto rows = read_diagnostics(dir / "diagnostics.csv");
  EXPECT_NEAR(rows.back().mass, rows.front().mass, 1e-12);
}

TEST(Run, ResumeMatchesUninterruptedRun) {
  const fs::path full = fresh_dir("resume_full"), part = fresh_dir("resume_part");
  for (SolverKind solver : {SolverKind::eulerian, SolverKind::lagrangian}) {
    RunConfig a = small_run(full), b = small_run(part);
    a.solver = b.solver = solver;
    const RunOutcome ra = run_simulation(a);
    run_simulation(b);
    // Pretend the second run died after step 10.
    for (long step : {15L, 20L, 25L, 30L}) fs::remove(part / snapshot_name(step));
    const RunOutcome rb = resume_simulation(part / snapshot_name(10));
    EXPECT_LE(max_abs_difference(ra.final_state.n, rb.final_state.n), 1e-12);
    EXPECT_LE(max_abs_difference(ra.final_state.v, rb.final_state.v), 1e-12);
    EXPECT_EQ(slurp(full / "diagnostics.csv"), slurp(part / "diagnostics.csv"));
  }
}

TEST(Compare, ExitCodes) {
  const fs::path dir = fresh_dir("compare");
  RunConfig c = small_run(dir);
  c.solver = SolverKind::compare;
  c.grid_n = 64;
  const CompareOutcome ok = run_compare(c);
  EXPECT_EQ(ok.exit_code, kExitOk);
  EXPECT_TRUE(fs::exists(dir / "compare.csv"));
  c.compare_tolerance = 1e-30;
  EXPECT_EQ(run_compare(c).exit_code, kExitTolerance);
}

TEST(Checks, SuitesPass) {
  EXPECT_TRUE(run_check_suite("spectral", 1, 64).passed());
  EXPECT_TRUE(run_check_suite("gevrey", 1, 64).passed());
  const CheckReport h = run_check_suite("hamiltonian", 1, 64);
  EXPECT_TRUE(h.passed()) << h.to_text();
  EXPECT_NE(h.to_text().find("hamiltonian.rhs_consistency.tolerance"), std::string::npos);
  EXPECT_THROW(run_check_suite("nope", 1, 64), InvalidInput);
}

TEST(Dispersion, MatchesLinearTheory) {
  for (int k : {1, 4}) {
    const DispersionResult d = measure_dispersion(k);
    EXPECT_TRUE(d.fit_ok);
    EXPECT_LT(d.error(), 1e-3) << "k=" << k;
  }
  EXPECT_NEAR(predicted_omega(4), 0.97014, 1e-5);
}

TEST(Dispersion, PhaseSpeedDecreasesWithK) {
  double prev = INFINITY;
  for (int k = 1; k <= 8; ++k) {
    const DispersionResult d = measure_dispersion(k, 1e-4, 32, 0.02, 2);
    EXPECT_LT(d.omega_measured / k, prev) << "k=" << k;
    prev = d.omega_measured / k;
  }
}

TEST(Convergence, SteadyPresetHasZeroError) {
  RunConfig c;
  c.preset = "steady";
  c.dt = 0.1;
  c.t_end = 0.5;
  const ConvergenceResult t = temporal_convergence(c, 1);
  for (double e : t.errors) EXPECT_EQ(e, 0.0);
  const ConvergenceResult s = spatial_convergence(c, {16, 32});
  for (double e : s.errors) EXPECT_EQ(e, 0.0);
}

TEST(Convergence, LogLogSlope) {
  EXPECT_NEAR(loglog_slope({1, 2, 4}, {1, 16, 256}), 4.0, 1e-12);
  EXPECT_THROW(loglog_slope({1}, {1}), InvalidInput);
}
