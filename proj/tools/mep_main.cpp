// Command-line front end. Every failure ends with one stderr line of the form
//   error code=<n> kind=<kind> reason="<text>"
#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "mep/config.hpp"
#include "mep/diagnostics.hpp"
#include "mep/errors.hpp"
#include "mep/experiments.hpp"

namespace {

std::string escape(std::string s) {
  for (char& c : s) {
    if (c == '"') c = '\'';
    if (c == '\n') c = ' ';
  }
  return s;
}

int fail(int code, const std::string& kind, const std::string& reason) {
  std::cerr << "error code=" << code << " kind=" << kind << " reason=\"" << escape(reason) << "\"\n";
  return code;
}

int report_event(const mep::RunOutcome& r) {
  if (!r.event) return mep::kExitOk;
  const mep::Event& e = *r.event;
  std::cerr << "error code=" << mep::kExitBlowup << " kind=" << mep::to_string(e.kind)
            << " t=" << mep::format_double(e.t) << " value=" << mep::format_double(e.value) << " reason=\""
            << escape(e.detail) << "\"\n";
  return mep::kExitBlowup;
}

mep::RunConfig load_with_overrides(const std::string& path, const std::vector<std::string>& overrides) {
  mep::RunConfig cfg = mep::load_config(path);
  for (const std::string& o : overrides) mep::apply_override(cfg, o);
  return cfg;
}

int compare_and_report(const mep::RunConfig& cfg) {
  const mep::CompareOutcome c = mep::run_compare(cfg);
  const double final_discrepancy = c.report.times.empty() ? NAN : c.report.final_discrepancy();
  std::cout << "final_discrepancy = " << mep::format_double(final_discrepancy)
            << "\ntolerance = " << mep::format_double(cfg.compare_tolerance) << '\n';
  if (c.exit_code == mep::kExitTolerance) return fail(c.exit_code, "tolerance", "final discrepancy above compare.tolerance");
  if (c.exit_code == mep::kExitBlowup) return fail(c.exit_code, "solver_failure", "a solver stopped early; see compare.report");
  return mep::kExitOk;
}

void write_report(const std::string& path, const std::string& text) {
  if (path.empty()) return;
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw mep::Error("cannot write '" + path + "'");
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pseudo-spectral solver and property checks for the modified Euler-Poisson system"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> overrides;
  auto add_config = [&](CLI::App* sub, bool required) {
    auto* opt = sub->add_option("config", config_path, "key = value run description");
    if (required) opt->required();
    sub->add_option("--set", overrides, "override, key=value (repeatable)");
  };

  auto* run = app.add_subcommand("run", "run the configured solver and write diagnostics");
  add_config(run, true);

  auto* compare = app.add_subcommand("compare", "Eulerian vs Lagrangian cross-validation");
  add_config(compare, true);

  std::string suite;
  std::uint64_t seed = 1;
  int n = 128;
  std::string report_path;
  auto* check = app.add_subcommand("check", "run a module's property suite");
  check->add_option("suite", suite, "hamiltonian | gevrey | spectral")
      ->required()
      ->check(CLI::IsMember({"hamiltonian", "gevrey", "spectral"}));
  check->add_option("--seed", seed, "random seed");
  check->add_option("--n", n, "grid points");
  check->add_option("--report", report_path, "also write the report to this file");

  int k = 1;
  double amplitude = 1e-4;
  double dt = 0.01;
  int periods = 4;
  int disp_n = 32;
  auto* dispersion = app.add_subcommand("dispersion", "measure the linear wave frequency of mode k");
  dispersion->add_option("--k", k, "wavenumber")->check(CLI::PositiveNumber);
  dispersion->add_option("--amplitude", amplitude, "perturbation amplitude");
  dispersion->add_option("--n", disp_n, "grid points");
  dispersion->add_option("--dt", dt, "time step");
  dispersion->add_option("--periods", periods, "fit window in periods");
  dispersion->add_option("--report", report_path, "also write the report to this file");

  std::string mode;
  int halvings = 2;
  auto* convergence = app.add_subcommand("convergence", "spatial or temporal convergence study");
  convergence->add_option("mode", mode, "spatial | temporal")->required()->check(CLI::IsMember({"spatial", "temporal"}));
  add_config(convergence, true);
  convergence->add_option("--halvings", halvings, "dt halvings for the temporal study");
  convergence->add_option("--report", report_path, "also write the report to this file");

  std::string snapshot;
  auto* resume = app.add_subcommand("resume", "continue a run from one of its snapshots");
  resume->add_option("snapshot", snapshot, "snapshot file inside a run directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail(mep::kExitConfig, "usage", e.what());
  }

  try {
    if (*run) {
      const mep::RunConfig cfg = load_with_overrides(config_path, overrides);
      if (cfg.solver == mep::SolverKind::compare) return compare_and_report(cfg);
      const mep::RunOutcome r = mep::run_simulation(cfg);
      std::cout << "steps = " << r.steps << "\nt = " << mep::format_double(r.final_state.t) << '\n';
      return report_event(r);
    }
    if (*compare) {
      const mep::RunConfig cfg = load_with_overrides(config_path, overrides);
      return compare_and_report(cfg);
    }
    if (*check) {
      const mep::CheckReport rep = mep::run_check_suite(suite, seed, n);
      const std::string text = rep.to_text();
      std::cout << text;
      write_report(report_path, text);
      return rep.passed() ? mep::kExitOk : fail(mep::kExitTolerance, "check", suite + " suite has violations");
    }
    if (*dispersion) {
      const mep::DispersionResult d = mep::measure_dispersion(k, amplitude, disp_n, dt, periods);
      std::string text = "k = " + std::to_string(d.k) + "\namplitude = " + mep::format_double(d.amplitude) +
                         "\nomega_measured = " + mep::format_double(d.omega_measured) +
                         "\nomega_predicted = " + mep::format_double(d.omega_predicted) +
                         "\nabs_error = " + mep::format_double(d.error()) +
                         "\nfit_residual = " + mep::format_double(d.fit_residual) +
                         "\nfit_ok = " + (d.fit_ok ? "true" : "false") + '\n';
      std::cout << text;
      write_report(report_path, text);
      return d.fit_ok ? mep::kExitOk : fail(mep::kExitTolerance, "fit", "sinusoid fit failed");
    }
    if (*convergence) {
      const mep::RunConfig cfg = load_with_overrides(config_path, overrides);
      const mep::ConvergenceResult c =
          mode == "temporal" ? mep::temporal_convergence(cfg, halvings) : mep::spatial_convergence(cfg);
      std::cout << c.to_text();
      write_report(report_path, c.to_text());
      return mep::kExitOk;
    }
    if (*resume) {
      const mep::RunOutcome r = mep::resume_simulation(snapshot);
      std::cout << "steps = " << r.steps << "\nt = " << mep::format_double(r.final_state.t) << '\n';
      return report_event(r);
    }
  } catch (const mep::ConfigError& e) {
    return fail(mep::kExitConfig, "config", e.what());
  } catch (const mep::SnapshotError& e) {
    return fail(mep::kExitConfig, "snapshot", e.what());
  } catch (const mep::InvalidInput& e) {
    return fail(mep::kExitConfig, "invalid_input", e.what());
  } catch (const mep::BreakdownError& e) {
    return fail(mep::kExitBlowup, "diffeomorphism_breakdown", e.what());
  } catch (const mep::ConvergenceError& e) {
    return fail(mep::kExitBlowup, "solver_failure", e.what());
  } catch (const std::exception& e) {
    return fail(mep::kExitConfig, "error", e.what());
  }
  return mep::kExitOk;
}
