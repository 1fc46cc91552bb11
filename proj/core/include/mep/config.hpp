#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "mep/eulerian.hpp"
#include "mep/gevrey.hpp"

namespace mep {

enum class SolverKind { eulerian, lagrangian, compare };
std::string to_string(SolverKind kind);
std::string to_string(Model model);

/// Flat key = value run description. Every key has a default; amplitudes
/// left unset fall back to the preset's own defaults.
struct RunConfig {
  int dimension = 1;
  int grid_n = 256;
  double dt = 1e-3;
  double t_end = 1.0;
  Model model = Model::mep;
  SolverKind solver = SolverKind::eulerian;
  std::string preset = "analytic";
  std::optional<double> amplitude_n;
  std::optional<double> amplitude_v;
  std::string output_dir = "out";
  int output_stride = 100;
  std::uint64_t seed = 1;
  double blowup_threshold = 1e6;
  double blowup_tail_fraction = 0.1;
  double gevrey_s = 0.5;
  int gevrey_sigma = 2;
  int gevrey_jmax = 24;
  double compare_tolerance = 1e-6;
  double newton_tol = 1e-12;
  int newton_max_iter = 50;
};

/// Key/value pairs in file order semantics: later assignments win.
using KeyValues = std::map<std::string, std::string>;

/// Parses `key = value` lines; '#' starts a comment. Throws ConfigError on
/// malformed lines or duplicate keys.
KeyValues parse_key_values(std::string_view text);

/// Throws ConfigError on unknown keys or invalid values.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);

/// Applies `key=value` overrides (command-line) on top of a config.
void apply_override(RunConfig& cfg, std::string_view assignment);

/// Every key with its resolved value, one per line, parseable by parse_config.
std::string to_text(const RunConfig& cfg);

SolverConfig solver_config(const RunConfig& cfg);
ScaleParams scale_params(const RunConfig& cfg);

}  // namespace mep
