#include "mep/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <iomanip>
#include <limits>
#include <sstream>
#include <vector>

#include "mep/errors.hpp"
#include "mep/presets.hpp"

namespace mep {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != v.size() || v.empty()) throw ConfigError("key '" + key + "': not a number: '" + v + "'");
  return x;
}

long long to_integer(const std::string& key, const std::string& v) {
  long long x = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw ConfigError("key '" + key + "': not an integer: '" + v + "'");
  }
  return x;
}

std::string fmt(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

using Setter = std::function<void(RunConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"dimension", [](RunConfig& c, const auto& k, const auto& v) { c.dimension = static_cast<int>(to_integer(k, v)); }},
      {"grid.n", [](RunConfig& c, const auto& k, const auto& v) { c.grid_n = static_cast<int>(to_integer(k, v)); }},
      {"dt", [](RunConfig& c, const auto& k, const auto& v) { c.dt = to_double(k, v); }},
      {"t_end", [](RunConfig& c, const auto& k, const auto& v) { c.t_end = to_double(k, v); }},
      {"model",
       [](RunConfig& c, const auto& k, const auto& v) {
         if (v == "mep") c.model = Model::mep;
         else if (v == "euler_poisson") c.model = Model::euler_poisson;
         else throw ConfigError("key '" + k + "': expected mep|euler_poisson, got '" + v + "'");
       }},
      {"solver",
       [](RunConfig& c, const auto& k, const auto& v) {
         if (v == "eulerian") c.solver = SolverKind::eulerian;
         else if (v == "lagrangian") c.solver = SolverKind::lagrangian;
         else if (v == "compare") c.solver = SolverKind::compare;
         else throw ConfigError("key '" + k + "': expected eulerian|lagrangian|compare, got '" + v + "'");
       }},
      {"preset", [](RunConfig& c, const auto&, const auto& v) { c.preset = v; }},
      {"preset.amplitude_n", [](RunConfig& c, const auto& k, const auto& v) { c.amplitude_n = to_double(k, v); }},
      {"preset.amplitude_v", [](RunConfig& c, const auto& k, const auto& v) { c.amplitude_v = to_double(k, v); }},
      {"output.dir", [](RunConfig& c, const auto&, const auto& v) { c.output_dir = v; }},
      {"output.stride",
       [](RunConfig& c, const auto& k, const auto& v) { c.output_stride = static_cast<int>(to_integer(k, v)); }},
      {"seed",
       [](RunConfig& c, const auto& k, const auto& v) {
         const long long s = to_integer(k, v);
         if (s < 0) throw ConfigError("key 'seed': must be non-negative");
         c.seed = static_cast<std::uint64_t>(s);
       }},
      {"blowup.threshold", [](RunConfig& c, const auto& k, const auto& v) { c.blowup_threshold = to_double(k, v); }},
      {"blowup.tail_fraction",
       [](RunConfig& c, const auto& k, const auto& v) { c.blowup_tail_fraction = to_double(k, v); }},
      {"gevrey.s", [](RunConfig& c, const auto& k, const auto& v) { c.gevrey_s = to_double(k, v); }},
      {"gevrey.sigma",
       [](RunConfig& c, const auto& k, const auto& v) { c.gevrey_sigma = static_cast<int>(to_integer(k, v)); }},
      {"gevrey.jmax",
       [](RunConfig& c, const auto& k, const auto& v) { c.gevrey_jmax = static_cast<int>(to_integer(k, v)); }},
      {"compare.tolerance", [](RunConfig& c, const auto& k, const auto& v) { c.compare_tolerance = to_double(k, v); }},
      {"newton.tol", [](RunConfig& c, const auto& k, const auto& v) { c.newton_tol = to_double(k, v); }},
      {"newton.max_iter",
       [](RunConfig& c, const auto& k, const auto& v) { c.newton_max_iter = static_cast<int>(to_integer(k, v)); }},
  };
  return table;
}

void set_key(RunConfig& cfg, const std::string& key, const std::string& value) {
  const auto it = setters().find(key);
  if (it == setters().end()) throw ConfigError("unknown key '" + key + "'");
  it->second(cfg, key, value);
}

void check(const RunConfig& c) {
  auto fail = [](const std::string& m) { throw ConfigError(m); };
  if (c.dimension != 1 && c.dimension != 2) fail("dimension must be 1 or 2");
  if (c.grid_n < 8 || (c.grid_n & (c.grid_n - 1)) != 0) fail("grid.n must be a power of two >= 8");
  if (!(c.dt > 0.0) || !std::isfinite(c.dt)) fail("dt must be positive");
  if (!(c.t_end >= 0.0) || !std::isfinite(c.t_end)) fail("t_end must be non-negative");
  if (c.output_stride < 1) fail("output.stride must be >= 1");
  if (!(c.blowup_threshold > 0.0)) fail("blowup.threshold must be positive");
  if (!(c.blowup_tail_fraction > 0.0 && c.blowup_tail_fraction <= 1.0)) fail("blowup.tail_fraction must lie in (0, 1]");
  if (!(c.gevrey_s > 0.0 && c.gevrey_s < 1.0)) fail("gevrey.s must lie in (0, 1)");
  if (c.gevrey_sigma < 2) fail("gevrey.sigma must be >= 2");
  if (c.gevrey_jmax < 1) fail("gevrey.jmax must be >= 1");
  if (!(c.compare_tolerance > 0.0)) fail("compare.tolerance must be positive");
  if (!(c.newton_tol > 0.0)) fail("newton.tol must be positive");
  if (c.newton_max_iter < 1) fail("newton.max_iter must be >= 1");
  if (c.solver != SolverKind::eulerian && c.dimension != 1) fail("the Lagrangian solver needs dimension = 1");
  if (c.solver != SolverKind::eulerian && c.model != Model::mep) fail("the Lagrangian solver needs model = mep");
  if (!is_preset(c.preset)) fail("unknown preset '" + c.preset + "'");
  if (c.output_dir.empty()) fail("output.dir must not be empty");
}

}  // namespace

std::string to_string(SolverKind kind) {
  switch (kind) {
    case SolverKind::eulerian: return "eulerian";
    case SolverKind::lagrangian: return "lagrangian";
    case SolverKind::compare: return "compare";
  }
  return "unknown";
}

std::string to_string(Model model) { return model == Model::mep ? "mep" : "euler_poisson"; }

KeyValues parse_key_values(std::string_view text) {
  KeyValues out;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key");
    if (!out.emplace(key, value).second) {
      throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    }
  }
  return out;
}

RunConfig parse_config(std::string_view text) {
  RunConfig cfg;
  for (const auto& [key, value] : parse_key_values(text)) set_key(cfg, key, value);
  check(cfg);
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

void apply_override(RunConfig& cfg, std::string_view assignment) {
  const KeyValues kv = parse_key_values(assignment);
  if (kv.size() != 1) throw ConfigError("override must be a single key=value");
  set_key(cfg, kv.begin()->first, kv.begin()->second);
  check(cfg);
}

std::string to_text(const RunConfig& c) {
  const PresetDefaults d = preset_defaults(c.preset);
  std::ostringstream os;
  os << "dimension = " << c.dimension << '\n'
     << "grid.n = " << c.grid_n << '\n'
     << "dt = " << fmt(c.dt) << '\n'
     << "t_end = " << fmt(c.t_end) << '\n'
     << "model = " << to_string(c.model) << '\n'
     << "solver = " << to_string(c.solver) << '\n'
     << "preset = " << c.preset << '\n'
     << "preset.amplitude_n = " << fmt(c.amplitude_n.value_or(d.amplitude_n)) << '\n'
     << "preset.amplitude_v = " << fmt(c.amplitude_v.value_or(d.amplitude_v)) << '\n'
     << "output.dir = " << c.output_dir << '\n'
     << "output.stride = " << c.output_stride << '\n'
     << "seed = " << c.seed << '\n'
     << "blowup.threshold = " << fmt(c.blowup_threshold) << '\n'
     << "blowup.tail_fraction = " << fmt(c.blowup_tail_fraction) << '\n'
     << "gevrey.s = " << fmt(c.gevrey_s) << '\n'
     << "gevrey.sigma = " << c.gevrey_sigma << '\n'
     << "gevrey.jmax = " << c.gevrey_jmax << '\n'
     << "compare.tolerance = " << fmt(c.compare_tolerance) << '\n'
     << "newton.tol = " << fmt(c.newton_tol) << '\n'
     << "newton.max_iter = " << c.newton_max_iter << '\n';
  return os.str();
}

SolverConfig solver_config(const RunConfig& c) {
  SolverConfig s;
  s.dt = c.dt;
  s.t_end = c.t_end;
  s.model = c.model;
  s.blowup_threshold = c.blowup_threshold;
  s.tail_fraction = c.blowup_tail_fraction;
  s.sigma = c.gevrey_sigma;
  s.newton_tol = c.newton_tol;
  s.newton_max_iter = c.newton_max_iter;
  s.output_stride = c.output_stride;
  return s;
}

ScaleParams scale_params(const RunConfig& c) { return {c.gevrey_s, c.gevrey_sigma, c.gevrey_jmax}; }

}  // namespace mep
