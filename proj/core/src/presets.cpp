#include "mep/presets.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "mep/errors.hpp"
#include "mep/random_fields.hpp"

namespace mep {

std::vector<std::string> preset_names() { return {"steady", "analytic", "gaussian", "large", "random"}; }

bool is_preset(const std::string& name) {
  const auto names = preset_names();
  return std::find(names.begin(), names.end(), name) != names.end();
}

PresetDefaults preset_defaults(const std::string& name) {
  if (name == "steady") return {0.0, 0.0};
  if (name == "analytic") return {0.2, 0.1};
  if (name == "gaussian") return {0.2, 0.1};
  if (name == "large") return {5.0, 0.1};
  if (name == "random") return {0.1, 0.1};
  throw InvalidInput("unknown preset '" + name + "'");
}

State make_preset(const std::string& name, const Grid& grid, double an, double av, std::uint64_t seed) {
  if (!is_preset(name)) throw InvalidInput("unknown preset '" + name + "'");
  State s{RealField::constant(grid, 1.0), RealField(grid, grid.dimension()), 0.0};
  if (name == "steady") return s;
  if (name == "random") {
    std::mt19937_64 rng(seed);
    const int band = std::max(1, grid.points_per_axis() / 8);
    s.n = RealField::constant(grid, 1.0) + random_band_limited(grid, band, rng, an, false);
    s.v = random_band_limited_vector(grid, band, rng, av);
    return s;
  }
  const bool bump = name == "gaussian";
  auto profile = [bump](double c) { return bump ? std::exp(kGaussianWidth * (c - 1.0)) : c; };
  if (grid.dimension() == 1) {
    s.n = RealField::sample(grid, [&](double x) { return 1.0 + an * profile(std::cos(x)); });
    s.v = RealField::sample(grid, [&](double x) { return av * std::sin(x); });
  } else {
    s.n = RealField::sample(grid, [&](double x, double y) { return 1.0 + an * profile(std::cos(x) * std::cos(y)); });
    s.v = stack({RealField::sample(grid, [&](double x, double) { return av * std::sin(x); }),
                 RealField::sample(grid, [&](double, double y) { return av * std::sin(y); })});
  }
  return s;
}

State make_preset(const std::string& name, const Grid& grid) {
  const PresetDefaults d = preset_defaults(name);
  return make_preset(name, grid, d.amplitude_n, d.amplitude_v);
}

}  // namespace mep
