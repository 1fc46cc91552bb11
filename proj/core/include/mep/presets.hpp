#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mep/eulerian.hpp"

namespace mep {

struct PresetDefaults {
  double amplitude_n = 0.0;
  double amplitude_v = 0.0;
};

/// steady:   n = 1, v = 0
/// analytic: n = 1 + a_n cos x, v = a_v sin x            (a_n = 0.2, a_v = 0.1)
/// gaussian: n = 1 + a_n exp(kappa (cos x - 1)), v = a_v sin x, kappa = 10
/// large:    as analytic with a_n = 5
/// random:   1 + band-limited noise (|k| <= N/8) drawn from the seed
/// On the 2-D torus cos x becomes cos x cos y and v = a_v (sin x, sin y).
std::vector<std::string> preset_names();
bool is_preset(const std::string& name);
PresetDefaults preset_defaults(const std::string& name);

State make_preset(const std::string& name, const Grid& grid, double amplitude_n, double amplitude_v,
                  std::uint64_t seed = 1);
/// Uses the preset's default amplitudes.
State make_preset(const std::string& name, const Grid& grid);

inline constexpr double kGaussianWidth = 10.0;

}  // namespace mep
