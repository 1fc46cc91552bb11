#pragma once

#include <random>

#include "mep/field.hpp"

namespace mep {

/// Random real trigonometric polynomial with modes 0 < |k_axis| <= max_wavenumber
/// (plus a mean term when `with_mean`). Coefficients are drawn wavenumber by
/// wavenumber, so the same seed yields the same function on every grid that
/// resolves it.
RealField random_band_limited(const Grid& grid, int max_wavenumber, std::mt19937_64& rng,
                              double amplitude = 1.0, bool with_mean = true);

/// Vector field with independent random components.
RealField random_band_limited_vector(const Grid& grid, int max_wavenumber, std::mt19937_64& rng,
                                     double amplitude = 1.0);

}  // namespace mep
