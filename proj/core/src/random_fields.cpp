#include "mep/random_fields.hpp"

#include <cmath>

#include "mep/errors.hpp"
#include "mep/spectral.hpp"

namespace mep {

RealField random_band_limited(const Grid& grid, int max_wavenumber, std::mt19937_64& rng, double amplitude,
                              bool with_mean) {
  if (max_wavenumber < 1 || max_wavenumber >= grid.nyquist()) {
    throw InvalidInput("random field bandwidth must lie in [1, N/2)");
  }
  std::uniform_real_distribution<double> uniform(-1.0, 1.0);
  const int n = grid.points_per_axis();
  const int K = max_wavenumber;
  SpectralField F(grid, 1);
  auto coeffs = F.component(0);
  auto slot = [n](int k) { return static_cast<std::size_t>((k % n + n) % n); };

  const double mean = uniform(rng);
  if (with_mean) coeffs[0] = amplitude * mean;

  if (grid.dimension() == 1) {
    for (int k = 1; k <= K; ++k) {
      const std::complex<double> c(uniform(rng), uniform(rng));
      coeffs[slot(k)] = 0.5 * amplitude * c;
      coeffs[slot(-k)] = std::conj(coeffs[slot(k)]);
    }
    return to_grid(F);
  }
  // Upper half-plane in lexicographic order; the other half by symmetry.
  for (int k1 = 0; k1 <= K; ++k1) {
    for (int k0 = -K; k0 <= K; ++k0) {
      if (k1 == 0 && k0 <= 0) continue;
      const std::complex<double> c(uniform(rng), uniform(rng));
      coeffs[slot(k1) * n + slot(k0)] = 0.5 * amplitude * c;
      coeffs[slot(-k1) * n + slot(-k0)] = std::conj(0.5 * amplitude * c);
    }
  }
  return to_grid(F);
}

RealField random_band_limited_vector(const Grid& grid, int max_wavenumber, std::mt19937_64& rng,
                                     double amplitude) {
  std::vector<RealField> parts;
  for (int axis = 0; axis < grid.dimension(); ++axis) {
    parts.push_back(random_band_limited(grid, max_wavenumber, rng, amplitude));
  }
  return stack(parts);
}

}  // namespace mep
