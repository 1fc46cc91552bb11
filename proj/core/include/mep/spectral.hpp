#pragma once

#include "mep/field.hpp"

namespace mep {

/// Forward transform under u(x) = sum_k c_k exp(i k.x).
/// Throws InvalidInput naming the first non-finite sample.
SpectralField to_spectral(const RealField& f);
/// Inverse transform; imaginary parts (round-off for Hermitian data) are dropped.
RealField to_grid(const SpectralField& F);

/// Fourier multiplier symbols. Derivative symbols annihilate the Nyquist
/// mode along their axis so that derivatives of real data stay real.
struct MultiplierSymbol {
  enum class Kind { derivative, laplacian, bessel_power };

  Kind kind = Kind::laplacian;
  int axis = 0;
  double power = 0.0;

  static MultiplierSymbol derivative(int axis) { return {Kind::derivative, axis, 0.0}; }
  static MultiplierSymbol laplacian() { return {Kind::laplacian, 0, 0.0}; }
  /// Multiplication by (1 + |k|^2)^{p/2}; p = -2 is (I - Laplacian)^{-1}.
  static MultiplierSymbol bessel_power(double p) { return {Kind::bessel_power, 0, p}; }
};

SpectralField apply_multiplier(SpectralField F, const MultiplierSymbol& symbol);
RealField apply_multiplier(const RealField& f, const MultiplierSymbol& symbol);

RealField partial(const RealField& f, int axis);
RealField laplacian(const RealField& f);
/// Lambda^p = (I - Laplacian)^{p/2}.
RealField bessel_potential(const RealField& f, double p);

/// Solves (Lap - c) u = f spectrally; requires c > 0.
RealField shifted_laplacian_inverse(const RealField& f, double c);

RealField gradient(const RealField& scalar);
RealField divergence(const RealField& vector);

/// Zero every mode with some |k_axis| above the 2/3-rule cutoff.
RealField dealias(const RealField& f);
/// 2/3-rule product. Operands must have equal component counts, or one of
/// them must be scalar (the product is then taken componentwise).
RealField dealiased_product(const RealField& f, const RealField& g);

/// ( (2pi)^m sum_k (1 + |k|^2)^sigma |c_k|^2 )^{1/2}; vector fields use the
/// root sum of squares of the component norms.
double sobolev_norm(const RealField& f, double sigma);

/// Trapezoidal integral of a scalar field (exact for trigonometric
/// polynomials of degree < N).
double integral(const RealField& f);
/// Trapezoidal L2 inner product, summed over components.
double inner_product(const RealField& f, const RealField& g);

/// Fourier interpolation (new_n > N) or truncation (new_n < N) onto a grid
/// with new_n points per axis. The Nyquist mode is split symmetrically when
/// refining and dropped when coarsening.
RealField resample(const RealField& f, int new_n);

/// Shift by a: returns f(x - a) along axis 0, evaluated spectrally.
RealField translate(const RealField& f, double a);

}  // namespace mep
