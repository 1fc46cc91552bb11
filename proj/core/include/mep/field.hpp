#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "mep/grid.hpp"

namespace mep {

/// Periodic field in sample representation. Scalar fields have one
/// component; velocity fields carry `grid.dimension()` components stored one
/// after another.
class RealField {
 public:
  explicit RealField(Grid grid, int components = 1);
  RealField(Grid grid, int components, std::vector<double> samples);

  /// Samples f(x) (m = 1) or f(x, y) (m = 2) on the grid nodes.
  static RealField sample(const Grid& grid, const std::function<double(double)>& f);
  static RealField sample(const Grid& grid, const std::function<double(double, double)>& f);
  static RealField constant(const Grid& grid, double value, int components = 1);

  const Grid& grid() const noexcept { return grid_; }
  int components() const noexcept { return components_; }
  bool is_scalar() const noexcept { return components_ == 1; }

  std::span<double> samples() noexcept { return samples_; }
  std::span<const double> samples() const noexcept { return samples_; }
  std::span<double> component(int c);
  std::span<const double> component(int c) const;

  /// Copy of one component as a scalar field.
  RealField extract(int c) const;

  double max_abs() const noexcept;
  /// Index of the first non-finite sample, or -1.
  long first_non_finite() const noexcept;
  bool all_finite() const noexcept { return first_non_finite() < 0; }

  RealField& operator+=(const RealField& other);
  RealField& operator-=(const RealField& other);
  RealField& operator*=(double a) noexcept;
  /// this += a * x
  RealField& axpy(double a, const RealField& x);

  friend RealField operator+(RealField a, const RealField& b) { return a += b; }
  friend RealField operator-(RealField a, const RealField& b) { return a -= b; }
  friend RealField operator*(double a, RealField f) { return f *= a; }
  friend RealField operator-(RealField f) { return f *= -1.0; }

 private:
  void check_compatible(const RealField& other) const;

  Grid grid_;
  int components_;
  std::vector<double> samples_;
};

/// Stack scalar fields into one vector field.
RealField stack(const std::vector<RealField>& scalars);

double max_abs_difference(const RealField& a, const RealField& b);

/// Periodic field in Fourier coefficient representation,
/// u(x) = sum_k c_k exp(i k.x). Coefficients use the same flat layout as the
/// samples, with index j mapping to wavenumber grid.wavenumber(j) per axis.
class SpectralField {
 public:
  explicit SpectralField(Grid grid, int components = 1);

  const Grid& grid() const noexcept { return grid_; }
  int components() const noexcept { return components_; }

  std::span<std::complex<double>> coefficients() noexcept { return coefficients_; }
  std::span<const std::complex<double>> coefficients() const noexcept { return coefficients_; }
  std::span<std::complex<double>> component(int c);
  std::span<const std::complex<double>> component(int c) const;

  /// Coefficient of wavenumber k (m = 1).
  std::complex<double>& at(int c, int k);
  std::complex<double> at(int c, int k) const;

 private:
  Grid grid_;
  int components_;
  std::vector<std::complex<double>> coefficients_;
};

}  // namespace mep
