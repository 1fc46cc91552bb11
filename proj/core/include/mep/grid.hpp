#pragma once

#include <cstddef>
#include <memory>

namespace mep {

class Fft;

/// Uniform periodic grid on [0, 2pi)^m with N points per axis.
///
/// Sample storage is row-major with axis 0 varying fastest, i.e. the flat
/// index of (j0, j1) is j1 * N + j0. Wavenumbers per axis are the integers
/// -N/2 < k <= N/2.
class Grid {
 public:
  Grid(int dimension, int points_per_axis);

  int dimension() const noexcept { return dimension_; }
  int points_per_axis() const noexcept { return n_; }
  std::size_t size() const noexcept { return size_; }
  double spacing() const noexcept;
  double cell_volume() const noexcept;
  /// (2 pi)^m
  double volume() const noexcept;

  double coordinate(int index) const noexcept { return index * spacing(); }
  int wavenumber(int index) const noexcept { return index <= n_ / 2 ? index : index - n_; }
  int nyquist() const noexcept { return n_ / 2; }
  /// Largest |k| kept by the 2/3 rule; 3 * cutoff < N for power-of-two N.
  int dealias_cutoff() const noexcept { return n_ / 3; }

  const Fft& fft() const noexcept { return *fft_; }

  friend bool operator==(const Grid& a, const Grid& b) noexcept {
    return a.dimension_ == b.dimension_ && a.n_ == b.n_;
  }

 private:
  int dimension_;
  int n_;
  std::size_t size_;
  std::shared_ptr<const Fft> fft_;
};

}  // namespace mep
