#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace mep {

/// In-place complex FFT over an n (m = 1) or n x n (m = 2, row-major) array,
/// backed by FFTW. Plans are created once and only executed afterwards, so an
/// instance may be shared across threads. Transforms are unnormalized.
class Fft {
 public:
  explicit Fft(int n, int dimension = 1);
  ~Fft();
  Fft(const Fft&) = delete;
  Fft& operator=(const Fft&) = delete;

  int points_per_axis() const noexcept { return n_; }
  int dimension() const noexcept { return dimension_; }
  std::size_t size() const noexcept { return size_; }

  /// X_k = sum_j x_j exp(-2 pi i j.k / n)
  void forward(std::span<std::complex<double>> data) const;
  /// x_j = sum_k X_k exp(+2 pi i j.k / n)
  void inverse(std::span<std::complex<double>> data) const;

 private:
  void execute(void* plan, std::span<std::complex<double>> data) const;

  int n_;
  int dimension_;
  std::size_t size_;
  void* forward_plan_ = nullptr;
  void* inverse_plan_ = nullptr;
};

}  // namespace mep
