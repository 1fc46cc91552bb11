#include "mep/fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <vector>

#include "mep/errors.hpp"

namespace mep {

namespace {

// The FFTW planner is not thread-safe; execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

Fft::Fft(int n, int dimension)
    : n_(n), dimension_(dimension), size_(static_cast<std::size_t>(n) * (dimension == 2 ? n : 1)) {
  if (n < 1 || (n & (n - 1)) != 0) {
    throw InvalidInput("FFT length must be a power of two");
  }
  if (dimension != 1 && dimension != 2) throw InvalidInput("FFT dimension must be 1 or 2");
  std::vector<std::complex<double>> scratch(size_);
  auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
  // FFTW_UNALIGNED: plans are executed on arbitrary caller buffers.
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  std::lock_guard lock(planner_mutex());
  if (dimension == 1) {
    forward_plan_ = fftw_plan_dft_1d(n, buf, buf, FFTW_FORWARD, flags);
    inverse_plan_ = fftw_plan_dft_1d(n, buf, buf, FFTW_BACKWARD, flags);
  } else {
    forward_plan_ = fftw_plan_dft_2d(n, n, buf, buf, FFTW_FORWARD, flags);
    inverse_plan_ = fftw_plan_dft_2d(n, n, buf, buf, FFTW_BACKWARD, flags);
  }
  if (!forward_plan_ || !inverse_plan_) throw Error("FFTW planning failed");
}

Fft::~Fft() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
  fftw_destroy_plan(static_cast<fftw_plan>(inverse_plan_));
}

void Fft::forward(std::span<std::complex<double>> data) const { execute(forward_plan_, data); }

void Fft::inverse(std::span<std::complex<double>> data) const { execute(inverse_plan_, data); }

void Fft::execute(void* plan, std::span<std::complex<double>> data) const {
  if (data.size() != size_) {
    throw InvalidInput("FFT buffer length mismatch");
  }
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(static_cast<fftw_plan>(plan), buf, buf);
}

}  // namespace mep
