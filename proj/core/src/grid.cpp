#include "mep/grid.hpp"

#include <map>
#include <mutex>
#include <numbers>
#include <string>

#include "mep/errors.hpp"
#include "mep/fft.hpp"

namespace mep {

namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

// One transform per shape for the whole process.
std::shared_ptr<const Fft> shared_fft(int dimension, int n) {
  static std::mutex m;
  static std::map<std::pair<int, int>, std::shared_ptr<const Fft>> cache;
  std::lock_guard lock(m);
  auto& slot = cache[{dimension, n}];
  if (!slot) slot = std::make_shared<const Fft>(n, dimension);
  return slot;
}

}  // namespace

Grid::Grid(int dimension, int points_per_axis) : dimension_(dimension), n_(points_per_axis) {
  if (dimension != 1 && dimension != 2) {
    throw InvalidInput("grid dimension must be 1 or 2, got " + std::to_string(dimension));
  }
  if (points_per_axis < 8 || !is_power_of_two(points_per_axis)) {
    throw InvalidInput("grid points per axis must be a power of two >= 8, got " +
                       std::to_string(points_per_axis));
  }
  size_ = dimension == 1 ? static_cast<std::size_t>(n_)
                         : static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_);
  fft_ = shared_fft(dimension_, n_);
}

double Grid::spacing() const noexcept { return 2.0 * std::numbers::pi / n_; }

double Grid::cell_volume() const noexcept {
  const double h = spacing();
  return dimension_ == 1 ? h : h * h;
}

double Grid::volume() const noexcept {
  const double L = 2.0 * std::numbers::pi;
  return dimension_ == 1 ? L : L * L;
}

}  // namespace mep
