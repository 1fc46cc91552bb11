#include "mep/field.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mep/errors.hpp"

namespace mep {

RealField::RealField(Grid grid, int components)
    : grid_(std::move(grid)), components_(components), samples_(grid_.size() * components, 0.0) {
  if (components < 1) throw InvalidInput("field needs at least one component");
}

RealField::RealField(Grid grid, int components, std::vector<double> samples)
    : grid_(std::move(grid)), components_(components), samples_(std::move(samples)) {
  if (components < 1) throw InvalidInput("field needs at least one component");
  if (samples_.size() != grid_.size() * static_cast<std::size_t>(components)) {
    throw InvalidInput("sample count " + std::to_string(samples_.size()) +
                       " does not match grid size times components");
  }
}

RealField RealField::sample(const Grid& grid, const std::function<double(double)>& f) {
  if (grid.dimension() != 1) throw InvalidInput("one-argument sampler needs a 1-D grid");
  RealField out(grid);
  for (int j = 0; j < grid.points_per_axis(); ++j) out.samples_[j] = f(grid.coordinate(j));
  return out;
}

RealField RealField::sample(const Grid& grid, const std::function<double(double, double)>& f) {
  if (grid.dimension() != 2) throw InvalidInput("two-argument sampler needs a 2-D grid");
  RealField out(grid);
  const int n = grid.points_per_axis();
  for (int j1 = 0; j1 < n; ++j1) {
    for (int j0 = 0; j0 < n; ++j0) {
      out.samples_[static_cast<std::size_t>(j1) * n + j0] = f(grid.coordinate(j0), grid.coordinate(j1));
    }
  }
  return out;
}

RealField RealField::constant(const Grid& grid, double value, int components) {
  RealField out(grid, components);
  std::fill(out.samples_.begin(), out.samples_.end(), value);
  return out;
}

std::span<double> RealField::component(int c) {
  if (c < 0 || c >= components_) throw InvalidInput("component index out of range");
  return std::span<double>(samples_).subspan(grid_.size() * c, grid_.size());
}

std::span<const double> RealField::component(int c) const {
  if (c < 0 || c >= components_) throw InvalidInput("component index out of range");
  return std::span<const double>(samples_).subspan(grid_.size() * c, grid_.size());
}

RealField RealField::extract(int c) const {
  const auto src = component(c);
  return RealField(grid_, 1, std::vector<double>(src.begin(), src.end()));
}

double RealField::max_abs() const noexcept {
  double m = 0.0;
  for (double x : samples_) m = std::max(m, std::abs(x));
  return m;
}

long RealField::first_non_finite() const noexcept {
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    if (!std::isfinite(samples_[i])) return static_cast<long>(i);
  }
  return -1;
}

void RealField::check_compatible(const RealField& other) const {
  if (!(grid_ == other.grid_) || components_ != other.components_) {
    throw InvalidInput("field arithmetic on incompatible fields");
  }
}

RealField& RealField::operator+=(const RealField& other) {
  check_compatible(other);
  for (std::size_t i = 0; i < samples_.size(); ++i) samples_[i] += other.samples_[i];
  return *this;
}

RealField& RealField::operator-=(const RealField& other) {
  check_compatible(other);
  for (std::size_t i = 0; i < samples_.size(); ++i) samples_[i] -= other.samples_[i];
  return *this;
}

RealField& RealField::operator*=(double a) noexcept {
  for (double& x : samples_) x *= a;
  return *this;
}

RealField& RealField::axpy(double a, const RealField& x) {
  check_compatible(x);
  for (std::size_t i = 0; i < samples_.size(); ++i) samples_[i] += a * x.samples_[i];
  return *this;
}

RealField stack(const std::vector<RealField>& scalars) {
  if (scalars.empty()) throw InvalidInput("stack of zero fields");
  const Grid& grid = scalars.front().grid();
  std::vector<double> samples;
  samples.reserve(grid.size() * scalars.size());
  for (const auto& s : scalars) {
    if (!s.is_scalar() || !(s.grid() == grid)) throw InvalidInput("stack needs scalar fields on one grid");
    samples.insert(samples.end(), s.samples().begin(), s.samples().end());
  }
  return RealField(grid, static_cast<int>(scalars.size()), std::move(samples));
}

double max_abs_difference(const RealField& a, const RealField& b) { return (a - b).max_abs(); }

SpectralField::SpectralField(Grid grid, int components)
    : grid_(std::move(grid)), components_(components), coefficients_(grid_.size() * components) {
  if (components < 1) throw InvalidInput("field needs at least one component");
}

std::span<std::complex<double>> SpectralField::component(int c) {
  if (c < 0 || c >= components_) throw InvalidInput("component index out of range");
  return std::span<std::complex<double>>(coefficients_).subspan(grid_.size() * c, grid_.size());
}

std::span<const std::complex<double>> SpectralField::component(int c) const {
  if (c < 0 || c >= components_) throw InvalidInput("component index out of range");
  return std::span<const std::complex<double>>(coefficients_).subspan(grid_.size() * c, grid_.size());
}

std::complex<double>& SpectralField::at(int c, int k) {
  const int n = grid_.points_per_axis();
  return component(c)[(k % n + n) % n];
}

std::complex<double> SpectralField::at(int c, int k) const {
  const int n = grid_.points_per_axis();
  return component(c)[(k % n + n) % n];
}

}  // namespace mep
