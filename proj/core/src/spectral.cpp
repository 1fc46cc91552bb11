#include "mep/spectral.hpp"

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "mep/errors.hpp"
#include "mep/fft.hpp"

namespace mep {

namespace {

using cplx = std::complex<double>;

// Unnormalized transform of one component buffer (axis 0 contiguous).
void transform_component(const Grid& grid, std::span<cplx> data, bool inverse) {
  const Fft& fft = grid.fft();
  inverse ? fft.inverse(data) : fft.forward(data);
}

// Calls f(flat_index, k0, k1) for every coefficient slot; k1 = 0 when m = 1.
template <typename F>
void for_each_mode(const Grid& grid, F&& f) {
  const int n = grid.points_per_axis();
  if (grid.dimension() == 1) {
    for (int j = 0; j < n; ++j) f(static_cast<std::size_t>(j), grid.wavenumber(j), 0);
    return;
  }
  for (int j1 = 0; j1 < n; ++j1) {
    for (int j0 = 0; j0 < n; ++j0) {
      f(static_cast<std::size_t>(j1) * n + j0, grid.wavenumber(j0), grid.wavenumber(j1));
    }
  }
}

cplx symbol_value(const MultiplierSymbol& s, const Grid& grid, int k0, int k1) {
  const double k2 = static_cast<double>(k0) * k0 + static_cast<double>(k1) * k1;
  switch (s.kind) {
    case MultiplierSymbol::Kind::derivative: {
      const int k = s.axis == 0 ? k0 : k1;
      if (k == grid.nyquist()) return 0.0;
      return {0.0, static_cast<double>(k)};
    }
    case MultiplierSymbol::Kind::laplacian:
      return -k2;
    case MultiplierSymbol::Kind::bessel_power:
      if (s.power == -2.0) return 1.0 / (1.0 + k2);
      return std::pow(1.0 + k2, 0.5 * s.power);
  }
  return 0.0;
}

void check_symbol(const MultiplierSymbol& s, const Grid& grid) {
  if (s.kind == MultiplierSymbol::Kind::derivative && (s.axis < 0 || s.axis >= grid.dimension())) {
    throw InvalidInput("derivative axis " + std::to_string(s.axis) + " outside grid dimension");
  }
  if (s.kind == MultiplierSymbol::Kind::bessel_power && !std::isfinite(s.power)) {
    throw InvalidInput("Bessel power must be finite");
  }
}

}  // namespace

SpectralField to_spectral(const RealField& f) {
  if (const long bad = f.first_non_finite(); bad >= 0) {
    throw InvalidInput("non-finite sample at flat index " + std::to_string(bad));
  }
  const Grid& grid = f.grid();
  SpectralField out(grid, f.components());
  const double scale = 1.0 / static_cast<double>(grid.size());
  for (int c = 0; c < f.components(); ++c) {
    auto dst = out.component(c);
    const auto src = f.component(c);
    for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i];
    transform_component(grid, dst, false);
    for (auto& x : dst) x *= scale;
  }
  return out;
}

RealField to_grid(const SpectralField& F) {
  const Grid& grid = F.grid();
  RealField out(grid, F.components());
  std::vector<cplx> work(grid.size());
  for (int c = 0; c < F.components(); ++c) {
    const auto src = F.component(c);
    std::copy(src.begin(), src.end(), work.begin());
    transform_component(grid, work, true);
    auto dst = out.component(c);
    for (std::size_t i = 0; i < work.size(); ++i) dst[i] = work[i].real();
  }
  return out;
}

SpectralField apply_multiplier(SpectralField F, const MultiplierSymbol& symbol) {
  const Grid grid = F.grid();
  check_symbol(symbol, grid);
  for (int c = 0; c < F.components(); ++c) {
    auto coeffs = F.component(c);
    for_each_mode(grid, [&](std::size_t i, int k0, int k1) { coeffs[i] *= symbol_value(symbol, grid, k0, k1); });
  }
  return F;
}

RealField apply_multiplier(const RealField& f, const MultiplierSymbol& symbol) {
  return to_grid(apply_multiplier(to_spectral(f), symbol));
}

RealField partial(const RealField& f, int axis) {
  return apply_multiplier(f, MultiplierSymbol::derivative(axis));
}

RealField laplacian(const RealField& f) { return apply_multiplier(f, MultiplierSymbol::laplacian()); }

RealField bessel_potential(const RealField& f, double p) {
  return apply_multiplier(f, MultiplierSymbol::bessel_power(p));
}

RealField shifted_laplacian_inverse(const RealField& f, double c) {
  if (!(c > 0.0)) throw InvalidInput("shifted Laplacian inverse needs c > 0");
  const Grid& grid = f.grid();
  SpectralField F = to_spectral(f);
  for (int comp = 0; comp < F.components(); ++comp) {
    auto coeffs = F.component(comp);
    for_each_mode(grid, [&](std::size_t i, int k0, int k1) {
      const double k2 = static_cast<double>(k0) * k0 + static_cast<double>(k1) * k1;
      coeffs[i] /= -k2 - c;
    });
  }
  return to_grid(F);
}

RealField gradient(const RealField& scalar) {
  if (!scalar.is_scalar()) throw InvalidInput("gradient expects a scalar field");
  const SpectralField F = to_spectral(scalar);
  std::vector<RealField> parts;
  for (int axis = 0; axis < scalar.grid().dimension(); ++axis) {
    parts.push_back(to_grid(apply_multiplier(F, MultiplierSymbol::derivative(axis))));
  }
  return stack(parts);
}

RealField divergence(const RealField& vector) {
  const Grid& grid = vector.grid();
  if (vector.components() != grid.dimension()) {
    throw InvalidInput("divergence expects " + std::to_string(grid.dimension()) + " components, got " +
                       std::to_string(vector.components()));
  }
  const SpectralField V = to_spectral(vector);
  SpectralField out(grid, 1);
  auto acc = out.component(0);
  for (int axis = 0; axis < grid.dimension(); ++axis) {
    const auto vc = V.component(axis);
    const MultiplierSymbol d = MultiplierSymbol::derivative(axis);
    for_each_mode(grid, [&](std::size_t i, int k0, int k1) { acc[i] += symbol_value(d, grid, k0, k1) * vc[i]; });
  }
  return to_grid(out);
}

RealField dealias(const RealField& f) {
  const Grid& grid = f.grid();
  const int cut = grid.dealias_cutoff();
  SpectralField F = to_spectral(f);
  for (int c = 0; c < F.components(); ++c) {
    auto coeffs = F.component(c);
    for_each_mode(grid, [&](std::size_t i, int k0, int k1) {
      if (std::abs(k0) > cut || std::abs(k1) > cut) coeffs[i] = 0.0;
    });
  }
  return to_grid(F);
}

RealField dealiased_product(const RealField& f, const RealField& g) {
  if (!(f.grid() == g.grid())) throw InvalidInput("dealiased_product on different grids");
  const int comps = std::max(f.components(), g.components());
  if (f.components() != g.components() && !f.is_scalar() && !g.is_scalar()) {
    throw InvalidInput("dealiased_product component mismatch");
  }
  const RealField ft = dealias(f);
  const RealField gt = dealias(g);
  const std::size_t n = f.grid().size();
  RealField prod(f.grid(), comps);
  for (int c = 0; c < comps; ++c) {
    const auto a = ft.component(f.is_scalar() ? 0 : c);
    const auto b = gt.component(g.is_scalar() ? 0 : c);
    auto out = prod.component(c);
    for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
  }
  return dealias(prod);
}

double sobolev_norm(const RealField& f, double sigma) {
  const Grid& grid = f.grid();
  const SpectralField F = to_spectral(f);
  double total = 0.0;
  for (int c = 0; c < F.components(); ++c) {
    const auto coeffs = F.component(c);
    for_each_mode(grid, [&](std::size_t i, int k0, int k1) {
      const double k2 = static_cast<double>(k0) * k0 + static_cast<double>(k1) * k1;
      total += std::pow(1.0 + k2, sigma) * std::norm(coeffs[i]);
    });
  }
  return std::sqrt(grid.volume() * total);
}

double integral(const RealField& f) {
  if (!f.is_scalar()) throw InvalidInput("integral expects a scalar field");
  double sum = 0.0;
  for (double x : f.samples()) sum += x;
  return sum * f.grid().cell_volume();
}

double inner_product(const RealField& f, const RealField& g) {
  if (!(f.grid() == g.grid()) || f.components() != g.components()) {
    throw InvalidInput("inner_product on incompatible fields");
  }
  double sum = 0.0;
  const auto a = f.samples();
  const auto b = g.samples();
  for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  return sum * f.grid().cell_volume();
}

RealField resample(const RealField& f, int new_n) {
  const Grid& src = f.grid();
  const Grid dst(src.dimension(), new_n);
  const int n = src.points_per_axis();
  const bool refine = new_n > n;
  const SpectralField F = to_spectral(f);
  SpectralField G(dst, f.components());

  // Targets of one source wavenumber along one axis.
  auto targets = [&](int k) {
    std::vector<std::pair<int, double>> t;
    if (refine) {
      if (k == n / 2) {
        t.emplace_back(k, 0.5);
        t.emplace_back(-k, 0.5);
      } else {
        t.emplace_back(k, 1.0);
      }
    } else if (std::abs(k) < new_n / 2) {
      t.emplace_back(k, 1.0);
    }
    return t;
  };
  auto wrap = [new_n](int k) { return static_cast<std::size_t>((k % new_n + new_n) % new_n); };

  for (int c = 0; c < f.components(); ++c) {
    const auto in = F.component(c);
    auto out = G.component(c);
    for_each_mode(src, [&](std::size_t i, int k0, int k1) {
      for (const auto& [t0, w0] : targets(k0)) {
        if (src.dimension() == 1) {
          out[wrap(t0)] += w0 * in[i];
          continue;
        }
        for (const auto& [t1, w1] : targets(k1)) {
          out[wrap(t1) * new_n + wrap(t0)] += w0 * w1 * in[i];
        }
      }
    });
  }
  return to_grid(G);
}

RealField translate(const RealField& f, double a) {
  const Grid& grid = f.grid();
  SpectralField F = to_spectral(f);
  for (int c = 0; c < F.components(); ++c) {
    auto coeffs = F.component(c);
    for_each_mode(grid, [&](std::size_t i, int k0, int) {
      if (k0 == grid.nyquist()) {
        coeffs[i] *= std::cos(k0 * a);
      } else {
        coeffs[i] *= std::polar(1.0, -k0 * a);
      }
    });
  }
  return to_grid(F);
}

}  // namespace mep
