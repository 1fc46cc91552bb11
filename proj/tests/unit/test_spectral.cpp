#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "mep/errors.hpp"
#include "mep/fft.hpp"
#include "mep/random_fields.hpp"
#include "mep/spectral.hpp"

using namespace mep;

namespace {

constexpr double kPi = std::numbers::pi;

// O(N^2) DFT with the same sign convention as Fft::forward.
std::vector<std::complex<double>> naive_dft(const std::vector<std::complex<double>>& x) {
  const int n = static_cast<int>(x.size());
  std::vector<std::complex<double>> out(n);
  for (int k = 0; k < n; ++k) {
    for (int j = 0; j < n; ++j) out[k] += x[j] * std::polar(1.0, -2.0 * kPi * j * k / n);
  }
  return out;
}

}  // namespace

TEST(Grid, RejectsBadSizes) {
  EXPECT_THROW(Grid(1, 12), InvalidInput);
  EXPECT_THROW(Grid(1, 4), InvalidInput);
  EXPECT_THROW(Grid(3, 16), InvalidInput);
  EXPECT_NO_THROW(Grid(2, 8));
}

TEST(Grid, WavenumbersAndCutoff) {
  const Grid g(1, 16);
  EXPECT_EQ(g.wavenumber(0), 0);
  EXPECT_EQ(g.wavenumber(7), 7);
  EXPECT_EQ(g.wavenumber(9), -7);
  EXPECT_EQ(g.nyquist(), 8);
  EXPECT_EQ(g.dealias_cutoff(), 5);
  EXPECT_LT(3 * g.dealias_cutoff(), 16);
}

TEST(Fft, MatchesNaiveDft) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> d;
  for (int n : {8, 32, 128}) {
    std::vector<std::complex<double>> x(n);
    for (auto& z : x) z = {d(rng), d(rng)};
    const auto expect = naive_dft(x);
    auto got = x;
    Fft(n).forward(got);
    for (int k = 0; k < n; ++k) EXPECT_NEAR(std::abs(got[k] - expect[k]), 0.0, 1e-12 * n);
    Fft(n).inverse(got);
    for (int j = 0; j < n; ++j) EXPECT_NEAR(std::abs(got[j] / double(n) - x[j]), 0.0, 1e-14);
  }
}

TEST(Spectral, CoefficientConvention) {
  const Grid g(1, 16);
  const RealField f = RealField::sample(g, [](double x) { return 2.0 + 3.0 * std::cos(2.0 * x) + std::sin(5.0 * x); });
  const SpectralField F = to_spectral(f);
  EXPECT_NEAR(F.at(0, 0).real(), 2.0, 1e-15);
  EXPECT_NEAR(F.at(0, 2).real(), 1.5, 1e-15);
  EXPECT_NEAR(F.at(0, 14).real(), 1.5, 1e-15);
  EXPECT_NEAR(F.at(0, 5).imag(), -0.5, 1e-15);
  EXPECT_NEAR(F.at(0, 11).imag(), 0.5, 1e-15);
}

TEST(Spectral, RoundTripAndParseval) {
  std::mt19937_64 rng(3);
  for (int m : {1, 2}) {
    const Grid g(m, 32);
    const RealField f = random_band_limited(g, 15, rng);
    EXPECT_LT(max_abs_difference(to_grid(to_spectral(f)), f), 1e-14 * f.max_abs());
    const SpectralField F = to_spectral(f);
    double e = 0.0;
    for (const auto& c : F.coefficients()) e += std::norm(c);
    EXPECT_NEAR(inner_product(f, f), g.volume() * e, 1e-12 * inner_product(f, f));
  }
}

TEST(Spectral, RejectsNonFiniteInput) {
  const Grid g(1, 16);
  RealField f(g);
  f.samples()[5] = std::nan("");
  try {
    to_spectral(f);
    FAIL() << "expected InvalidInput";
  } catch (const InvalidInput& e) {
    EXPECT_NE(std::string(e.what()).find('5'), std::string::npos);
  }
}

TEST(Spectral, DerivativeIsExactAndDropsNyquist) {
  const Grid g(1, 32);
  const RealField f = RealField::sample(g, [](double x) { return std::sin(3.0 * x) + std::cos(16.0 * x); });
  const RealField df = partial(f, 0);
  const RealField expect = RealField::sample(g, [](double x) { return 3.0 * std::cos(3.0 * x); });
  EXPECT_LT(max_abs_difference(df, expect), 1e-13);
}

TEST(Spectral, LaplacianKeepsNyquist) {
  const Grid g(1, 16);
  const RealField f = RealField::sample(g, [](double x) { return std::cos(8.0 * x); });
  EXPECT_LT(max_abs_difference(laplacian(f), -64.0 * f), 1e-12);
}

TEST(Spectral, TwoDimensionalGradientDivergence) {
  const Grid g(2, 16);
  const RealField f = RealField::sample(g, [](double x, double y) { return std::sin(x) * std::cos(2.0 * y); });
  const RealField lap = divergence(gradient(f));
  EXPECT_LT(max_abs_difference(lap, -5.0 * f), 1e-13);
  EXPECT_LT(max_abs_difference(laplacian(f), -5.0 * f), 1e-13);
}

TEST(Spectral, BesselPotentialAndShiftedInverse) {
  const Grid g(1, 32);
  const RealField f = RealField::sample(g, [](double x) { return 1.0 + std::cos(2.0 * x); });
  const RealField smooth = bessel_potential(f, -2.0);
  const RealField expect = RealField::sample(g, [](double x) { return 1.0 + std::cos(2.0 * x) / 5.0; });
  EXPECT_LT(max_abs_difference(smooth, expect), 1e-15);
  // (Lap - c) u = f
  const RealField u = shifted_laplacian_inverse(f, 2.0);
  EXPECT_LT(max_abs_difference(laplacian(u) - 2.0 * u, f), 1e-14);
}

TEST(Spectral, DealiasedProductMatchesConvolution) {
  std::mt19937_64 rng(9);
  const Grid g(1, 64);
  const int K = g.dealias_cutoff();
  const int n = g.points_per_axis();
  const RealField a = random_band_limited(g, K, rng);
  const RealField b = random_band_limited(g, K, rng);
  const SpectralField A = to_spectral(a), B = to_spectral(b);
  SpectralField C(g);
  for (int p = -K; p <= K; ++p) {
    for (int q = -K; q <= K; ++q) {
      if (std::abs(p + q) <= K) C.at(0, (p + q + n) % n) += A.at(0, (p + n) % n) * B.at(0, (q + n) % n);
    }
  }
  EXPECT_LT(max_abs_difference(dealiased_product(a, b), to_grid(C)), 1e-13);
}

TEST(Spectral, DealiasedProductIsExactForLowModes) {
  // Both factors inside |k| <= N/6: nothing is truncated.
  const Grid g(2, 32);
  const RealField a = RealField::sample(g, [](double x, double y) { return std::cos(2.0 * x) + std::sin(y); });
  const RealField b = RealField::sample(g, [](double x, double y) { return std::sin(3.0 * x) * std::cos(2.0 * y); });
  const RealField expect =
      RealField::sample(g, [](double x, double y) { return (std::cos(2.0 * x) + std::sin(y)) * std::sin(3.0 * x) * std::cos(2.0 * y); });
  EXPECT_LT(max_abs_difference(dealiased_product(a, b), expect), 1e-14);
}

TEST(Spectral, SobolevNormClosedForm) {
  const Grid g(1, 32);
  const RealField f = RealField::sample(g, [](double x) { return std::cos(3.0 * x); });
  // (2 pi) * 2 * (1/2)^2 * (1 + 9)^sigma
  for (double sigma : {0.0, 1.0, 2.5}) {
    EXPECT_NEAR(sobolev_norm(f, sigma), std::sqrt(kPi * std::pow(10.0, sigma)), 1e-12);
  }
}

TEST(Spectral, ResampleRoundTrip) {
  std::mt19937_64 rng(5);
  const Grid g(1, 32);
  const RealField f = random_band_limited(g, 15, rng);
  const RealField fine = resample(f, 128);
  EXPECT_LT(max_abs_difference(resample(fine, 32), f), 1e-14);
  // Fine samples interpolate the coarse field.
  for (int j = 0; j < 32; ++j) EXPECT_NEAR(fine.samples()[4 * j], f.samples()[j], 1e-14);
}

TEST(Spectral, TranslateByGridShiftIsRoll) {
  std::mt19937_64 rng(6);
  const Grid g(1, 32);
  const RealField f = random_band_limited(g, 12, rng);
  const RealField shifted = translate(f, 3 * g.spacing());
  for (int j = 0; j < 32; ++j) EXPECT_NEAR(shifted.samples()[j], f.samples()[(j + 29) % 32], 1e-13);
}

TEST(RandomFields, IndependentOfResolution) {
  std::mt19937_64 r1(42), r2(42);
  const RealField a = random_band_limited(Grid(1, 32), 6, r1);
  const RealField b = random_band_limited(Grid(1, 128), 6, r2);
  EXPECT_LT(max_abs_difference(resample(a, 128), b), 1e-14);
}
