#include "mep/gevrey.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "mep/errors.hpp"
#include "mep/spectral.hpp"

namespace mep {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void require_1d(const RealField& u) {
  if (u.grid().dimension() != 1 || !u.is_scalar()) {
    throw InvalidInput("scale norms are implemented for scalar fields on the 1-D torus");
  }
}

RealField centred(const RealField& u, double* mean_out) {
  const double mean = integral(u) / u.grid().volume();
  if (mean_out) *mean_out = mean;
  RealField out = u;
  for (double& x : out.samples()) x -= mean;
  return out;
}

// Alias-free pointwise product on a grid twice as fine.
RealField fine_product(const RealField& a, const RealField& b) {
  const int fine_n = 2 * a.grid().points_per_axis();
  RealField fa = resample(a, fine_n);
  const RealField fb = resample(b, fine_n);
  for (std::size_t i = 0; i < fa.samples().size(); ++i) fa.samples()[i] *= fb.samples()[i];
  return fa;
}

double norm_at(const RealField& u, const ScaleParams& base, double s) {
  ScaleParams p = base;
  p.s = s;
  return es_norm(u, p).value;
}

}  // namespace

void validate(const ScaleParams& p) {
  if (!(p.s > 0.0 && p.s < 1.0)) throw InvalidInput("scale parameter s must lie in (0, 1)");
  if (p.sigma < 2) throw InvalidInput("sigma must be an integer >= 2 for m = 1");
  if (p.j_max < 1) throw InvalidInput("j_max must be positive");
}

EsNorm es_norm(const RealField& u, const ScaleParams& p) {
  validate(p);
  require_1d(u);
  EsNorm out;
  out.j_max = p.j_max;
  const RealField c = centred(u, &out.mean_removed);
  const SpectralField C = to_spectral(c);
  const Grid& grid = c.grid();

  // log of 2pi (1+k^2)^sigma |c_k|^2 per mode, k != 0
  std::vector<double> log_base;
  std::vector<double> log_k;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double mag2 = std::norm(C.component(0)[i]);
    if (mag2 == 0.0) continue;
    const double k = std::abs(grid.wavenumber(static_cast<int>(i)));
    log_base.push_back(std::log(grid.volume()) + p.sigma * std::log1p(k * k) + std::log(mag2));
    log_k.push_back(std::log(k));
  }
  if (log_base.empty()) return out;

  double best = kNegInf;
  for (int j = 0; j <= p.j_max; ++j) {
    double peak = kNegInf;
    for (std::size_t m = 0; m < log_base.size(); ++m) peak = std::max(peak, log_base[m] + 2.0 * j * log_k[m]);
    double acc = 0.0;
    for (std::size_t m = 0; m < log_base.size(); ++m) acc += std::exp(log_base[m] + 2.0 * j * log_k[m] - peak);
    const double log_norm = 0.5 * (peak + std::log(acc));
    const double weighted = log_norm + j * std::log(p.s) + 2.0 * std::log(j + 1.0) - std::lgamma(j + 1.0);
    if (weighted > best) {
      best = weighted;
      out.argmax = j;
    }
  }
  out.value = std::exp(best);
  return out;
}

ProductLemmaResult product_lemma_check(const RealField& u, const RealField& v, const ScaleParams& p) {
  require_1d(u);
  require_1d(v);
  const RealField cu = centred(u, nullptr);
  const RealField cv = centred(v, nullptr);
  ProductLemmaResult r;
  r.norm_u = es_norm(cu, p).value;
  r.norm_v = es_norm(cv, p).value;
  if (r.norm_u == 0.0 || r.norm_v == 0.0) throw InvalidInput("product lemma check needs nonzero inputs");
  const EsNorm uv = es_norm(fine_product(cu, cv), p);
  r.norm_uv = uv.value;
  r.product_mean_removed = uv.mean_removed;
  r.ratio = r.norm_uv / (r.norm_u * r.norm_v);
  return r;
}

OperatorBoundResult operator_bound_check(GevreyOperator op, const RealField& u, const RealField* v, double s,
                                         double s_prime, const ScaleParams& base) {
  require_1d(u);
  if (op != GevreyOperator::P3 && !(s_prime > 0.0 && s_prime < s && s < 1.0)) {
    throw InvalidInput("operator bounds need 0 < s' < s < 1");
  }
  OperatorBoundResult r;
  const RealField cu = centred(u, nullptr);
  switch (op) {
    case GevreyOperator::P1:
    case GevreyOperator::P2: {
      // m = 1: -grad and -div are both -d/dx.
      r.lhs = norm_at(-partial(cu, 0), base, s_prime);
      r.rhs = norm_at(cu, base, s) / (s - s_prime);
      break;
    }
    case GevreyOperator::P3:
      r.lhs = norm_at(bessel_potential(cu, -2.0), base, s);
      r.rhs = norm_at(cu, base, s);
      break;
    case GevreyOperator::P4: {
      if (v == nullptr) throw InvalidInput("P4 needs a second input");
      require_1d(*v);
      const RealField cv = centred(*v, nullptr);
      r.lhs = norm_at(-fine_product(partial(cu, 0), cv), base, s_prime);
      r.rhs = norm_at(cv, base, s_prime) * norm_at(cu, base, s) / (s - s_prime);
      break;
    }
  }
  if (r.rhs == 0.0) throw InvalidInput("degenerate input: zero scale norm");
  r.ratio = r.lhs / r.rhs;
  return r;
}

AlgSides alg_inequality_sides(int k, double s, double s_prime) {
  if (k < 0) throw InvalidInput("k must be non-negative");
  if (!(s_prime > 0.0 && s_prime < s && s < 1.0)) throw InvalidInput("need 0 < s' < s < 1");
  const long double S = s;
  const long double Sp = s_prime;
  const long double K = k;
  const long double ratio = (K + 1.0L) / (K + 2.0L);
  const long double log_lhs = K * std::log(Sp) - (K + 1.0L) * std::log(S) + 2.0L * std::log(ratio) + std::log(K + 1.0L);
  return {std::exp(log_lhs), 1.0L / (S - Sp)};
}

bool alg_inequality_check(int k, double s, double s_prime) {
  const AlgSides sides = alg_inequality_sides(k, s, s_prime);
  return sides.lhs <= sides.rhs;
}

AnalyticityEstimate analyticity_radius(const RealField& u, double floor) {
  AnalyticityEstimate est;
  const Grid& grid = u.grid();
  const int half = grid.nyquist();
  // Largest |c_k| on each shell max(|k0|, |k1|) = K, for 2 <= K < N/2.
  std::vector<double> shell(half, 0.0);
  const SpectralField U = to_spectral(u);
  const int n = grid.points_per_axis();
  for (int c = 0; c < U.components(); ++c) {
    const auto coeffs = U.component(c);
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
      const int k0 = std::abs(grid.wavenumber(static_cast<int>(i % n)));
      const int k1 = grid.dimension() == 2 ? std::abs(grid.wavenumber(static_cast<int>(i / n))) : 0;
      const int K = std::max(k0, k1);
      if (K < half) shell[K] = std::max(shell[K], std::abs(coeffs[i]));
    }
  }
  std::vector<double> xs;
  std::vector<double> ys;
  for (int K = 2; K < half; ++K) {
    if (shell[K] > floor) {
      xs.push_back(K);
      ys.push_back(std::log(shell[K]));
    }
  }
  est.modes_used = static_cast<int>(xs.size());
  if (xs.size() < 8) {
    est.sigma_fit = std::numeric_limits<double>::infinity();
    if (!xs.empty()) {
      est.k_min = static_cast<int>(xs.front());
      est.k_max = static_cast<int>(xs.back());
    }
    return est;
  }
  est.k_min = static_cast<int>(xs.front());
  est.k_max = static_cast<int>(xs.back());
  const double m = static_cast<double>(xs.size());
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
  }
  const double mx = sx / m;
  const double my = sy / m;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  const double slope = sxy / sxx;
  est.sigma_fit = std::max(0.0, -slope);
  est.fit_quality = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  est.conclusive = true;
  return est;
}

std::vector<RadiusSample> radius_track(std::span<const State> trajectory, double floor) {
  std::vector<RadiusSample> out;
  out.reserve(trajectory.size());
  for (const State& s : trajectory) {
    RadiusSample r;
    r.t = s.t;
    r.n = analyticity_radius(s.n, floor);
    r.v = analyticity_radius(s.v.extract(0), floor);
    for (int c = 1; c < s.v.components(); ++c) {
      const AnalyticityEstimate e = analyticity_radius(s.v.extract(c), floor);
      if (e.sigma_fit < r.v.sigma_fit) r.v = e;
    }
    out.push_back(r);
  }
  return out;
}

bool radius_continuous(std::span<const RadiusSample> track, double max_relative_jump) {
  auto ok = [&](const AnalyticityEstimate& a, const AnalyticityEstimate& b) {
    if (!a.conclusive || !b.conclusive) return true;
    const double hi = std::max(a.sigma_fit, b.sigma_fit);
    return hi == 0.0 || std::abs(a.sigma_fit - b.sigma_fit) <= max_relative_jump * hi;
  };
  for (std::size_t i = 1; i < track.size(); ++i) {
    if (!ok(track[i - 1].n, track[i].n) || !ok(track[i - 1].v, track[i].v)) return false;
  }
  return true;
}

}  // namespace mep
