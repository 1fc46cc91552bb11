#pragma once

#include <span>
#include <vector>

#include "mep/eulerian.hpp"

namespace mep {

/// Parameters of the scale of norms
///   |||u|||_s = sup_j |d^j u|_{H^sigma} s^j (j+1)^2 / j!,
/// truncated at j <= j_max.
struct ScaleParams {
  double s = 0.5;
  int sigma = 2;
  int j_max = 24;
};

void validate(const ScaleParams& p);

struct EsNorm {
  double value = 0.0;
  /// Mean subtracted from the input before evaluation.
  double mean_removed = 0.0;
  /// Derivative order attaining the sup; == j_max means the cap may bind.
  int argmax = 0;
  int j_max = 0;
};

/// m = 1 only. Evaluated in log space, so large j and small s do not overflow.
EsNorm es_norm(const RealField& u, const ScaleParams& p);

struct ProductLemmaResult {
  double ratio = 0.0;  ///< |||uv||| / (|||u||| |||v|||)
  double norm_u = 0.0;
  double norm_v = 0.0;
  double norm_uv = 0.0;
  double product_mean_removed = 0.0;
};

/// Inputs are centred; the product is formed alias-free on a refined grid
/// and centred before its norm is taken.
ProductLemmaResult product_lemma_check(const RealField& u, const RealField& v, const ScaleParams& p);

/// P1 = -grad, P2 = -div, P3 = Lambda^{-2}, P4(u)v = -(Du)v.
enum class GevreyOperator { P1, P2, P3, P4 };

struct OperatorBoundResult {
  double lhs = 0.0;
  double rhs = 0.0;
  /// lhs / rhs: the implied constant for P1, P2, P4; for P3 it must be <= 1.
  double ratio = 0.0;
};

/// P1/P2: |||P n|||_{s'} against |||n|||_s / (s - s').
/// P3:    |||P3 u|||_s against |||u|||_s (s_prime ignored).
/// P4:    |||P4(u) v|||_{s'} against |||v|||_{s'} |||u|||_s / (s - s'); needs `v`.
OperatorBoundResult operator_bound_check(GevreyOperator op, const RealField& u, const RealField* v, double s,
                                         double s_prime, const ScaleParams& base);

/// Both sides of  s'^k / s^{k+1} ((k+1)/(k+2))^2 (k+1) <= 1 / (s - s').
struct AlgSides {
  long double lhs;
  long double rhs;
};
AlgSides alg_inequality_sides(int k, double s, double s_prime);
bool alg_inequality_check(int k, double s, double s_prime);

struct AnalyticityEstimate {
  /// Decay rate of ln|c_k| against |k|; +inf for trigonometric polynomials
  /// (too few modes above the floor to fit, i.e. an entire function).
  double sigma_fit = 0.0;
  int k_min = 0;
  int k_max = 0;
  int modes_used = 0;
  /// Coefficient of determination of the fit.
  double fit_quality = 0.0;
  bool conclusive = false;
};

/// Least-squares fit of ln|c_k| against |k| over modes with |k| >= 2 and
/// |c_k| > floor (m = 2 uses the largest coefficient on each max-norm shell).
/// Needs at least 8 such modes; sigma_fit is clamped at 0.
AnalyticityEstimate analyticity_radius(const RealField& u, double floor = 1e-13);

struct RadiusSample {
  double t = 0.0;
  AnalyticityEstimate n;
  AnalyticityEstimate v;
};

/// Per-snapshot estimates; for m = 2 the velocity entry is the component with
/// the smaller radius.
std::vector<RadiusSample> radius_track(std::span<const State> trajectory, double floor = 1e-13);

/// False when two adjacent conclusive, finite estimates differ by more than
/// `max_relative_jump` of the larger one.
bool radius_continuous(std::span<const RadiusSample> track, double max_relative_jump = 0.5);

}  // namespace mep
