#include "mep/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mep/errors.hpp"
#include "mep/spectral.hpp"

namespace mep {

namespace {

void require_1d(const State& s) {
  validate(s);
  if (s.grid().dimension() != 1) throw InvalidInput("Hamiltonian structure is implemented for m = 1");
}

// Exact integral of a product of trigonometric polynomials: every factor is
// interpolated onto a grid fine enough that the product is not aliased.
double padded_integral(std::initializer_list<const RealField*> factors) {
  const Grid& grid = (*factors.begin())->grid();
  int refine = 2;
  while (refine < static_cast<int>(factors.size())) refine *= 2;
  const int fine_n = grid.points_per_axis() * refine;
  RealField product = RealField::constant(Grid(grid.dimension(), fine_n), 1.0);
  for (const RealField* f : factors) {
    const RealField fine = resample(*f, fine_n);
    for (std::size_t i = 0; i < product.samples().size(); ++i) product.samples()[i] *= fine.samples()[i];
  }
  return integral(product);
}

double abs_integral(const RealField& f) {
  double sum = 0.0;
  for (double x : f.samples()) sum += std::abs(x);
  return sum * f.grid().cell_volume();
}

RealField pointwise_product(const RealField& a, const RealField& b) {
  RealField out = a;
  for (std::size_t i = 0; i < out.samples().size(); ++i) out.samples()[i] *= b.samples()[i];
  return out;
}

double l2_norm(const Covector& c) { return std::sqrt(pairing(c, c)); }
double l2_norm(const Tangent& t) {
  return std::sqrt(inner_product(t.dv, t.dv) + inner_product(t.dn, t.dn));
}

}  // namespace

std::string to_string(FunctionalKind kind) {
  switch (kind) {
    case FunctionalKind::H1: return "H1";
    case FunctionalKind::H2: return "H2";
    case FunctionalKind::mass: return "mass";
    case FunctionalKind::momentum: return "momentum";
  }
  return "unknown";
}

double eval_functional(FunctionalKind kind, const State& s) {
  require_1d(s);
  switch (kind) {
    case FunctionalKind::H1: {
      const RealField smooth_n = bessel_potential(s.n, -2.0);
      const RealField smooth_dn = partial(smooth_n, 0);
      // Discrete Parseval makes the quadratic terms exact on the base grid.
      const double quadratic = inner_product(smooth_dn, smooth_dn) + inner_product(smooth_n, smooth_n);
      return 0.5 * (padded_integral({&s.v, &s.v, &s.n}) + quadratic);
    }
    case FunctionalKind::H2:
      return inner_product(s.n, s.v);
    case FunctionalKind::mass:
      return integral(s.n);
    case FunctionalKind::momentum:
      return integral(s.v);
  }
  return 0.0;
}

Covector var_deriv(FunctionalKind kind, const State& s) {
  require_1d(s);
  const Grid& grid = s.grid();
  switch (kind) {
    case FunctionalKind::H1:
      return {dealiased_product(s.n, s.v), 0.5 * dealiased_product(s.v, s.v) + bessel_potential(s.n, -2.0)};
    case FunctionalKind::H2:
      return {s.n, s.v};
    case FunctionalKind::mass:
      return {RealField(grid), RealField::constant(grid, 1.0)};
    case FunctionalKind::momentum:
      return {RealField::constant(grid, 1.0), RealField(grid)};
  }
  return {RealField(grid), RealField(grid)};
}

Covector fd_var_deriv(FunctionalKind kind, const State& s, double eps) {
  require_1d(s);
  if (!(eps > 0.0)) throw InvalidInput("finite-difference step must be positive");
  const Grid& grid = s.grid();
  const double dx = grid.spacing();
  Covector out{RealField(grid), RealField(grid)};
  State probe = s;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    double& vj = probe.v.samples()[j];
    const double v0 = vj;
    vj = v0 + eps;
    const double fp = eval_functional(kind, probe);
    vj = v0 - eps;
    const double fm = eval_functional(kind, probe);
    vj = v0;
    out.theta_v.samples()[j] = (fp - fm) / (2.0 * eps * dx);

    double& nj = probe.n.samples()[j];
    const double n0 = nj;
    nj = n0 + eps;
    const double gp = eval_functional(kind, probe);
    nj = n0 - eps;
    const double gm = eval_functional(kind, probe);
    nj = n0;
    out.theta_n.samples()[j] = (gp - gm) / (2.0 * eps * dx);
  }
  return out;
}

Tangent apply_D1(const Covector& c) {
  return {-partial(c.theta_n, 0), -partial(c.theta_v, 0)};
}

Tangent apply_D2(const State& s, const Covector& c, D2Sign sign) {
  const double k = sign == D2Sign::plus ? 1.0 : -1.0;
  const RealField vx = partial(s.v, 0);
  RealField dv = k * bessel_potential(partial(c.theta_v, 0), -2.0) - dealiased_product(vx, c.theta_n);
  RealField dn = dealiased_product(vx, c.theta_v) - dealiased_product(s.n, partial(c.theta_n, 0)) -
                 partial(dealiased_product(s.n, c.theta_n), 0);
  return {std::move(dv), std::move(dn)};
}

double pairing(const Covector& a, const Tangent& t) {
  return inner_product(a.theta_v, t.dv) + inner_product(a.theta_n, t.dn);
}

double pairing(const Covector& a, const Covector& b) {
  return inner_product(a.theta_v, b.theta_v) + inner_product(a.theta_n, b.theta_n);
}

ConsistencyReport rhs_consistency(const State& s, D2Sign sign, double rel_tol) {
  require_1d(s);
  const Tendency r0 = mep_rhs(s);
  const Tangent r1 = apply_D1(var_deriv(FunctionalKind::H1, s));
  const Tangent r2 = apply_D2(s, var_deriv(FunctionalKind::H2, s), sign);

  auto diff = [](const RealField& av, const RealField& an, const RealField& bv, const RealField& bn) {
    return std::max(max_abs_difference(av, bv), max_abs_difference(an, bn));
  };
  ConsistencyReport rep;
  rep.rhs_vs_d1 = diff(r0.dv, r0.dn, r1.dv, r1.dn);
  rep.rhs_vs_d2 = diff(r0.dv, r0.dn, r2.dv, r2.dn);
  rep.d1_vs_d2 = diff(r1.dv, r1.dn, r2.dv, r2.dn);
  rep.scale = std::max({s.n.max_abs(), s.v.max_abs(), r0.dn.max_abs(), r0.dv.max_abs()});
  if (rep.scale == 0.0) rep.scale = 1.0;
  rep.tolerance = rel_tol * rep.scale;
  rep.passed = rep.rhs_vs_d1 <= rep.tolerance && rep.rhs_vs_d2 <= rep.tolerance && rep.d1_vs_d2 <= rep.tolerance;
  return rep;
}

Tangent PoissonOperator::apply(const State& s, const Covector& c) const {
  switch (kind) {
    case Kind::D1:
      return apply_D1(c);
    case Kind::D2:
      return apply_D2(s, c, sign);
    case Kind::pencil: {
      Tangent a = apply_D1(c);
      const Tangent b = apply_D2(s, c, sign);
      a.dv.axpy(lambda, b.dv);
      a.dn.axpy(lambda, b.dn);
      return a;
    }
  }
  return apply_D1(c);
}

double skew_residual(const PoissonOperator& op, const State& s, const Covector& phi, const Covector& theta) {
  require_1d(s);
  const Tangent d_theta = op.apply(s, theta);
  const Tangent d_phi = op.apply(s, phi);
  const double sum = pairing(phi, d_theta) + pairing(theta, d_phi);
  const double scale = l2_norm(phi) * l2_norm(d_theta) + l2_norm(theta) * l2_norm(d_phi);
  return scale > 0.0 ? std::abs(sum) / scale : std::abs(sum);
}

double weak_lie_poisson_residual(const State& s, std::span<const Covector> tests) {
  require_1d(s);
  const auto n_samples = s.n.samples();
  const double n_min = *std::min_element(n_samples.begin(), n_samples.end());
  if (!(n_min > 0.0)) throw InvalidInput("momentum variables require min n > 0");

  const Tendency rate = mep_rhs(s);
  const RealField& n = s.n;
  const RealField& v = s.v;
  const RealField vx = partial(v, 0);
  // Phi'(n) = L^-2 n
  const RealField potential_x = partial(bessel_potential(n, -2.0), 0);

  double worst = 0.0;
  for (const Covector& test : tests) {
    const RealField& w = test.theta_v;
    const RealField& b = test.theta_n;
    const RealField wx = partial(w, 0);
    const RealField bx = partial(b, 0);

    // <d/dt (n v, n), (w, b)>
    const double lhs = padded_integral({&rate.dn, &v, &w}) + padded_integral({&n, &rate.dv, &w}) +
                       padded_integral({&rate.dn, &b});

    // <(M, n), ([w, dH/dM], L_w dH/dn - L_{dH/dM} b)>, dH/dM = -v,
    // dH/dn = v^2/2 - Phi'(n), L_w a = w a_x.
    const double bracket = padded_integral({&n, &v, &v, &wx}) - padded_integral({&n, &v, &w, &vx});
    const double lie_w = padded_integral({&n, &w, &v, &vx}) - padded_integral({&n, &w, &potential_x});
    const double lie_v = padded_integral({&n, &v, &bx});
    const double rhs = bracket + lie_w + lie_v;

    const double denom = std::abs(lhs) + std::abs(rhs);
    const double r = denom > 0.0 ? std::abs(lhs - rhs) / denom : 0.0;
    worst = std::max(worst, r);
  }
  return worst;
}

double jacobi_residual(const State& s, std::span<const CovectorTriple> triples, const PoissonOperator& op) {
  require_1d(s);
  auto term = [&](const Covector& a, const Covector& b, const Covector& c) {
    const Tangent du = op.apply(s, c);
    State shifted = s;
    shifted.v += du.dv;
    shifted.n += du.dn;
    const Tangent moved = op.apply(shifted, b);
    const Tangent base = op.apply(s, b);
    return pairing(a, moved) - pairing(a, base);
  };
  double worst = 0.0;
  for (const CovectorTriple& t : triples) {
    const double cyc = term(t[0], t[1], t[2]) + term(t[1], t[2], t[0]) + term(t[2], t[0], t[1]);
    const double scale = l2_norm(t[0]) * l2_norm(t[1]) * l2_norm(t[2]);
    worst = std::max(worst, scale > 0.0 ? std::abs(cyc) / scale : std::abs(cyc));
  }
  return worst;
}

double DriftTable::max() const noexcept { return std::max({H1, H2, mass, momentum}); }

DriftTable conservation_audit(std::span<const State> trajectory) {
  DriftTable table;
  if (trajectory.empty()) return table;
  const State& s0 = trajectory.front();
  const FunctionalKind kinds[] = {FunctionalKind::H1, FunctionalKind::H2, FunctionalKind::mass,
                                  FunctionalKind::momentum};
  double* slots[] = {&table.H1, &table.H2, &table.mass, &table.momentum};
  const double integrand_scale[] = {
      std::abs(eval_functional(FunctionalKind::H1, s0)),
      abs_integral(pointwise_product(s0.n, s0.v)),
      abs_integral(s0.n),
      abs_integral(s0.v),
  };
  for (int f = 0; f < 4; ++f) {
    const double f0 = eval_functional(kinds[f], s0);
    double denom = std::max(std::abs(f0), integrand_scale[f]);
    if (denom == 0.0) denom = std::numeric_limits<double>::min();
    double drift = 0.0;
    for (const State& s : trajectory) drift = std::max(drift, std::abs(eval_functional(kinds[f], s) - f0) / denom);
    *slots[f] = drift;
  }
  return table;
}

}  // namespace mep
