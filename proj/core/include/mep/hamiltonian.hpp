#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "mep/eulerian.hpp"

namespace mep {

// Bihamiltonian machinery on the 1-D torus. Covectors and operator rows use
// the ordering (v, n) throughout.

enum class FunctionalKind { H1, H2, mass, momentum };

std::string to_string(FunctionalKind kind);

/// Pair of scalar fields in the (v, n) slots: a variational derivative
/// (dF/dv, dF/dn) or a test pair (w, b).
struct Covector {
  RealField theta_v;
  RealField theta_n;
};

/// Image of a Poisson operator: (dv, dn).
struct Tangent {
  RealField dv;
  RealField dn;
};

/// H1 = int 1/2 (v^2 n + (L^-2 n_x)^2 + (L^-2 n)^2), H2 = int n v,
/// mass = int n, momentum = int v. Exact for trigonometric polynomials: the
/// cubic term is integrated on a twice-refined grid.
double eval_functional(FunctionalKind kind, const State& s);

/// Closed-form variational derivatives:
///   H1: (n v, v^2/2 + L^-2 n)   H2: (n, v)   mass: (0, 1)   momentum: (1, 0)
Covector var_deriv(FunctionalKind kind, const State& s);

/// L2-gradient representative by central differences along every grid
/// basis direction: (F(s + eps e_j) - F(s - eps e_j)) / (2 eps dx).
Covector fd_var_deriv(FunctionalKind kind, const State& s, double eps = 1e-5);

/// D1 = [[0, -d], [-d, 0]].
Tangent apply_D1(const Covector& c);

/// Sign of the constant-coefficient (1,1) entry of D2.
///  plus:  +L^-2 d
///  minus: -L^-2 d
enum class D2Sign { plus, minus };

/// Frozen choice. With the `plus` sign, D2 applied to grad H2 yields
/// +L^-2 n_x in the velocity equation while mEP carries -L^-2 n_x;
/// rhs_consistency fails by exactly 2 |L^-2 n_x|. The `minus` sign
/// reproduces mEP; both signs are skew-adjoint.
inline constexpr D2Sign kD2Sign = D2Sign::minus;

/// D2 = [[+-L^-2 d, -(v_x).], [(v_x)., -(n d + d n)]], products dealiased.
Tangent apply_D2(const State& s, const Covector& c, D2Sign sign = kD2Sign);

/// <a, t> = int a_v t_v + a_n t_n
double pairing(const Covector& a, const Tangent& t);
double pairing(const Covector& a, const Covector& b);

struct ConsistencyReport {
  double rhs_vs_d1 = 0.0;
  double rhs_vs_d2 = 0.0;
  double d1_vs_d2 = 0.0;
  double scale = 1.0;
  double tolerance = 0.0;
  bool passed = false;
};

/// Compares mEP's right-hand side with D1 grad H1 and D2 grad H2 in max norm.
/// Passes when all pairwise differences are <= rel_tol * scale, scale being
/// the largest max-norm among n, v and the right-hand side.
ConsistencyReport rhs_consistency(const State& s, D2Sign sign = kD2Sign, double rel_tol = 1e-10);

struct PoissonOperator {
  enum class Kind { D1, D2, pencil };
  Kind kind = Kind::D1;
  /// Pencil D1 + lambda D2.
  double lambda = 1.0;
  D2Sign sign = kD2Sign;

  Tangent apply(const State& s, const Covector& c) const;
};

/// |<phi, D theta> + <theta, D phi>| / (|phi| |D theta| + |theta| |D phi|).
double skew_residual(const PoissonOperator& op, const State& s, const Covector& phi, const Covector& theta);

/// Weak form of the Lie-Poisson equation for m = (n v, n). For each test
/// pair (w, b) compares
///   LHS = int (n_t v + n v_t) w + n_t b      (time derivatives from mep_rhs)
///   RHS = int n v [w, -v] + n (w d(v^2/2 - L^-2 n) + v b_x)
/// with [a, b] = a b_x - b a_x, and returns max |LHS - RHS| / (|LHS| + |RHS|).
/// Requires min n > 0.
double weak_lie_poisson_residual(const State& s, std::span<const Covector> tests);

using CovectorTriple = std::array<Covector, 3>;

/// Cyclic Jacobi sum for linear functionals <a,u>, <b,u>, <c,u>:
///   a.DJ[J c] b + b.DJ[J a] c + c.DJ[J b] a,
/// where DJ[du] = J(u + du) - J(u) (exact for operators affine in (v, n)).
/// Returns the largest |sum| / (|a| |b| |c|) over the triples.
double jacobi_residual(const State& s, std::span<const CovectorTriple> triples, const PoissonOperator& op);

struct DriftTable {
  double H1 = 0.0;
  double H2 = 0.0;
  double mass = 0.0;
  double momentum = 0.0;

  double max() const noexcept;
};

/// Max over the trajectory of |F(t) - F(0)| / max(|F(0)|, int |f(0)|),
/// f being the integrand of F; the second term keeps drifts of functionals
/// that vanish initially (e.g. momentum of an odd velocity) meaningful.
DriftTable conservation_audit(std::span<const State> trajectory);

}  // namespace mep
