#pragma once

// Ground-state bound for an arbitrary admissible potential. Eliminating the
// Lagrange multiplier of the constrained minimum of q^2 + V(xi) leaves one
// scalar equation for the minimal coordinate uncertainty,
//
//   f(xi) = xi^2 (-K1 Vt - beta (K1 Vt)^2 - alpha) - 1/2 = 0,
//   K1 Vt = beta Vt - alpha - sqrt((beta Vt - alpha)^2 + Vt),  Vt = vtilde(xi),
//
// plus q_min = -xi_min K1 Vt and E_nd = q_min^2 + V(xi_min). f is scanned for
// sign changes on a log grid and each bracket is refined by bisection.
//
// f is evaluated in exactly this form on purpose. For very steep potentials
// (power-law walls at large n) the subtraction inside K1 loses the Vt term in
// double precision once (beta Vt)^2 dominates, and overflow turns f into NaN
// shortly after; past that point no sign change can be detected. That loss
// reproduces the finite existence domains of bound states in deformed space;
// see existence.hpp.
//
// The linear approximation xi_min ~ xi0 + xi1 beta (the alpha coefficient
// vanishes identically) and the linearized energy are provided alongside.

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "gup/core.hpp"
#include "gup/potential.hpp"

namespace gup {

/// Log-spaced sign-change scan configuration.
struct ScanSpec {
  double xi_min = 1e-6;
  double xi_max = 1e3;
  int points = 400;
};

inline std::vector<double> log_grid(double lo, double hi, int points) {
  if (!(lo > 0.0) || !(hi > lo) || points < 2)
    throw config_error("log_grid: need 0 < lo < hi and points >= 2");
  std::vector<double> xs(static_cast<std::size_t>(points));
  const double llo = std::log(lo);
  const double step = (std::log(hi) - llo) / (points - 1);
  for (int i = 0; i < points; ++i)
    xs[static_cast<std::size_t>(i)] = std::exp(llo + step * i);
  xs.front() = lo;
  xs.back() = hi;
  return xs;
}

namespace detail {

/// K1 * Vt in the multiplier elimination above. At exact underflow of Vt the
/// formula's own limit -2 alpha is substituted (admissible potentials have
/// Vt > 0 for xi > 0; a zero here is purely floating-point underflow).
inline double k1_vt(double vt, double alpha, double beta) {
  if (vt == 0.0) return -2.0 * alpha;
  const double u = beta * vt - alpha;
  return u - std::sqrt(u * u + vt);
}

struct Bisection {
  double x = 0.0;
  double f = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Plain bisection on a sign-change bracket, run until |f| <= tol or the
/// bracket shrinks to rounding width.
template <typename F>
Bisection bisect(F&& f, double a, double b, double fa, double fb, double tol,
                 int max_iterations = 200) {
  Bisection out;
  if (fa == 0.0) return {a, 0.0, 0, true};
  if (fb == 0.0) return {b, 0.0, 0, true};
  for (int i = 0; i < max_iterations; ++i) {
    const double mid = 0.5 * (a + b);
    const double fm = f(mid);
    ++out.iterations;
    out.x = mid;
    out.f = fm;
    if (std::abs(fm) <= tol) {
      out.converged = true;
      return out;
    }
    if ((fm < 0.0) == (fa < 0.0)) {
      a = mid;
      fa = fm;
    } else {
      b = mid;
      fb = fm;
    }
    if (b - a <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(mid))
      return out;
  }
  return out;
}

}  // namespace detail

/// Residual of the minimal-coordinate equation at xi.
inline double coordinate_equation_residual(double xi, double alpha, double beta,
                                           const PotentialEvaluator& pot) {
  if (!(xi > 0.0))
    throw std::domain_error("coordinate_equation_residual: xi must be > 0");
  const double vt = pot.vtilde(xi);
  const double k1vt = detail::k1_vt(vt, alpha, beta);
  return xi * xi * (-k1vt - beta * k1vt * k1vt - alpha) - 0.5;
}

/// Root of xi^2 sqrt(vtilde(xi)) = 1/2, the undeformed minimal coordinate.
/// The left side is strictly increasing for admissible potentials, so the
/// root is unique; it is bracketed on a log grid and refined by bisection.
inline double xi0(const PotentialEvaluator& pot, double tol = 1e-12) {
  if (!(tol > 0.0)) throw config_error("xi0: tol must be positive");
  const auto g = [&pot](double xi) {
    return xi * xi * std::sqrt(pot.vtilde(xi)) - 0.5;
  };

  const auto grid = log_grid(1e-9, 1e9, 200);
  double a = grid.front(), fa = g(a);
  bool bracketed = false;
  double b = 0.0, fb = 0.0;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    b = grid[i];
    fb = g(b);
    if (std::isfinite(fa) && std::isfinite(fb) && (fa <= 0.0) != (fb <= 0.0)) {
      bracketed = true;
      break;
    }
    a = b;
    fa = fb;
  }
  if (!bracketed)
    throw solver_error("xi0: no bracket in [1e-9, 1e9]");

  const auto r = detail::bisect(g, a, b, fa, fb, tol);
  if (!r.converged) throw solver_error("xi0: bisection did not converge");
  return r.x;
}

/// Coefficients of the linear-in-(alpha, beta) solution
/// xi_min = xi0 + xi1 beta + xi2 alpha with xi2 = 0 identically.
struct LinearCoefficients {
  double xi0 = 0.0;
  double xi1 = 0.0;
  double xi2 = 0.0;
  double vtilde0 = 0.0;   ///< vtilde(xi0)
  double dvtilde0 = 0.0;  ///< vtilde'(xi0)
  double v0 = 0.0;        ///< V(xi0)
};

inline LinearCoefficients linear_coefficients(const PotentialEvaluator& pot) {
  LinearCoefficients lc;
  lc.xi0 = xi0(pot, 1e-13);
  lc.vtilde0 = pot.vtilde(lc.xi0);
  lc.dvtilde0 = pot.dvtilde(lc.xi0);
  lc.v0 = pot.v(lc.xi0);
  const double denom = 1.0 + lc.xi0 * lc.dvtilde0 / (4.0 * lc.vtilde0);
  if (!(denom > 0.0))
    throw solver_error("linear_coefficients: degenerate potential");
  lc.xi1 = lc.xi0 * std::sqrt(lc.vtilde0) / denom;
  lc.xi2 = 0.0;
  return lc;
}

/// Energy bound linearized in the deformation parameters:
///   E_nd = xi0^2 Vt0 + V0
///        + [ (xi0^3 Vt0' sqrt(Vt0)/2 + xi0 V0' sqrt(Vt0)) /
///            (1 + xi0 Vt0'/(4 Vt0)) ] beta
///        + 2 xi0^2 sqrt(Vt0) alpha.
inline double linear_energy(const PotentialEvaluator& pot, double alpha,
                            double beta) {
  DeformationParams::nondim(alpha, beta);
  const LinearCoefficients lc = linear_coefficients(pot);
  const double sqrt_vt0 = std::sqrt(lc.vtilde0);
  const double dv0 = pot.dv(lc.xi0);
  const double denom = 1.0 + lc.xi0 * lc.dvtilde0 / (4.0 * lc.vtilde0);
  const double beta_coeff =
      (0.5 * lc.xi0 * lc.xi0 * lc.xi0 * lc.dvtilde0 * sqrt_vt0 +
       lc.xi0 * dv0 * sqrt_vt0) /
      denom;
  const double alpha_coeff = 2.0 * lc.xi0 * lc.xi0 * sqrt_vt0;
  return lc.xi0 * lc.xi0 * lc.vtilde0 + lc.v0 + beta_coeff * beta +
         alpha_coeff * alpha;
}

/// Full numerical solution of the minimal-coordinate equation. Every sign
/// change of f on the scan grid is refined; the minimum-energy root wins and
/// all roots are recorded in the diagnostics. An empty scan (no sign change)
/// means no bound state exists for these deformation parameters, reported as
/// an empty optional rather than an error.
inline std::optional<SolveResult> solve_full(const PotentialEvaluator& pot,
                                             double alpha, double beta,
                                             double tol = 1e-12,
                                             const ScanSpec& scan = {}) {
  const DeformationParams dp = DeformationParams::nondim(alpha, beta);
  if (!(tol > 0.0)) throw config_error("solve_full: tol must be positive");

  const auto f = [&](double xi) {
    return coordinate_equation_residual(xi, alpha, beta, pot);
  };

  const auto grid = log_grid(scan.xi_min, scan.xi_max, scan.points);
  std::vector<double> fs(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) fs[i] = f(grid[i]);

  std::optional<SolveResult> best;
  std::vector<double> roots;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const double fa = fs[i], fb = fs[i + 1];
    if (!std::isfinite(fa) || !std::isfinite(fb)) continue;
    if (!(fa == 0.0 || (fa < 0.0) != (fb < 0.0))) continue;

    const auto r = detail::bisect(f, grid[i], grid[i + 1], fa, fb, tol);
    roots.push_back(r.x);

    const double vt = pot.vtilde(r.x);
    const double q = -r.x * detail::k1_vt(vt, alpha, beta);
    if (!(q > 0.0) || !std::isfinite(q)) continue;
    const double energy = q * q + pot.v(r.x);

    if (!best || energy < best->energy_nd) {
      SolveResult sr;
      sr.method = Method::FullNumeric;
      sr.point = {r.x, q};
      sr.energy_nd = energy;
      sr.diagnostics.k2 = r.x / q;
      sr.diagnostics.residual = constraint_residual(sr.point, dp);
      sr.diagnostics.iterations = r.iterations;
      sr.diagnostics.converged = r.converged;
      best = sr;
    }
  }

  if (best) best->diagnostics.roots = std::move(roots);
  return best;
}

}  // namespace gup
