#pragma once

// Closed-form ground-state bound for the harmonic oscillator in deformed
// space. With d = beta - alpha the auxiliary pair
//
//   K1 = d - sqrt(d^2 + 1),   K2 = d + sqrt(d^2 + 1)
//
// satisfies K1 K2 = -1, K1 + K2 = 2d, K2 - K1 = 2 sqrt(d^2 + 1), and the
// minimum of q^2 + xi^2 on the constraint boundary is
//
//   xi_min^2 = K2^2 / (2 (K2 - alpha K2^2 - beta))
//   q_min^2  = 1    / (2 (K2 - alpha K2^2 - beta))
//   E_nd     = K2 / (1 - 2 alpha K2).
//
// The Lagrange multipliers themselves are never materialized; K = 2b - 2/l
// is used throughout.

#include <cmath>

#include "gup/core.hpp"

namespace gup {

struct KPair {
  double k1 = -1.0;  ///< negative root, unphysical branch
  double k2 = 1.0;   ///< positive root, selects the minimum
};

/// Computes K2 cancellation-free for either sign of beta - alpha and derives
/// K1 = -1/K2 from the exact product identity.
inline KPair k_pair(double alpha, double beta) {
  DeformationParams::nondim(alpha, beta);  // validates the domain
  const double d = beta - alpha;
  const double s = std::sqrt(d * d + 1.0);
  KPair k;
  // d + s cancels for d < 0; (s - d)(s + d) = 1 gives the stable route.
  k.k2 = d >= 0.0 ? d + s : 1.0 / (s - d);
  k.k1 = -1.0 / k.k2;
  return k;
}

/// Minimal uncertainties and ground-state energy bound, dimensionless.
inline SolveResult harmonic_minimum(double alpha, double beta) {
  const KPair k = k_pair(alpha, beta);
  const double denom = k.k2 - alpha * k.k2 * k.k2 - beta;
  const double edenom = 1.0 - 2.0 * alpha * k.k2;
  // Both denominators are positive everywhere on alpha beta < 1/4.
  if (!(denom > 0.0) || !(edenom > 0.0))
    throw solver_error("harmonic_minimum: denominator not positive");

  SolveResult r;
  r.method = Method::ClosedForm;
  r.point.q = std::sqrt(1.0 / (2.0 * denom));
  r.point.xi = k.k2 * r.point.q;
  r.energy_nd = k.k2 / edenom;
  r.diagnostics.k2 = k.k2;
  r.diagnostics.residual =
      constraint_residual(r.point, DeformationParams::nondim(alpha, beta));
  r.diagnostics.converged = true;
  return r;
}

/// Dimensional closed form evaluated directly in the primed parameters;
/// an algebraic route independent of the K2 one, used as a consistency check.
inline double harmonic_energy_physical(const PhysicalContext& ctx,
                                       double alpha_prime, double beta_prime) {
  if (!ctx.omega)
    throw config_error("harmonic_energy_physical: omega not set");
  const Nondimensionalization nd = nondimensionalize_harmonic(ctx);
  DeformationParams::physical(alpha_prime, beta_prime, nd);  // validates

  const double hbar = ctx.hbar;
  const double m = ctx.mass;
  const double w = *ctx.omega;
  const double u = 0.5 * beta_prime * hbar * m * w -
                   0.5 * alpha_prime * hbar / (m * w);
  const double root = u + std::sqrt(1.0 + u * u);
  const double denom = 1.0 - (alpha_prime * hbar / (m * w)) * root;
  if (!(denom > 0.0))
    throw solver_error("harmonic_energy_physical: denominator not positive");
  return 0.5 * hbar * w * root / denom;
}

/// Linear approximation in the deformation parameters:
/// hbar w/2 + hbar^2 w^2 m beta'/4 + hbar^2 alpha'/(4 m).
inline double harmonic_linear(const PhysicalContext& ctx, double alpha_prime,
                              double beta_prime) {
  if (!ctx.omega) throw config_error("harmonic_linear: omega not set");
  DeformationParams::physical(alpha_prime, beta_prime,
                              nondimensionalize_harmonic(ctx));
  const double hbar = ctx.hbar;
  const double m = ctx.mass;
  const double w = *ctx.omega;
  return 0.5 * hbar * w + 0.25 * hbar * hbar * w * w * m * beta_prime +
         0.25 * hbar * hbar * alpha_prime / m;
}

/// Convenience wrapper attaching the physical energy to the closed form.
inline SolveResult harmonic_minimum_physical(const PhysicalContext& ctx,
                                             double alpha_prime,
                                             double beta_prime) {
  const Nondimensionalization nd = nondimensionalize_harmonic(ctx);
  const DeformationParams dp =
      DeformationParams::physical(alpha_prime, beta_prime, nd);
  SolveResult r = harmonic_minimum(dp.alpha(), dp.beta());
  r.energy_physical = nd.e0 * r.energy_nd;
  return r;
}

}  // namespace gup
