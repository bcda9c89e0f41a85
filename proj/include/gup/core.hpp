#pragma once

// Core model shared by every solver in this library: dimensional inputs,
// deformation parameters of the generalized uncertainty relation
//
//   dx dp >= (hbar/2) (1 + beta' dp^2 + alpha' dx^2),
//
// the nondimensionalization units (dx0, dp0, E0) and the common result types.
// In nondimensional variables xi = dx/dx0, q = dp/dp0 the relation reads
// xi q >= 1/2 + beta q^2 + alpha xi^2 with alpha = dx0^2 alpha'/2 and
// beta = dp0^2 beta'/2.

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gup {

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

/// Missing or non-positive physical inputs (mass, omega, a, ...).
class config_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Deformation parameters outside the admissible domain
/// (negative, or product bound alpha'beta' < 1/hbar^2 resp. alpha beta < 1/4
/// violated).
class invalid_deformation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Numerical failure inside a solver (lost bracket, exhausted iterations).
class solver_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Physical setup
// ---------------------------------------------------------------------------

/// Dimensional description of the system. Exactly one of the two families is
/// expected: `omega` for the harmonic oscillator, or `a` (optionally with a
/// dimensional potential strength `u0`) for general potentials and the
/// particle-in-a-box reference.
struct PhysicalContext {
  double hbar = 1.0;
  double mass = 1.0;
  std::optional<double> omega;  ///< 1/time, harmonic oscillator frequency
  std::optional<double> a;      ///< length scale of the potential
  std::optional<double> u0;     ///< energy scale of the potential

  static PhysicalContext harmonic(double omega, double mass = 1.0,
                                  double hbar = 1.0) {
    if (!(hbar > 0.0) || !(mass > 0.0) || !(omega > 0.0))
      throw config_error("PhysicalContext: hbar, mass, omega must be positive");
    PhysicalContext ctx;
    ctx.hbar = hbar;
    ctx.mass = mass;
    ctx.omega = omega;
    return ctx;
  }

  static PhysicalContext general(double a, double mass = 1.0, double hbar = 1.0,
                                 std::optional<double> u0 = std::nullopt) {
    if (!(hbar > 0.0) || !(mass > 0.0) || !(a > 0.0))
      throw config_error("PhysicalContext: hbar, mass, a must be positive");
    if (u0 && !(*u0 > 0.0))
      throw config_error("PhysicalContext: u0 must be positive when given");
    PhysicalContext ctx;
    ctx.hbar = hbar;
    ctx.mass = mass;
    ctx.a = a;
    ctx.u0 = u0;
    return ctx;
  }
};

/// Unit triple converting between physical and dimensionless quantities.
/// Always satisfies dx0 * dp0 = hbar.
struct Nondimensionalization {
  double dx0 = 1.0;  ///< length unit
  double dp0 = 1.0;  ///< momentum unit
  double e0 = 0.5;   ///< energy unit

  double hbar() const noexcept { return dx0 * dp0; }
};

/// Harmonic-oscillator units: dx0 = sqrt(hbar/(m w)), dp0 = sqrt(hbar m w),
/// E0 = hbar w / 2 (energy measured in units of the undeformed ground state).
inline Nondimensionalization nondimensionalize_harmonic(
    const PhysicalContext& ctx) {
  if (!ctx.omega) throw config_error("nondimensionalize_harmonic: omega not set");
  Nondimensionalization nd;
  nd.dx0 = std::sqrt(ctx.hbar / (ctx.mass * *ctx.omega));
  nd.dp0 = std::sqrt(ctx.hbar * ctx.mass * *ctx.omega);
  nd.e0 = 0.5 * ctx.hbar * *ctx.omega;
  return nd;
}

/// General-potential units: dx0 = a, dp0 = hbar/a, E0 = hbar^2/(2 m a^2).
inline Nondimensionalization nondimensionalize_general(
    const PhysicalContext& ctx) {
  if (!ctx.a) throw config_error("nondimensionalize_general: a not set");
  Nondimensionalization nd;
  nd.dx0 = *ctx.a;
  nd.dp0 = ctx.hbar / *ctx.a;
  nd.e0 = ctx.hbar * ctx.hbar / (2.0 * ctx.mass * *ctx.a * *ctx.a);
  return nd;
}

// ---------------------------------------------------------------------------
// Deformation parameters
// ---------------------------------------------------------------------------

/// Deformation parameters in both representations. The nondimensional pair
/// (alpha, beta) is always present; the physical pair (alpha', beta') is kept
/// when the value was constructed from it. Both product bounds are enforced
/// at construction: every downstream formula divides by (1 - 4 alpha beta).
class DeformationParams {
 public:
  static DeformationParams nondim(double alpha, double beta) {
    check_nondim(alpha, beta);
    DeformationParams dp;
    dp.alpha_ = alpha;
    dp.beta_ = beta;
    return dp;
  }

  static DeformationParams physical(double alpha_prime, double beta_prime,
                                    const Nondimensionalization& nd) {
    if (alpha_prime < 0.0 || beta_prime < 0.0)
      throw invalid_deformation("alpha', beta' must be non-negative");
    const double hbar = nd.hbar();
    if (!(alpha_prime * beta_prime < 1.0 / (hbar * hbar)))
      throw invalid_deformation("alpha' beta' must be < 1/hbar^2");
    const double alpha = 0.5 * nd.dx0 * nd.dx0 * alpha_prime;
    const double beta = 0.5 * nd.dp0 * nd.dp0 * beta_prime;
    check_nondim(alpha, beta);
    DeformationParams dp;
    dp.alpha_ = alpha;
    dp.beta_ = beta;
    dp.alpha_prime_ = alpha_prime;
    dp.beta_prime_ = beta_prime;
    return dp;
  }

  double alpha() const noexcept { return alpha_; }
  double beta() const noexcept { return beta_; }

  bool has_physical() const noexcept { return alpha_prime_.has_value(); }
  double alpha_prime() const { return alpha_prime_.value(); }
  double beta_prime() const { return beta_prime_.value(); }

  /// Inverse of the nondimensional mapping for the given unit triple.
  std::pair<double, double> to_physical(const Nondimensionalization& nd) const {
    return {2.0 * alpha_ / (nd.dx0 * nd.dx0), 2.0 * beta_ / (nd.dp0 * nd.dp0)};
  }

 private:
  DeformationParams() = default;

  static void check_nondim(double alpha, double beta) {
    if (!(alpha >= 0.0) || !(beta >= 0.0))
      throw invalid_deformation("alpha, beta must be non-negative");
    if (!(alpha * beta < 0.25))
      throw invalid_deformation("alpha beta must be < 1/4");
  }

  double alpha_ = 0.0;
  double beta_ = 0.0;
  std::optional<double> alpha_prime_;
  std::optional<double> beta_prime_;
};

/// Maps physical deformation parameters to the nondimensional pair
/// beta = dp0^2 beta'/2, alpha = dx0^2 alpha'/2.
inline DeformationParams to_nondim(double alpha_prime, double beta_prime,
                                   const Nondimensionalization& nd) {
  return DeformationParams::physical(alpha_prime, beta_prime, nd);
}

// ---------------------------------------------------------------------------
// Result types
// ---------------------------------------------------------------------------

/// Dimensionless uncertainty pair. Both components are strictly positive for
/// any point on the feasible boundary.
struct UncertaintyPoint {
  double xi = 0.0;
  double q = 0.0;
};

/// Residual of the active uncertainty constraint,
/// xi q - 1/2 - beta q^2 - alpha xi^2. Zero on the feasible boundary,
/// positive strictly inside the feasible region.
inline double constraint_residual(const UncertaintyPoint& pt,
                                  const DeformationParams& dp) {
  return pt.xi * pt.q - 0.5 - dp.beta() * pt.q * pt.q -
         dp.alpha() * pt.xi * pt.xi;
}

enum class Method { ClosedForm, LinearApprox, FullNumeric, Oracle };

inline const char* method_name(Method m) noexcept {
  switch (m) {
    case Method::ClosedForm: return "closed_form";
    case Method::LinearApprox: return "linear_approx";
    case Method::FullNumeric: return "full_numeric";
    case Method::Oracle: return "oracle";
  }
  return "unknown";
}

struct Diagnostics {
  /// K2 = 2 beta - 2/lambda2 of the selected multiplier; equals xi/q at the
  /// solution point.
  double k2 = std::numeric_limits<double>::quiet_NaN();
  /// Constraint residual at the returned point.
  double residual = std::numeric_limits<double>::quiet_NaN();
  int iterations = 0;
  bool converged = false;
  /// Oracle only: minimum found strictly inside the scanned range.
  bool interior = true;
  /// General solver only: every refined root of the coordinate equation,
  /// ascending. The reported solution is the minimum-energy one.
  std::vector<double> roots;
};

struct SolveResult {
  UncertaintyPoint point;
  double energy_nd = 0.0;
  /// e0 * energy_nd when a unit system is attached, empty otherwise.
  std::optional<double> energy_physical;
  Method method = Method::ClosedForm;
  Diagnostics diagnostics;
};

}  // namespace gup
