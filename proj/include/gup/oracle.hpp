#pragma once

// Independent verification path. Instead of the multiplier elimination, the
// uncertainty boundary is solved for q as a quadratic,
//
//   beta q^2 - xi q + (1/2 + alpha xi^2) = 0,
//
// real for xi >= sqrt(2 beta / (1 - 4 alpha beta)), and E(xi) = q(xi)^2 +
// V(xi) is minimized directly along both q-branches: dense log-grid pre-scan,
// then golden-section refinement of the best bracket. A coarse 2-d feasible
// grid search is also provided as an upper bound on the constrained minimum.

#include <cmath>
#include <limits>
#include <vector>

#include "gup/core.hpp"
#include "gup/potential.hpp"
#include "gup/solver.hpp"

namespace gup {

enum class Branch { Lower, Upper };

/// Smallest xi with a real boundary momentum (the minimal length).
inline double boundary_domain_min(double alpha, double beta) {
  DeformationParams::nondim(alpha, beta);
  if (beta == 0.0) return 0.0;
  return std::sqrt(2.0 * beta / (1.0 - 4.0 * alpha * beta));
}

/// Boundary momentum at xi. The lower branch is evaluated in the rationalized
/// form q = (1 + 2 alpha xi^2) / (xi + sqrt(D)), exact for beta = 0 as well
/// and free of the subtraction in (xi - sqrt(D)) / (2 beta).
inline double boundary_momentum(double xi, double alpha, double beta,
                                Branch branch) {
  DeformationParams::nondim(alpha, beta);
  if (!(xi > 0.0))
    throw std::domain_error("boundary_momentum: xi must be > 0");
  if (branch == Branch::Upper && beta == 0.0)
    throw std::domain_error("boundary_momentum: upper branch needs beta > 0");

  double disc = xi * xi * (1.0 - 4.0 * alpha * beta) - 2.0 * beta;
  if (disc < 0.0) {
    const double slack = 16.0 * std::numeric_limits<double>::epsilon() *
                         (xi * xi * (1.0 - 4.0 * alpha * beta) + 2.0 * beta);
    if (disc < -slack)
      throw std::domain_error("boundary_momentum: xi below the minimal length");
    disc = 0.0;  // rounding at the branch point
  }
  const double sq = std::sqrt(disc);
  if (branch == Branch::Lower)
    return (1.0 + 2.0 * alpha * xi * xi) / (xi + sq);
  return (xi + sq) / (2.0 * beta);
}

struct OracleSpec {
  int points = 2000;      ///< pre-scan density per branch
  double xi_min = 1e-6;
  double xi_max = 1e3;
  double xtol = 1e-10;    ///< golden-section xi tolerance
};

namespace detail {

struct GoldenResult {
  double x = 0.0;
  double f = 0.0;
  int iterations = 0;
};

/// Golden-section minimization on [a, b]. The caller localizes the basin
/// first; unimodality inside the bracket is then a safe working assumption.
template <typename F>
GoldenResult golden_minimize(F&& f, double a, double b, double xtol,
                             int max_iterations = 200) {
  constexpr double invphi = 0.6180339887498949;
  double x1 = b - invphi * (b - a);
  double x2 = a + invphi * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  int it = 0;
  while (b - a > xtol && it < max_iterations) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - invphi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + invphi * (b - a);
      f2 = f(x2);
    }
    ++it;
  }
  GoldenResult out;
  if (f1 <= f2) {
    out.x = x1;
    out.f = f1;
  } else {
    out.x = x2;
    out.f = f2;
  }
  out.iterations = it;
  return out;
}

}  // namespace detail

/// Direct minimization of E = q^2 + V along the boundary. Always returns a
/// value; a minimum found at the scan edge is flagged non-interior in the
/// diagnostics instead of being reported as an error.
inline SolveResult oracle_min(const PotentialEvaluator& pot, double alpha,
                              double beta, const OracleSpec& spec = {}) {
  const DeformationParams dp = DeformationParams::nondim(alpha, beta);

  double best_e = std::numeric_limits<double>::infinity();
  double best_xi = 0.0;
  double bracket_lo = 0.0, bracket_hi = 0.0;
  Branch best_branch = Branch::Lower;
  bool have_best = false;

  const double dom = boundary_domain_min(alpha, beta);
  const double lo = std::max(dom * (1.0 + 1e-14), spec.xi_min);

  for (Branch branch : {Branch::Lower, Branch::Upper}) {
    if (branch == Branch::Upper && beta == 0.0) continue;
    const auto energy = [&](double xi) {
      const double q = boundary_momentum(xi, alpha, beta, branch);
      return q * q + pot.v(xi);
    };

    const auto grid = log_grid(lo, spec.xi_max, spec.points);
    std::size_t imin = 0;
    double emin = std::numeric_limits<double>::infinity();
    std::vector<double> es(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
      es[i] = energy(grid[i]);
      if (es[i] < emin) {
        emin = es[i];
        imin = i;
      }
    }
    // A branch whose energies are all non-finite still seeds the result so a
    // fully overflowed scan reports an (infinite, non-interior) minimum
    // instead of failing.
    if (!have_best || emin < best_e) {
      best_e = emin;
      best_xi = grid[imin];
      best_branch = branch;
      bracket_lo = grid[imin > 0 ? imin - 1 : imin];
      bracket_hi = grid[imin + 1 < grid.size() ? imin + 1 : imin];
      have_best = true;
    }
  }

  const auto energy = [&](double xi) {
    const double q = boundary_momentum(xi, alpha, beta, best_branch);
    return q * q + pot.v(xi);
  };
  const auto g =
      detail::golden_minimize(energy, bracket_lo, bracket_hi, spec.xtol);

  SolveResult r;
  r.method = Method::Oracle;
  if (g.f <= best_e) {
    r.point.xi = g.x;
    r.energy_nd = g.f;
  } else {
    r.point.xi = best_xi;
    r.energy_nd = best_e;
  }
  r.point.q = boundary_momentum(r.point.xi, alpha, beta, best_branch);
  r.diagnostics.k2 = r.point.xi / r.point.q;
  r.diagnostics.residual = constraint_residual(r.point, dp);
  r.diagnostics.iterations = g.iterations;
  r.diagnostics.converged = true;
  // Interior means the refined minimizer sits strictly inside the scanned
  // range; a minimizer pushed against either end signals that no interior
  // minimum was visible at this resolution.
  const double margin = std::max(4.0 * spec.xtol,
                                 32.0 * std::numeric_limits<double>::epsilon() *
                                     r.point.xi);
  r.diagnostics.interior = std::isfinite(r.energy_nd) &&
                           r.point.xi > lo + margin &&
                           r.point.xi < spec.xi_max - margin;
  return r;
}

/// Rectangular grid for the 2-d feasible search.
struct BruteGrid {
  double xi_max = 3.0;
  double q_max = 3.0;
  int n_xi = 500;
  int n_q = 500;
};

/// Minimum of q^2 + V over all grid points satisfying the uncertainty
/// inequality. A grid with no feasible point (too coarse, wrong bounds)
/// throws. The value upper-bounds the true constrained minimum and converges
/// to it as the grid refines.
inline double brute_2d(const PotentialEvaluator& pot, double alpha, double beta,
                       const BruteGrid& grid = {}) {
  DeformationParams::nondim(alpha, beta);
  if (grid.n_xi < 2 || grid.n_q < 2 || !(grid.xi_max > 0.0) ||
      !(grid.q_max > 0.0))
    throw config_error("brute_2d: bad grid");

  const double dxi = grid.xi_max / (grid.n_xi - 1);
  const double dq = grid.q_max / (grid.n_q - 1);
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < grid.n_xi; ++i) {
    const double xi = i * dxi;
    if (!(xi > 0.0)) continue;  // the boundary never touches the axes
    const double vxi = pot.v(xi);
    for (int j = 0; j < grid.n_q; ++j) {
      const double q = j * dq;
      const double slack =
          xi * q - 0.5 - beta * q * q - alpha * xi * xi;
      if (slack < 0.0) continue;
      const double e = q * q + vxi;
      if (e < best) best = e;
    }
  }
  if (!std::isfinite(best))
    throw solver_error("brute_2d: no feasible grid point (grid too coarse)");
  return best;
}

}  // namespace gup
