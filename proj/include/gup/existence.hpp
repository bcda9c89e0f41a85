#pragma once

// Existence of bound states over the deformation-parameter plane. A pair
// (alpha, beta) admits a bound state for a given potential when the
// minimal-coordinate equation has a root, detected by the sign-change method
// on a log-spaced grid (see solver.hpp for why steep power-law walls stop
// producing sign changes beyond an n-dependent beta). Includes the beta-limit
// bisection, (alpha, beta) region scans with the universal alpha beta < 1/4
// ceiling, and the particle-in-a-box reference spectrum.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numbers>
#include <optional>
#include <ostream>
#include <thread>
#include <utility>
#include <vector>

#include "gup/core.hpp"
#include "gup/potential.hpp"
#include "gup/solver.hpp"

namespace gup {

inline ScanSpec existence_scan_defaults() { return {1e-6, 1e3, 2000}; }

/// Scan density adequate for power(n, v0): the sign-change window at the
/// potential wall narrows like 1/n in log(xi), so the grid must refine with n.
inline ScanSpec power_scan_spec(int n) {
  ScanSpec spec = existence_scan_defaults();
  if (n > 333) spec.points = 6 * n;
  return spec;
}

/// True iff the coordinate-equation residual changes sign between consecutive
/// grid points (non-finite values never pair into a sign change).
inline bool has_solution(const PotentialEvaluator& pot, double alpha,
                         double beta,
                         const ScanSpec& scan = existence_scan_defaults()) {
  DeformationParams::nondim(alpha, beta);
  const auto grid = log_grid(scan.xi_min, scan.xi_max, scan.points);
  double prev = coordinate_equation_residual(grid[0], alpha, beta, pot);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double cur = coordinate_equation_residual(grid[i], alpha, beta, pot);
    if (std::isfinite(prev) && std::isfinite(cur)) {
      if (prev == 0.0 || cur == 0.0 || (prev < 0.0) != (cur < 0.0)) return true;
    }
    prev = cur;
  }
  return false;
}

/// Supremum of beta admitting a bound state, or an unbounded marker.
struct BetaLimit {
  bool unbounded = false;
  double value = std::numeric_limits<double>::quiet_NaN();
};

/// Bisection between a known-true and known-false beta at fixed alpha.
/// n = 1 has no restriction beyond the uncertainty relation itself and
/// returns Unbounded directly; for alpha > 0 the search is capped by the
/// alpha beta < 1/4 ceiling and an all-true search below it also reports
/// Unbounded.
inline BetaLimit beta_limit(int n, double v0, double alpha = 0.0,
                            double tol = 1e-4) {
  if (n < 1) throw config_error("beta_limit: n must be >= 1");
  if (!(v0 > 0.0)) throw config_error("beta_limit: v0 must be positive");
  if (!(tol > 0.0)) throw config_error("beta_limit: tol must be positive");
  if (n == 1) return {true, std::numeric_limits<double>::infinity()};

  const PotentialEvaluator pot = evaluator(PotentialSpec::power(n, v0));
  const ScanSpec scan = power_scan_spec(n);
  const auto exists = [&](double beta) {
    return has_solution(pot, alpha, beta, scan);
  };

  double lo = 1e-3;
  if (alpha > 0.0) lo = std::min(lo, 0.125 / alpha);
  if (!exists(lo)) return {false, 0.0};

  double hi;
  if (alpha > 0.0) {
    const double ceiling = 0.25 / alpha;
    hi = ceiling * (1.0 - 1e-9);
    if (exists(hi)) return {true, std::numeric_limits<double>::infinity()};
  } else {
    hi = std::max(2.0 * lo, 1.0);
    while (exists(hi)) {
      lo = hi;
      hi *= 2.0;
      if (hi > 1e12) return {true, std::numeric_limits<double>::infinity()};
    }
  }

  for (int i = 0; i < 200 && hi - lo > tol; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (exists(mid))
      lo = mid;
    else
      hi = mid;
  }
  return {false, lo};
}

struct BetaLimitCurve {
  std::vector<int> n_values;
  std::vector<BetaLimit> limits;
  double v0 = 1.0;
  double alpha = 0.0;
};

inline BetaLimitCurve beta_limit_curve(std::vector<int> n_values, double v0,
                                       double alpha = 0.0, double tol = 1e-4) {
  BetaLimitCurve curve;
  curve.v0 = v0;
  curve.alpha = alpha;
  curve.n_values = std::move(n_values);
  curve.limits.reserve(curve.n_values.size());
  for (int n : curve.n_values)
    curve.limits.push_back(beta_limit(n, v0, alpha, tol));
  return curve;
}

/// Boolean existence matrix over an (alpha, beta) grid. Cells violating
/// alpha beta < 1/4 are forced false rather than skipped so the matrix stays
/// rectangular. reference_curve samples the alpha beta = 1/4 hyperbola over
/// the alpha grid.
struct RegionScan {
  std::vector<double> alpha_grid;
  std::vector<double> beta_grid;
  std::vector<std::uint8_t> exists;  ///< row-major [beta index][alpha index]
  int n = 1;
  double v0 = 1.0;
  std::vector<std::pair<double, double>> reference_curve;

  bool cell(std::size_t beta_index, std::size_t alpha_index) const {
    return exists[beta_index * alpha_grid.size() + alpha_index] != 0;
  }
};

inline std::vector<double> linear_grid(double lo, double hi, int points) {
  if (points < 1 || !(hi >= lo)) throw config_error("linear_grid: bad range");
  std::vector<double> xs(static_cast<std::size_t>(points));
  if (points == 1) {
    xs[0] = lo;
    return xs;
  }
  const double step = (hi - lo) / (points - 1);
  for (int i = 0; i < points; ++i) xs[static_cast<std::size_t>(i)] = lo + step * i;
  xs.back() = hi;
  return xs;
}

/// Scans the power(n, v0) family over the grids. Cells are independent; with
/// threads > 1 rows are partitioned over workers and written in place, so the
/// result does not depend on the partitioning.
inline RegionScan region_scan(int n, double v0, std::vector<double> alpha_grid,
                              std::vector<double> beta_grid, int threads = 1) {
  if (n < 1) throw config_error("region_scan: n must be >= 1");
  if (!(v0 > 0.0)) throw config_error("region_scan: v0 must be positive");
  for (const auto& grid : {alpha_grid, beta_grid}) {
    if (grid.empty()) throw config_error("region_scan: empty grid");
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (!(grid[i] > 0.0))
        throw config_error("region_scan: grid values must be positive");
      if (i && !(grid[i] > grid[i - 1]))
        throw config_error("region_scan: grid must be strictly increasing");
    }
  }

  RegionScan out;
  out.n = n;
  out.v0 = v0;
  out.alpha_grid = std::move(alpha_grid);
  out.beta_grid = std::move(beta_grid);
  out.exists.assign(out.alpha_grid.size() * out.beta_grid.size(), 0);
  out.reference_curve.reserve(out.alpha_grid.size());
  for (double a : out.alpha_grid) out.reference_curve.emplace_back(a, 0.25 / a);

  const PotentialEvaluator pot = evaluator(PotentialSpec::power(n, v0));
  const ScanSpec scan = power_scan_spec(n);

  const auto scan_rows = [&](std::size_t row_begin, std::size_t row_end) {
    for (std::size_t i = row_begin; i < row_end; ++i) {
      const double beta = out.beta_grid[i];
      for (std::size_t j = 0; j < out.alpha_grid.size(); ++j) {
        const double alpha = out.alpha_grid[j];
        if (!(alpha * beta < 0.25)) continue;
        if (has_solution(pot, alpha, beta, scan))
          out.exists[i * out.alpha_grid.size() + j] = 1;
      }
    }
  };

  const std::size_t rows = out.beta_grid.size();
  if (threads <= 1 || rows < 2) {
    scan_rows(0, rows);
  } else {
    const std::size_t workers =
        std::min<std::size_t>(static_cast<std::size_t>(threads), rows);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (rows + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t begin = w * chunk;
      const std::size_t end = std::min(rows, begin + chunk);
      if (begin >= end) break;
      pool.emplace_back(scan_rows, begin, end);
    }
    for (auto& t : pool) t.join();
  }
  return out;
}

/// Exact particle-in-a-box level in deformed space with minimal length,
/// E_k = tan^2(pi hbar k sqrt(beta')/(2a)) / (2 m beta'), well width 2a.
/// Returns empty when the tangent argument reaches pi/2: no bound state.
/// beta' = 0 yields the undeformed limit pi^2 hbar^2 k^2 / (8 m a^2).
inline std::optional<double> box_energy(const PhysicalContext& ctx,
                                        double beta_prime, int k) {
  if (!ctx.a) throw config_error("box_energy: a not set");
  if (k < 1) throw config_error("box_energy: level k must be >= 1");
  if (beta_prime < 0.0)
    throw invalid_deformation("box_energy: beta' must be non-negative");

  const double a = *ctx.a;
  if (beta_prime == 0.0) {
    const double num = std::numbers::pi * ctx.hbar * k;
    return num * num / (8.0 * ctx.mass * a * a);
  }
  const double arg =
      std::numbers::pi * ctx.hbar * k * std::sqrt(beta_prime) / (2.0 * a);
  if (!(arg < std::numbers::pi / 2.0)) return std::nullopt;
  const double t = std::tan(arg);
  return t * t / (2.0 * ctx.mass * beta_prime);
}

// ---------------------------------------------------------------------------
// CSV emission (formats consumed by external plotting tools)
// ---------------------------------------------------------------------------

namespace detail {
inline void append_number(std::string& out, double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", x);
  out += buf;
}
}  // namespace detail

/// `alpha,beta,exists` with one row per cell, row-major in beta then alpha.
inline std::string region_csv(const RegionScan& scan) {
  std::string out = "alpha,beta,exists\n";
  for (std::size_t i = 0; i < scan.beta_grid.size(); ++i) {
    for (std::size_t j = 0; j < scan.alpha_grid.size(); ++j) {
      detail::append_number(out, scan.alpha_grid[j]);
      out += ',';
      detail::append_number(out, scan.beta_grid[i]);
      out += ',';
      out += scan.cell(i, j) ? '1' : '0';
      out += '\n';
    }
  }
  return out;
}

/// `n,beta_limit` with `inf` marking an unbounded limit.
inline std::string beta_limit_csv(const BetaLimitCurve& curve) {
  std::string out = "n,beta_limit\n";
  for (std::size_t i = 0; i < curve.n_values.size(); ++i) {
    out += std::to_string(curve.n_values[i]);
    out += ',';
    if (curve.limits[i].unbounded)
      out += "inf";
    else
      detail::append_number(out, curve.limits[i].value);
    out += '\n';
  }
  return out;
}

}  // namespace gup
