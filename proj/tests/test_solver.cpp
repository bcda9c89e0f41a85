#include <catch2/catch.hpp>

#include <random>

#include "gup/harmonic.hpp"
#include "gup/oracle.hpp"
#include "gup/solver.hpp"

using namespace gup;

TEST_CASE("xi0 closed forms", "[solver]") {
  SECTION("harmonic") {
    const auto pot = evaluator(PotentialSpec::harmonic(1.0));
    CHECK(xi0(pot) == Approx(1.0 / std::sqrt(2.0)).epsilon(1e-11));
  }
  SECTION("power(2, 1) equals 8^(-1/6)") {
    const auto pot = evaluator(PotentialSpec::power(2, 1.0));
    CHECK(xi0(pot, 1e-14) == Approx(std::pow(8.0, -1.0 / 6.0)).epsilon(1e-12));
  }
  SECTION("power-law family: xi0 = (1/(4 n v0))^(1/(2n+2))") {
    for (int n : {1, 2, 3, 4, 6}) {
      for (double v0 : {0.25, 1.0, 3.0, 50.0}) {
        const auto pot = evaluator(PotentialSpec::power(n, v0));
        const double expected =
            std::pow(1.0 / (4.0 * n * v0), 1.0 / (2.0 * n + 2.0));
        CHECK(xi0(pot, 1e-14) == Approx(expected).epsilon(1e-11));
      }
    }
  }
  SECTION("extreme strengths still bracket") {
    CHECK_NOTHROW(xi0(evaluator(PotentialSpec::power(2, 1e-10))));
    CHECK_NOTHROW(xi0(evaluator(PotentialSpec::power(2, 1e10))));
  }
  SECTION("tolerance must be positive") {
    CHECK_THROWS_AS(xi0(evaluator(PotentialSpec::harmonic(1.0)), -1.0),
                    config_error);
  }
}

TEST_CASE("linear coefficients", "[solver]") {
  SECTION("harmonic: xi1 = xi0 = 1/sqrt(2), xi2 = 0") {
    const auto lc = linear_coefficients(evaluator(PotentialSpec::harmonic(1.0)));
    CHECK(lc.xi0 == Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
    CHECK(lc.xi1 == Approx(lc.xi0).epsilon(1e-12));
    CHECK(lc.xi2 == 0.0);
    CHECK(lc.vtilde0 == Approx(1.0).epsilon(1e-12));
    CHECK(lc.dvtilde0 == Approx(0.0).margin(1e-12));
  }
  SECTION("xi2 vanishes for any admissible potential") {
    std::mt19937 rng(333);
    std::uniform_real_distribution<double> c(0.1, 5.0);
    std::uniform_int_distribution<int> k(1, 5);
    for (int i = 0; i < 50; ++i) {
      PotentialSpec spec;
      spec.terms.push_back({c(rng), 2 * k(rng)});
      spec.terms.push_back({c(rng), 2 * k(rng) + 2});
      std::map<int, double> coll;
      for (auto& t : spec.terms) coll[t.exponent] += t.coefficient;
      spec.terms.clear();
      for (auto& [e, cc] : coll) spec.terms.push_back({cc, e});
      CHECK(linear_coefficients(evaluator(spec)).xi2 == 0.0);
    }
  }
  SECTION("power(1, v0) matches harmonic(v0)") {
    const auto a = linear_coefficients(evaluator(PotentialSpec::power(1, 2.3)));
    const auto b = linear_coefficients(evaluator(PotentialSpec::harmonic(2.3)));
    CHECK(a.xi0 == Approx(b.xi0).epsilon(1e-12));
    CHECK(a.xi1 == Approx(b.xi1).epsilon(1e-12));
    CHECK(a.v0 == Approx(b.v0).epsilon(1e-12));
  }
  SECTION("xi0 scaling condition holds at the returned root") {
    const auto lc = linear_coefficients(evaluator(PotentialSpec::power(3, 0.7)));
    CHECK(lc.xi0 * lc.xi0 * std::sqrt(lc.vtilde0) == Approx(0.5).epsilon(1e-11));
  }
}

TEST_CASE("linearized energy", "[solver]") {
  SECTION("power-law form E = V0 (n+1 + 2n sqrt(Vt0) beta + 2n/sqrt(Vt0) alpha)") {
    std::mt19937 rng(444);
    std::uniform_real_distribution<double> ab(0.0, 0.3);
    for (int n : {1, 2, 3, 5, 8}) {
      for (double v0 : {0.5, 1.0, 4.0}) {
        const auto pot = evaluator(PotentialSpec::power(n, v0));
        const auto lc = linear_coefficients(pot);
        const double svt = std::sqrt(lc.vtilde0);
        for (int i = 0; i < 10; ++i) {
          const double alpha = ab(rng), beta = ab(rng);
          const double expected =
              lc.v0 * (n + 1.0 + 2.0 * n * svt * beta + 2.0 * n / svt * alpha);
          CHECK(linear_energy(pot, alpha, beta) ==
                Approx(expected).epsilon(1e-10));
        }
      }
    }
  }
  SECTION("undeformed value equals (n+1) V(xi0)") {
    for (int n : {1, 2, 4}) {
      const auto pot = evaluator(PotentialSpec::power(n, 1.0));
      const auto lc = linear_coefficients(pot);
      CHECK(linear_energy(pot, 0.0, 0.0) ==
            Approx((n + 1.0) * lc.v0).epsilon(1e-11));
    }
  }
  SECTION("harmonic in physical units") {
    std::mt19937 rng(555);
    std::uniform_real_distribution<double> pos(0.3, 3.0);
    std::uniform_real_distribution<double> small(0.0, 0.1);
    const auto pot = evaluator(PotentialSpec::harmonic(1.0));
    for (int i = 0; i < 200; ++i) {
      const auto ctx = PhysicalContext::harmonic(pos(rng), pos(rng), pos(rng));
      const auto nd = nondimensionalize_harmonic(ctx);
      const double ap = small(rng), bp = small(rng);
      const auto dp = to_nondim(ap, bp, nd);
      CHECK(nd.e0 * linear_energy(pot, dp.alpha(), dp.beta()) ==
            Approx(harmonic_linear(ctx, ap, bp)).epsilon(1e-12));
    }
  }
}

TEST_CASE("coordinate equation residual", "[solver]") {
  const auto pot = evaluator(PotentialSpec::power(2, 1.0));
  SECTION("alpha = beta = 0 reduces to xi^2 sqrt(vtilde) - 1/2") {
    for (double xi : {0.1, 0.5, 1.0, 3.0}) {
      const double expected = xi * xi * std::sqrt(pot.vtilde(xi)) - 0.5;
      CHECK(coordinate_equation_residual(xi, 0.0, 0.0, pot) ==
            Approx(expected).epsilon(1e-13));
    }
    const double x0 = xi0(pot, 1e-14);
    CHECK(coordinate_equation_residual(x0, 0.0, 0.0, pot) ==
          Approx(0.0).margin(1e-12));
  }
  SECTION("K1 K2 = -1/Vt at every xi") {
    std::mt19937 rng(666);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 3000; ++i) {
      double alpha = 2.0 * u(rng), beta = 2.0 * u(rng);
      if (alpha * beta >= 0.2499) {
        --i;
        continue;
      }
      const double xi = std::exp(std::log(1e-2) + u(rng) * std::log(1e4));
      const double vt = pot.vtilde(xi);
      const double w = beta * vt - alpha;
      const double k1vt = w - std::sqrt(w * w + vt);
      const double k2vt = w + std::sqrt(w * w + vt);
      CHECK(k1vt * k2vt == Approx(-vt).epsilon(1e-11));
    }
  }
  SECTION("domain error below zero") {
    CHECK_THROWS_AS(coordinate_equation_residual(0.0, 0.0, 0.0, pot),
                    std::domain_error);
  }
}

TEST_CASE("full numeric solution reproduces the harmonic closed form",
          "[solver]") {
  const auto pot = evaluator(PotentialSpec::harmonic(1.0));
  for (int i = 0; i < 8; ++i) {
    for (int j = 0; j < 8; ++j) {
      const double alpha = 0.489 * i / 7.0;
      const double beta = 0.489 * j / 7.0;
      const auto exact = harmonic_minimum(alpha, beta);
      const auto full = solve_full(pot, alpha, beta);
      REQUIRE(full.has_value());
      CHECK(full->energy_nd == Approx(exact.energy_nd).epsilon(1e-10));
      CHECK(full->point.xi == Approx(exact.point.xi).epsilon(1e-8));
      CHECK(full->point.q == Approx(exact.point.q).epsilon(1e-8));
      CHECK(full->diagnostics.converged);
    }
  }
}

TEST_CASE("full numeric solution of the quartic at the origin", "[solver]") {
  const auto pot = evaluator(PotentialSpec::power(2, 1.0));
  const auto r = solve_full(pot, 0.0, 0.0);
  REQUIRE(r.has_value());
  const double x0 = std::pow(8.0, -1.0 / 6.0);
  CHECK(r->point.xi == Approx(x0).epsilon(1e-10));
  // E = (n+1) V(xi0) = 3 xi0^4 = 3/4
  CHECK(r->energy_nd == Approx(0.75).epsilon(1e-10));
  CHECK(r->method == Method::FullNumeric);
  REQUIRE_FALSE(r->diagnostics.roots.empty());
}

TEST_CASE("steep wall with large beta has no bound state", "[solver]") {
  const auto pot = evaluator(PotentialSpec::power(10000, 1.0));
  const auto r = solve_full(pot, 0.0, 0.6);
  CHECK_FALSE(r.has_value());
  // ... and a denser grid does not change the verdict.
  const auto r2 = solve_full(pot, 0.0, 0.6, 1e-12, ScanSpec{1e-6, 1e3, 60000});
  CHECK_FALSE(r2.has_value());
}

TEST_CASE("linear approximation is tangent at the origin",
          "[solver][property]") {
  const auto pot = evaluator(PotentialSpec::power(3, 1.5));
  const double alpha = 0.2, beta = 0.3;
  double prev_gap = 0.0;
  int step = 0;
  for (double s : {0.04, 0.02, 0.01}) {
    const auto full = solve_full(pot, s * alpha, s * beta);
    REQUIRE(full.has_value());
    const double gap =
        std::abs(full->energy_nd - linear_energy(pot, s * alpha, s * beta));
    if (step++) {
      const double ratio = prev_gap / gap;
      CHECK(ratio > 3.0);
      CHECK(ratio < 5.0);
    }
    prev_gap = gap;
  }
}

TEST_CASE("xi_min has no linear alpha dependence", "[solver][property]") {
  const auto pot = evaluator(PotentialSpec::power(2, 1.0));
  const double x0 = xi0(pot, 1e-14);
  double deltas[3];
  const double eps[3] = {1e-2, 1e-3, 1e-4};
  for (int i = 0; i < 3; ++i) {
    const auto r = solve_full(pot, eps[i], 0.0);
    REQUIRE(r.has_value());
    deltas[i] = std::abs(r->point.xi - x0);
  }
  for (int i = 0; i + 1 < 3; ++i) {
    const double exponent = std::log(deltas[i] / deltas[i + 1]) / std::log(10.0);
    CHECK(exponent >= 1.8);
  }
}

TEST_CASE("converged roots satisfy the constraint and the oracle floor",
          "[solver][property]") {
  std::mt19937 rng(777);
  std::uniform_real_distribution<double> c(0.1, 3.0);
  std::uniform_int_distribution<int> k(1, 5);
  std::uniform_real_distribution<double> ab(0.0, 0.6);
  const double tol = 1e-12;
  for (int i = 0; i < 100; ++i) {
    std::map<int, double> coll;
    coll[2 * k(rng)] += c(rng);
    coll[2 * k(rng)] += c(rng);
    PotentialSpec spec;
    for (auto& [e, cc] : coll) spec.terms.push_back({cc, e});
    double alpha, beta;
    do {
      alpha = ab(rng);
      beta = ab(rng);
    } while (alpha * beta >= 0.24);
    const auto pot = evaluator(spec);
    const auto r = solve_full(pot, alpha, beta, tol);
    REQUIRE(r.has_value());
    REQUIRE(r->diagnostics.converged);
    CHECK(std::abs(constraint_residual(
              r->point, DeformationParams::nondim(alpha, beta))) <= 10.0 * tol);
    const auto orc = oracle_min(pot, alpha, beta);
    // Floor scaled by the energy magnitude: draws near the product ceiling
    // reach E ~ 1e6 where the multiplier form of q carries ~1e-11 relative
    // rounding, so the returned point can sit that far inside the boundary.
    CHECK(r->energy_nd >=
          orc.energy_nd - 100.0 * tol * std::max(1.0, orc.energy_nd));
  }
}
