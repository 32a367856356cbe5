#include "doctest.h"

#include <cmath>

#include "minsurf/errors.hpp"
#include "minsurf/phase.hpp"

using namespace minsurf;

namespace {
constexpr double kC1 = 0.1, kC2 = 1.0;

double interior(const PhaseSolution& sol, int i, int n, double margin = 0.1) {
  const double w = sol.v_max() - sol.v_min();
  const double lo = sol.v_min() + margin * w, hi = sol.v_max() - margin * w;
  return lo + (hi - lo) * i / (n - 1);
}
}  // namespace

TEST_CASE("validity interval against the quadratic oracle") {
  const auto [lo, hi] = validity_interval(kC1, kC2);
  const double t_lo = std::exp(2.0 * lo), t_hi = std::exp(2.0 * hi);
  // Vieta: the endpoints are the roots of c1^2 t^2 - c2 t + 1
  CHECK(std::abs(t_lo * t_hi - 1.0 / (kC1 * kC1)) < 1e-9);
  CHECK(std::abs(t_lo + t_hi - kC2 / (kC1 * kC1)) < 1e-9);
  // the defining quantity is positive inside, negative outside
  auto d2 = [](double v) {
    const double t = std::exp(2.0 * v);
    return kC2 * t - 1.0 - kC1 * kC1 * t * t;
  };
  CHECK(d2(0.5 * (lo + hi)) > 0.0);
  CHECK(d2(lo - 1e-6) < 0.0);
  CHECK(d2(hi + 1e-6) < 0.0);
  CHECK(std::abs(d2(lo)) < 1e-10);
  CHECK(std::abs(d2(hi)) < 1e-8);  // larger root, larger conditioning
}

TEST_CASE("empty validity interval") {
  CHECK_THROWS_AS(validity_interval(1.0, 1.0), EmptyInterval);
  CHECK_THROWS_AS(validity_interval(0.5, 1.0), EmptyInterval);  // boundary c2 = 2 c1
  CHECK_THROWS_AS(validity_interval(-0.1, 1.0), EmptyInterval);
}

TEST_CASE("phi_prime positive inside, error outside") {
  const auto [lo, hi] = validity_interval(kC1, kC2);
  for (double f : {0.1, 0.5, 0.9})
    CHECK(phi_prime(lo + f * (hi - lo), kC1, kC2) > 0.0);
  CHECK_THROWS_AS(phi_prime(lo - 0.1, kC1, kC2), OutOfInterval);
  CHECK_THROWS_AS(phi_prime(hi + 0.1, kC1, kC2), OutOfInterval);
}

TEST_CASE("adaptive Simpson") {
  auto sq = [](double x) { return x * x; };
  CHECK(std::abs(adaptive_simpson(sq, 0.0, 1.0, 1e-12) - 1.0 / 3.0) < 1e-12);
  auto s = [](double x) { return std::sin(x); };
  CHECK(std::abs(adaptive_simpson(s, 0.0, M_PI, 1e-12) - 2.0) < 1e-11);
  auto spike = [](double x) { return 1.0 / std::sqrt(x + 1e-300); };
  CHECK_THROWS_AS(adaptive_simpson(spike, 0.0, 1.0, 1e-14, 200), QuadratureFailure);
}

TEST_CASE("phase solution: amplitude identity at machine precision") {
  const PhaseSolution sol(kC1, kC2);
  for (int i = 0; i < 50; ++i) {
    const double v = interior(sol, i, 50);
    const auto [g, h] = sol.gh(v);
    CHECK(std::abs(g * g + h * h - (1.0 - std::exp(-2.0 * v) / kC2)) <= 1e-12);
  }
}

TEST_CASE("phase solution: phi anchored and increasing") {
  const PhaseSolution sol(kC1, kC2);
  CHECK(std::abs(sol.phi(sol.v0())) < 1e-9);
  double prev = sol.phi(interior(sol, 0, 200, 0.02));
  for (int i = 1; i < 200; ++i) {
    const double cur = sol.phi(interior(sol, i, 200, 0.02));
    CHECK(cur > prev);
    prev = cur;
  }
  CHECK_THROWS_AS(sol.phi(sol.v_min() - 0.1), OutOfInterval);
  CHECK_THROWS_AS(sol.phi(sol.v_max()), OutOfInterval);
}

TEST_CASE("phi interpolation is consistent with the closed-form derivative") {
  const PhaseSolution sol(kC1, kC2);
  for (int i = 0; i < 25; ++i) {
    const double v = interior(sol, i, 25);
    const double h = 1e-5;
    const double fd = (sol.phi(v + h) - sol.phi(v - h)) / (2.0 * h);
    CHECK(std::abs(fd - phi_prime(v, kC1, kC2)) < 1e-8 * std::max(1.0, fd));
  }
}

TEST_CASE("amplitude solutions satisfy the second-order ODE") {
  const PhaseSolution sol(kC1, kC2);
  for (int i = 0; i < 50; ++i) {
    const double v = interior(sol, i, 50);
    const double rg =
        ode_residual_323([&](double x) { return sol.gh(x).first; }, v, kC1, kC2);
    const double rh =
        ode_residual_323([&](double x) { return sol.gh(x).second; }, v, kC1, kC2);
    CHECK(std::abs(rg) <= 1e-6);
    CHECK(std::abs(rh) <= 1e-6);
  }
}

TEST_CASE("cos and sin of phi satisfy the phase-form ODE") {
  const PhaseSolution sol(kC1, kC2);
  for (int i = 0; i < 50; ++i) {
    const double v = interior(sol, i, 50);
    const double rc =
        ode_residual_324([&](double x) { return std::cos(sol.phi(x)); }, v, sol);
    const double rs =
        ode_residual_324([&](double x) { return std::sin(sol.phi(x)); }, v, sol);
    CHECK(std::abs(rc) <= 1e-6);
    CHECK(std::abs(rs) <= 1e-6);
  }
}

TEST_CASE("log-derivative identity for phi'") {
  const PhaseSolution sol(kC1, kC2);
  for (int i = 0; i < 25; ++i) {
    const double v = interior(sol, i, 25);
    const double h = 1e-6 * std::max(1.0, std::abs(v));
    const double fd =
        (phi_prime(v + h, kC1, kC2) - phi_prime(v - h, kC1, kC2)) / (2.0 * h) /
        phi_prime(v, kC1, kC2);
    const double t = std::exp(2.0 * v);
    const double d1 = kC2 * t - 1.0;
    const double d2 = d1 - kC1 * kC1 * t * t;
    const double closed =
        (3.0 + kC1 * kC1 * t * t + kC2 * kC1 * kC1 * t * t * t - 3.0 * kC2 * t) / (d1 * d2);
    CHECK(std::abs(fd - closed) <= 1e-5 * std::max(1.0, std::abs(closed)));
  }
}

TEST_CASE("general solution spans the amplitude pair") {
  const PhaseSolution sol(kC1, kC2);
  const double v = interior(sol, 3, 10);
  const auto [g, h] = sol.gh(v);
  const double amp = std::sqrt(kC2);
  CHECK(std::abs(sol.general_solution(1.0 / amp, 0.0, v) - g) < 1e-14);
  CHECK(std::abs(sol.general_solution(0.0, 1.0 / amp, v) - h) < 1e-14);
}
