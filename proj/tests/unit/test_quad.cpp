#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <numbers>

#include "excursion/error.hpp"
#include "excursion/quad.hpp"
#include "oracles.hpp"

using namespace excursion;
using namespace excursion::quad;
using doctest::Approx;

namespace {
bool rel_close(double a, double b, double tol) { return std::abs(a - b) <= tol * std::abs(b); }
}  // namespace

TEST_CASE("normal_survival against a 50-digit table") {
  for (const auto& row : oracle::survival_table()) {
    CAPTURE(row.u);
    CHECK(rel_close(normal_survival(row.u), row.psi, 1e-15));
  }
  CHECK(normal_survival(0.0) == 0.5);
  CHECK(std::abs(normal_survival(1.959963984540054) - 0.025) < 1e-9);
  CHECK(normal_survival(-10.0) == Approx(1.0).epsilon(1e-15));
}

TEST_CASE("normal_survival obeys the Mills bracket") {
  for (double u : {3.0, 5.0, 9.0, 20.0}) {
    const double phi = normal_density(u);
    CHECK(phi * (1.0 / u - 1.0 / (u * u * u)) < normal_survival(u));
    CHECK(normal_survival(u) < phi / u);
  }
}

TEST_CASE("integrate_1d basics") {
  const QuadratureConfig cfg;
  auto r = integrate_1d([](double x) { return x * x; }, 0.0, 1.0, cfg);
  CHECK(std::abs(r.value - 1.0 / 3.0) <= cfg.abs_tol);
  r = integrate_1d([](double x) { return std::exp(-x); }, 0.0, INFINITY, cfg);
  CHECK(std::abs(r.value - 1.0) <= 1e-10);
  r = integrate_1d([](double x) { return std::exp(-x * x); }, 0.0, INFINITY, cfg);
  CHECK(std::abs(r.value - std::sqrt(std::numbers::pi) / 2) <= 1e-10);

  IntegrationOptions opts;
  opts.envelope = DecayEnvelope{[](double x) { return std::exp(-x); },
                                [](double x) { return std::exp(-x); }};
  r = integrate_1d([](double x) { return std::exp(-x) * std::cos(x) * std::cos(x); }, 0.0, INFINITY,
                   cfg, opts);
  CHECK(std::abs(r.value - 0.6) <= 1e-10);
  CHECK(r.abs_error >= 0.0);
}

TEST_CASE("integrate_1d resolves endpoint singularities with dyadic breakpoints") {
  const QuadratureConfig cfg;
  IntegrationOptions opts;
  opts.breakpoints = dyadic_toward_lo(0.0, 1.0, 50);
  const auto r = integrate_1d([](double x) { return x > 0 ? std::log(x) : 0.0; }, 0.0, 1.0, cfg, opts);
  CHECK(std::abs(r.value + 1.0) <= 1e-10);
  const auto pts = dyadic_toward_lo(0.0, 1.0, 4);
  REQUIRE(pts.size() == 4);
  CHECK(pts.front() == 0.0625);
  CHECK(pts.back() == 0.5);
  for (double g : geometric_from(1.0, 10.0)) CHECK((g > 1.0 && g < 10.0));
}

TEST_CASE("integrate_1d reports non-convergence with the best estimate") {
  QuadratureConfig cfg;
  cfg.max_subdivisions = 5;
  cfg.abs_tol = 1e-15;
  cfg.rel_tol = 1e-15;
  auto f = [](double x) { return std::sin(200.0 * x) / std::sqrt(std::abs(x - 0.3) + 1e-9); };
  try {
    (void)integrate_1d(f, 0.0, 1.0, cfg);
    FAIL("expected ConvergenceError");
  } catch (const ConvergenceError& e) {
    CHECK(std::isfinite(e.best_estimate()));
    CHECK(e.error_bound() > 0.0);
  }
}

TEST_CASE("QuadratureConfig validation") {
  QuadratureConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.abs_tol = 0.0;
  CHECK_NOTHROW(cfg.validate());
  cfg.rel_tol = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.max_subdivisions = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.tail_cut_tol = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("integrate_2d on a triangle") {
  Region2d region;
  region.x_lo = 0.0;
  region.x_hi = 1.0;
  region.y_hi = [](double x) { return x; };
  const auto r = integrate_2d([](double x, double y) { return x * y; }, region, {});
  CHECK(std::abs(r.value - 0.125) < 1e-12);
}

TEST_CASE("g_beta matches quadrature of exp(-x^beta)") {
  CHECK(g_beta(1.0) == Approx(1.0).epsilon(1e-15));
  CHECK(std::abs(g_beta(2.0) - std::sqrt(std::numbers::pi) / 2) < 1e-9);
  CHECK(std::abs(g_beta(3.0) - std::tgamma(4.0 / 3.0)) < 1e-12);
  for (double b : {1.0, 1.5, 2.0, 3.0}) {
    const auto r = integrate_1d([b](double x) { return std::exp(-std::pow(x, b)); }, 0.0, INFINITY, {});
    CAPTURE(b);
    CHECK(std::abs(r.value - g_beta(b)) < 1e-9);
  }
}

TEST_CASE("k_beta") {
  const double k2 = std::numbers::pi / (3.0 * std::sqrt(3.0));
  CHECK(std::abs(k_beta(2.0) - k2) < 1e-8);
  CHECK(std::abs(trend_k(0.0, 0.0) - k_beta(2.0)) < 1e-10);
  for (double b : {1.0, 1.5, 3.0}) {
    CAPTURE(b);
    CHECK(rel_close(k_beta(b), oracle::k_beta_reference(b), 1e-8));
    CHECK(k_beta(b) < g_beta(b) * g_beta(b));
  }
}

TEST_CASE("trend_l closed form and monotonicity") {
  for (double c : {0.0, 0.5, 1.0, 2.0, 5.0}) {
    const double closed = std::sqrt(std::numbers::pi) / 2 * std::exp(c * c / 4) * std::erfc(c / 2);
    CAPTURE(c);
    CHECK(std::abs(trend_l(c) - closed) < 1e-9);
  }
  CHECK(trend_l(0) > trend_l(1));
  CHECK(trend_l(1) > trend_l(2));
  CHECK_THROWS_AS(trend_l(-1.0), std::invalid_argument);
}

TEST_CASE("trend_k symmetry and domination") {
  CHECK(trend_k(1, 2) == Approx(trend_k(2, 1)).epsilon(1e-10));
  CHECK(trend_k(5, 5) < trend_k(0, 0));
  CHECK_THROWS_AS(trend_k(-1, 0), std::invalid_argument);
}

TEST_CASE("i_gamma small-u limit and direct reference") {
  IntegralSpec s;
  s.a = 0.8;
  s.delta = 0.7;
  s.u = 1e-6;
  CHECK(rel_close(i_gamma(s), 0.49, 1e-6));
  for (double u : {0.5, 3.0}) {
    for (double a : {0.5, 1.0, 2.0}) {
      s.u = u;
      s.a = a;
      CAPTURE(u);
      CAPTURE(a);
      CHECK(rel_close(i_gamma(s), oracle::i_gamma_reference(1.0, 2.0, a, 0.7, u), 1e-9));
    }
  }
}

TEST_CASE("i_gamma is decreasing in u, gamma and a") {
  IntegralSpec s;
  s.a = 0.6;
  s.u = 5.0;
  const double base = i_gamma(s);
  IntegralSpec t = s;
  t.u = 6.0;
  CHECK(i_gamma(t) < base);
  t = s;
  t.gamma = 1.5;
  CHECK(i_gamma(t) < base);
  // x^a y^a decreases in a on (0,1]^2
  t = s;
  t.a = 0.9;
  CHECK(i_gamma(t) > base);
}

TEST_CASE("i_gamma fast branches") {
  IntegralSpec s;
  s.u = 100.0;
  s.a = 2.0;
  CHECK(rel_close(s.u * s.u * i_gamma(s), g_beta(2) * g_beta(2), 1e-3));
  s.a = 1.0;
  CHECK(rel_close(s.u * s.u * i_gamma(s), std::numbers::pi / (3 * std::sqrt(3.0)), 1e-3));
}

TEST_CASE("i_gamma_asymptote triples") {
  IntegralSpec s;
  s.a = 2.0 / 3.0;
  auto p = i_gamma_asymptote(s);
  CHECK(p.prefactor == Approx(3.0 * std::sqrt(std::numbers::pi) / 4.0).epsilon(1e-12));
  CHECK(p.u_power == Approx(-3.0).epsilon(1e-15));
  CHECK(p.log_power == 1);
  CHECK_FALSE(p.uses_psi);
  s.a = 1.0;
  p = i_gamma_asymptote(s);
  CHECK(p.prefactor == Approx(std::numbers::pi / (3 * std::sqrt(3.0))).epsilon(1e-10));
  CHECK(p.u_power == -2.0);
  CHECK(p.log_power == 0);
  s.a = 2.0;
  s.gamma = 2.0;
  p = i_gamma_asymptote(s);
  CHECK(p.prefactor == Approx(0.5 * g_beta(2) * g_beta(2)).epsilon(1e-12));
  CHECK(p.u_power == -2.0);
  CHECK(integral_branch(2.0, 1.0) == IntegralBranch::Critical);
  CHECK(integral_branch(2.0, 0.99) == IntegralBranch::Log);
}

TEST_CASE("critical branch with gamma != 1 tracks the rate") {
  IntegralSpec s;
  s.a = 1.0;
  s.gamma = 2.0;
  s.u = 100.0;
  const auto p = i_gamma_asymptote(s);
  CHECK(rel_close(i_gamma(s), p.evaluate(s.u), 1e-3));
}

TEST_CASE("side integral") {
  CHECK(rel_close(side_integral(1.0, 2.0, 1.0, 50.0), side_asymptote(1.0, 2.0).evaluate(50.0), 1e-10));
  CHECK(side_asymptote(1.0, 2.0).u_power == -1.0);
}

TEST_CASE("inner_a") {
  for (double z : {1e-2, 1e-4, 1e-6}) {
    CAPTURE(z);
    CHECK(std::abs(inner_a(z, 0, 0) + std::log(z)) <= 5.0);
    // c = 0 reduces to K_0(2Z).
    CHECK(rel_close(inner_a(z, 0, 0), std::cyl_bessel_k(0.0, 2 * z), 1e-9));
  }
  CHECK(inner_a(10.0, 0, 0) < 1e-3);
  CHECK(inner_a(0.01, 1, 1) < inner_a(0.01, 0, 0));
  CHECK_THROWS_AS(inner_a(0.0, 0, 0), std::invalid_argument);
}

TEST_CASE("inner_a_gamma is 2 K_0(2 gamma sqrt Z)") {
  for (double z : {1e-8, 1e-3, 0.5, 4.0}) {
    for (double g : {1.0, 2.5}) {
      CAPTURE(z);
      CAPTURE(g);
      CHECK(rel_close(inner_a_gamma(z, g), 2 * std::cyl_bessel_k(0.0, 2 * g * std::sqrt(z)), 1e-9));
    }
  }
}

TEST_CASE("j_lambda against the Bessel representation") {
  for (double lambda : {1e4, 1e8}) {
    for (double gamma : {1.0, 2.0}) {
      CAPTURE(lambda);
      CAPTURE(gamma);
      CHECK(rel_close(j_lambda_scaled(lambda, 1.0 / 3, 0.5, gamma),
                      oracle::j_lambda_scaled_bessel(lambda, 1.0 / 3, 0.5, gamma), 1e-8));
    }
  }
}

TEST_CASE("j_lambda_ratio band and trend") {
  const double r4 = j_lambda_ratio(1e4, 1.0 / 3, 0.5, 1.0);
  const double r8 = j_lambda_ratio(1e8, 1.0 / 3, 0.5, 1.0);
  const double r10 = j_lambda_ratio(1e10, 1.0 / 3, 0.5, 1.0);
  CHECK(r8 >= 0.80);
  CHECK(r8 <= 1.05);
  CHECK(std::abs(r10 - 1) < std::abs(r4 - 1));
  const double r8g = j_lambda_ratio(1e8, 1.0 / 3, 0.5, 2.0);
  CHECK(r8g >= 0.80);
  CHECK(r8g <= 1.05);
  CHECK_THROWS_AS(j_lambda_ratio(1.0, 1.0 / 3, 0.5, 1.0), std::invalid_argument);
}

TEST_CASE("i_trend branches") {
  IntegralSpec s;
  s.u = 100.0;
  s.a = 2.0;
  CHECK(rel_close(s.u * s.u * i_trend(s), g_beta(2) * g_beta(2), 1e-3));
  s.a = 1.0;
  s.c1 = s.c2 = 1.0;
  CHECK(rel_close(s.u * s.u * i_trend(s), trend_k(1, 1), 1e-3));
  IntegralSpec l0;
  l0.a = 0.5;
  IntegralSpec l1 = l0;
  l1.c1 = 3;
  l1.c2 = 7;
  CHECK(i_trend_asymptote(l0).prefactor == i_trend_asymptote(l1).prefactor);
  CHECK(i_trend_asymptote(l0).prefactor ==
        Approx(2 * 0.5 * std::tgamma(2.0) / 0.25).epsilon(1e-14));
  IntegralSpec bad;
  bad.beta = 3.0;
  CHECK_THROWS_AS(i_trend(bad), std::invalid_argument);
  CHECK(rel_close(trend_side_integral(2.0, 1.0, 80.0), trend_side_asymptote(2.0).evaluate(80.0), 1e-3));
}

TEST_CASE("IntegralSpec validation") {
  IntegralSpec s;
  s.gamma = 0;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s = {};
  s.delta = -1;
  CHECK_THROWS_AS(i_gamma(s), std::invalid_argument);
  s = {};
  s.c1 = -1;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
}
