#include "excursion/quad/constants.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace excursion::quad {

namespace {

// 1/sqrt(2) split into a double and its rounding residual.
constexpr double kInvSqrt2Hi = 0.70710678118654757;
constexpr double kInvSqrt2Lo = -4.8336466567264567e-17;

// Radius R with exp(-R^beta) = tol.
double cut_radius(double beta, double tol) {
  return std::pow(-std::log(tol), 1.0 / beta);
}

// Bound on the mass of exp(-x^beta) beyond R: int_R^inf e^{-x^beta} dx.
double side_tail(double beta, double radius) {
  // For R^beta >= 1/beta the integrand decays at least like
  // e^{-R^beta} * e^{-beta R^{beta-1} (x-R)}; otherwise fall back to G_beta.
  const double rb = std::pow(radius, beta);
  const double slope = beta * std::pow(radius, beta - 1.0);
  if (slope > 0.0 && rb * beta >= 1.0 && beta >= 1.0) {
    return std::exp(-rb) / slope;
  }
  return std::exp(-rb) * (1.0 + radius);
}

QuadResult square_integral(const std::function<double(double, double)>& f,
                           double beta, double radius, bool symmetric,
                           const QuadratureConfig& cfg) {
  Region2d region;
  region.x_lo = 0.0;
  region.x_hi = radius;
  region.x_breakpoints = dyadic_toward_lo(0.0, radius, 40);
  if (symmetric) {
    region.y_lo = [](double x) { return x; };
  }
  region.y_hi = [radius](double) { return radius; };
  region.y_breakpoints = [radius, symmetric](double x) {
    if (symmetric && x > 0.0) return geometric_from(x, radius);
    return dyadic_toward_lo(0.0, radius, 40);
  };
  QuadResult r = integrate_2d(f, region, cfg);
  if (symmetric) {
    r.value *= 2.0;
    r.abs_error *= 2.0;
  }
  // Mass outside the square is bounded by twice the side tail times G_beta.
  r.abs_error += 2.0 * side_tail(beta, radius) * std::tgamma(1.0 + 1.0 / beta);
  return r;
}

}  // namespace

double normal_survival(double u) noexcept {
  if (std::isnan(u)) return u;
  const double x = u * kInvSqrt2Hi;
  // Residual of the scaled argument: exact u/sqrt(2) = x + r.
  const double r = std::fma(u, kInvSqrt2Hi, -x) + u * kInvSqrt2Lo;
  const double base = 0.5 * std::erfc(x);
  // d/dx erfc(x) = -2/sqrt(pi) e^{-x^2}
  const double corr = std::numbers::inv_sqrtpi * std::exp(-x * x) * r;
  return base - corr;
}

double normal_density(double u) noexcept {
  return std::exp(-0.5 * u * u) * 0.5 * std::numbers::sqrt2 *
         std::numbers::inv_sqrtpi;
}

double g_beta(double beta) {
  if (!(beta > 0.0)) throw std::invalid_argument("g_beta: beta must be positive");
  return std::tgamma(1.0 + 1.0 / beta);
}

double k_beta(double beta, const QuadratureConfig& cfg) {
  if (!(beta > 0.0)) throw std::invalid_argument("k_beta: beta must be positive");
  const double radius = cut_radius(beta, cfg.tail_cut_tol);
  const double half = 0.5 * beta;
  auto f = [beta, half](double x, double y) {
    return std::exp(-std::pow(x, beta) - std::pow(y, beta) - std::pow(x * y, half));
  };
  return square_integral(f, beta, radius, true, cfg).value;
}

double trend_l(double c, const QuadratureConfig& cfg) {
  if (!(c >= 0.0) || !std::isfinite(c)) {
    throw std::invalid_argument("trend_l: c must be finite and >= 0");
  }
  IntegrationOptions opts;
  opts.envelope = DecayEnvelope{
      [](double x) { return std::exp(-x * x); },
      [](double x) { return 0.5 * std::sqrt(std::numbers::pi) * std::erfc(x); }};
  return integrate_1d([c](double x) { return std::exp(-x * x - c * x); }, 0.0,
                      INFINITY, cfg, opts)
      .value;
}

double trend_k(double c1, double c2, const QuadratureConfig& cfg) {
  if (!(c1 >= 0.0) || !(c2 >= 0.0) || !std::isfinite(c1) || !std::isfinite(c2)) {
    throw std::invalid_argument("trend_k: c1, c2 must be finite and >= 0");
  }
  const double radius = cut_radius(2.0, cfg.tail_cut_tol);
  auto f = [c1, c2](double x, double y) {
    return std::exp(-x * x - y * y - x * y - c1 * x - c2 * y);
  };
  return square_integral(f, 2.0, radius, c1 == c2, cfg).value;
}

}  // namespace excursion::quad
