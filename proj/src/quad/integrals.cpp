#include "excursion/quad/integrals.hpp"

#include <algorithm>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "excursion/model.hpp"
#include "excursion/quad/constants.hpp"

namespace excursion::quad {

namespace {

constexpr int kDyadicLevels = 50;

bool near(double x, double y) {
  return std::abs(x - y) <= model::kRegimeRelTol * std::max(std::abs(x), std::abs(y));
}

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    std::ostringstream os;
    os << "IntegralSpec: " << name << " must be finite and positive, got " << v;
    throw std::invalid_argument(os.str());
  }
}

// Integral over [0,L]^2 of g(X,Y), evaluated on the unit square so that the
// absolute tolerance is relative to the box area.
double unit_square_integral(const std::function<double(double, double)>& g,
                            double side, bool symmetric,
                            const QuadratureConfig& cfg) {
  auto h = [&](double xi, double eta) { return g(side * xi, side * eta); };
  Region2d region;
  region.x_lo = 0.0;
  region.x_hi = 1.0;
  region.x_breakpoints = dyadic_toward_lo(0.0, 1.0, kDyadicLevels);
  if (symmetric) region.y_lo = [](double xi) { return xi; };
  region.y_hi = [](double) { return 1.0; };
  region.y_breakpoints = [symmetric](double xi) {
    if (symmetric && xi > 0.0) return geometric_from(xi, 1.0);
    return dyadic_toward_lo(0.0, 1.0, kDyadicLevels);
  };
  const double v = integrate_2d(h, region, cfg).value;
  return (symmetric ? 2.0 : 1.0) * v * side * side;
}

// Inner integral over s = log X of exp(-k1 e^{m s} - k2 e^{-m s} - ...),
// supplied as a function of s, with the plateau ending near s_lo / s_hi.
double log_scale_integral(const std::function<double(double)>& g, double s_lo,
                          double s_hi, std::vector<double> marks,
                          const QuadratureConfig& cfg) {
  IntegrationOptions opts;
  for (double m : marks) {
    if (m > s_lo && m < s_hi) opts.breakpoints.push_back(m);
  }
  for (double s = std::ceil(s_lo); s < s_hi; s += 2.0) opts.breakpoints.push_back(s);
  std::sort(opts.breakpoints.begin(), opts.breakpoints.end());
  return integrate_1d(g, s_lo, s_hi, cfg, opts).value;
}

double inner_a_gamma_log(double log_z, double gamma, const QuadratureConfig& cfg) {
  // A(Z) = int exp(-gamma e^s - gamma Z e^{-s}) ds.
  const double t0 = -std::log(cfg.tail_cut_tol);
  const double peak = 0.5 * log_z;
  const double s_hi = std::max(std::log(t0 / gamma), peak + 4.0);
  const double s_lo = std::min(std::log(gamma / t0) + log_z, peak - 4.0);
  auto g = [gamma, log_z](double s) {
    return std::exp(-gamma * std::exp(s) - gamma * std::exp(log_z - s));
  };
  return log_scale_integral(g, s_lo, s_hi, {log_z, peak, 0.0}, cfg);
}

double beta_cut_radius(double gamma, double beta, double tol) {
  return std::pow(-std::log(tol) / gamma, 1.0 / beta);
}

}  // namespace

void IntegralSpec::validate() const {
  require_positive(gamma, "gamma");
  require_positive(beta, "beta");
  require_positive(a, "a");
  require_positive(delta, "delta");
  require_positive(u, "u");
  if (!(c1 >= 0.0) || !(c2 >= 0.0) || !std::isfinite(c1) || !std::isfinite(c2)) {
    throw std::invalid_argument("IntegralSpec: c1, c2 must be finite and >= 0");
  }
}

IntegralBranch integral_branch(double beta, double a) {
  const double half = 0.5 * beta;
  if (near(a, half)) return IntegralBranch::Critical;
  return a < half ? IntegralBranch::Log : IntegralBranch::Classical;
}

double i_gamma(const IntegralSpec& spec, const QuadratureConfig& cfg) {
  spec.validate();
  const double beta = spec.beta;
  const double a = spec.a;
  const double gamma = spec.gamma;
  const double log_u = std::log(spec.u);
  // x = u^{-2/beta} X turns u^2 x^beta into X^beta and u^2 x^a y^a into
  // lambda (XY)^a with lambda = u^{2 - 4a/beta}.
  const double log_scale = 2.0 / beta * log_u;
  const double lambda = std::exp((2.0 - 4.0 * a / beta) * log_u);
  const double side = std::min(spec.delta * std::exp(log_scale),
                               beta_cut_radius(gamma, beta, cfg.tail_cut_tol));
  auto g = [=](double x, double y) {
    const double prod = x * y;
    const double cross = prod > 0.0 ? lambda * std::pow(prod, a) : 0.0;
    return std::exp(-gamma * (std::pow(x, beta) + std::pow(y, beta) + cross));
  };
  const double scaled = unit_square_integral(g, side, true, cfg);
  return scaled * std::exp(-2.0 * log_scale);
}

AsymptoticPrediction i_gamma_asymptote(const IntegralSpec& spec,
                                       const QuadratureConfig& cfg) {
  spec.validate();
  const double beta = spec.beta;
  const double a = spec.a;
  const double gamma = spec.gamma;
  AsymptoticPrediction out;
  out.uses_psi = false;
  switch (integral_branch(beta, a)) {
    case IntegralBranch::Log:
      out.prefactor = 2.0 * (beta - 2.0 * a) * std::tgamma(1.0 / a) /
                      (a * a * beta * std::pow(gamma, 1.0 / a));
      out.u_power = -2.0 / a;
      out.log_power = 1;
      break;
    case IntegralBranch::Critical:
      // int int exp(-gamma(...)) = gamma^{-2/beta} K_beta by scaling.
      out.prefactor = std::pow(gamma, -2.0 / beta) * k_beta(beta, cfg);
      out.u_power = -4.0 / beta;
      out.log_power = 0;
      break;
    case IntegralBranch::Classical: {
      const double g = g_beta(beta);
      out.prefactor = std::pow(gamma, -2.0 / beta) * g * g;
      out.u_power = -4.0 / beta;
      out.log_power = 0;
      break;
    }
  }
  return out;
}

double side_integral(double gamma, double beta, double delta, double u,
                     const QuadratureConfig& cfg) {
  IntegralSpec spec{gamma, beta, 1.0, delta, u};
  spec.validate();
  const double scale = std::pow(u, 2.0 / beta);
  const double side = std::min(delta * scale, beta_cut_radius(gamma, beta, cfg.tail_cut_tol));
  IntegrationOptions opts;
  opts.breakpoints = dyadic_toward_lo(0.0, side, kDyadicLevels);
  const double v = integrate_1d(
      [=](double x) { return std::exp(-gamma * std::pow(x, beta)); }, 0.0,
      side, cfg, opts).value;
  return v / scale;
}

AsymptoticPrediction side_asymptote(double gamma, double beta) {
  require_positive(gamma, "gamma");
  require_positive(beta, "beta");
  return {std::pow(gamma, -1.0 / beta) * g_beta(beta), -2.0 / beta, 0, false};
}

double inner_a(double z, double c1, double c2, const QuadratureConfig& cfg) {
  require_positive(z, "Z");
  if (!(c1 >= 0.0) || !(c2 >= 0.0)) {
    throw std::invalid_argument("inner_a: c1, c2 must be >= 0");
  }
  // X = e^s: A_c(Z) = int exp(-e^{2s} - Z^2 e^{-2s} - c1 e^s - c2 Z e^{-s}) ds.
  const double log_z = std::log(z);
  const double t0 = -std::log(cfg.tail_cut_tol);
  const double peak = 0.5 * log_z;
  const double s_hi = std::max(0.5 * std::log(t0), peak + 4.0);
  const double s_lo = std::min(log_z - 0.5 * std::log(t0), peak - 4.0);
  auto g = [=](double s) {
    const double x = std::exp(s);
    const double w = std::exp(log_z - s);
    return std::exp(-x * x - w * w - c1 * x - c2 * w);
  };
  return log_scale_integral(g, s_lo, s_hi, {log_z, peak, 0.0}, cfg);
}

double inner_a_gamma(double z, double gamma, const QuadratureConfig& cfg) {
  require_positive(z, "Z");
  require_positive(gamma, "gamma");
  return inner_a_gamma_log(std::log(z), gamma, cfg);
}

double j_lambda_scaled(double lambda, double p, double q, double gamma,
                       const QuadratureConfig& cfg) {
  require_positive(lambda, "lambda");
  require_positive(p, "p");
  require_positive(q, "q");
  require_positive(gamma, "gamma");
  // Z = lambda^{-1/p} W and v = W^q give
  // lambda^{q/p} J = (1/q) int_0^inf exp(-gamma v^{p/q}) A(lambda^{-1/p} v^{1/q}) dv.
  const double log_lambda = std::log(lambda);
  const double r = p / q;
  const QuadratureConfig inner_cfg = cfg.tightened(0.01);
  auto f = [&](double v) {
    const double log_z = -log_lambda / p + std::log(v) / q;
    return std::exp(-gamma * std::pow(v, r)) * inner_a_gamma_log(log_z, gamma, inner_cfg);
  };
  // A is decreasing in Z, so A(lambda^{-1/p}) bounds it for v >= 1.
  const double a_max = inner_a_gamma_log(-log_lambda / p, gamma, inner_cfg);
  IntegrationOptions opts;
  opts.envelope = DecayEnvelope{
      [=](double v) { return v < 1.0 ? a_max : a_max * std::exp(-gamma * std::pow(v, r)); },
      [=](double v) {
        // int_v^inf exp(-gamma w^r) dw = gamma^{-1/r} Gamma(1/r, gamma v^r) / r
        return a_max * std::pow(gamma, -1.0 / r) / r *
               boost::math::tgamma(1.0 / r, gamma * std::pow(v, r));
      }};
  const double cut_guess = std::pow((-std::log(cfg.tail_cut_tol) + std::log(a_max)) / gamma, 1.0 / r);
  opts.breakpoints = dyadic_toward_lo(0.0, std::max(1.0, cut_guess), kDyadicLevels);
  return integrate_1d(f, 0.0, INFINITY, cfg, opts).value / q;
}

double j_lambda_ratio(double lambda, double p, double q, double gamma,
                      const QuadratureConfig& cfg) {
  if (!(lambda > 1.0)) throw std::invalid_argument("j_lambda_ratio: lambda must exceed 1");
  const double qp = q / p;
  const double lead = std::tgamma(qp) / (p * p * std::pow(gamma, qp)) * std::log(lambda);
  return j_lambda_scaled(lambda, p, q, gamma, cfg) / lead;
}

double i_trend(const IntegralSpec& spec, const QuadratureConfig& cfg) {
  spec.validate();
  if (spec.beta != 2.0 || spec.gamma != 1.0) {
    throw std::invalid_argument("i_trend: requires beta = 2 and gamma = 1");
  }
  const double a = spec.a;
  const double c1 = spec.c1;
  const double c2 = spec.c2;
  // X = u x: I_c = u^{-2} int int exp(-X^2 - Y^2 - u^{2-2a} (XY)^a - c1 X - c2 Y).
  const double log_u = std::log(spec.u);
  const double lambda = std::exp((2.0 - 2.0 * a) * log_u);
  const double side = std::min(spec.delta * spec.u,
                               beta_cut_radius(1.0, 2.0, cfg.tail_cut_tol));
  auto g = [=](double x, double y) {
    const double prod = x * y;
    const double cross = prod > 0.0 ? lambda * std::pow(prod, a) : 0.0;
    return std::exp(-x * x - y * y - cross - c1 * x - c2 * y);
  };
  const double scaled = unit_square_integral(g, side, c1 == c2, cfg);
  return scaled / (spec.u * spec.u);
}

AsymptoticPrediction i_trend_asymptote(const IntegralSpec& spec,
                                       const QuadratureConfig& cfg) {
  spec.validate();
  if (spec.beta != 2.0 || spec.gamma != 1.0) {
    throw std::invalid_argument("i_trend_asymptote: requires beta = 2 and gamma = 1");
  }
  const double a = spec.a;
  AsymptoticPrediction out;
  out.uses_psi = false;
  switch (integral_branch(2.0, a)) {
    case IntegralBranch::Log:
      out.prefactor = 2.0 * (1.0 - a) * std::tgamma(1.0 / a) / (a * a);
      out.u_power = -2.0 / a;
      out.log_power = 1;
      break;
    case IntegralBranch::Critical:
      out.prefactor = trend_k(spec.c1, spec.c2, cfg);
      out.u_power = -2.0;
      break;
    case IntegralBranch::Classical:
      out.prefactor = trend_l(spec.c1, cfg) * trend_l(spec.c2, cfg);
      out.u_power = -2.0;
      break;
  }
  return out;
}

double trend_side_integral(double c, double delta, double u,
                           const QuadratureConfig& cfg) {
  require_positive(delta, "delta");
  require_positive(u, "u");
  if (!(c >= 0.0)) throw std::invalid_argument("trend_side_integral: c must be >= 0");
  const double side = std::min(delta * u, beta_cut_radius(1.0, 2.0, cfg.tail_cut_tol));
  const double v = integrate_1d([c](double x) { return std::exp(-x * x - c * x); },
                                0.0, side, cfg).value;
  return v / u;
}

AsymptoticPrediction trend_side_asymptote(double c, const QuadratureConfig& cfg) {
  return {trend_l(c, cfg), -1.0, 0, false};
}

}  // namespace excursion::quad
