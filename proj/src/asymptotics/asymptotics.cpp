#include "excursion/asymptotics.hpp"

#include <cmath>
#include <stdexcept>

#include "excursion/quad/constants.hpp"

namespace excursion::asymptotics {

namespace {

void require_h(double h_alpha) {
  if (!(h_alpha > 0.0) || !std::isfinite(h_alpha)) {
    throw std::invalid_argument("Pickands constant must be finite and positive");
  }
}

double log_coefficient(double beta, double a) {
  return 2.0 * (beta - 2.0 * a) * std::tgamma(1.0 / a) / (a * a * beta);
}

}  // namespace

std::optional<double> known_pickands_constant(double alpha) {
  if (alpha == 1.0) return 1.0;
  return std::nullopt;
}

AsymptoticPrediction predict(const ModelParams& params, double h_alpha,
                             const quad::QuadratureConfig& cfg) {
  require_h(h_alpha);
  const double alpha = params.alpha();
  const double beta = params.beta();
  const double a = params.a();
  const double h2 = h_alpha * h_alpha;
  AsymptoticPrediction out;
  out.uses_psi = true;
  switch (model::classify_regime(params)) {
    case Regime::SideDominated:
      out.prefactor = 2.0 * h_alpha * quad::g_beta(beta);
      out.u_power = 2.0 / alpha - 2.0 / beta;
      break;
    case Regime::LogProduct:
      out.prefactor = h2 * log_coefficient(beta, a);
      out.u_power = 4.0 / alpha - 2.0 / a;
      out.log_power = 1;
      break;
    case Regime::CriticalProduct:
      out.prefactor = h2 * quad::k_beta(beta, cfg);
      out.u_power = 4.0 / alpha - 4.0 / beta;
      break;
    case Regime::Classical: {
      const double g = quad::g_beta(beta);
      out.prefactor = h2 * g * g;
      out.u_power = 4.0 / alpha - 4.0 / beta;
      break;
    }
  }
  return out;
}

AsymptoticPrediction predict_trend(const ModelParams& params, double h_alpha,
                                   const quad::QuadratureConfig& cfg) {
  require_h(h_alpha);
  if (params.beta() != 2.0) {
    throw std::invalid_argument("predict_trend: the trend asymptotics require beta = 2");
  }
  const double alpha = params.alpha();
  const double a = params.a();
  const double c1 = params.c1();
  const double c2 = params.c2();
  const double h2 = h_alpha * h_alpha;
  AsymptoticPrediction out;
  out.uses_psi = true;
  switch (model::classify_regime(params)) {
    case Regime::SideDominated:
      out.prefactor = h_alpha * (quad::trend_l(c1, cfg) + quad::trend_l(c2, cfg));
      out.u_power = 2.0 / alpha - 1.0;
      break;
    case Regime::LogProduct:
      out.prefactor = h2 * log_coefficient(2.0, a);
      out.u_power = 4.0 / alpha - 2.0 / a;
      out.log_power = 1;
      break;
    case Regime::CriticalProduct:
      out.prefactor = h2 * quad::trend_k(c1, c2, cfg);
      out.u_power = 4.0 / alpha - 2.0;
      break;
    case Regime::Classical:
      out.prefactor = h2 * quad::trend_l(c1, cfg) * quad::trend_l(c2, cfg);
      out.u_power = 4.0 / alpha - 2.0;
      break;
  }
  return out;
}

std::vector<SweepRow> regime_sweep(double alpha, double beta,
                                   const std::vector<double>& a_values, double u,
                                   double h_alpha, const quad::QuadratureConfig& cfg) {
  std::vector<SweepRow> rows;
  rows.reserve(a_values.size());
  for (double a : a_values) {
    const ModelParams p(alpha, beta, a);
    const AsymptoticPrediction pred = predict(p, h_alpha, cfg);
    rows.push_back({a, model::classify_regime(p), pred.u_power, pred.log_power,
                    pred.prefactor, pred.evaluate(u)});
  }
  return rows;
}

}  // namespace excursion::asymptotics
