#pragma once

#include <optional>
#include <vector>

#include "excursion/model.hpp"
#include "excursion/prediction.hpp"
#include "excursion/quad/integrate.hpp"

namespace excursion::asymptotics {

/// Tabulated Pickands constants; only H_1 = 1 is known in closed form.
std::optional<double> known_pickands_constant(double alpha);

/// Leading term of p(u) for the regime of `params`, with the Pickands
/// constant supplied by the caller:
///   side     2 H G_beta u^(2/alpha - 2/beta)
///   log      H^2 2(beta-2a)Gamma(1/a)/(a^2 beta) u^(4/alpha - 2/a) log u
///   critical H^2 K_beta u^(4/alpha - 4/beta)
///   classical H^2 G_beta^2 u^(4/alpha - 4/beta)
/// each times Psi(u). The trend slopes of `params` are ignored.
AsymptoticPrediction predict(const ModelParams& params, double h_alpha,
                             const quad::QuadratureConfig& cfg = {});

/// Trend version (beta = 2 only): L(c1)+L(c2) replaces 2 G_2 in the side
/// regime, K(c1,c2) replaces K_2 and L(c1)L(c2) replaces G_2^2; the log
/// regime is unchanged.
AsymptoticPrediction predict_trend(const ModelParams& params, double h_alpha,
                                   const quad::QuadratureConfig& cfg = {});

struct SweepRow {
  double a = 0.0;
  Regime regime = Regime::Classical;
  double u_power = 0.0;
  int log_power = 0;
  double prefactor = 0.0;
  /// Prediction evaluated at the sweep level u.
  double value = 0.0;
};

/// Regime, order and prefactor for each `a` at fixed (alpha, beta).
std::vector<SweepRow> regime_sweep(double alpha, double beta,
                                   const std::vector<double>& a_values, double u,
                                   double h_alpha,
                                   const quad::QuadratureConfig& cfg = {});

}  // namespace excursion::asymptotics
