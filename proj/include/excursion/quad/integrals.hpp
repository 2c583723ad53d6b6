#pragma once

#include "excursion/prediction.hpp"
#include "excursion/quad/integrate.hpp"

namespace excursion::quad {

/// Parameters of the variance-loss integrals
///   I_gamma(u) = int_0^delta int_0^delta
///                exp(-gamma u^2 (x^beta + y^beta + x^a y^a)) dx dy
/// and of the trend variant I_c(u) (beta = 2, gamma = 1).
struct IntegralSpec {
  double gamma = 1.0;
  double beta = 2.0;
  double a = 1.0;
  double delta = 1.0;
  double u = 1.0;
  double c1 = 0.0;
  double c2 = 0.0;

  void validate() const;
};

/// Which leading-order form applies: a < beta/2, a = beta/2 or a > beta/2
/// (boundary compared with relative tolerance 1e-12).
enum class IntegralBranch { Log, Critical, Classical };

IntegralBranch integral_branch(double beta, double a);

/// Direct quadrature of I_gamma(u). The exact substitution x = u^(-2/beta) X
/// moves the mass to unit scale; no asymptotic approximation is made.
double i_gamma(const IntegralSpec& spec, const QuadratureConfig& cfg = {});

/// Closed-form leading term of I_gamma(u) as (prefactor, u-power, log-power);
/// uses_psi is false.
AsymptoticPrediction i_gamma_asymptote(const IntegralSpec& spec,
                                       const QuadratureConfig& cfg = {});

/// int_0^delta exp(-gamma u^2 x^beta) dx by quadrature.
double side_integral(double gamma, double beta, double delta, double u,
                     const QuadratureConfig& cfg = {});

/// gamma^(-1/beta) G_beta u^(-2/beta).
AsymptoticPrediction side_asymptote(double gamma, double beta);

/// Trend-variant inner integral
///   A_c(Z) = int_0^inf X^-1 exp(-X^2 - (Z/X)^2 - c1 X - c2 Z/X) dX,  Z > 0.
/// Equals -log Z + O(1) as Z -> 0 and decays like exp(-2Z) as Z -> inf.
double inner_a(double z, double c1, double c2, const QuadratureConfig& cfg = {});

/// Product-term inner integral
///   A(Z) = int_0^inf X^-1 exp(-gamma X - gamma Z/X) dX,  Z > 0.
double inner_a_gamma(double z, double gamma, const QuadratureConfig& cfg = {});

/// J(lambda) = int int X^(q-1) Y^(q-1) exp(-gamma X - gamma Y - gamma lambda (XY)^p)
/// scaled by lambda^(q/p), computed as a nested quadrature over Z = XY with
/// inner_a_gamma as the inner integral.
double j_lambda_scaled(double lambda, double p, double q, double gamma,
                       const QuadratureConfig& cfg = {});

/// J(lambda) divided by Gamma(q/p) / (p^2 gamma^(q/p)) lambda^(-q/p) log lambda.
double j_lambda_ratio(double lambda, double p, double q, double gamma,
                      const QuadratureConfig& cfg = {});

/// Direct quadrature of
///   I_c(u) = int_0^delta int_0^delta exp(-u^2 (x^2 + y^2 + x^a y^a) - u (c1 x + c2 y)).
/// spec.beta must be 2 and spec.gamma 1.
double i_trend(const IntegralSpec& spec, const QuadratureConfig& cfg = {});

/// Leading term of I_c(u): a < 1 -> (2(1-a)Gamma(1/a)/a^2, -2/a, 1),
/// a = 1 -> (K(c1,c2), -2, 0), a > 1 -> (L(c1) L(c2), -2, 0).
AsymptoticPrediction i_trend_asymptote(const IntegralSpec& spec,
                                       const QuadratureConfig& cfg = {});

/// int_0^delta exp(-u^2 x^2 - u c x) dx by quadrature.
double trend_side_integral(double c, double delta, double u,
                           const QuadratureConfig& cfg = {});

/// L(c) u^-1.
AsymptoticPrediction trend_side_asymptote(double c, const QuadratureConfig& cfg = {});

}  // namespace excursion::quad
