#pragma once

#include <string_view>

namespace excursion {

/// Parameters of the field family: correlation exponent `alpha`, side
/// variance exponent `beta`, product exponent `a`, horizon `T` and the
/// linear trend slopes `c1`, `c2`.
///
/// Construction validates 0 < alpha <= 2, beta > alpha, a > 0, T > 0 and
/// c1, c2 >= 0; a violation throws std::invalid_argument.
class ModelParams {
 public:
  ModelParams(double alpha, double beta, double a, double T = 1.0,
              double c1 = 0.0, double c2 = 0.0);

  double alpha() const noexcept { return alpha_; }
  double beta() const noexcept { return beta_; }
  double a() const noexcept { return a_; }
  double T() const noexcept { return T_; }
  double c1() const noexcept { return c1_; }
  double c2() const noexcept { return c2_; }

  bool has_trend() const noexcept { return c1_ != 0.0 || c2_ != 0.0; }

  ModelParams with_a(double a) const;
  ModelParams with_trend(double c1, double c2) const;

 private:
  double alpha_;
  double beta_;
  double a_;
  double T_;
  double c1_;
  double c2_;
};

enum class Regime { SideDominated, LogProduct, CriticalProduct, Classical };

std::string_view to_string(Regime r) noexcept;

struct Point2 {
  double t1 = 0.0;
  double t2 = 0.0;
};

namespace model {

/// Relative tolerance used when comparing `a` against the regime boundaries.
inline constexpr double kRegimeRelTol = 1e-12;

/// Throws std::invalid_argument unless `t` is finite and inside [0,T]^2.
void require_in_domain(const ModelParams& p, Point2 t);

/// V(t) = t1^beta + t2^beta + t1^a t2^a.
double variance_loss(const ModelParams& p, Point2 t);

/// sigma(t) = exp(-V(t)).
double sigma(const ModelParams& p, Point2 t);

/// r(t,s) = exp(-|t1-s1|^alpha - |t2-s2|^alpha).
double correlation(const ModelParams& p, Point2 t, Point2 s);

double covariance(const ModelParams& p, Point2 t, Point2 s);

/// One-dimensional factor exp(-|x-y|^alpha) of the separable correlation.
double axis_correlation(double alpha, double x, double y) noexcept;

/// a0 = alpha*beta/(alpha+beta).
double regime_threshold(double alpha, double beta) noexcept;

Regime classify_regime(const ModelParams& p);

/// Classification from raw exponents; used by the sweep where `a` varies.
Regime classify_regime(double alpha, double beta, double a);

/// q_u = u^(-2/alpha), the correlation block mesh.
double correlation_scale(const ModelParams& p, double u);

}  // namespace model
}  // namespace excursion
