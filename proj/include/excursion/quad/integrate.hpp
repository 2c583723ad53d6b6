#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace excursion::quad {

struct QuadratureConfig {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  int max_subdivisions = 2000;
  /// Infinite domains are cut where the decay envelope drops below this.
  double tail_cut_tol = 1e-16;

  /// Throws std::invalid_argument on non-positive limits or when both
  /// tolerances are zero.
  void validate() const;

  /// Copy with both tolerances scaled by `factor`.
  QuadratureConfig tightened(double factor) const;
};

struct QuadResult {
  double value = 0.0;
  double abs_error = 0.0;
  int intervals = 0;
};

using Integrand = std::function<double(double)>;

/// Monotone decay envelope |f(x)| <= value(x) on [cut, inf), with
/// tail(x) = integral of the envelope over [x, inf).
struct DecayEnvelope {
  std::function<double(double)> value;
  std::function<double(double)> tail;
};

struct IntegrationOptions {
  /// Interior points where the integrand may be less smooth; used as the
  /// initial partition of the adaptive routine.
  std::vector<double> breakpoints;
  /// Required for an infinite upper limit unless the compactifying map
  /// x = lo + t/(1-t) is acceptable.
  std::optional<DecayEnvelope> envelope;
};

/// Globally adaptive Gauss-Kronrod (10/21) integration of `f` over [lo, hi].
/// `hi` may be +infinity. The result meets max(abs_tol, rel_tol*|value|);
/// otherwise ConvergenceError is thrown once max_subdivisions is reached.
QuadResult integrate_1d(const Integrand& f, double lo, double hi,
                        const QuadratureConfig& cfg,
                        const IntegrationOptions& opts = {});

/// Points lo + (hi-lo)*2^-k for k = 1..levels, in increasing order; used to
/// resolve behaviour concentrated at `lo`.
std::vector<double> dyadic_toward_lo(double lo, double hi, int levels);

/// Geometric points lo*2^k strictly inside (lo, hi) for lo > 0.
std::vector<double> geometric_from(double lo, double hi);

/// Iterated integral of f(x, y) over lo_x <= x <= hi_x,
/// y_lo(x) <= y <= y_hi(x). Every outer node runs its own adaptive inner
/// integration with a tightened tolerance.
struct Region2d {
  double x_lo = 0.0;
  double x_hi = 0.0;
  std::function<double(double)> y_lo;
  std::function<double(double)> y_hi;
  std::vector<double> x_breakpoints;
  /// Inner breakpoints as a function of the outer coordinate.
  std::function<std::vector<double>(double)> y_breakpoints;
};

QuadResult integrate_2d(const std::function<double(double, double)>& f,
                        const Region2d& region, const QuadratureConfig& cfg);

}  // namespace excursion::quad
