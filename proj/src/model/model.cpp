#include "excursion/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace excursion {

namespace {

[[noreturn]] void reject(const std::string& what) {
  throw std::invalid_argument("ModelParams: " + what);
}

bool near(double x, double y) noexcept {
  return std::abs(x - y) <=
         model::kRegimeRelTol * std::max(std::abs(x), std::abs(y));
}

}  // namespace

ModelParams::ModelParams(double alpha, double beta, double a, double T,
                         double c1, double c2)
    : alpha_(alpha), beta_(beta), a_(a), T_(T), c1_(c1), c2_(c2) {
  for (double v : {alpha, beta, a, T, c1, c2}) {
    if (!std::isfinite(v)) reject("all parameters must be finite");
  }
  if (!(alpha > 0.0 && alpha <= 2.0)) {
    std::ostringstream os;
    os << "alpha must lie in (0,2], got " << alpha;
    reject(os.str());
  }
  if (!(beta > alpha)) {
    std::ostringstream os;
    os << "beta must exceed alpha, got beta=" << beta << " alpha=" << alpha;
    reject(os.str());
  }
  if (!(a > 0.0)) reject("a must be positive");
  if (!(T > 0.0)) reject("T must be positive");
  if (c1 < 0.0 || c2 < 0.0) reject("trend slopes c1, c2 must be >= 0");
}

ModelParams ModelParams::with_a(double a) const {
  return ModelParams(alpha_, beta_, a, T_, c1_, c2_);
}

ModelParams ModelParams::with_trend(double c1, double c2) const {
  return ModelParams(alpha_, beta_, a_, T_, c1, c2);
}

std::string_view to_string(Regime r) noexcept {
  switch (r) {
    case Regime::SideDominated: return "SideDominated";
    case Regime::LogProduct: return "LogProduct";
    case Regime::CriticalProduct: return "CriticalProduct";
    case Regime::Classical: return "Classical";
  }
  return "Unknown";
}

namespace model {

void require_in_domain(const ModelParams& p, Point2 t) {
  if (!std::isfinite(t.t1) || !std::isfinite(t.t2) || t.t1 < 0.0 ||
      t.t2 < 0.0 || t.t1 > p.T() || t.t2 > p.T()) {
    std::ostringstream os;
    os << "point (" << t.t1 << ", " << t.t2 << ") lies outside [0, " << p.T()
       << "]^2";
    throw std::invalid_argument(os.str());
  }
}

double variance_loss(const ModelParams& p, Point2 t) {
  require_in_domain(p, t);
  return std::pow(t.t1, p.beta()) + std::pow(t.t2, p.beta()) +
         std::pow(t.t1, p.a()) * std::pow(t.t2, p.a());
}

double sigma(const ModelParams& p, Point2 t) {
  return std::exp(-variance_loss(p, t));
}

double axis_correlation(double alpha, double x, double y) noexcept {
  return std::exp(-std::pow(std::abs(x - y), alpha));
}

double correlation(const ModelParams& p, Point2 t, Point2 s) {
  require_in_domain(p, t);
  require_in_domain(p, s);
  return std::exp(-std::pow(std::abs(t.t1 - s.t1), p.alpha()) -
                  std::pow(std::abs(t.t2 - s.t2), p.alpha()));
}

double covariance(const ModelParams& p, Point2 t, Point2 s) {
  return sigma(p, t) * sigma(p, s) * correlation(p, t, s);
}

double regime_threshold(double alpha, double beta) noexcept {
  return alpha * beta / (alpha + beta);
}

Regime classify_regime(double alpha, double beta, double a) {
  const double a0 = regime_threshold(alpha, beta);
  const double half_beta = 0.5 * beta;
  if (near(a, half_beta)) return Regime::CriticalProduct;
  if (a > half_beta) return Regime::Classical;
  if (near(a, a0) || a > a0) return Regime::LogProduct;
  return Regime::SideDominated;
}

Regime classify_regime(const ModelParams& p) {
  return classify_regime(p.alpha(), p.beta(), p.a());
}

double correlation_scale(const ModelParams& p, double u) {
  if (!(u > 0.0) || !std::isfinite(u)) {
    throw std::invalid_argument("correlation_scale: u must be positive");
  }
  return std::pow(u, -2.0 / p.alpha());
}

}  // namespace model
}  // namespace excursion
