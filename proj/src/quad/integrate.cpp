#include "excursion/quad/integrate.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>
#include <stdexcept>

#include "excursion/error.hpp"

namespace excursion::quad {

namespace {

// Gauss-Kronrod 21-point abscissae and weights (QUADPACK qk21).
constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077600525452184, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = std::numeric_limits<double>::min();

struct Segment {
  double lo;
  double hi;
  double value;
  double error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

Segment gauss_kronrod(const Integrand& f, double lo, double hi) {
  const double center = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  const double abs_half = std::abs(half);

  const double f_center = f(center);
  double res_g = 0.0;
  double res_k = kWgk[10] * f_center;
  double res_abs = std::abs(res_k);
  std::array<double, 10> f1{};
  std::array<double, 10> f2{};

  for (int j = 0; j < 5; ++j) {
    const int jtw = 2 * j + 1;
    const double dx = half * kXgk[jtw];
    const double v1 = f(center - dx);
    const double v2 = f(center + dx);
    f1[jtw] = v1;
    f2[jtw] = v2;
    res_g += kWg[j] * (v1 + v2);
    res_k += kWgk[jtw] * (v1 + v2);
    res_abs += kWgk[jtw] * (std::abs(v1) + std::abs(v2));
  }
  for (int j = 0; j < 5; ++j) {
    const int jtwm1 = 2 * j;
    const double dx = half * kXgk[jtwm1];
    const double v1 = f(center - dx);
    const double v2 = f(center + dx);
    f1[jtwm1] = v1;
    f2[jtwm1] = v2;
    res_k += kWgk[jtwm1] * (v1 + v2);
    res_abs += kWgk[jtwm1] * (std::abs(v1) + std::abs(v2));
  }

  const double mean = 0.5 * res_k;
  double res_asc = kWgk[10] * std::abs(f_center - mean);
  for (int j = 0; j < 10; ++j) {
    res_asc += kWgk[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));
  }

  const double value = res_k * half;
  res_abs *= abs_half;
  res_asc *= abs_half;
  double err = std::abs((res_k - res_g) * half);
  if (res_asc != 0.0 && err != 0.0) {
    err = res_asc * std::min(1.0, std::pow(200.0 * err / res_asc, 1.5));
  }
  if (res_abs > kTiny / (50.0 * kEps)) {
    err = std::max(50.0 * kEps * res_abs, err);
  }
  if (!std::isfinite(value) || !std::isfinite(err)) {
    std::ostringstream os;
    os << "integrand is not finite on [" << lo << ", " << hi << "]";
    throw std::domain_error(os.str());
  }
  return {lo, hi, value, err};
}

QuadResult adaptive(const Integrand& f, std::vector<double> points,
                    const QuadratureConfig& cfg) {
  std::priority_queue<Segment> queue;
  double total = 0.0;
  double total_err = 0.0;
  // Error carried by segments too narrow to bisect further.
  double frozen_err = 0.0;
  double frozen_val = 0.0;

  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    if (!(points[i + 1] > points[i])) continue;
    Segment s = gauss_kronrod(f, points[i], points[i + 1]);
    total += s.value;
    total_err += s.error;
    queue.push(s);
  }
  int intervals = static_cast<int>(queue.size());

  auto target = [&] { return std::max(cfg.abs_tol, cfg.rel_tol * std::abs(total)); };

  while (total_err > target()) {
    if (queue.empty()) {
      std::ostringstream os;
      os << "adaptive quadrature cannot resolve the integrand further "
            "(roundoff limited); estimate "
         << total << " +- " << total_err;
      throw ConvergenceError(os.str(), total, total_err);
    }
    if (intervals >= cfg.max_subdivisions) {
      std::ostringstream os;
      os << "adaptive quadrature exhausted " << cfg.max_subdivisions
         << " subdivisions; estimate " << total << " +- " << total_err;
      throw ConvergenceError(os.str(), total, total_err);
    }
    Segment worst = queue.top();
    queue.pop();
    const double mid = 0.5 * (worst.lo + worst.hi);
    const double scale = std::max(std::abs(worst.lo), std::abs(worst.hi));
    if (!(mid > worst.lo && mid < worst.hi) ||
        (worst.hi - worst.lo) <= 1e3 * kEps * scale) {
      frozen_err += worst.error;
      frozen_val += worst.value;
      // Give up only when frozen error alone blocks convergence.
      if (frozen_err > target()) {
        std::ostringstream os;
        os << "adaptive quadrature hit the roundoff limit near " << mid
           << "; estimate " << total << " +- " << total_err;
        throw ConvergenceError(os.str(), total, total_err);
      }
      continue;
    }
    Segment left = gauss_kronrod(f, worst.lo, mid);
    Segment right = gauss_kronrod(f, mid, worst.hi);
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    queue.push(left);
    queue.push(right);
    ++intervals;
  }
  (void)frozen_val;
  return {total, total_err, intervals};
}

}  // namespace

void QuadratureConfig::validate() const {
  if (abs_tol < 0.0 || rel_tol < 0.0 || !std::isfinite(abs_tol) ||
      !std::isfinite(rel_tol)) {
    throw std::invalid_argument("QuadratureConfig: tolerances must be finite and >= 0");
  }
  if (abs_tol == 0.0 && rel_tol == 0.0) {
    throw std::invalid_argument("QuadratureConfig: abs_tol and rel_tol are both zero");
  }
  if (max_subdivisions <= 0) {
    throw std::invalid_argument("QuadratureConfig: max_subdivisions must be positive");
  }
  if (!(tail_cut_tol > 0.0) || !(tail_cut_tol < 1.0)) {
    throw std::invalid_argument("QuadratureConfig: tail_cut_tol must lie in (0,1)");
  }
}

QuadratureConfig QuadratureConfig::tightened(double factor) const {
  QuadratureConfig c = *this;
  c.abs_tol *= factor;
  c.rel_tol *= factor;
  // Never ask for less than a few ulps of relative accuracy.
  c.rel_tol = std::max(c.rel_tol, 50.0 * kEps);
  return c;
}

std::vector<double> dyadic_toward_lo(double lo, double hi, int levels) {
  std::vector<double> pts;
  pts.reserve(static_cast<std::size_t>(levels));
  for (int k = levels; k >= 1; --k) {
    pts.push_back(lo + (hi - lo) * std::ldexp(1.0, -k));
  }
  return pts;
}

std::vector<double> geometric_from(double lo, double hi) {
  std::vector<double> pts;
  if (!(lo > 0.0)) return pts;
  for (double x = 2.0 * lo; x < hi; x *= 2.0) pts.push_back(x);
  return pts;
}

QuadResult integrate_1d(const Integrand& f, double lo, double hi,
                        const QuadratureConfig& cfg,
                        const IntegrationOptions& opts) {
  cfg.validate();
  if (std::isnan(lo) || std::isnan(hi) || !std::isfinite(lo)) {
    throw std::invalid_argument("integrate_1d: lower limit must be finite");
  }
  if (hi < lo) {
    QuadResult r = integrate_1d(f, hi, lo, cfg, opts);
    r.value = -r.value;
    return r;
  }
  if (hi == lo) return {0.0, 0.0, 0};

  if (std::isinf(hi)) {
    if (opts.envelope) {
      // Cut where the envelope drops below tail_cut_tol.
      const DecayEnvelope& env = *opts.envelope;
      double step = 1.0;
      double cut = lo + step;
      int guard = 0;
      while (env.value(cut) >= cfg.tail_cut_tol && guard++ < 200) {
        step *= 1.25;
        cut = lo + step;
      }
      if (!(env.value(cut) < cfg.tail_cut_tol)) {
        throw std::domain_error("integrate_1d: decay envelope never drops below tail_cut_tol");
      }
      IntegrationOptions inner;
      for (double b : opts.breakpoints) {
        if (b > lo && b < cut) inner.breakpoints.push_back(b);
      }
      QuadResult r = integrate_1d(f, lo, cut, cfg, inner);
      r.abs_error += std::abs(env.tail(cut));
      return r;
    }
    // Compactify: x = lo + t/(1-t), t in [0,1).
    auto g = [&](double t) {
      const double one_minus = 1.0 - t;
      const double x = lo + t / one_minus;
      const double v = f(x);
      return v == 0.0 ? 0.0 : v / (one_minus * one_minus);
    };
    std::vector<double> pts{0.0};
    for (double b : opts.breakpoints) {
      if (b > lo) pts.push_back((b - lo) / (1.0 + b - lo));
    }
    pts.push_back(1.0);
    std::sort(pts.begin(), pts.end());
    return adaptive(g, std::move(pts), cfg);
  }

  std::vector<double> pts{lo};
  for (double b : opts.breakpoints) {
    if (b > lo && b < hi) pts.push_back(b);
  }
  pts.push_back(hi);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return adaptive(f, std::move(pts), cfg);
}

QuadResult integrate_2d(const std::function<double(double, double)>& f,
                        const Region2d& region, const QuadratureConfig& cfg) {
  cfg.validate();
  const QuadratureConfig inner_cfg = cfg.tightened(0.01);
  double inner_err = 0.0;
  auto outer = [&](double x) {
    const double lo = region.y_lo ? region.y_lo(x) : 0.0;
    const double hi = region.y_hi(x);
    if (!(hi > lo)) return 0.0;
    IntegrationOptions opts;
    if (region.y_breakpoints) opts.breakpoints = region.y_breakpoints(x);
    QuadResult r = integrate_1d([&](double y) { return f(x, y); }, lo, hi,
                                inner_cfg, opts);
    inner_err = std::max(inner_err, r.abs_error);
    return r.value;
  };
  IntegrationOptions opts;
  opts.breakpoints = region.x_breakpoints;
  QuadResult r = integrate_1d(outer, region.x_lo, region.x_hi, cfg, opts);
  r.abs_error += inner_err * (region.x_hi - region.x_lo);
  return r;
}

}  // namespace excursion::quad
