#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "excursion/parallel.hpp"
#include "excursion/pickands.hpp"

namespace excursion::pickands {

namespace {

constexpr std::size_t kBlock = 128;

struct Moments {
  double mean = 0.0;
  double std_err = 0.0;
};

// Two-pass mean and standard error in replicate order.
Moments moments(const std::vector<double>& v) {
  const double n = static_cast<double>(v.size());
  double sum = 0.0;
  for (double x : v) sum += x;
  const double mean = sum / n;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  const double var = v.size() > 1 ? ss / (n - 1.0) : 0.0;
  return {mean, std::sqrt(var / n)};
}

// Runs `per_replicate(column_of_path, replicate_index)` over all replicates,
// sampling paths in fixed-size blocks so the arithmetic is independent of
// the worker count.
template <class Fn>
void for_each_path(const FbmGrid& grid, std::size_t n_replicates, std::uint64_t seed,
                   unsigned workers, Fn&& per_replicate) {
  const std::size_t n_blocks = (n_replicates + kBlock - 1) / kBlock;
  parallel_for(n_blocks, workers, [&](std::size_t b) {
    const std::size_t first = b * kBlock;
    const std::size_t count = std::min(kBlock, n_replicates - first);
    Eigen::MatrixXd paths(static_cast<Eigen::Index>(grid.n_points()),
                          static_cast<Eigen::Index>(count));
    grid.sample_batch(seed, first, paths);
    for (std::size_t c = 0; c < count; ++c) {
      per_replicate(paths.col(static_cast<Eigen::Index>(c)), first + c);
    }
  });
}

std::vector<double> drift(const FbmGrid& grid) {
  std::vector<double> d(grid.n_points());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = std::pow(grid.times()[i], grid.alpha());
  return d;
}

}  // namespace

double spacing_for(double alpha, double max_spacing_power) {
  if (!(max_spacing_power > 0.0)) {
    throw std::invalid_argument("spacing_for: max_spacing_power must be positive");
  }
  return std::pow(max_spacing_power, 2.0 / alpha);
}

PickandsEstimate pickands_finite(double alpha, double horizon, std::size_t n_points,
                                 std::size_t n_replicates, std::uint64_t seed,
                                 const RunOptions& opts) {
  if (n_replicates == 0) throw std::invalid_argument("pickands_finite: n_replicates must be positive");
  const FbmGrid grid(alpha, horizon, n_points, opts.method);
  const std::vector<double> d = drift(grid);
  std::vector<double> values(n_replicates);
  for_each_path(grid, n_replicates, seed, opts.workers,
                [&](const auto& path, std::size_t r) {
                  double best = 0.0;
                  for (Eigen::Index i = 1; i < path.size(); ++i) {
                    best = std::max(best, std::numbers::sqrt2 * path[i] - d[static_cast<std::size_t>(i)]);
                  }
                  values[r] = std::exp(best);
                });
  const Moments m = moments(values);
  return {m.mean, m.std_err, n_replicates, alpha, horizon, n_points, seed};
}

PickandsConstantEstimate pickands_constant(double alpha, const ExtrapolationProtocol& protocol) {
  std::vector<double> ladder = protocol.s_ladder;
  if (ladder.size() < 2) throw std::invalid_argument("pickands_constant: ladder needs two rungs");
  std::sort(ladder.begin(), ladder.end());
  if (!(ladder.front() > 0.0) || std::adjacent_find(ladder.begin(), ladder.end()) != ladder.end()) {
    throw std::invalid_argument("pickands_constant: ladder must be distinct positive values");
  }
  if (protocol.n_replicates < 2) {
    throw std::invalid_argument("pickands_constant: need at least two replicates");
  }

  // Spacing: the largest h <= h_max that divides the smallest rung; every
  // rung must sit on the grid.
  const double h_max = spacing_for(alpha, protocol.max_spacing_power);
  const double h = ladder.front() / std::ceil(ladder.front() / h_max);
  std::vector<std::size_t> rung_index;
  for (double s : ladder) {
    const double k = s / h;
    const double kr = std::round(k);
    if (std::abs(k - kr) > 1e-9 * k) {
      std::ostringstream os;
      os << "pickands_constant: rung S=" << s << " is not a multiple of the grid spacing " << h;
      throw std::invalid_argument(os.str());
    }
    rung_index.push_back(static_cast<std::size_t>(kr));
  }
  const std::size_t n_points = rung_index.back() + 1;
  const FbmGrid grid(alpha, ladder.back(), n_points, protocol.run.method);
  const std::vector<double> d = drift(grid);
  const std::size_t n_rep = protocol.n_replicates;
  const std::size_t n_rungs = ladder.size();

  std::vector<std::vector<double>> values(n_rungs, std::vector<double>(n_rep));
  for_each_path(grid, n_rep, protocol.seed, protocol.run.workers,
                [&](const auto& path, std::size_t r) {
                  double best = 0.0;
                  std::size_t next = 0;
                  for (std::size_t i = 1; i < n_points; ++i) {
                    best = std::max(best, std::numbers::sqrt2 * path[static_cast<Eigen::Index>(i)] - d[i]);
                    while (next < n_rungs && rung_index[next] == i) {
                      values[next][r] = std::exp(best);
                      ++next;
                    }
                  }
                });

  PickandsConstantEstimate out;
  for (std::size_t k = 0; k < n_rungs; ++k) {
    const Moments m = moments(values[k]);
    out.rungs.push_back({m.mean, m.std_err, n_rep, alpha, ladder[k], rung_index[k] + 1, protocol.seed});
  }
  const double s_top = ladder[n_rungs - 1];
  const double s_prev = ladder[n_rungs - 2];
  std::vector<double> slope(n_rep), naive(n_rep), diff(n_rep);
  for (std::size_t r = 0; r < n_rep; ++r) {
    slope[r] = (values[n_rungs - 1][r] - values[n_rungs - 2][r]) / (s_top - s_prev);
    naive[r] = values[n_rungs - 1][r] / s_top;
    diff[r] = slope[r] - naive[r];
  }
  const Moments ms = moments(slope);
  const Moments mn = moments(naive);
  const Moments md = moments(diff);
  out.slope = {ms.mean, ms.std_err, n_rep, alpha, s_top, n_points, protocol.seed};
  out.naive = {mn.mean, mn.std_err, n_rep, alpha, s_top, n_points, protocol.seed};
  out.joint_std_err = md.std_err;
  if (std::abs(md.mean) > 3.0 * md.std_err) {
    out.disagreement = true;
    std::ostringstream os;
    os << "slope estimate " << ms.mean << " and naive H(S)/S " << mn.mean
       << " differ by more than 3 joint standard errors (" << md.std_err << ")";
    out.warning = os.str();
  }
  return out;
}

}  // namespace excursion::pickands
