#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "excursion/asymptotics.hpp"
#include "excursion/fieldsim.hpp"
#include "excursion/parallel.hpp"
#include "excursion/pickands.hpp"
#include "excursion/quad/constants.hpp"

namespace excursion::fieldsim {

namespace {

constexpr std::size_t kBlock = 32;

Eigen::MatrixXd trend_matrix(const GridField& grid, Trend trend) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(grid.n1()), static_cast<Eigen::Index>(grid.n2()));
  for (std::size_t i = 0; i < grid.n1(); ++i) {
    for (std::size_t j = 0; j < grid.n2(); ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          trend.c1 * grid.axis1()[i] + trend.c2 * grid.axis2()[j];
    }
  }
  return m;
}

}  // namespace

std::vector<double> sample_maxima(const GridField& grid, Trend trend,
                                  std::size_t n_samples, std::uint64_t seed,
                                  unsigned workers) {
  if (n_samples == 0) throw std::invalid_argument("sample_maxima: n_samples must be positive");
  if (!(trend.c1 >= 0.0) || !(trend.c2 >= 0.0)) {
    throw std::invalid_argument("sample_maxima: trend slopes must be nonnegative");
  }
  const auto n1 = static_cast<Eigen::Index>(grid.n1());
  const auto n2 = static_cast<Eigen::Index>(grid.n2());
  const std::size_t per_sample = grid.size();
  const Eigen::MatrixXd drift = trend_matrix(grid, trend);
  const Eigen::MatrixXd l2t = grid.axis_factor2().transpose();
  const auto& l1 = grid.axis_factor1();
  const auto& sigma = grid.sigma();

  std::vector<double> maxima(n_samples);
  const std::size_t n_blocks = (n_samples + kBlock - 1) / kBlock;
  parallel_for(n_blocks, workers, [&](std::size_t b) {
    const std::size_t first = b * kBlock;
    const std::size_t count = std::min(kBlock, n_samples - first);
    const auto cols = static_cast<Eigen::Index>(count) * n2;
    Eigen::MatrixXd z(n1, cols);
    for (std::size_t c = 0; c < count; ++c) {
      Engine engine = replicate_engine(seed, first + c);
      fill_normals(engine, {z.data() + c * per_sample, per_sample});
    }
    const Eigen::MatrixXd y = l1.triangularView<Eigen::Lower>() * z;
    Eigen::MatrixXd f(n1, n2);
    for (std::size_t c = 0; c < count; ++c) {
      f.noalias() = y.middleCols(static_cast<Eigen::Index>(c) * n2, n2) *
                    l2t.triangularView<Eigen::Upper>();
      maxima[first + c] = (f.cwiseProduct(sigma) - drift).maxCoeff();
    }
  });
  return maxima;
}

MCEstimate estimate_from_maxima(const std::vector<double>& maxima, double u,
                                std::uint64_t seed, Trend trend) {
  if (!std::isfinite(u)) throw std::invalid_argument("mc_excursion: u must be finite");
  if (maxima.empty()) throw std::invalid_argument("mc_excursion: no samples");
  std::size_t hits = 0;
  for (double m : maxima) hits += m > u ? 1 : 0;
  const double n = static_cast<double>(maxima.size());
  const double p = static_cast<double>(hits) / n;
  return {p, std::sqrt(p * (1.0 - p) / n), maxima.size(), u, seed, trend};
}

MCEstimate mc_excursion(const GridField& grid, double u, Trend trend,
                        std::size_t n_samples, std::uint64_t seed, unsigned workers) {
  if (!std::isfinite(u)) throw std::invalid_argument("mc_excursion: u must be finite");
  return estimate_from_maxima(sample_maxima(grid, trend, n_samples, seed, workers), u, seed,
                              trend);
}

GridField build_block_grid(const ModelParams& params, const BlockSpec& block,
                           std::size_t n_per_axis) {
  const double u = block.level_u;
  if (!(u > 0.0) || !std::isfinite(u)) {
    throw std::invalid_argument("build_block_grid: level_u must be positive and finite");
  }
  if (!(block.s1 >= 0.0) || !(block.s2 >= 0.0)) {
    throw std::invalid_argument("build_block_grid: side multipliers must be nonnegative");
  }
  if (n_per_axis < 2) throw std::invalid_argument("build_block_grid: n_per_axis must be >= 2");
  const double q = model::correlation_scale(params, u);
  const double hi1 = block.base.t1 + block.s1 * q;
  const double hi2 = block.base.t2 + block.s2 * q;
  model::require_in_domain(params, block.base);
  if (hi1 > params.T() || hi2 > params.T()) {
    std::ostringstream os;
    os << "build_block_grid: block [" << block.base.t1 << ", " << hi1 << "] x ["
       << block.base.t2 << ", " << hi2 << "] leaves [0, " << params.T() << "]^2";
    throw std::invalid_argument(os.str());
  }
  return GridField(params, linspace(block.base.t1, hi1, block.s1 > 0.0 ? n_per_axis : 1),
                   linspace(block.base.t2, hi2, block.s2 > 0.0 ? n_per_axis : 1));
}

double block_prediction(const ModelParams& params, const BlockSpec& block, double h1,
                        double h2) {
  const double u = block.level_u;
  return h1 * h2 * quad::normal_survival(u) *
         std::exp(-u * u * model::variance_loss(params, block.base));
}

BlockCheck mc_block_exceedance(const ModelParams& params, const BlockSpec& block,
                               const BlockOptions& opts) {
  const GridField grid = build_block_grid(params, block, opts.n_per_axis);
  BlockCheck out;
  out.mc = mc_excursion(grid, block.level_u, {}, opts.n_samples, opts.seed, opts.workers);

  // The Pickands factors use a separate stream of the same seed family and
  // the block lattice spacing in rescaled time.
  const std::uint64_t h_seed = opts.seed ^ 0x5bd1e995ULL;
  const pickands::RunOptions run{opts.workers, pickands::FbmMethod::Auto};
  auto factor = [&](double s) -> pickands::PickandsEstimate {
    if (s == 0.0) return {1.0, 0.0, 0, params.alpha(), 0.0, 1, h_seed};
    return pickands::pickands_finite(params.alpha(), s, opts.n_per_axis,
                                     opts.pickands_replicates, h_seed, run);
  };
  const pickands::PickandsEstimate e1 = factor(block.s1);
  const pickands::PickandsEstimate e2 = block.s2 == block.s1 ? e1 : factor(block.s2);
  out.h1 = e1.value;
  out.h2 = e2.value;
  out.h1_std_err = e1.std_err;
  out.h2_std_err = e2.std_err;
  out.prediction = block_prediction(params, block, out.h1, out.h2);
  out.ratio = out.mc.p_hat / out.prediction;
  return out;
}

std::vector<RatioRow> ratio_harness(const ModelParams& params,
                                    const std::vector<double>& u_ladder,
                                    const GridField& grid, std::size_t n_samples,
                                    std::uint64_t seed, double h_alpha, unsigned workers) {
  if (u_ladder.empty()) throw std::invalid_argument("ratio_harness: empty u ladder");
  for (std::size_t i = 0; i < u_ladder.size(); ++i) {
    if (!std::isfinite(u_ladder[i]) || !(u_ladder[i] > 1.0)) {
      throw std::invalid_argument("ratio_harness: levels must be finite and > 1");
    }
    if (i > 0 && !(u_ladder[i] > u_ladder[i - 1])) {
      throw std::invalid_argument("ratio_harness: u ladder must be increasing");
    }
  }
  const Trend trend{params.c1(), params.c2()};
  const AsymptoticPrediction pred = params.has_trend()
                                        ? asymptotics::predict_trend(params, h_alpha)
                                        : asymptotics::predict(params, h_alpha);
  const std::vector<double> maxima = sample_maxima(grid, trend, n_samples, seed, workers);
  std::vector<RatioRow> rows;
  for (double u : u_ladder) {
    const MCEstimate e = estimate_from_maxima(maxima, u, seed, trend);
    const double p = pred.evaluate(u);
    rows.push_back({u, e.p_hat, e.std_err, p, e.p_hat / p});
  }
  return rows;
}

}  // namespace excursion::fieldsim
