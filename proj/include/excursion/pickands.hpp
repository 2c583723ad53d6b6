#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "excursion/rng.hpp"

namespace excursion::pickands {

enum class FbmMethod {
  /// Cholesky up to 4096 interior points, circulant embedding beyond that or
  /// when the Cholesky factorization fails.
  Auto,
  Cholesky,
  Circulant,
};

std::string_view to_string(FbmMethod m) noexcept;

/// Uniform grid 0 = t_0 < ... < t_{n-1} = S carrying a factorization of the
/// covariance (t_i^alpha + t_j^alpha - |t_i - t_j|^alpha) / 2 of fractional
/// Brownian motion with Hurst index alpha/2.
class FbmGrid {
 public:
  FbmGrid(double alpha, double horizon, std::size_t n_points,
          FbmMethod method = FbmMethod::Auto);

  double alpha() const noexcept { return alpha_; }
  double horizon() const noexcept { return horizon_; }
  std::size_t n_points() const noexcept { return times_.size(); }
  double spacing() const noexcept { return horizon_ / static_cast<double>(times_.size() - 1); }
  const std::vector<double>& times() const noexcept { return times_; }
  FbmMethod method() const noexcept { return method_; }
  double jitter() const noexcept { return jitter_; }

  /// Lower factor of the covariance over t_1..t_{n-1}; empty for the
  /// circulant method.
  const Eigen::MatrixXd& factor() const noexcept { return factor_; }

  /// Covariance matrix over t_1..t_{n-1}.
  Eigen::MatrixXd covariance() const;

  /// One path of length n_points with path[0] = 0.
  void sample(Engine& engine, std::span<double> path) const;

  /// Paths for replicates first .. first + paths.cols() - 1 of `seed`, one per
  /// column; `paths` must have n_points rows.
  void sample_batch(std::uint64_t seed, std::uint64_t first,
                    Eigen::MatrixXd& paths) const;

 private:
  void build_circulant();

  double alpha_;
  double horizon_;
  std::vector<double> times_;
  FbmMethod method_;
  double jitter_ = 0.0;
  Eigen::MatrixXd factor_;
  // Circulant embedding: sqrt(lambda_k / N) for the increment sequence.
  std::vector<double> circulant_scale_;
};

std::vector<double> fbm_sample(const FbmGrid& grid, Engine& engine);

struct PickandsEstimate {
  double value = 0.0;
  /// Sample standard deviation / sqrt(n_replicates).
  double std_err = 0.0;
  std::size_t n_replicates = 0;
  double alpha = 0.0;
  double horizon = 0.0;
  std::size_t n_points = 0;
  std::uint64_t seed = 0;
};

struct RunOptions {
  unsigned workers = 1;
  FbmMethod method = FbmMethod::Auto;
};

/// Monte Carlo estimate of H_alpha(S) = E exp(max_i (sqrt(2) B(t_i) - t_i^alpha))
/// on an n_points uniform grid of [0, S]. The grid maximum understates the
/// continuous supremum, so the estimate is biased low.
PickandsEstimate pickands_finite(double alpha, double horizon, std::size_t n_points,
                                 std::size_t n_replicates, std::uint64_t seed,
                                 const RunOptions& opts = {});

/// Grid spacing h with h^(alpha/2) = max_spacing_power.
double spacing_for(double alpha, double max_spacing_power);

struct ExtrapolationProtocol {
  std::vector<double> s_ladder{1.0, 2.0, 4.0};
  double max_spacing_power = 0.05;
  std::size_t n_replicates = 1000000;
  std::uint64_t seed = 20240611;
  RunOptions run{};
};

struct PickandsConstantEstimate {
  /// Slope (H(S_top) - H(S_prev)) / (S_top - S_prev) over the top two rungs.
  PickandsEstimate slope;
  /// H(S_top) / S_top.
  PickandsEstimate naive;
  /// H(S) for every rung, all from the same paths.
  std::vector<PickandsEstimate> rungs;
  /// Standard error of slope - naive.
  double joint_std_err = 0.0;
  bool disagreement = false;
  std::string warning;
};

/// Slope extrapolation of H_alpha = lim H_alpha(S)/S. Every rung is evaluated
/// on prefixes of one path per replicate on [0, S_max], so the rungs share
/// random numbers.
PickandsConstantEstimate pickands_constant(double alpha,
                                           const ExtrapolationProtocol& protocol = {});

}  // namespace excursion::pickands
