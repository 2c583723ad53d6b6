#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "excursion/model.hpp"
#include "excursion/prediction.hpp"
#include "excursion/rng.hpp"

namespace excursion::fieldsim {

/// Default cap on lattice points for the full square (64 x 64).
inline constexpr std::size_t kSquarePointCap = 4096;
/// Default cap for strip and side-refined lattices.
inline constexpr std::size_t kStripPointCap = 16384;

/// Tensor lattice axis1 x axis2 inside [0,T]^2 with an exact factorization
/// of the field covariance.
///
/// The correlation is separable, exp(-|dt1|^alpha) exp(-|dt2|^alpha), so on a
/// tensor lattice the Gram matrix is D (R1 kron R2) D with D = diag(sigma)
/// and its Cholesky factor is D (L1 kron L2). Only the axis factors L1, L2
/// are stored. Points are ordered k = i * n2 + j for (axis1[i], axis2[j]).
class GridField {
 public:
  GridField(ModelParams params, std::vector<double> axis1, std::vector<double> axis2,
            std::size_t max_points = kStripPointCap);

  const ModelParams& params() const noexcept { return params_; }
  const std::vector<double>& axis1() const noexcept { return axis1_; }
  const std::vector<double>& axis2() const noexcept { return axis2_; }
  std::size_t n1() const noexcept { return axis1_.size(); }
  std::size_t n2() const noexcept { return axis2_.size(); }
  std::size_t size() const noexcept { return axis1_.size() * axis2_.size(); }
  Point2 point(std::size_t k) const;

  const Eigen::MatrixXd& axis_factor1() const noexcept { return chol1_; }
  const Eigen::MatrixXd& axis_factor2() const noexcept { return chol2_; }
  double jitter() const noexcept { return jitter_; }
  /// sigma at (axis1[i], axis2[j]) as an n1 x n2 matrix.
  const Eigen::MatrixXd& sigma() const noexcept { return sigma_; }

  /// Dense Gram matrix from model::covariance, in point order.
  Eigen::MatrixXd covariance_matrix() const;
  /// Dense lower-triangular factor D (L1 kron L2), in point order.
  Eigen::MatrixXd dense_factor() const;

  /// One field sample as an n1 x n2 matrix, drawing n1*n2 normals from `engine`.
  Eigen::MatrixXd sample(Engine& engine) const;

  /// sigma .* (L1 Z L2^T) for an n1 x n2 block of normals.
  Eigen::MatrixXd apply_factor(const Eigen::MatrixXd& z) const;

 private:
  ModelParams params_;
  std::vector<double> axis1_;
  std::vector<double> axis2_;
  Eigen::MatrixXd chol1_;
  Eigen::MatrixXd chol2_;
  double jitter_ = 0.0;
  Eigen::MatrixXd sigma_;
};

/// Uniform n x n lattice of [0,T]^2 (endpoints included).
GridField build_grid(const ModelParams& params, std::size_t n_per_axis,
                     std::size_t max_points = kSquarePointCap);

/// Uniform lattice of the strip [0,T] x [0,width].
GridField build_strip_grid(const ModelParams& params, double width, std::size_t n1,
                           std::size_t n2, std::size_t max_points = kStripPointCap);

/// Lattice of [0,T]^2 whose axes are n_fine uniform points on [0,width]
/// followed by n_coarse uniform points on (width,T]; resolves both sides.
GridField build_side_refined_grid(const ModelParams& params, double width,
                                  std::size_t n_fine, std::size_t n_coarse,
                                  std::size_t max_points = kStripPointCap);

/// Uniform points lo, ..., hi (n >= 2) or the single point lo when n == 1.
std::vector<double> linspace(double lo, double hi, std::size_t n);

struct Trend {
  double c1 = 0.0;
  double c2 = 0.0;
};

struct MCEstimate {
  double p_hat = 0.0;
  /// sqrt(p_hat (1 - p_hat) / n_samples)
  double std_err = 0.0;
  std::size_t n_samples = 0;
  double level_u = 0.0;
  std::uint64_t seed = 0;
  Trend trend{};
};

/// Lattice maximum of X(t) - c1 t1 - c2 t2 for every sample, in replicate order.
std::vector<double> sample_maxima(const GridField& grid, Trend trend,
                                  std::size_t n_samples, std::uint64_t seed,
                                  unsigned workers = 1);

MCEstimate estimate_from_maxima(const std::vector<double>& maxima, double u,
                                std::uint64_t seed, Trend trend);

/// Fraction of samples whose lattice maximum exceeds u. The lattice maximum
/// understates the supremum over the square.
MCEstimate mc_excursion(const GridField& grid, double u, Trend trend,
                        std::size_t n_samples, std::uint64_t seed, unsigned workers = 1);

/// Block [v1, v1 + s1 q_u] x [v2, v2 + s2 q_u] at level u.
struct BlockSpec {
  Point2 base{};
  double s1 = 1.0;
  double s2 = 1.0;
  double level_u = 1.0;
};

/// Uniform n x n lattice of the block (a side multiplier of 0 collapses that
/// axis to a single point).
GridField build_block_grid(const ModelParams& params, const BlockSpec& block,
                           std::size_t n_per_axis);

/// H(s1) H(s2) Psi(u) exp(-u^2 V(v)).
double block_prediction(const ModelParams& params, const BlockSpec& block, double h1,
                        double h2);

struct BlockOptions {
  std::size_t n_per_axis = 33;
  std::size_t n_samples = 1000000;
  std::uint64_t seed = 1;
  /// Replicates for the finite Pickands factors, which are estimated on the
  /// same rescaled resolution as the block lattice.
  std::size_t pickands_replicates = 200000;
  unsigned workers = 1;
};

struct BlockCheck {
  MCEstimate mc;
  double h1 = 1.0;
  double h2 = 1.0;
  double h1_std_err = 0.0;
  double h2_std_err = 0.0;
  double prediction = 0.0;
  double ratio = 0.0;
};

BlockCheck mc_block_exceedance(const ModelParams& params, const BlockSpec& block,
                               const BlockOptions& opts = {});

struct RatioRow {
  double u = 0.0;
  double p_hat = 0.0;
  double std_err = 0.0;
  double prediction = 0.0;
  double ratio = 0.0;
};

/// p_hat(u) from one set of lattice maxima against the leading-order
/// prediction (trend version when the model carries a trend).
std::vector<RatioRow> ratio_harness(const ModelParams& params,
                                    const std::vector<double>& u_ladder,
                                    const GridField& grid, std::size_t n_samples,
                                    std::uint64_t seed, double h_alpha,
                                    unsigned workers = 1);

}  // namespace excursion::fieldsim
