#pragma once

#include <Eigen/Dense>

namespace excursion {

struct CholeskyFactor {
  Eigen::MatrixXd lower;
  /// Diagonal jitter that was needed (0 when the plain factorization worked).
  double jitter = 0.0;
};

/// Cholesky factorization with diagonal jitter escalating
/// 0, 1e-14, 1e-13, ..., max_jitter. Throws FactorizationError naming the
/// smallest eigenvalue when every attempt fails.
CholeskyFactor cholesky_with_jitter(const Eigen::MatrixXd& cov,
                                    double max_jitter = 1e-10);

double min_eigenvalue(const Eigen::MatrixXd& symmetric);

}  // namespace excursion
