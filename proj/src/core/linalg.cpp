#include "excursion/linalg.hpp"

#include <sstream>

#include "excursion/error.hpp"

namespace excursion {

double min_eigenvalue(const Eigen::MatrixXd& symmetric) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(symmetric,
                                                        Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

CholeskyFactor cholesky_with_jitter(const Eigen::MatrixXd& cov, double max_jitter) {
  const Eigen::Index n = cov.rows();
  double jitter = 0.0;
  for (;;) {
    Eigen::LLT<Eigen::MatrixXd> llt;
    if (jitter == 0.0) {
      llt.compute(cov);
    } else {
      Eigen::MatrixXd shifted = cov;
      shifted.diagonal().array() += jitter;
      llt.compute(shifted);
    }
    if (llt.info() == Eigen::Success) {
      return {llt.matrixL(), jitter};
    }
    const double next = jitter == 0.0 ? 1e-14 : jitter * 10.0;
    if (next > max_jitter * (1.0 + 1e-9)) break;
    jitter = next;
  }
  const double lam = n > 0 ? min_eigenvalue(cov) : 0.0;
  std::ostringstream os;
  os << "Cholesky factorization of a " << n << "x" << n
     << " covariance failed up to jitter " << max_jitter
     << "; minimum eigenvalue estimate " << lam;
  throw FactorizationError(os.str(), lam);
}

}  // namespace excursion
