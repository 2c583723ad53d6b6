// Independent reference implementations used only by the test suites.
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace oracle {

/// Re-executes the current process with OPENBLAS_CORETYPE=Haswell when the
/// variable is unset. The system OpenBLAS returns wrong dsyevd eigenvectors
/// with its SkylakeX kernels on some hosts; the variable is read at load time.
void pin_openblas_kernels(int argc, char** argv);

/// Eigendecomposition sampler: X = V diag(sqrt(max(lambda, 0))) z with
/// z ~ N(0, I) from std::normal_distribution.
class SpectralSampler {
 public:
  explicit SpectralSampler(const Eigen::MatrixXd& covariance);

  double min_eigenvalue() const { return min_eigenvalue_; }
  /// max |C V - V Lambda| after the decomposition.
  double residual() const { return residual_; }

  /// Maximum over components of (X_k - drift_k) for n samples.
  std::vector<double> sample_maxima(std::size_t n, std::uint64_t seed,
                                    const Eigen::VectorXd& drift) const;

 private:
  Eigen::MatrixXd factor_;
  double min_eigenvalue_ = 0.0;
  double residual_ = 0.0;
};

/// All eigenvalues of a symmetric matrix via LAPACKE dsyevd.
Eigen::VectorXd symmetric_eigenvalues(const Eigen::MatrixXd& a);

/// J(lambda) lambda^(q/p) from the Bessel representation
///   int_0^inf Z^(q-1) exp(-gamma lambda Z^p) 2 K_0(2 gamma sqrt Z) dZ.
double j_lambda_scaled_bessel(double lambda, double p, double q, double gamma);

/// E exp(max_i (sqrt2 t_i N - t_i^2)) for the uniform n-point grid of [0, S];
/// exact for alpha = 2, where B(t) = t N.
double h2_discrete(double S, std::size_t n_points);

/// H_1(S) = E exp(sup_[0,S] (sqrt2 B(t) - t)) in closed form via the law of
/// the running maximum of Brownian motion with drift.
double h1_continuous(double S);

/// Lattice Pickands constant for alpha = 1 and spacing delta:
///   (1/delta) exp(-2 sum_k Psi(sqrt(k delta / 2)) / k).
double h1_lattice_limit(double delta);

/// Tanh-sinh / exp-sinh double integral of exp(-x^b - y^b - (xy)^(b/2)).
double k_beta_reference(double beta);

/// Iterated Gauss-Kronrod over [0,delta]^2 of exp(-g u^2 (x^b + y^b + x^a y^a)).
double i_gamma_reference(double gamma, double beta, double a, double delta, double u);

struct SurvivalRow {
  double u;
  double psi;
};

/// Psi(u) from 50-digit arithmetic at the exact binary value of u.
const std::vector<SurvivalRow>& survival_table();

}  // namespace oracle
