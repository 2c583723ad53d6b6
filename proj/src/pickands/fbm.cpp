#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>
#include <stdexcept>
#include <unsupported/Eigen/FFT>

#include "excursion/error.hpp"
#include "excursion/linalg.hpp"
#include "excursion/pickands.hpp"

namespace excursion::pickands {

namespace {

constexpr std::size_t kCholeskyLimit = 4096;

double fgn_autocov(double alpha, double spacing, std::size_t k) {
  const double kk = static_cast<double>(k);
  const double v = std::pow(kk + 1.0, alpha) - 2.0 * std::pow(kk, alpha) +
                   std::pow(std::abs(kk - 1.0), alpha);
  return 0.5 * v * std::pow(spacing, alpha);
}

}  // namespace

std::string_view to_string(FbmMethod m) noexcept {
  switch (m) {
    case FbmMethod::Auto: return "auto";
    case FbmMethod::Cholesky: return "cholesky";
    case FbmMethod::Circulant: return "circulant";
  }
  return "unknown";
}

FbmGrid::FbmGrid(double alpha, double horizon, std::size_t n_points, FbmMethod method)
    : alpha_(alpha), horizon_(horizon), method_(method) {
  if (!(alpha > 0.0 && alpha <= 2.0)) {
    throw std::invalid_argument("FbmGrid: alpha must lie in (0,2]");
  }
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw std::invalid_argument("FbmGrid: horizon must be positive");
  }
  if (n_points < 2) throw std::invalid_argument("FbmGrid: need at least 2 points");

  times_.resize(n_points);
  const double h = horizon / static_cast<double>(n_points - 1);
  for (std::size_t i = 0; i < n_points; ++i) times_[i] = h * static_cast<double>(i);
  times_.back() = horizon;

  const std::size_t m = n_points - 1;
  if (method_ == FbmMethod::Circulant ||
      (method_ == FbmMethod::Auto && m > kCholeskyLimit)) {
    method_ = FbmMethod::Circulant;
    build_circulant();
    return;
  }
  try {
    CholeskyFactor f = cholesky_with_jitter(covariance());
    factor_ = std::move(f.lower);
    jitter_ = f.jitter;
    method_ = FbmMethod::Cholesky;
  } catch (const FactorizationError&) {
    if (method_ == FbmMethod::Cholesky) throw;
    method_ = FbmMethod::Circulant;
    build_circulant();
  }
}

Eigen::MatrixXd FbmGrid::covariance() const {
  const std::size_t m = times_.size() - 1;
  Eigen::MatrixXd cov(m, m);
  std::vector<double> tpow(m);
  for (std::size_t i = 0; i < m; ++i) tpow[i] = std::pow(times_[i + 1], alpha_);
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t i = j; i < m; ++i) {
      const double d = std::pow(std::abs(times_[i + 1] - times_[j + 1]), alpha_);
      const double v = 0.5 * (tpow[i] + tpow[j] - d);
      cov(i, j) = v;
      cov(j, i) = v;
    }
  }
  return cov;
}

void FbmGrid::build_circulant() {
  const std::size_t m = times_.size() - 1;
  // Embed the m increments in a circulant of size 2M, M >= m a power of two.
  std::size_t half = 1;
  while (half < m) half <<= 1;
  const std::size_t n = 2 * half;
  const double h = spacing();
  std::vector<std::complex<double>> row(n);
  for (std::size_t k = 0; k <= half; ++k) row[k] = fgn_autocov(alpha_, h, k);
  for (std::size_t k = half + 1; k < n; ++k) row[k] = row[n - k];

  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> eig;
  fft.fwd(eig, row);
  double max_eig = 0.0;
  for (const auto& e : eig) max_eig = std::max(max_eig, e.real());
  circulant_scale_.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    double lam = eig[k].real();
    if (lam < 0.0) {
      if (lam < -1e-10 * max_eig) {
        std::ostringstream os;
        os << "circulant embedding of fGn (alpha=" << alpha_
           << ") has a negative eigenvalue " << lam;
        throw FactorizationError(os.str(), lam);
      }
      lam = 0.0;
    }
    circulant_scale_[k] = std::sqrt(lam / static_cast<double>(n));
  }
}

void FbmGrid::sample(Engine& engine, std::span<double> path) const {
  const std::size_t n_pts = times_.size();
  if (path.size() != n_pts) throw std::invalid_argument("FbmGrid::sample: wrong path length");
  const std::size_t m = n_pts - 1;
  path[0] = 0.0;
  if (method_ == FbmMethod::Cholesky) {
    Eigen::VectorXd z(m);
    fill_normals(engine, {z.data(), m});
    Eigen::Map<Eigen::VectorXd> out(path.data() + 1, static_cast<Eigen::Index>(m));
    out.noalias() = factor_.triangularView<Eigen::Lower>() * z;
    return;
  }
  const std::size_t n = circulant_scale_.size();
  std::vector<double> z(2 * n);
  fill_normals(engine, z);
  std::vector<std::complex<double>> w(n);
  for (std::size_t k = 0; k < n; ++k) {
    w[k] = circulant_scale_[k] * std::complex<double>(z[2 * k], z[2 * k + 1]);
  }
  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> y;
  fft.fwd(y, w);
  double acc = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    acc += y[i].real();
    path[i + 1] = acc;
  }
}

void FbmGrid::sample_batch(std::uint64_t seed, std::uint64_t first,
                           Eigen::MatrixXd& paths) const {
  const auto n_pts = static_cast<Eigen::Index>(times_.size());
  if (paths.rows() != n_pts) {
    throw std::invalid_argument("FbmGrid::sample_batch: paths must have n_points rows");
  }
  const Eigen::Index count = paths.cols();
  if (method_ == FbmMethod::Cholesky) {
    const Eigen::Index m = n_pts - 1;
    Eigen::MatrixXd z(m, count);
    for (Eigen::Index c = 0; c < count; ++c) {
      Engine engine = replicate_engine(seed, first + static_cast<std::uint64_t>(c));
      fill_normals(engine, {z.col(c).data(), static_cast<std::size_t>(m)});
    }
    paths.row(0).setZero();
    paths.bottomRows(m).noalias() = factor_.triangularView<Eigen::Lower>() * z;
    return;
  }
  for (Eigen::Index c = 0; c < count; ++c) {
    Engine engine = replicate_engine(seed, first + static_cast<std::uint64_t>(c));
    sample(engine, {paths.col(c).data(), static_cast<std::size_t>(n_pts)});
  }
}

std::vector<double> fbm_sample(const FbmGrid& grid, Engine& engine) {
  std::vector<double> path(grid.n_points());
  grid.sample(engine, path);
  return path;
}

}  // namespace excursion::pickands
