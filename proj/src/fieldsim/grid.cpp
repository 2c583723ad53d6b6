#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "excursion/fieldsim.hpp"
#include "excursion/linalg.hpp"

namespace excursion::fieldsim {

namespace {

Eigen::MatrixXd axis_correlation_matrix(double alpha, const std::vector<double>& axis) {
  const auto n = static_cast<Eigen::Index>(axis.size());
  Eigen::MatrixXd r(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    r(j, j) = 1.0;
    for (Eigen::Index i = j + 1; i < n; ++i) {
      const double v = model::axis_correlation(alpha, axis[static_cast<std::size_t>(i)],
                                               axis[static_cast<std::size_t>(j)]);
      r(i, j) = v;
      r(j, i) = v;
    }
  }
  return r;
}

void check_axis(const std::vector<double>& axis, double T, const char* name) {
  if (axis.empty()) {
    throw std::invalid_argument(std::string("GridField: ") + name + " is empty");
  }
  for (std::size_t i = 0; i < axis.size(); ++i) {
    const double v = axis[i];
    if (!std::isfinite(v) || v < 0.0 || v > T) {
      std::ostringstream os;
      os << "GridField: " << name << " coordinate " << v << " lies outside [0, " << T << "]";
      throw std::invalid_argument(os.str());
    }
    if (i > 0 && !(v > axis[i - 1])) {
      throw std::invalid_argument(std::string("GridField: ") + name +
                                  " must be strictly increasing");
    }
  }
}

}  // namespace

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  if (n == 0) throw std::invalid_argument("linspace: n must be positive");
  if (n == 1) return {lo};
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) {
    v[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  v.back() = hi;
  return v;
}

GridField::GridField(ModelParams params, std::vector<double> axis1,
                     std::vector<double> axis2, std::size_t max_points)
    : params_(params), axis1_(std::move(axis1)), axis2_(std::move(axis2)) {
  check_axis(axis1_, params_.T(), "axis1");
  check_axis(axis2_, params_.T(), "axis2");
  if (size() > max_points) {
    std::ostringstream os;
    os << "GridField: " << size() << " lattice points exceed the cap of " << max_points;
    throw std::invalid_argument(os.str());
  }
  CholeskyFactor f1 = cholesky_with_jitter(axis_correlation_matrix(params_.alpha(), axis1_));
  CholeskyFactor f2 = cholesky_with_jitter(axis_correlation_matrix(params_.alpha(), axis2_));
  chol1_ = std::move(f1.lower);
  chol2_ = std::move(f2.lower);
  jitter_ = std::max(f1.jitter, f2.jitter);

  sigma_.resize(static_cast<Eigen::Index>(n1()), static_cast<Eigen::Index>(n2()));
  for (std::size_t i = 0; i < n1(); ++i) {
    for (std::size_t j = 0; j < n2(); ++j) {
      sigma_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          model::sigma(params_, {axis1_[i], axis2_[j]});
    }
  }
}

Point2 GridField::point(std::size_t k) const {
  if (k >= size()) throw std::out_of_range("GridField::point");
  return {axis1_[k / n2()], axis2_[k % n2()]};
}

Eigen::MatrixXd GridField::covariance_matrix() const {
  const auto n = static_cast<Eigen::Index>(size());
  Eigen::MatrixXd c(n, n);
  for (Eigen::Index a = 0; a < n; ++a) {
    const Point2 pa = point(static_cast<std::size_t>(a));
    for (Eigen::Index b = 0; b <= a; ++b) {
      const double v = model::covariance(params_, pa, point(static_cast<std::size_t>(b)));
      c(a, b) = v;
      c(b, a) = v;
    }
  }
  return c;
}

Eigen::MatrixXd GridField::dense_factor() const {
  const auto m1 = static_cast<Eigen::Index>(n1());
  const auto m2 = static_cast<Eigen::Index>(n2());
  Eigen::MatrixXd l(m1 * m2, m1 * m2);
  for (Eigen::Index i = 0; i < m1; ++i) {
    for (Eigen::Index j = 0; j < m2; ++j) {
      const Eigen::Index row = i * m2 + j;
      for (Eigen::Index ip = 0; ip < m1; ++ip) {
        for (Eigen::Index jp = 0; jp < m2; ++jp) {
          l(row, ip * m2 + jp) = sigma_(i, j) * chol1_(i, ip) * chol2_(j, jp);
        }
      }
    }
  }
  return l;
}

Eigen::MatrixXd GridField::apply_factor(const Eigen::MatrixXd& z) const {
  Eigen::MatrixXd y = chol1_.triangularView<Eigen::Lower>() * z;
  Eigen::MatrixXd f = y * chol2_.transpose().triangularView<Eigen::Upper>();
  return f.cwiseProduct(sigma_);
}

Eigen::MatrixXd GridField::sample(Engine& engine) const {
  Eigen::MatrixXd z(static_cast<Eigen::Index>(n1()), static_cast<Eigen::Index>(n2()));
  fill_normals(engine, {z.data(), size()});
  return apply_factor(z);
}

GridField build_grid(const ModelParams& params, std::size_t n_per_axis,
                     std::size_t max_points) {
  if (n_per_axis < 2) throw std::invalid_argument("build_grid: n_per_axis must be >= 2");
  auto axis = linspace(0.0, params.T(), n_per_axis);
  return GridField(params, axis, axis, max_points);
}

GridField build_strip_grid(const ModelParams& params, double width, std::size_t n1,
                           std::size_t n2, std::size_t max_points) {
  if (!(width > 0.0) || width > params.T()) {
    throw std::invalid_argument("build_strip_grid: width must lie in (0, T]");
  }
  if (n1 < 2 || n2 < 2) throw std::invalid_argument("build_strip_grid: need >= 2 points per axis");
  return GridField(params, linspace(0.0, params.T(), n1), linspace(0.0, width, n2), max_points);
}

GridField build_side_refined_grid(const ModelParams& params, double width,
                                  std::size_t n_fine, std::size_t n_coarse,
                                  std::size_t max_points) {
  if (!(width > 0.0) || !(width < params.T())) {
    throw std::invalid_argument("build_side_refined_grid: width must lie in (0, T)");
  }
  if (n_fine < 2) throw std::invalid_argument("build_side_refined_grid: n_fine must be >= 2");
  std::vector<double> axis = linspace(0.0, width, n_fine);
  for (std::size_t k = 1; k <= n_coarse; ++k) {
    axis.push_back(width + (params.T() - width) * static_cast<double>(k) /
                               static_cast<double>(n_coarse));
  }
  if (n_coarse > 0) axis.back() = params.T();
  return GridField(params, axis, axis, max_points);
}

}  // namespace excursion::fieldsim
