#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <numbers>

#include "excursion/pickands.hpp"
#include "oracles.hpp"

using namespace excursion;
using namespace excursion::pickands;

namespace {

// One path per column.
Eigen::MatrixXd draw(const FbmGrid& g, std::size_t n, std::uint64_t seed) {
  Eigen::MatrixXd paths(static_cast<Eigen::Index>(g.n_points()), static_cast<Eigen::Index>(n));
  g.sample_batch(seed, 0, paths);
  return paths;
}

double fbm_cov(double alpha, double s, double t) {
  return 0.5 * (std::pow(s, alpha) + std::pow(t, alpha) - std::pow(std::abs(s - t), alpha));
}

// Sample second moment of x*y and a 4-SE band around it.
void check_moment(const Eigen::VectorXd& x, const Eigen::VectorXd& y, double expect) {
  const Eigen::ArrayXd prod = x.array() * y.array();
  const double n = static_cast<double>(prod.size());
  const double mean = prod.mean();
  const double se = std::sqrt((prod - mean).square().sum() / (n - 1) / n);
  CHECK(std::abs(mean - expect) <= 4.0 * se);
}

}  // namespace

TEST_CASE("fBm paths start at zero with the right covariance") {
  for (double alpha : {0.6, 1.0, 1.5}) {
    CAPTURE(alpha);
    const FbmGrid g(alpha, 2.0, 33);
    const Eigen::MatrixXd p = draw(g, 40000, 17);
    CHECK(p.row(0).cwiseAbs().maxCoeff() == 0.0);
    const auto& t = g.times();
    check_moment(p.row(32), p.row(32), std::pow(2.0, alpha));
    check_moment(p.row(8), p.row(24), fbm_cov(alpha, t[8], t[24]));
    // Stationary increments.
    check_moment(p.row(24) - p.row(16), p.row(24) - p.row(16), std::pow(t[8], alpha));
    // Self-similarity: B(2t) ~ 2^(alpha/2) B(t).
    check_moment(p.row(16), p.row(16), std::pow(2.0, alpha) * std::pow(t[8], alpha));
  }
}

TEST_CASE("alpha = 1 gives min covariance") {
  const FbmGrid g(1.0, 1.0, 11);
  const Eigen::MatrixXd c = g.covariance();
  const auto& t = g.times();
  for (Eigen::Index i = 0; i < c.rows(); ++i) {
    for (Eigen::Index j = 0; j < c.cols(); ++j) {
      CHECK(std::abs(c(i, j) - std::min(t[i + 1], t[j + 1])) < 1e-15);
    }
  }
}

TEST_CASE("Cholesky factor reproduces the covariance") {
  for (double alpha : {0.3, 1.0, 1.7}) {
    const FbmGrid g(alpha, 4.0, 200, FbmMethod::Cholesky);
    const Eigen::MatrixXd c = g.covariance();
    const Eigen::MatrixXd rec = g.factor() * g.factor().transpose();
    CHECK((rec - c).cwiseAbs().maxCoeff() <= 1e-8);
  }
}

TEST_CASE("circulant and Cholesky agree in distribution") {
  const FbmGrid chol(1.2, 1.0, 65, FbmMethod::Cholesky);
  const FbmGrid circ(1.2, 1.0, 65, FbmMethod::Circulant);
  CHECK(circ.method() == FbmMethod::Circulant);
  CHECK(circ.factor().size() == 0);
  const Eigen::MatrixXd p = draw(circ, 40000, 3);
  const auto& t = circ.times();
  check_moment(p.row(64), p.row(64), 1.0);
  check_moment(p.row(20), p.row(50), fbm_cov(1.2, t[20], t[50]));
  const PickandsEstimate a = pickands_finite(1.2, 1.0, 65, 40000, 9, {1, FbmMethod::Cholesky});
  const PickandsEstimate b = pickands_finite(1.2, 1.0, 65, 40000, 9, {1, FbmMethod::Circulant});
  CHECK(std::abs(a.value - b.value) <= 4.0 * std::hypot(a.std_err, b.std_err));
}

TEST_CASE("FbmGrid argument checks") {
  CHECK_THROWS_AS(FbmGrid(0.0, 1.0, 10), std::invalid_argument);
  CHECK_THROWS_AS(FbmGrid(2.1, 1.0, 10), std::invalid_argument);
  CHECK_THROWS_AS(FbmGrid(1.0, 0.0, 10), std::invalid_argument);
  CHECK_THROWS_AS(FbmGrid(1.0, 1.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(pickands_finite(1.0, 1.0, 10, 0, 1), std::invalid_argument);
}

TEST_CASE("alpha = 2 finite estimate matches the exact lattice value") {
  for (double s : {1.0, 3.0}) {
    CAPTURE(s);
    const PickandsEstimate e = pickands_finite(2.0, s, 21, 200000, 5);
    const double exact = oracle::h2_discrete(s, 21);
    CHECK(std::abs(e.value - exact) <= 3.0 * e.std_err);
  }
}

TEST_CASE("finite Pickands estimates are at least 1 and grow with S") {
  const PickandsEstimate a = pickands_finite(1.0, 1.0, 101, 20000, 11);
  const PickandsEstimate b = pickands_finite(1.0, 2.0, 201, 20000, 11);
  CHECK(a.value >= 1.0);
  CHECK(b.value > a.value);
  CHECK(a.n_replicates == 20000);
  CHECK(a.horizon == 1.0);
}

TEST_CASE("refining the lattice does not lower the estimate") {
  // Nested lattices on shared randomness would be monotone pathwise; with
  // independent draws allow 2 SE.
  const PickandsEstimate coarse = pickands_finite(1.0, 2.0, 21, 40000, 21);
  const PickandsEstimate fine = pickands_finite(1.0, 2.0, 161, 40000, 22);
  CHECK(fine.value >= coarse.value - 2.0 * std::hypot(fine.std_err, coarse.std_err));
  CHECK(fine.value < oracle::h1_continuous(2.0) + 4.0 * fine.std_err);
}

TEST_CASE("estimates do not depend on the worker count") {
  const PickandsEstimate a = pickands_finite(1.5, 2.0, 64, 5000, 77, {1, FbmMethod::Auto});
  const PickandsEstimate b = pickands_finite(1.5, 2.0, 64, 5000, 77, {3, FbmMethod::Auto});
  CHECK(a.value == b.value);
  CHECK(a.std_err == b.std_err);
  ExtrapolationProtocol p{{0.5, 1.0}, 0.1, 3000, 4, {1, FbmMethod::Auto}};
  const auto c1 = pickands_constant(1.0, p);
  p.run.workers = 3;
  const auto c3 = pickands_constant(1.0, p);
  CHECK(c1.slope.value == c3.slope.value);
  CHECK(c1.naive.value == c3.naive.value);
}

TEST_CASE("alpha = 2 constant from the slope") {
  const ExtrapolationProtocol p{{0.5, 1.0}, 0.05, 200000, 8, {}};
  const auto est = pickands_constant(2.0, p);
  REQUIRE(est.rungs.size() == 2);
  CHECK(est.rungs[0].value < est.rungs[1].value);
  CHECK(std::abs(est.slope.value - 1.0 / std::sqrt(std::numbers::pi)) < 0.15);
}

TEST_CASE("pickands_constant protocol checks") {
  CHECK_THROWS_AS(pickands_constant(1.0, {{1.0}, 0.05, 100, 1, {}}), std::invalid_argument);
  CHECK_THROWS_AS(pickands_constant(1.0, {{1.0, 1.0}, 0.05, 100, 1, {}}), std::invalid_argument);
  CHECK_THROWS_AS(pickands_constant(1.0, {{1.0, 1.3}, 0.5, 100, 1, {}}), std::invalid_argument);
  CHECK_THROWS_AS(spacing_for(1.0, 0.0), std::invalid_argument);
  CHECK(spacing_for(1.0, 0.05) == doctest::Approx(0.0025).epsilon(1e-12));
}

TEST_CASE("naive and slope disagreement raises the warning") {
  // At small S the naive ratio H(S)/S is far above the slope.
  const ExtrapolationProtocol p{{0.25, 0.5}, 0.1, 20000, 2, {}};
  const auto est = pickands_constant(1.0, p);
  CHECK(est.naive.value > est.slope.value);
  CHECK(est.disagreement);
  CHECK_FALSE(est.warning.empty());
}
