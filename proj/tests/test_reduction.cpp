#include "support.hpp"

#include "spider/error.hpp"
#include "spider/random.hpp"
#include "spider/reduction.hpp"

#include <doctest.h>

#include <cmath>

using namespace spider;

TEST_CASE("hand example: collinear points on the diagonal") {
  Eigen::MatrixXd x(3, 2);
  x << 0, 0, 2, 2, 4, 4;
  const auto rs = fit_pca(x, 0.8);
  REQUIRE(rs.dim() == 1);
  CHECK(rs.rank == 1);
  CHECK(rs.mean_curve[0] == doctest::Approx(2.0));
  CHECK(rs.modes(0, 0) == doctest::Approx(std::sqrt(0.5)));
  CHECK(rs.modes(0, 1) == doctest::Approx(std::sqrt(0.5)));
  CHECK(rs.scores(0, 0) == doctest::Approx(-2.0 * std::sqrt(2.0)));
  CHECK(rs.scores(1, 0) == doctest::Approx(0.0));
  CHECK(rs.scores(2, 0) == doctest::Approx(2.0 * std::sqrt(2.0)));
  CHECK(rs.singular_values[0] == doctest::Approx(4.0));
  CHECK(rs.explained_ratio[0] == doctest::Approx(1.0));
  // Covariance uses N - 1: total variance = 16 / 2.
  CHECK(rs.total_variance == doctest::Approx(8.0));
}

TEST_CASE("variance target selects the smallest sufficient r") {
  // Independent columns with variances 9, 4, 1 (ratios 9/14, 4/14, 1/14).
  Eigen::MatrixXd x(4, 3);
  x << 3, 2, 1, -3, 2, -1, 3, -2, -1, -3, -2, 1;
  CHECK(fit_pca(x, 0.5).dim() == 1);
  CHECK(fit_pca(x, 9.0 / 14.0).dim() == 1);
  CHECK(fit_pca(x, 0.9).dim() == 2);
  CHECK(fit_pca(x, 1.0).dim() == 3);
  const auto rs = fit_pca(x, 0.9);
  CHECK(rs.explained_ratio[0] == doctest::Approx(9.0 / 14.0));
  CHECK(rs.explained_ratio[1] == doctest::Approx(4.0 / 14.0));
  CHECK(rs.cumulative_ratio() == doctest::Approx(13.0 / 14.0));
  // Largest entry of each mode is positive.
  for (Eigen::Index i = 0; i < rs.modes.rows(); ++i) {
    Eigen::Index arg;
    rs.modes.row(i).cwiseAbs().maxCoeff(&arg);
    CHECK(rs.modes(i, arg) > 0.0);
  }
}

TEST_CASE("r never exceeds N - 1 or the numerical rank") {
  Eigen::MatrixXd x(3, 10);
  Rng rng(2);
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = rng.normal();
  const auto rs = fit_pca(x, 1.0);
  CHECK(rs.dim() == 2);
  CHECK(rs.rank == 2);
}

TEST_CASE("full-rank reconstruction and the residual energy identity") {
  Rng rng(5);
  const Eigen::Index n = 30, m = 12;
  Eigen::MatrixXd x(n, m);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index k = 0; k < m; ++k) x(i, k) = rng.normal() * (1.0 + static_cast<double>(k)) + 0.3 * k;
  const auto full = fit_pca(x, 1.0);
  REQUIRE(full.dim() == static_cast<std::size_t>(m));
  const Eigen::MatrixXd back = inverse_transform_rows(full, full.scores);
  CHECK((back - x).norm() / x.norm() <= 1e-8);

  const Eigen::MatrixXd centered = x.rowwise() - x.colwise().mean();
  for (std::size_t r = 1; r <= full.rank; ++r) {
    ReducedSpace rs = full;
    rs.modes = full.modes.topRows(static_cast<Eigen::Index>(r));
    rs.scores = full.scores.leftCols(static_cast<Eigen::Index>(r));
    rs.explained_ratio = full.explained_ratio.head(static_cast<Eigen::Index>(r));
    const Eigen::MatrixXd approx = inverse_transform_rows(rs, rs.scores);
    const double residual = (x - approx).squaredNorm() / static_cast<double>(n - 1);
    const double predicted = (1.0 - rs.cumulative_ratio()) * full.total_variance;
    CHECK(std::abs(residual - predicted) <= 1e-6 * std::max(predicted, 1e-12 * full.total_variance) + 1e-12);
  }
  // Total variance equals the trace of the sample covariance.
  CHECK(full.total_variance == doctest::Approx(centered.squaredNorm() / static_cast<double>(n - 1)));
}

TEST_CASE("transform inverts inverse_transform on the retained subspace") {
  Rng rng(9);
  Eigen::MatrixXd x(20, 6);
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = rng.normal();
  const auto rs = fit_pca(x, 0.7);
  Eigen::VectorXd s(static_cast<Eigen::Index>(rs.dim()));
  for (Eigen::Index j = 0; j < s.size(); ++j) s[j] = rng.normal();
  CHECK((transform(rs, inverse_transform(rs, s)) - s).norm() < 1e-12);
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    CHECK((transform(rs, x.row(i).transpose()) - rs.scores.row(i).transpose()).norm() < 1e-10);
  CHECK_THROWS_AS(transform(rs, Eigen::VectorXd::Zero(3)), std::invalid_argument);
  CHECK_THROWS_AS(inverse_transform(rs, Eigen::VectorXd::Zero(9)), std::invalid_argument);
}

TEST_CASE("degenerate and invalid inputs") {
  CHECK_THROWS_AS(fit_pca(Eigen::MatrixXd::Constant(5, 4, 3.0), 0.8), DegenerateError);
  CHECK_THROWS_AS(fit_pca(Eigen::MatrixXd::Random(2, 4), 0.8), ValidationError);
  CHECK_THROWS_AS(fit_pca(Eigen::MatrixXd::Random(5, 4), 0.0), ValidationError);
  CHECK_THROWS_AS(fit_pca(Eigen::MatrixXd::Random(5, 4), 1.5), ValidationError);
}

TEST_CASE("El Nino SST retains two modes at 80%") {
  const auto e = load_noaa_sst(test::data_dir() / "elnino_sst.txt").ensemble;
  const auto rs = fit_pca(e, 0.8);
  CHECK(rs.dim() == 2);
  CHECK(rs.cumulative_ratio() >= 0.8);
  CHECK(rs.explained_ratio[0] < 0.8);
}
