#include "support.hpp"

#include "spider/dataset.hpp"
#include "spider/density.hpp"
#include "spider/error.hpp"
#include "spider/random.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace spider;

namespace {

Eigen::MatrixXd gaussian_cloud(std::uint64_t seed, Eigen::Index n, Eigen::Index r) {
  Rng rng(seed);
  Eigen::MatrixXd x(n, r);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < r; ++j) x(i, j) = rng.normal() * (1.0 + j);
  return x;
}

// Random orthogonal matrix from Gram-Schmidt on Gaussian columns.
Eigen::MatrixXd random_rotation(std::uint64_t seed, Eigen::Index m) {
  Rng rng(seed);
  Eigen::MatrixXd a(m, m);
  for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = rng.normal();
  Eigen::MatrixXd q = a;
  for (Eigen::Index j = 0; j < m; ++j) {
    for (Eigen::Index k = 0; k < j; ++k) q.col(j) -= q.col(k).dot(q.col(j)) * q.col(k);
    q.col(j).normalize();
  }
  return q;
}

}  // namespace

TEST_CASE("density_at matches the brute-force oracle") {
  const auto x = gaussian_cloud(1, 50, 2);
  const auto model = DensityModel::fit(x);
  Rng rng(3);
  for (int k = 0; k < 200; ++k) {
    Eigen::VectorXd p(2);
    p << rng.normal() * 3, rng.normal() * 4;
    const double oracle = test::kde_oracle(x, model.bandwidths(), p);
    CHECK(std::abs(model.density_at(p) - oracle) <= 1e-12 * oracle);
  }
  const auto batch = model.densities_at(x);
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    CHECK(batch[i] == doctest::Approx(test::kde_oracle(x, model.bandwidths(), x.row(i).transpose())).epsilon(1e-12));
}

TEST_CASE("density integrates to one over a 6h box") {
  const auto x = gaussian_cloud(4, 50, 2);
  const auto model = DensityModel::fit(x);
  const auto& h = model.bandwidths();
  const Eigen::RowVectorXd lo = x.colwise().minCoeff() - 6.0 * h.transpose();
  const Eigen::RowVectorXd hi = x.colwise().maxCoeff() + 6.0 * h.transpose();
  const int g = 200;
  const double dx = (hi[0] - lo[0]) / (g - 1), dy = (hi[1] - lo[1]) / (g - 1);
  double total = 0.0;
  for (int a = 0; a < g; ++a)
    for (int b = 0; b < g; ++b) {
      const double w = (a == 0 || a == g - 1 ? 0.5 : 1.0) * (b == 0 || b == g - 1 ? 0.5 : 1.0);
      Eigen::VectorXd p(2);
      p << lo[0] + a * dx, lo[1] + b * dy;
      total += w * model.density_at(p);
    }
  CHECK(std::abs(total * dx * dy - 1.0) <= 1e-2);
}

TEST_CASE("Silverman bandwidth for a unit-variance sample of 100") {
  Eigen::MatrixXd x = gaussian_cloud(8, 100, 1);
  x.col(0).array() -= x.col(0).mean();
  x.col(0) /= std::sqrt(x.col(0).squaredNorm() / 99.0);
  const auto h = fit_bandwidths(x);
  CHECK(h[0] == doctest::Approx(0.4217).epsilon(1e-4));
  CHECK(h[0] == doctest::Approx(std::pow(4.0 / 300.0, 0.2)).epsilon(1e-12));

  Eigen::MatrixXd flat = gaussian_cloud(8, 10, 2);
  flat.col(1).setConstant(2.0);
  CHECK_THROWS_AS(fit_bandwidths(flat), DegenerateError);
  CHECK_THROWS_AS(DensityModel(x, Eigen::VectorXd::Zero(1)), DegenerateError);
}

TEST_CASE("lower_quantile is the inverse empirical CDF") {
  const std::vector<double> v{5, 1, 4, 2, 3};
  CHECK(lower_quantile(v, 0.2) == 1);
  CHECK(lower_quantile(v, 0.21) == 2);
  CHECK(lower_quantile(v, 0.5) == 3);
  CHECK(lower_quantile(v, 0.01) == 1);
  CHECK(lower_quantile(v, 1.0) == 5);
  CHECK_THROWS_AS(lower_quantile({}, 0.5), std::invalid_argument);
}

TEST_CASE("plug-in thresholds give (1 - alpha) coverage within 1/N") {
  for (std::uint64_t seed : {0u, 1u, 2u}) {
    const auto e = synthesize_ensemble(seed, 200, 0, 50, 0);
    const auto rs = fit_pca(e, 0.8);
    const auto h = fit_hdr(rs, {}, &e.outputs());
    for (std::size_t a = 0; a < h.alphas.size(); ++a) {
      const double inside =
          static_cast<double>((h.sample_densities.array() >= h.thresholds[a]).count()) / 200.0;
      CHECK(std::abs(inside - (1.0 - h.alphas[a])) <= 1.0 / 200.0 + 1e-12);
    }
  }
}

TEST_CASE("median, envelopes and outliers") {
  const auto e = synthesize_ensemble(7, 120, 3, 25, 1);
  const auto rs = fit_pca(e, 0.8);
  const auto h = fit_hdr(rs, {}, &e.outputs());

  Eigen::Index densest;
  h.sample_densities.maxCoeff(&densest);
  CHECK(h.median_index == static_cast<std::size_t>(densest));
  CHECK(h.median_density >= h.sample_densities[densest]);
  CHECK(h.distances[densest] == 0.0);
  CHECK((h.median_curve - inverse_transform(rs, h.median_score)).norm() < 1e-12);

  REQUIRE(h.envelopes.size() == 2);
  const auto& e50 = h.envelopes[0];
  const auto& e90 = h.envelopes[1];
  CHECK((e90.lower.array() <= e50.lower.array()).all());
  CHECK((e50.upper.array() <= e90.upper.array()).all());
  CHECK((e50.lower.array() <= e50.upper.array()).all());
  for (Eigen::Index i = 0; i < 120; ++i) {
    if (h.sample_densities[i] < h.thresholds[1]) continue;
    CHECK((e.outputs().row(i).transpose().array() >= e90.lower.array()).all());
    CHECK((e.outputs().row(i).transpose().array() <= e90.upper.array()).all());
  }

  CHECK(std::is_sorted(h.outlier_indices.begin(), h.outlier_indices.end()));
  for (Eigen::Index i = 0; i < 120; ++i)
    CHECK(h.is_outlier(static_cast<std::size_t>(i)) == (h.sample_densities[i] < h.outlier_threshold));
  CHECK(h.is_outlier(119));
}

TEST_CASE("HDR distances are invariant under rotations of the output space") {
  const auto e = synthesize_ensemble(3, 60, 0, 8, 0);
  const auto q = random_rotation(11, 8);
  const auto rs = fit_pca(e.outputs(), 0.9);
  const auto rr = fit_pca(Eigen::MatrixXd(e.outputs() * q), 0.9);
  REQUIRE(rs.dim() == rr.dim());
  const auto h = fit_hdr(rs);
  const auto hr = fit_hdr(rr);
  CHECK(h.median_index == hr.median_index);
  for (Eigen::Index i = 0; i < 60; ++i) {
    CHECK(hr.distances[i] == doctest::Approx(h.distances[i]).epsilon(1e-9));
    CHECK(hr.sample_densities[i] == doctest::Approx(h.sample_densities[i]).epsilon(1e-9));
  }
}

TEST_CASE("references") {
  const auto e = synthesize_ensemble(2, 40, 0, 10, 0);
  const auto rs = fit_pca(e, 0.8);
  HdrOptions opt;
  opt.reference = parse_reference("index:5");
  const auto h = fit_hdr(rs, opt);
  CHECK(h.reference == "index:5");
  CHECK(h.distances[5] == 0.0);
  CHECK(h.distances[6] == doctest::Approx((rs.scores.row(6) - rs.scores.row(5)).norm()));
  CHECK(hdr_distance(rs, 6, h.reference_score) == h.distances[6]);
  CHECK_THROWS_AS(hdr_distance(rs, 40, h.reference_score), std::out_of_range);

  opt.reference = ScoreReference{Eigen::VectorXd::Zero(static_cast<Eigen::Index>(rs.dim()))};
  const auto hz = fit_hdr(rs, opt);
  CHECK(hz.distances[3] == doctest::Approx(rs.scores.row(3).norm()));

  opt.reference = RealizationReference{99};
  CHECK_THROWS_AS(fit_hdr(rs, opt), ValidationError);
  CHECK_THROWS_AS(parse_reference("mode"), ValidationError);
  CHECK_THROWS_AS(parse_reference("index:-1"), ValidationError);
  CHECK(describe(parse_reference("median")) == "median");
}

TEST_CASE("option validation") {
  const auto e = synthesize_ensemble(2, 40, 0, 10, 0);
  const auto rs = fit_pca(e, 0.8);
  HdrOptions opt;
  opt.alphas = {};
  CHECK_THROWS_AS(fit_hdr(rs, opt), ValidationError);
  opt.alphas = {0.5, 1.0};
  CHECK_THROWS_AS(fit_hdr(rs, opt), ValidationError);
  opt.alphas = {0.5};
  opt.outlier_alpha = 0.6;
  CHECK_THROWS_AS(fit_hdr(rs, opt), ValidationError);
}

TEST_CASE("Monte Carlo region sampling above three dimensions is deterministic") {
  const auto e = synthesize_ensemble(4, 80, 0, 30, 0);
  Eigen::MatrixXd out = e.outputs();
  Rng rng(1);
  for (Eigen::Index i = 0; i < out.size(); ++i) out.data()[i] += 0.2 * rng.normal();
  const auto rs = fit_pca(out, 0.99);
  REQUIRE(rs.dim() > 3);
  const auto a = fit_hdr(rs, {}, &out);
  const auto b = fit_hdr(rs, {}, &out);
  CHECK(a.envelopes[0].lower == b.envelopes[0].lower);
  CHECK(a.median_score == b.median_score);
  CHECK((a.envelopes[1].lower.array() <= a.envelopes[0].lower.array()).all());
}

TEST_CASE("band membership") {
  HdrSummary h;
  h.alphas = {0.5, 0.1};
  h.thresholds = {0.4, 0.1};
  CHECK(classify_density(h, 0.5).label() == "inside_50");
  CHECK(classify_density(h, 0.4).text() == "inside 50%");
  CHECK(classify_density(h, 0.2).label() == "inside_90");
  CHECK(classify_density(h, 0.05).label() == "outside");
  CHECK_FALSE(classify_density(h, 0.05).alpha);
  CHECK(BandMembership{0.025}.label() == "inside_97.5");
}
