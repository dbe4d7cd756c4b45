#include "spider/reduction.hpp"

#include "spider/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace spider {

ReducedSpace fit_pca(const Ensemble& e, double variance_target) {
  return fit_pca(e.outputs(), variance_target);
}

ReducedSpace fit_pca(const Eigen::MatrixXd& outputs, double variance_target) {
  if (!(variance_target > 0.0 && variance_target <= 1.0))
    throw ValidationError("variance_target must lie in (0, 1]");
  const auto n = outputs.rows();
  const auto m = outputs.cols();
  if (n < 3) throw ValidationError("N < 3: PCA needs at least 3 realizations");

  ReducedSpace rs;
  rs.variance_target = variance_target;
  rs.mean_curve = outputs.colwise().mean().transpose();
  const Eigen::MatrixXd centered = outputs.rowwise() - rs.mean_curve.transpose();

  const double scale = std::max(1.0, outputs.cwiseAbs().maxCoeff());
  if (centered.cwiseAbs().maxCoeff() <= 1e-12 * scale)
    throw DegenerateError("output matrix has zero total variance");

  Eigen::BDCSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeThinV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const Eigen::MatrixXd& v = svd.matrixV();

  const double tol =
      sv[0] * static_cast<double>(std::max(n, m)) * std::numeric_limits<double>::epsilon();
  std::size_t rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv[i] > tol) ++rank;
  rs.rank = rank;

  const double energy = sv.squaredNorm();
  rs.total_variance = energy / static_cast<double>(n - 1);

  const auto ceiling = std::min<std::size_t>(
      {static_cast<std::size_t>(n - 1), static_cast<std::size_t>(m), std::max<std::size_t>(rank, 1)});
  std::size_t r = 0;
  double cumulative = 0.0;
  while (r < ceiling) {
    cumulative += sv[static_cast<Eigen::Index>(r)] * sv[static_cast<Eigen::Index>(r)] / energy;
    ++r;
    // Relative slack absorbs rounding in the running sum when the target is 1.
    if (cumulative >= variance_target - 1e-12) break;
  }

  const auto rr = static_cast<Eigen::Index>(r);
  rs.modes = v.leftCols(rr).transpose();
  rs.singular_values = sv.head(rr);
  rs.explained_ratio = sv.head(rr).array().square() / energy;

  for (Eigen::Index i = 0; i < rr; ++i) {
    Eigen::Index arg = 0;
    rs.modes.row(i).cwiseAbs().maxCoeff(&arg);
    if (rs.modes(i, arg) < 0.0) rs.modes.row(i) *= -1.0;
  }
  rs.scores = centered * rs.modes.transpose();
  return rs;
}

Eigen::VectorXd transform(const ReducedSpace& rs, const Eigen::VectorXd& curve) {
  if (curve.size() != rs.mean_curve.size())
    throw std::invalid_argument("transform: curve length " + std::to_string(curve.size()) +
                                " != " + std::to_string(rs.mean_curve.size()));
  return rs.modes * (curve - rs.mean_curve);
}

Eigen::VectorXd inverse_transform(const ReducedSpace& rs, const Eigen::VectorXd& score) {
  if (score.size() != rs.modes.rows())
    throw std::invalid_argument("inverse_transform: score length " +
                                std::to_string(score.size()) + " != " +
                                std::to_string(rs.modes.rows()));
  return rs.mean_curve + rs.modes.transpose() * score;
}

Eigen::MatrixXd inverse_transform_rows(const ReducedSpace& rs, const Eigen::MatrixXd& scores) {
  if (scores.cols() != rs.modes.rows())
    throw std::invalid_argument("inverse_transform_rows: score dimension mismatch");
  Eigen::MatrixXd curves = scores * rs.modes;
  curves.rowwise() += rs.mean_curve.transpose();
  return curves;
}

}  // namespace spider
