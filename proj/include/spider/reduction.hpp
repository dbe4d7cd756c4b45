#pragma once

#include "spider/dataset.hpp"

#include <Eigen/Dense>

#include <cstddef>

namespace spider {

/// Principal-component space of the centered output matrix.
///
/// Rows of `modes` are orthonormal; `scores` row i holds realization i's
/// coordinates (outputs.row(i) - mean_curve) * modes^T.
struct ReducedSpace {
  Eigen::VectorXd mean_curve;       // m
  Eigen::MatrixXd modes;            // r x m
  Eigen::VectorXd singular_values;  // r, non-increasing
  Eigen::VectorXd explained_ratio;  // r, fraction of total variance per mode
  Eigen::MatrixXd scores;           // N x r
  double variance_target = 0.8;
  /// Sum of all squared singular values / (N - 1), retained or not.
  double total_variance = 0.0;
  /// Numerical rank of the centered matrix.
  std::size_t rank = 0;

  std::size_t dim() const { return static_cast<std::size_t>(modes.rows()); }
  std::size_t curve_length() const { return static_cast<std::size_t>(modes.cols()); }
  double cumulative_ratio() const { return explained_ratio.sum(); }
};

/// Fits PCA by thin SVD of the centered outputs. Keeps the smallest r whose
/// cumulative explained variance reaches `variance_target`, clamped to
/// [1, min(N - 1, m, rank)]. Each mode is sign-fixed so that its entry of
/// largest magnitude is positive.
ReducedSpace fit_pca(const Ensemble& e, double variance_target);
ReducedSpace fit_pca(const Eigen::MatrixXd& outputs, double variance_target);

/// Projects a curve onto the retained modes.
Eigen::VectorXd transform(const ReducedSpace& rs, const Eigen::VectorXd& curve);

/// mean_curve + score * modes.
Eigen::VectorXd inverse_transform(const ReducedSpace& rs, const Eigen::VectorXd& score);

/// Back-transforms each row of `scores` (k x r) into a k x m curve matrix.
Eigen::MatrixXd inverse_transform_rows(const ReducedSpace& rs, const Eigen::MatrixXd& scores);

}  // namespace spider
