#pragma once

#include "spider/reduction.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace spider {

/// Silverman's multivariate rule of thumb, per dimension:
/// h_i = sigma_i * (4 / ((r + 2) N))^(1 / (r + 4)).
/// Throws DegenerateError when some sigma_i is zero.
Eigen::VectorXd fit_bandwidths(const Eigen::MatrixXd& scores);

/// Product-Gaussian kernel density estimate over a set of sample points.
class DensityModel {
 public:
  DensityModel(Eigen::MatrixXd samples, Eigen::VectorXd bandwidths);

  /// Bandwidths from fit_bandwidths(samples).
  static DensityModel fit(const Eigen::MatrixXd& samples);

  double density_at(const Eigen::VectorXd& point) const;

  /// Evaluates every row of `points`. Rows are independent of each other.
  Eigen::VectorXd densities_at(const Eigen::MatrixXd& points) const;

  const Eigen::MatrixXd& samples() const { return samples_; }
  const Eigen::VectorXd& bandwidths() const { return bandwidths_; }
  std::size_t dim() const { return static_cast<std::size_t>(samples_.cols()); }

 private:
  Eigen::MatrixXd samples_;
  Eigen::VectorXd bandwidths_;
  Eigen::VectorXd inv_bandwidths_;
  double norm_ = 0.0;
};

/// Inverse empirical CDF (lower interpolation): the sorted value at index
/// ceil(alpha * N) - 1, clamped to [0, N - 1].
double lower_quantile(std::vector<double> values, double alpha);

/// Reference realization for HDR distances.
struct MedianReference {};
struct RealizationReference {
  std::size_t index = 0;
};
struct ScoreReference {
  Eigen::VectorXd score;
};
using Reference = std::variant<MedianReference, RealizationReference, ScoreReference>;

/// "median", "index:<i>".
Reference parse_reference(const std::string& text);
std::string describe(const Reference& ref);

struct HdrOptions {
  std::vector<double> alphas{0.5, 0.1};
  double outlier_alpha = 0.01;
  Reference reference = MedianReference{};
  /// Grid points per dimension for region sampling; 0 picks 50 (r <= 2) or
  /// 20 (r = 3). Dimensions above 3 always use Monte Carlo.
  std::size_t grid_points = 0;
  std::size_t monte_carlo_points = 10000;
  std::uint64_t monte_carlo_seed = 0;
};

struct Envelope {
  double alpha = 0.0;
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
};

struct HdrSummary {
  Eigen::VectorXd bandwidths;
  Eigen::VectorXd sample_densities;  // f(scores[i])
  std::vector<double> alphas;
  std::vector<double> thresholds;  // f_alpha per alpha
  /// Sample of maximal density (ties resolved to the lowest index).
  std::size_t median_index = 0;
  /// Refined arg sup of the density.
  Eigen::VectorXd median_score;
  double median_density = 0.0;
  Eigen::VectorXd median_curve;
  std::vector<Envelope> envelopes;  // one per alpha, same order
  double outlier_alpha = 0.01;
  double outlier_threshold = 0.0;
  std::vector<std::size_t> outlier_indices;
  std::string reference;  // describe(Reference)
  Eigen::VectorXd reference_score;
  Eigen::VectorXd distances;

  bool is_outlier(std::size_t i) const;
};

/// HDR statistics over the reduced space.
///
/// Thresholds are plug-in quantiles of the sample densities. The median
/// starts at the densest sample and takes one refinement pass on a
/// 5-per-dimension grid of half-width h_i around it. Envelopes are the
/// pointwise min/max over back-transformed region samples together with
/// the dataset curves whose density reaches the threshold. When `outputs`
/// is given those dataset curves are the raw rows; otherwise their
/// reconstructions from the retained modes.
///
/// With the median reference, distances are measured from the score of
/// the median realization (median_index), so that realization sits at 0.
HdrSummary fit_hdr(const ReducedSpace& rs, const HdrOptions& options = {},
                   const Eigen::MatrixXd* outputs = nullptr);

/// Euclidean norm of scores[i] - reference_score.
double hdr_distance(const ReducedSpace& rs, std::size_t i, const Eigen::VectorXd& reference_score);

/// Central-most region containing a density value.
struct BandMembership {
  /// Alpha of the narrowest region whose threshold the density reaches;
  /// empty when outside every region.
  std::optional<double> alpha;

  /// "inside_50", "inside_90", "outside".
  std::string label() const;
  /// Human-readable form: "inside 50%".
  std::string text() const;
  bool operator==(const BandMembership&) const = default;
};

BandMembership classify_density(const HdrSummary& h, double density);

}  // namespace spider
