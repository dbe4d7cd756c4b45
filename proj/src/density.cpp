#include "spider/density.hpp"

#include "spider/error.hpp"
#include "spider/numfmt.hpp"
#include "spider/random.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace spider {

Eigen::VectorXd fit_bandwidths(const Eigen::MatrixXd& scores) {
  const auto n = scores.rows();
  const auto r = scores.cols();
  if (n < 3) throw ValidationError("N < 3: bandwidth selection needs at least 3 samples");
  if (r < 1) throw ValidationError("bandwidth selection needs at least one dimension");

  const double factor = std::pow(4.0 / ((static_cast<double>(r) + 2.0) * static_cast<double>(n)),
                                 1.0 / (static_cast<double>(r) + 4.0));
  const Eigen::RowVectorXd mean = scores.colwise().mean();
  Eigen::VectorXd h(r);
  for (Eigen::Index j = 0; j < r; ++j) {
    const double var = (scores.col(j).array() - mean[j]).square().sum() / static_cast<double>(n - 1);
    const double sigma = std::sqrt(var);
    if (!(sigma > 0.0) || !std::isfinite(sigma))
      throw DegenerateError("score dimension " + std::to_string(j) + " has zero variance");
    h[j] = sigma * factor;
  }
  return h;
}

// ---------------------------------------------------------------------------

DensityModel::DensityModel(Eigen::MatrixXd samples, Eigen::VectorXd bandwidths)
    : samples_(std::move(samples)), bandwidths_(std::move(bandwidths)) {
  if (samples_.rows() < 1) throw ValidationError("density model needs at least one sample");
  if (bandwidths_.size() != samples_.cols())
    throw std::invalid_argument("bandwidth count does not match sample dimension");
  if (!(bandwidths_.array() > 0.0).all() || !bandwidths_.allFinite())
    throw DegenerateError("bandwidths must be positive and finite");
  inv_bandwidths_ = bandwidths_.cwiseInverse();
  const double r = static_cast<double>(samples_.cols());
  norm_ = 1.0 / (static_cast<double>(samples_.rows()) * std::pow(2.0 * std::numbers::pi, r / 2.0) *
                 bandwidths_.prod());
}

DensityModel DensityModel::fit(const Eigen::MatrixXd& samples) {
  return DensityModel(samples, fit_bandwidths(samples));
}

double DensityModel::density_at(const Eigen::VectorXd& point) const {
  if (point.size() != samples_.cols())
    throw std::invalid_argument("density_at: point dimension mismatch");
  double sum = 0.0;
  const auto r = samples_.cols();
  for (Eigen::Index i = 0; i < samples_.rows(); ++i) {
    double q = 0.0;
    for (Eigen::Index j = 0; j < r; ++j) {
      const double z = (point[j] - samples_(i, j)) * inv_bandwidths_[j];
      q += z * z;
    }
    sum += std::exp(-0.5 * q);
  }
  return norm_ * sum;
}

Eigen::VectorXd DensityModel::densities_at(const Eigen::MatrixXd& points) const {
  Eigen::VectorXd out(points.rows());
  for (Eigen::Index k = 0; k < points.rows(); ++k) out[k] = density_at(points.row(k).transpose());
  return out;
}

// ---------------------------------------------------------------------------

double lower_quantile(std::vector<double> values, double alpha) {
  if (values.empty()) throw std::invalid_argument("quantile of an empty sample");
  std::sort(values.begin(), values.end());
  const double n = static_cast<double>(values.size());
  const double pos = std::ceil(alpha * n - 1e-9) - 1.0;
  const auto k = static_cast<std::size_t>(std::clamp(pos, 0.0, n - 1.0));
  return values[k];
}

Reference parse_reference(const std::string& text) {
  if (text == "median") return MedianReference{};
  if (text.starts_with("index:")) {
    auto v = parse_double(text.substr(6));
    if (!v || *v < 0 || *v != std::floor(*v))
      throw ValidationError("bad reference index in '" + text + "'");
    return RealizationReference{static_cast<std::size_t>(*v)};
  }
  throw ValidationError("unknown reference '" + text + "' (expected median or index:<i>)");
}

std::string describe(const Reference& ref) {
  struct Visitor {
    std::string operator()(const MedianReference&) const { return "median"; }
    std::string operator()(const RealizationReference& r) const {
      return "index:" + std::to_string(r.index);
    }
    std::string operator()(const ScoreReference&) const { return "score"; }
  };
  return std::visit(Visitor{}, ref);
}

bool HdrSummary::is_outlier(std::size_t i) const {
  return std::binary_search(outlier_indices.begin(), outlier_indices.end(), i);
}

namespace {

// Points at which the region is sampled: a regular grid over the expanded
// bounding box for r <= 3, uniform Monte Carlo draws above that.
Eigen::MatrixXd region_sample_points(const Eigen::MatrixXd& scores, double pad,
                                     const HdrOptions& options) {
  const auto r = scores.cols();
  const Eigen::RowVectorXd lo = scores.colwise().minCoeff().array() - pad;
  const Eigen::RowVectorXd hi = scores.colwise().maxCoeff().array() + pad;

  if (r > 3) {
    const auto count = static_cast<Eigen::Index>(options.monte_carlo_points);
    Eigen::MatrixXd pts(count, r);
    Rng rng(options.monte_carlo_seed);
    for (Eigen::Index k = 0; k < count; ++k)
      for (Eigen::Index j = 0; j < r; ++j) pts(k, j) = lo[j] + (hi[j] - lo[j]) * rng.uniform();
    return pts;
  }

  const std::size_t g = options.grid_points > 0 ? options.grid_points : (r <= 2 ? 50 : 20);
  if (g < 2) throw ValidationError("region grid needs at least 2 points per dimension");
  Eigen::Index total = 1;
  for (Eigen::Index j = 0; j < r; ++j) total *= static_cast<Eigen::Index>(g);
  Eigen::MatrixXd pts(total, r);
  for (Eigen::Index k = 0; k < total; ++k) {
    Eigen::Index rem = k;
    for (Eigen::Index j = 0; j < r; ++j) {
      const auto idx = rem % static_cast<Eigen::Index>(g);
      rem /= static_cast<Eigen::Index>(g);
      pts(k, j) = lo[j] + (hi[j] - lo[j]) * static_cast<double>(idx) / static_cast<double>(g - 1);
    }
  }
  return pts;
}

// One pass over the 5^r grid {-h, -h/2, 0, h/2, h} around `start`; above
// four dimensions the pass is coordinate-wise to keep the cost linear in r.
Eigen::VectorXd refine_mode(const DensityModel& model, Eigen::VectorXd start, double& best) {
  static constexpr double kSteps[] = {-1.0, -0.5, 0.0, 0.5, 1.0};
  const auto r = start.size();
  const Eigen::VectorXd& h = model.bandwidths();

  if (r > 4) {
    for (Eigen::Index j = 0; j < r; ++j) {
      const double centre = start[j];
      double arg = centre;
      for (double s : kSteps) {
        Eigen::VectorXd trial = start;
        trial[j] = centre + s * h[j];
        const double f = model.density_at(trial);
        if (f > best) {
          best = f;
          arg = trial[j];
        }
      }
      start[j] = arg;
    }
    return start;
  }

  Eigen::Index total = 1;
  for (Eigen::Index j = 0; j < r; ++j) total *= 5;
  Eigen::VectorXd arg = start;
  for (Eigen::Index k = 0; k < total; ++k) {
    Eigen::VectorXd trial = start;
    Eigen::Index rem = k;
    for (Eigen::Index j = 0; j < r; ++j) {
      trial[j] += kSteps[rem % 5] * h[j];
      rem /= 5;
    }
    const double f = model.density_at(trial);
    if (f > best) {
      best = f;
      arg = trial;
    }
  }
  return arg;
}

}  // namespace

HdrSummary fit_hdr(const ReducedSpace& rs, const HdrOptions& options,
                   const Eigen::MatrixXd* outputs) {
  if (options.alphas.empty()) throw ValidationError("at least one alpha level is required");
  for (double a : options.alphas)
    if (!(a > 0.0 && a < 1.0)) throw ValidationError("every alpha must lie in (0, 1)");
  const double min_alpha = *std::min_element(options.alphas.begin(), options.alphas.end());
  if (!(options.outlier_alpha > 0.0 && options.outlier_alpha < min_alpha))
    throw ValidationError("outlier_alpha must lie in (0, min(alphas))");
  const auto n = rs.scores.rows();
  if (outputs && (outputs->rows() != n || outputs->cols() != rs.mean_curve.size()))
    throw std::invalid_argument("fit_hdr: outputs shape does not match the reduced space");

  HdrSummary h;
  const auto model = DensityModel::fit(rs.scores);
  h.bandwidths = model.bandwidths();
  h.sample_densities = model.densities_at(rs.scores);
  const std::vector<double> dens(h.sample_densities.begin(), h.sample_densities.end());

  h.alphas = options.alphas;
  for (double a : h.alphas) h.thresholds.push_back(lower_quantile(dens, a));

  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < n; ++i)
    if (h.sample_densities[i] > h.sample_densities[best]) best = i;
  h.median_index = static_cast<std::size_t>(best);
  h.median_density = h.sample_densities[best];
  h.median_score = refine_mode(model, rs.scores.row(best).transpose(), h.median_density);
  h.median_curve = inverse_transform(rs, h.median_score);

  h.outlier_alpha = options.outlier_alpha;
  h.outlier_threshold = lower_quantile(dens, options.outlier_alpha);
  for (Eigen::Index i = 0; i < n; ++i)
    if (h.sample_densities[i] < h.outlier_threshold) h.outlier_indices.push_back(static_cast<std::size_t>(i));

  // Envelopes.
  const auto m = rs.mean_curve.size();
  const Eigen::MatrixXd points = region_sample_points(rs.scores, 3.0 * h.bandwidths.maxCoeff(), options);
  const Eigen::VectorXd point_dens = model.densities_at(points);
  const auto levels = h.alphas.size();
  for (std::size_t a = 0; a < levels; ++a) {
    h.envelopes.push_back({h.alphas[a],
                           Eigen::VectorXd::Constant(m, std::numeric_limits<double>::infinity()),
                           Eigen::VectorXd::Constant(m, -std::numeric_limits<double>::infinity())});
  }
  auto absorb = [&](double f, const Eigen::VectorXd& curve) {
    for (std::size_t a = 0; a < levels; ++a) {
      if (f < h.thresholds[a]) continue;
      h.envelopes[a].lower = h.envelopes[a].lower.cwiseMin(curve);
      h.envelopes[a].upper = h.envelopes[a].upper.cwiseMax(curve);
    }
  };
  for (Eigen::Index k = 0; k < points.rows(); ++k) {
    if (point_dens[k] < *std::min_element(h.thresholds.begin(), h.thresholds.end())) continue;
    absorb(point_dens[k], inverse_transform(rs, points.row(k).transpose()));
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::VectorXd curve =
        outputs ? Eigen::VectorXd(outputs->row(i).transpose()) : inverse_transform(rs, rs.scores.row(i).transpose());
    absorb(h.sample_densities[i], curve);
  }

  // Distances.
  struct RefScore {
    const ReducedSpace& rs;
    const HdrSummary& h;
    Eigen::VectorXd operator()(const MedianReference&) const {
      return rs.scores.row(static_cast<Eigen::Index>(h.median_index)).transpose();
    }
    Eigen::VectorXd operator()(const RealizationReference& ref) const {
      if (ref.index >= static_cast<std::size_t>(rs.scores.rows()))
        throw ValidationError("reference index " + std::to_string(ref.index) + " out of range");
      return rs.scores.row(static_cast<Eigen::Index>(ref.index)).transpose();
    }
    Eigen::VectorXd operator()(const ScoreReference& ref) const {
      if (ref.score.size() != rs.scores.cols())
        throw ValidationError("reference score has the wrong dimension");
      return ref.score;
    }
  };
  h.reference = describe(options.reference);
  h.reference_score = std::visit(RefScore{rs, h}, options.reference);
  h.distances.resize(n);
  for (Eigen::Index i = 0; i < n; ++i)
    h.distances[i] = hdr_distance(rs, static_cast<std::size_t>(i), h.reference_score);
  return h;
}

double hdr_distance(const ReducedSpace& rs, std::size_t i, const Eigen::VectorXd& reference_score) {
  if (i >= static_cast<std::size_t>(rs.scores.rows()))
    throw std::out_of_range("hdr_distance: realization index " + std::to_string(i) + " out of range");
  if (reference_score.size() != rs.scores.cols())
    throw std::invalid_argument("hdr_distance: reference dimension mismatch");
  return (rs.scores.row(static_cast<Eigen::Index>(i)).transpose() - reference_score).norm();
}

// ---------------------------------------------------------------------------

namespace {

std::string percent(double alpha) {
  auto s = format_fixed((1.0 - alpha) * 100.0, 2);
  while (s.back() == '0') s.pop_back();
  if (s.back() == '.') s.pop_back();
  return s;
}

}  // namespace

std::string BandMembership::label() const {
  return alpha ? "inside_" + percent(*alpha) : "outside";
}

std::string BandMembership::text() const {
  return alpha ? "inside " + percent(*alpha) + "%" : "outside";
}

BandMembership classify_density(const HdrSummary& h, double density) {
  BandMembership out;
  // Narrowest region = highest threshold that the density still reaches.
  double best = -1.0;
  for (std::size_t a = 0; a < h.alphas.size(); ++a) {
    if (density >= h.thresholds[a] && h.thresholds[a] > best) {
      best = h.thresholds[a];
      out.alpha = h.alphas[a];
    }
  }
  return out;
}

}  // namespace spider
