#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace spider {

/// Bounds of one uncertain input parameter. lower < upper strictly.
struct ParameterSpec {
  std::string name;
  double lower = 0.0;
  double upper = 1.0;
  std::string unit;

  bool operator==(const ParameterSpec&) const = default;
};

/// N realizations of (inputs, functional output).
///
/// Immutable once built; `Ensemble::create` is the only way in and it
/// enforces every invariant (N >= 3, finite values, strictly increasing
/// coordinate, inputs within their specs).
class Ensemble {
 public:
  /// Validates and builds. When `input_specs` is empty and `inputs` has
  /// columns, specs are auto-fitted to the observed column min/max and
  /// named in1..inp.
  static Ensemble create(Eigen::MatrixXd inputs, std::vector<ParameterSpec> input_specs,
                         Eigen::MatrixXd outputs, Eigen::VectorXd coordinate,
                         std::vector<std::string> labels = {});

  /// Output-only ensemble (p = 0).
  static Ensemble create(Eigen::MatrixXd outputs, Eigen::VectorXd coordinate,
                         std::vector<std::string> labels = {});

  std::size_t size() const { return static_cast<std::size_t>(outputs_.rows()); }
  std::size_t input_dim() const { return static_cast<std::size_t>(inputs_.cols()); }
  std::size_t output_dim() const { return static_cast<std::size_t>(outputs_.cols()); }

  const Eigen::MatrixXd& inputs() const { return inputs_; }
  const std::vector<ParameterSpec>& input_specs() const { return input_specs_; }
  const Eigen::MatrixXd& outputs() const { return outputs_; }
  const Eigen::VectorXd& coordinate() const { return coordinate_; }
  const std::vector<std::string>& labels() const { return labels_; }

  /// Column index of the named input, if any.
  std::optional<std::size_t> input_index(const std::string& name) const;

  bool operator==(const Ensemble& other) const;

 private:
  Ensemble() = default;

  Eigen::MatrixXd inputs_;
  std::vector<ParameterSpec> input_specs_;
  Eigen::MatrixXd outputs_;
  Eigen::VectorXd coordinate_;
  std::vector<std::string> labels_;
};

enum class EnsembleFormat { Csv, Json };

/// Picks the format from the file extension (.csv / .json).
std::optional<EnsembleFormat> format_from_extension(const std::filesystem::path& path);

Ensemble load_ensemble(const std::filesystem::path& path, EnsembleFormat format);
Ensemble parse_ensemble_csv(const std::string& text);
Ensemble parse_ensemble_json(const std::string& text);

void write_ensemble(const Ensemble& e, const std::filesystem::path& path, EnsembleFormat format);
std::string ensemble_to_csv(const Ensemble& e);
std::string ensemble_to_json(const Ensemble& e);

struct NoaaSstResult {
  Ensemble ensemble;
  /// Years seen in the file that lacked one or more months.
  std::vector<int> dropped_years;
};

/// Parses NOAA monthly index text: one realization per complete calendar
/// year, coordinate = months 1..12. Accepts "year month value [...]"
/// records (the first value column is used) or "year v1 .. v12" rows.
/// Values <= -99 are NOAA missing-value sentinels.
NoaaSstResult parse_noaa_sst(const std::string& text);
NoaaSstResult load_noaa_sst(const std::filesystem::path& path);

/// Maps every input to (v - lower) / (upper - lower). Throws
/// ValidationError when the ensemble has no inputs.
Eigen::MatrixXd normalize_inputs(const Ensemble& e);

/// Deterministic synthetic ensemble on coordinate t_k = k / (m - 1).
///
/// Curves are w0 + w1 sin(2 pi t) + w2 sin(4 pi t). Inputs are uniform
/// on [0, 1] and named Ks1..Ks(p-1), Q. With p >= 1, w0 = 1 + 4 Q exactly,
/// so values at t = 0.5 (index (m - 1) / 2 for odd m) are strictly
/// monotone in Q; w1 and w2 are Gaussian with means driven by Ks(p-1) and
/// Ks1. With p = 0 all three weights are zero-mean Gaussian. Gaussian
/// draws are truncated at 3 sd. The last `outlier_count` realizations are
/// shifted by +5 times the pointwise sample standard deviation of the
/// clean curves.
Ensemble synthesize_ensemble(std::uint64_t seed, std::size_t n, std::size_t p, std::size_t m,
                             std::size_t outlier_count = 0);

/// Pointwise sample standard deviation (N - 1) of the output columns.
Eigen::VectorXd pointwise_stddev(const Eigen::MatrixXd& outputs);

}  // namespace spider
