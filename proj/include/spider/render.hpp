#pragma once

#include "spider/dataset.hpp"
#include "spider/density.hpp"
#include "spider/fhops.hpp"
#include "spider/kiviat.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace spider {

struct Margins {
  double left = 70.0;
  double right = 30.0;
  double top = 50.0;
  double bottom = 60.0;
};

struct FigureSpec {
  double width = 800.0;
  double height = 500.0;
  Margins margins;
  std::string title;
  std::string x_label = "coordinate";
  std::string y_label = "value";
  std::string colormap = "viridis";

  /// Throws ValidationError unless the plot area has positive size.
  void validate() const;
};

/// Static HDR boxplot: thin dataset curves, nested shaded envelopes (widest
/// first), the HDR median as a thick black curve, outliers dashed.
std::string render_hdr_boxplot(const Ensemble& e, const HdrSummary& h, const FigureSpec& spec);

/// One f-HOPs frame: envelopes and median as context, frame k's realization
/// in front, annotated with its HDR distance and band membership.
std::string render_fhops_frame(const Ensemble& e, const FrameSequence& seq, std::size_t k,
                               const HdrSummary& h, const FigureSpec& spec);

/// "frame_0007.svg".
std::string frame_filename(std::size_t k);

/// Writes every frame of `seq` into `dir`; returns the paths in order.
std::vector<std::filesystem::path> write_fhops_frames(const std::filesystem::path& dir, const Ensemble& e,
                                                      const FrameSequence& seq, const HdrSummary& h,
                                                      const FigureSpec& spec);

/// Silverman bandwidth for one dimension, sigma * (4 / (3 N))^(1/5).
/// Throws DegenerateError for zero variance.
double silverman_bandwidth(const Eigen::VectorXd& values);

/// Gaussian KDE of `values` evaluated at each grid point.
Eigen::VectorXd kde1d(const Eigen::VectorXd& values, double bandwidth, const Eigen::VectorXd& grid);

/// Pointwise density of the output values per coordinate.
struct FunctionalPdf {
  Eigen::VectorXd levels;             // value grid, ascending
  Eigen::MatrixXd density;            // levels x m
  Eigen::VectorXd bandwidths;         // m, 0 where degenerate
  Eigen::VectorXd pointwise_median;   // m
  std::vector<std::size_t> degenerate;  // zero-variance coordinates
};

/// The value grid spans every column's [min - 4h, max + 4h].
FunctionalPdf functional_pdf(const Ensemble& e, std::size_t levels = 96);

/// Heatmap of the pointwise densities with the pointwise median, or the
/// density curve at `probe` when given. Throws ValidationError for a probe
/// outside [0, m).
std::string render_functional_pdf(const Ensemble& e, const FigureSpec& spec,
                                  std::optional<std::size_t> probe = std::nullopt);

/// True for realizations whose QoI reaches the value at sorted position
/// N - ceil((1 - q) N); ties with that value are included.
std::vector<bool> highlight_mask(const Eigen::VectorXd& qoi, double highlight_quantile);

/// p + 1 vertical axes (inputs, then QoI), min-max scaled per axis.
std::string render_parallel_coordinates(const Ensemble& e, const QoiProbe& probe,
                                        double highlight_quantile, const FigureSpec& spec);

/// Writes text to a file, throwing IoError on failure.
void write_file(const std::filesystem::path& path, const std::string& text);

}  // namespace spider
