#pragma once

#include "spider/colormap.hpp"
#include "spider/dataset.hpp"
#include "spider/density.hpp"

#include <Eigen/Dense>

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace spider {

/// Scalar per realization used for stacking or colouring.
struct LayerKey {
  enum class Kind { Qoi, Hdr, Input };
  Kind kind = Kind::Qoi;
  std::string input;  // Kind::Input only

  static LayerKey qoi() { return {Kind::Qoi, {}}; }
  static LayerKey hdr() { return {Kind::Hdr, {}}; }
  static LayerKey of_input(std::string name) { return {Kind::Input, std::move(name)}; }

  /// "qoi", "hdr", "input:<name>" or a bare input name.
  static LayerKey parse(const std::string& text);
  /// "qoi", "hdr" or the input name.
  std::string name() const;
  bool operator==(const LayerKey&) const = default;
};

/// Reduces a curve to the scalar QoI.
struct QoiProbe {
  enum class Kind { AtIndex, CurveMax, CurveMean };
  Kind kind = Kind::AtIndex;
  std::size_t index = 0;

  static QoiProbe at_index(std::size_t i) { return {Kind::AtIndex, i}; }
  static QoiProbe curve_max() { return {Kind::CurveMax, 0}; }
  static QoiProbe curve_mean() { return {Kind::CurveMean, 0}; }
  /// Middle coordinate index, floor(m / 2).
  static QoiProbe default_for(const Ensemble& e);

  /// "<index>", "index:<i>", "at:<coordinate value>" (nearest), "max", "mean".
  static QoiProbe parse(const std::string& text, const Ensemble& e);
  std::string name() const;
  double evaluate(const Eigen::VectorXd& curve) const;
  bool operator==(const QoiProbe&) const = default;
};

/// QoI value of every realization; throws ValidationError for a bad index.
Eigen::VectorXd probe_values(const Ensemble& e, const QoiProbe& probe);

/// Value of `key` for every realization.
Eigen::VectorXd key_values(const Ensemble& e, const HdrSummary& h, const LayerKey& key,
                           const QoiProbe& probe);

enum class HeightMode { Rank, Value };

struct SceneOptions {
  LayerKey stacking = LayerKey::qoi();
  LayerKey colour = LayerKey::hdr();
  std::optional<QoiProbe> probe;  // QoiProbe::default_for(e) when empty
  HeightMode heights = HeightMode::Rank;
  std::string colormap = "viridis";
  double inner_radius = 0.1;
};

struct KiviatLayer {
  std::size_t realization = 0;
  std::size_t stack_rank = 0;
  std::vector<std::array<double, 2>> vertices;  // one per axis
  std::vector<double> radii;
  double z = 0.0;
  double stack_value = 0.0;
  double colour_value = 0.0;
  Rgb colour;
  std::vector<double> inputs;
  std::vector<double> normalized;
  double qoi = 0.0;
  double distance = 0.0;
  bool outlier = false;
};

/// Stacked polygon layers, one per realization (stored in realization order).
struct KiviatScene {
  std::vector<std::string> axes;
  std::vector<double> axis_angles;
  std::vector<KiviatLayer> layers;
  /// Realization indices from bottom to top.
  std::vector<std::size_t> stack_order;
  LayerKey stacking;
  LayerKey colour;
  QoiProbe probe;
  HeightMode heights = HeightMode::Rank;
  std::string colormap;
  double inner_radius = 0.1;
  std::array<double, 2> colour_range{0.0, 0.0};
  std::array<double, 2> stack_range{0.0, 0.0};
};

/// Axis j at angle 2 pi j / p, vertex radius r0 + (1 - r0) * normalized
/// input. Rank heights are rank / (N - 1) with ties broken by realization
/// index; value heights are min-max scaled key values. Requires p >= 3.
KiviatScene build_scene(const Ensemble& e, const HdrSummary& h, const SceneOptions& options = {});

struct QuadMesh {
  std::vector<std::array<double, 3>> vertices;
  std::vector<Rgb> colours;
  std::vector<std::array<std::uint32_t, 4>> quads;
  std::vector<std::size_t> provenance;  // realization per vertex
};

/// Skins consecutive layers (in stacking order) with p outward-facing quads
/// each: N * p vertices and (N - 1) * p quads.
QuadMesh export_mesh(const KiviatScene& scene);

/// OBJ with `v x y z r g b` vertex colours and 1-based `f` quads.
std::string mesh_to_obj(const QuadMesh& mesh, const std::vector<std::string>& comments = {});
void write_obj(const QuadMesh& mesh, const std::filesystem::path& path,
               const std::vector<std::string>& comments = {});

/// Header comment lines describing how a scene was stacked and coloured.
std::vector<std::string> scene_comments(const KiviatScene& scene);

struct TreeSegment {
  std::size_t realization = 0;
  std::size_t stack_rank = 0;
  std::array<double, 3> first{};   // along the first input's direction
  std::array<double, 3> second{};  // opposite direction, second input
  double theta = 0.0;
  double z = 0.0;
  double stack_value = 0.0;
  double colour_value = 0.0;
  Rgb colour;
  std::vector<double> inputs;
  std::vector<double> normalized;
  double qoi = 0.0;
  double distance = 0.0;
  bool outlier = false;
};

/// Two-input degenerate Kiviat: segments rotated about the vertical axis by
/// theta_max * d / d_ref.
struct TreeGeometry {
  std::vector<std::string> axes;
  std::vector<TreeSegment> segments;  // realization order
  std::vector<std::size_t> stack_order;
  LayerKey stacking;
  LayerKey colour;
  QoiProbe probe;
  HeightMode heights = HeightMode::Rank;
  std::string colormap;
  double inner_radius = 0.1;
  double theta_max = std::numbers::pi / 2.0;
  std::array<double, 2> colour_range{0.0, 0.0};
  std::array<double, 2> stack_range{0.0, 0.0};
};

TreeGeometry build_tree(const Ensemble& e, const HdrSummary& h, const SceneOptions& options = {},
                        double theta_max = std::numbers::pi / 2.0);

/// OBJ polyline export of a tree (`l` elements).
std::string tree_to_obj(const TreeGeometry& tree);

}  // namespace spider
