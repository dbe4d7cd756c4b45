#include "spider/kiviat.hpp"

#include "spider/error.hpp"
#include "spider/numfmt.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

namespace spider {

LayerKey LayerKey::parse(const std::string& text) {
  if (text == "qoi") return qoi();
  if (text == "hdr") return hdr();
  if (text.starts_with("input:")) return of_input(text.substr(6));
  if (text.empty()) throw ValidationError("empty layer key");
  return of_input(text);
}

std::string LayerKey::name() const {
  switch (kind) {
    case Kind::Qoi: return "qoi";
    case Kind::Hdr: return "hdr";
    case Kind::Input: return input;
  }
  return "qoi";
}

QoiProbe QoiProbe::default_for(const Ensemble& e) { return at_index(e.output_dim() / 2); }

QoiProbe QoiProbe::parse(const std::string& text, const Ensemble& e) {
  if (text == "max") return curve_max();
  if (text == "mean") return curve_mean();
  if (text.starts_with("at:")) {
    auto v = parse_double(text.substr(3));
    if (!v) throw ValidationError("bad probe coordinate in '" + text + "'");
    const auto& c = e.coordinate();
    Eigen::Index best = 0;
    (c.array() - *v).abs().minCoeff(&best);
    return at_index(static_cast<std::size_t>(best));
  }
  auto body = text.starts_with("index:") ? text.substr(6) : text;
  auto v = parse_double(body);
  if (!v || *v < 0 || *v != std::floor(*v))
    throw ValidationError("bad probe '" + text + "' (index, at:<coordinate>, max, mean)");
  const auto idx = static_cast<std::size_t>(*v);
  if (idx >= e.output_dim())
    throw ValidationError("probe index " + std::to_string(idx) + " out of range (m = " +
                          std::to_string(e.output_dim()) + ")");
  return at_index(idx);
}

std::string QoiProbe::name() const {
  switch (kind) {
    case Kind::AtIndex: return "index:" + std::to_string(index);
    case Kind::CurveMax: return "max";
    case Kind::CurveMean: return "mean";
  }
  return "max";
}

double QoiProbe::evaluate(const Eigen::VectorXd& curve) const {
  switch (kind) {
    case Kind::AtIndex:
      if (static_cast<Eigen::Index>(index) >= curve.size())
        throw ValidationError("probe index " + std::to_string(index) + " out of range");
      return curve[static_cast<Eigen::Index>(index)];
    case Kind::CurveMax: return curve.maxCoeff();
    case Kind::CurveMean: return curve.mean();
  }
  return 0.0;
}

Eigen::VectorXd probe_values(const Ensemble& e, const QoiProbe& probe) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(e.size()));
  for (Eigen::Index i = 0; i < out.size(); ++i) out[i] = probe.evaluate(e.outputs().row(i).transpose());
  return out;
}

Eigen::VectorXd key_values(const Ensemble& e, const HdrSummary& h, const LayerKey& key,
                           const QoiProbe& probe) {
  switch (key.kind) {
    case LayerKey::Kind::Qoi: return probe_values(e, probe);
    case LayerKey::Kind::Hdr:
      if (static_cast<std::size_t>(h.distances.size()) != e.size())
        throw ValidationError("HDR key needs a summary computed on this ensemble");
      return h.distances;
    case LayerKey::Kind::Input: {
      const auto j = e.input_index(key.input);
      if (!j) throw ValidationError("unknown key '" + key.input + "': no such input");
      return e.inputs().col(static_cast<Eigen::Index>(*j));
    }
  }
  return {};
}

namespace {

struct Stacking {
  std::vector<std::size_t> order;  // bottom to top
  std::vector<std::size_t> rank;   // per realization
  std::vector<double> z;           // per realization
  std::array<double, 2> range{0.0, 0.0};
};

Stacking stack(const Eigen::VectorXd& values, HeightMode mode) {
  const auto n = static_cast<std::size_t>(values.size());
  Stacking s;
  s.order.resize(n);
  std::iota(s.order.begin(), s.order.end(), std::size_t{0});
  std::stable_sort(s.order.begin(), s.order.end(), [&](std::size_t a, std::size_t b) {
    return values[static_cast<Eigen::Index>(a)] < values[static_cast<Eigen::Index>(b)];
  });
  s.rank.resize(n);
  for (std::size_t k = 0; k < n; ++k) s.rank[s.order[k]] = k;
  s.range = {values.minCoeff(), values.maxCoeff()};
  s.z.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (mode == HeightMode::Rank) {
      s.z[i] = n > 1 ? static_cast<double>(s.rank[i]) / static_cast<double>(n - 1) : 0.0;
    } else {
      const double span = s.range[1] - s.range[0];
      s.z[i] = span > 0.0 ? (values[static_cast<Eigen::Index>(i)] - s.range[0]) / span : 0.0;
    }
  }
  return s;
}

void check_radius(double r0) {
  if (!(r0 >= 0.0 && r0 < 1.0)) throw ValidationError("inner radius must lie in [0, 1)");
}

}  // namespace

KiviatScene build_scene(const Ensemble& e, const HdrSummary& h, const SceneOptions& options) {
  const auto p = e.input_dim();
  if (p < 3)
    throw ValidationError("a Kiviat scene needs at least 3 inputs (got " + std::to_string(p) +
                          "); two inputs use the tree plot");
  check_radius(options.inner_radius);
  const auto probe = options.probe.value_or(QoiProbe::default_for(e));
  const auto& cmap = Colormap::named(options.colormap);

  const Eigen::VectorXd stack_vals = key_values(e, h, options.stacking, probe);
  const Eigen::VectorXd colour_vals = key_values(e, h, options.colour, probe);
  const Eigen::VectorXd qoi = probe_values(e, probe);
  const Eigen::MatrixXd norm = normalize_inputs(e);
  const auto s = stack(stack_vals, options.heights);

  KiviatScene scene;
  for (const auto& spec : e.input_specs()) scene.axes.push_back(spec.name);
  for (std::size_t j = 0; j < p; ++j)
    scene.axis_angles.push_back(2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(p));
  scene.stack_order = s.order;
  scene.stacking = options.stacking;
  scene.colour = options.colour;
  scene.probe = probe;
  scene.heights = options.heights;
  scene.colormap = options.colormap;
  scene.inner_radius = options.inner_radius;
  scene.colour_range = {colour_vals.minCoeff(), colour_vals.maxCoeff()};
  scene.stack_range = s.range;

  const double r0 = options.inner_radius;
  for (std::size_t i = 0; i < e.size(); ++i) {
    const auto row = static_cast<Eigen::Index>(i);
    KiviatLayer layer;
    layer.realization = i;
    layer.stack_rank = s.rank[i];
    layer.z = s.z[i];
    layer.stack_value = stack_vals[row];
    layer.colour_value = colour_vals[row];
    layer.colour = cmap.map(layer.colour_value, scene.colour_range[0], scene.colour_range[1]);
    for (std::size_t j = 0; j < p; ++j) {
      const double v = norm(row, static_cast<Eigen::Index>(j));
      const double radius = r0 + (1.0 - r0) * v;
      const double angle = scene.axis_angles[j];
      layer.radii.push_back(radius);
      layer.vertices.push_back({radius * std::cos(angle), radius * std::sin(angle)});
      layer.inputs.push_back(e.inputs()(row, static_cast<Eigen::Index>(j)));
      layer.normalized.push_back(v);
    }
    layer.qoi = qoi[row];
    layer.distance = h.distances[row];
    layer.outlier = h.is_outlier(i);
    scene.layers.push_back(std::move(layer));
  }
  return scene;
}

QuadMesh export_mesh(const KiviatScene& scene) {
  const auto n = scene.stack_order.size();
  const auto p = scene.axes.size();
  if (n < 2) throw ValidationError("mesh export needs at least 2 layers");
  QuadMesh mesh;
  mesh.vertices.reserve(n * p);
  for (std::size_t idx : scene.stack_order) {
    const auto& layer = scene.layers.at(idx);
    for (std::size_t j = 0; j < p; ++j) {
      mesh.vertices.push_back({layer.vertices[j][0], layer.vertices[j][1], layer.z});
      mesh.colours.push_back(layer.colour);
      mesh.provenance.push_back(layer.realization);
    }
  }
  // Axes run counter-clockwise, so (j, j+1, j+1 above, j above) winds with
  // the normal pointing away from the vertical axis.
  for (std::size_t s = 0; s + 1 < n; ++s) {
    for (std::size_t j = 0; j < p; ++j) {
      const auto next = (j + 1) % p;
      mesh.quads.push_back({static_cast<std::uint32_t>(s * p + j), static_cast<std::uint32_t>(s * p + next),
                            static_cast<std::uint32_t>((s + 1) * p + next),
                            static_cast<std::uint32_t>((s + 1) * p + j)});
    }
  }
  return mesh;
}

std::vector<std::string> scene_comments(const KiviatScene& scene) {
  std::string axes;
  for (const auto& a : scene.axes) axes += (axes.empty() ? "" : ",") + a;
  return {"stacking: " + scene.stacking.name(),
          "colouring: " + scene.colour.name(),
          "probe: " + scene.probe.name(),
          "heights: " + std::string(scene.heights == HeightMode::Rank ? "rank" : "value"),
          "colormap: " + scene.colormap,
          "colour range: " + format_exact(scene.colour_range[0]) + " " + format_exact(scene.colour_range[1]),
          "axes: " + axes,
          "layers: " + std::to_string(scene.layers.size())};
}

std::string mesh_to_obj(const QuadMesh& mesh, const std::vector<std::string>& comments) {
  std::string out;
  for (const auto& c : comments) out += "# " + c + "\n";
  for (std::size_t k = 0; k < mesh.vertices.size(); ++k) {
    const auto& v = mesh.vertices[k];
    const auto& c = mesh.colours[k];
    out += "v " + format_exact(v[0]) + " " + format_exact(v[1]) + " " + format_exact(v[2]) + " " +
           format_exact(c.r / 255.0) + " " + format_exact(c.g / 255.0) + " " + format_exact(c.b / 255.0) + "\n";
  }
  for (const auto& q : mesh.quads)
    out += "f " + std::to_string(q[0] + 1) + " " + std::to_string(q[1] + 1) + " " +
           std::to_string(q[2] + 1) + " " + std::to_string(q[3] + 1) + "\n";
  return out;
}

void write_obj(const QuadMesh& mesh, const std::filesystem::path& path,
               const std::vector<std::string>& comments) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << mesh_to_obj(mesh, comments);
  if (!out) throw IoError("cannot write " + path.string());
}

TreeGeometry build_tree(const Ensemble& e, const HdrSummary& h, const SceneOptions& options,
                        double theta_max) {
  if (e.input_dim() != 2)
    throw ValidationError("a tree plot needs exactly 2 inputs (got " + std::to_string(e.input_dim()) + ")");
  check_radius(options.inner_radius);
  if (!(theta_max >= 0.0) || !std::isfinite(theta_max)) throw ValidationError("theta_max must be >= 0");
  const auto probe = options.probe.value_or(QoiProbe::default_for(e));
  const auto& cmap = Colormap::named(options.colormap);

  const Eigen::VectorXd stack_vals = key_values(e, h, options.stacking, probe);
  const Eigen::VectorXd colour_vals = key_values(e, h, options.colour, probe);
  const Eigen::VectorXd qoi = probe_values(e, probe);
  const Eigen::MatrixXd norm = normalize_inputs(e);
  const auto s = stack(stack_vals, options.heights);
  const double d_ref = h.distances.maxCoeff();

  TreeGeometry tree;
  for (const auto& spec : e.input_specs()) tree.axes.push_back(spec.name);
  tree.stack_order = s.order;
  tree.stacking = options.stacking;
  tree.colour = options.colour;
  tree.probe = probe;
  tree.heights = options.heights;
  tree.colormap = options.colormap;
  tree.inner_radius = options.inner_radius;
  tree.theta_max = theta_max;
  tree.colour_range = {colour_vals.minCoeff(), colour_vals.maxCoeff()};
  tree.stack_range = s.range;

  const double r0 = options.inner_radius;
  for (std::size_t i = 0; i < e.size(); ++i) {
    const auto row = static_cast<Eigen::Index>(i);
    TreeSegment seg;
    seg.realization = i;
    seg.stack_rank = s.rank[i];
    seg.z = s.z[i];
    seg.stack_value = stack_vals[row];
    seg.colour_value = colour_vals[row];
    seg.colour = cmap.map(seg.colour_value, tree.colour_range[0], tree.colour_range[1]);
    seg.distance = h.distances[row];
    seg.theta = d_ref > 0.0 ? (seg.distance >= d_ref ? theta_max : theta_max * seg.distance / d_ref) : 0.0;
    const double r1 = r0 + (1.0 - r0) * norm(row, 0);
    const double r2 = r0 + (1.0 - r0) * norm(row, 1);
    const double c = std::cos(seg.theta), sn = std::sin(seg.theta);
    seg.first = {r1 * c, r1 * sn, seg.z};
    seg.second = {-r2 * c, -r2 * sn, seg.z};
    seg.inputs = {e.inputs()(row, 0), e.inputs()(row, 1)};
    seg.normalized = {norm(row, 0), norm(row, 1)};
    seg.qoi = qoi[row];
    seg.outlier = h.is_outlier(i);
    tree.segments.push_back(std::move(seg));
  }
  return tree;
}

std::string tree_to_obj(const TreeGeometry& tree) {
  std::string out;
  out += "# stacking: " + tree.stacking.name() + "\n# colouring: " + tree.colour.name() +
         "\n# probe: " + tree.probe.name() + "\n# theta_max: " + format_exact(tree.theta_max) + "\n";
  std::size_t vertex = 1;
  for (std::size_t idx : tree.stack_order) {
    const auto& seg = tree.segments.at(idx);
    for (const auto& pt : {seg.first, seg.second})
      out += "v " + format_exact(pt[0]) + " " + format_exact(pt[1]) + " " + format_exact(pt[2]) + " " +
             format_exact(seg.colour.r / 255.0) + " " + format_exact(seg.colour.g / 255.0) + " " +
             format_exact(seg.colour.b / 255.0) + "\n";
    out += "l " + std::to_string(vertex) + " " + std::to_string(vertex + 1) + "\n";
    vertex += 2;
  }
  return out;
}

}  // namespace spider
