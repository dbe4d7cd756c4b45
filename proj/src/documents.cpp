#include "spider/documents.hpp"

#include "spider/error.hpp"
#include "spider/numfmt.hpp"
#include "spider/version.hpp"

#include <json.hpp>

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace spider {

using nlohmann::json;

std::uint64_t default_seed() {
  const char* env = std::getenv("SOUNDING_SPIDER_SEED");
  if (env == nullptr || *env == '\0') return kDefaultSeed;
  const std::string text(trim(env));
  std::uint64_t seed = 0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), seed);
  if (ec != std::errc{} || end != text.data() + text.size())
    throw ValidationError("SOUNDING_SPIDER_SEED must be a non-negative integer, got '" + text + "'");
  return seed;
}

SequenceManifest sequence_manifest(const FrameSequence& seq) {
  return {seq.strategy.name(), seq.strategy.seed, seq.frame_duration, seq.order};
}

ToneManifest tone_manifest(const FrameSequence& seq, const HdrSummary& h, double f_base, double f_max) {
  Eigen::VectorXd d(static_cast<Eigen::Index>(seq.size()));
  for (std::size_t k = 0; k < seq.size(); ++k) d[static_cast<Eigen::Index>(k)] = seq.frames[k].distance;
  ToneManifest t;
  t.f_base = f_base;
  t.f_max = f_max;
  t.d_ref = h.distances.size() > 0 ? h.distances.maxCoeff() : 0.0;
  t.frame_duration = seq.frame_duration;
  t.frequencies = distances_to_frequencies(d, t.d_ref, f_base, f_max);
  return t;
}

ToneTrack tone_track(const ToneManifest& manifest) {
  ToneTrack track;
  track.frequencies = manifest.frequencies;
  track.frame_duration = manifest.frame_duration;
  track.sample_rate = manifest.sample_rate;
  track.f_base = manifest.f_base;
  track.f_max = manifest.f_max;
  track.validate();
  return track;
}

AnalysisDocument analyze(Ensemble ensemble, const AnalysisParameters& params, std::string source) {
  auto rs = fit_pca(ensemble, params.variance_target);
  HdrOptions options;
  options.alphas = params.alphas;
  options.outlier_alpha = params.outlier_alpha;
  options.reference = parse_reference(params.reference);
  auto h = fit_hdr(rs, options, &ensemble.outputs());
  const auto seq = build_sequence(ensemble, h, parse_strategy(params.strategy, params.seed), params.frame_duration);
  AnalysisDocument doc{.schema_version = kSchemaVersion,
                       .toolkit_version = kToolkitVersion,
                       .source = std::move(source),
                       .ensemble = std::move(ensemble),
                       .reduction = std::move(rs),
                       .hdr = std::move(h),
                       .parameters = params,
                       .sequence = sequence_manifest(seq),
                       .tones = {}};
  doc.tones = tone_manifest(seq, doc.hdr, params.f_base, params.f_max);
  return doc;
}

// ---------------------------------------------------------------------------

namespace {

json vec(const Eigen::VectorXd& v) { return json(std::vector<double>(v.begin(), v.end())); }

json mat(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) rows.push_back(vec(m.row(i).transpose()));
  return rows;
}

Eigen::VectorXd to_vec(const json& j) {
  const auto values = j.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

Eigen::MatrixXd to_mat(const json& j, Eigen::Index cols) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(j.size()), cols);
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto row = to_vec(j[i]);
    if (row.size() != cols) throw ValidationError("ragged matrix in analysis document");
    m.row(static_cast<Eigen::Index>(i)) = row.transpose();
  }
  return m;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw ValidationError("analysis document is inconsistent: " + what);
}

}  // namespace

std::string analysis_to_json(const AnalysisDocument& doc) {
  const auto& rs = doc.reduction;
  const auto& h = doc.hdr;
  const auto& p = doc.parameters;
  json j;
  j["schema_version"] = doc.schema_version;
  j["toolkit_version"] = doc.toolkit_version;
  j["source"] = doc.source;
  j["dimensions"] = {{"N", doc.ensemble.size()},
                     {"p", doc.ensemble.input_dim()},
                     {"m", doc.ensemble.output_dim()},
                     {"r", rs.dim()}};
  j["parameters"] = {{"variance_target", p.variance_target}, {"alphas", p.alphas},
                     {"outlier_alpha", p.outlier_alpha},     {"reference", p.reference},
                     {"strategy", p.strategy},               {"seed", p.seed},
                     {"frame_duration", p.frame_duration},   {"f_base", p.f_base},
                     {"f_max", p.f_max}};
  j["ensemble"] = json::parse(ensemble_to_json(doc.ensemble));
  j["reduction"] = {{"mean_curve", vec(rs.mean_curve)},
                    {"modes", mat(rs.modes)},
                    {"singular_values", vec(rs.singular_values)},
                    {"explained_ratio", vec(rs.explained_ratio)},
                    {"cumulative_ratio", rs.cumulative_ratio()},
                    {"scores", mat(rs.scores)},
                    {"variance_target", rs.variance_target},
                    {"total_variance", rs.total_variance},
                    {"rank", rs.rank}};
  json envelopes = json::array();
  for (const auto& env : h.envelopes)
    envelopes.push_back({{"alpha", env.alpha}, {"lower", vec(env.lower)}, {"upper", vec(env.upper)}});
  j["hdr"] = {{"bandwidths", vec(h.bandwidths)},
              {"sample_densities", vec(h.sample_densities)},
              {"alphas", h.alphas},
              {"thresholds", h.thresholds},
              {"median_index", h.median_index},
              {"median_score", vec(h.median_score)},
              {"median_density", h.median_density},
              {"median_curve", vec(h.median_curve)},
              {"envelopes", envelopes},
              {"outlier_alpha", h.outlier_alpha},
              {"outlier_threshold", h.outlier_threshold},
              {"outlier_indices", h.outlier_indices},
              {"reference", h.reference},
              {"reference_score", vec(h.reference_score)},
              {"distances", vec(h.distances)}};
  j["sequence"] = {{"strategy", doc.sequence.strategy},
                   {"seed", doc.sequence.seed},
                   {"frame_duration", doc.sequence.frame_duration},
                   {"order", doc.sequence.order}};
  j["tones"] = {{"f_base", doc.tones.f_base},
                {"f_max", doc.tones.f_max},
                {"d_ref", doc.tones.d_ref},
                {"frame_duration", doc.tones.frame_duration},
                {"sample_rate", doc.tones.sample_rate},
                {"frequencies", doc.tones.frequencies}};
  return j.dump(1) + "\n";
}

AnalysisDocument analysis_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& err) {
    throw ParseError(std::string("analysis document: ") + err.what());
  }
  try {
    const int version = j.at("schema_version").get<int>();
    if (version != kSchemaVersion)
      throw ValidationError("analysis schema_version " + std::to_string(version) + " is not supported (expected " +
                            std::to_string(kSchemaVersion) + ")");

    const auto& jp = j.at("parameters");
    AnalysisParameters p;
    p.variance_target = jp.at("variance_target").get<double>();
    p.alphas = jp.at("alphas").get<std::vector<double>>();
    p.outlier_alpha = jp.at("outlier_alpha").get<double>();
    p.reference = jp.at("reference").get<std::string>();
    p.strategy = jp.at("strategy").get<std::string>();
    p.seed = jp.at("seed").get<std::uint64_t>();
    p.frame_duration = jp.at("frame_duration").get<double>();
    p.f_base = jp.at("f_base").get<double>();
    p.f_max = jp.at("f_max").get<double>();

    auto ensemble = parse_ensemble_json(j.at("ensemble").dump());
    const auto n = static_cast<Eigen::Index>(ensemble.size());
    const auto m = static_cast<Eigen::Index>(ensemble.output_dim());

    const auto& jr = j.at("reduction");
    ReducedSpace rs;
    rs.mean_curve = to_vec(jr.at("mean_curve"));
    rs.modes = to_mat(jr.at("modes"), m);
    const auto r = rs.modes.rows();
    rs.singular_values = to_vec(jr.at("singular_values"));
    rs.explained_ratio = to_vec(jr.at("explained_ratio"));
    rs.scores = to_mat(jr.at("scores"), r);
    rs.variance_target = jr.at("variance_target").get<double>();
    rs.total_variance = jr.at("total_variance").get<double>();
    rs.rank = jr.at("rank").get<std::size_t>();

    const auto& jh = j.at("hdr");
    HdrSummary h;
    h.bandwidths = to_vec(jh.at("bandwidths"));
    h.sample_densities = to_vec(jh.at("sample_densities"));
    h.alphas = jh.at("alphas").get<std::vector<double>>();
    h.thresholds = jh.at("thresholds").get<std::vector<double>>();
    h.median_index = jh.at("median_index").get<std::size_t>();
    h.median_score = to_vec(jh.at("median_score"));
    h.median_density = jh.at("median_density").get<double>();
    h.median_curve = to_vec(jh.at("median_curve"));
    for (const auto& je : jh.at("envelopes"))
      h.envelopes.push_back({je.at("alpha").get<double>(), to_vec(je.at("lower")), to_vec(je.at("upper"))});
    h.outlier_alpha = jh.at("outlier_alpha").get<double>();
    h.outlier_threshold = jh.at("outlier_threshold").get<double>();
    h.outlier_indices = jh.at("outlier_indices").get<std::vector<std::size_t>>();
    h.reference = jh.at("reference").get<std::string>();
    h.reference_score = to_vec(jh.at("reference_score"));
    h.distances = to_vec(jh.at("distances"));

    SequenceManifest seq{j.at("sequence").at("strategy").get<std::string>(),
                         j.at("sequence").at("seed").get<std::uint64_t>(),
                         j.at("sequence").at("frame_duration").get<double>(),
                         j.at("sequence").at("order").get<std::vector<std::size_t>>()};
    const auto& jt = j.at("tones");
    ToneManifest tones{jt.at("f_base").get<double>(),         jt.at("f_max").get<double>(),
                       jt.at("d_ref").get<double>(),          jt.at("frame_duration").get<double>(),
                       jt.at("sample_rate").get<double>(),    jt.at("frequencies").get<std::vector<double>>()};

    const auto& dims = j.at("dimensions");
    require(dims.at("N").get<Eigen::Index>() == n, "N");
    require(dims.at("p").get<std::size_t>() == ensemble.input_dim(), "p");
    require(dims.at("m").get<Eigen::Index>() == m, "m");
    require(dims.at("r").get<Eigen::Index>() == r && r >= 1, "r");
    require(rs.mean_curve.size() == m, "mean_curve length");
    require(rs.scores.rows() == n, "scores rows");
    require(rs.singular_values.size() == r && rs.explained_ratio.size() == r, "mode count");
    require(h.bandwidths.size() == r && h.median_score.size() == r && h.reference_score.size() == r,
            "reduced dimension of the HDR summary");
    require(h.sample_densities.size() == n && h.distances.size() == n, "per-realization HDR values");
    require(h.median_curve.size() == m, "median_curve length");
    require(h.median_index < ensemble.size(), "median_index");
    require(h.thresholds.size() == h.alphas.size() && h.envelopes.size() == h.alphas.size(), "alpha levels");
    for (const auto& env : h.envelopes) require(env.lower.size() == m && env.upper.size() == m, "envelope length");
    for (auto i : h.outlier_indices) require(i < ensemble.size(), "outlier index");
    require(seq.order.size() == ensemble.size(), "sequence length");
    for (auto i : seq.order) require(i < ensemble.size(), "sequence index");
    require(tones.frequencies.size() == ensemble.size(), "tone count");

    return AnalysisDocument{.schema_version = version,
                            .toolkit_version = j.at("toolkit_version").get<std::string>(),
                            .source = j.at("source").get<std::string>(),
                            .ensemble = std::move(ensemble),
                            .reduction = std::move(rs),
                            .hdr = std::move(h),
                            .parameters = std::move(p),
                            .sequence = std::move(seq),
                            .tones = std::move(tones)};
  } catch (const json::exception& err) {
    throw ValidationError(std::string("analysis document: ") + err.what());
  }
}

AnalysisDocument load_analysis(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return analysis_from_json(text.str());
}

void save_analysis(const AnalysisDocument& doc, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << analysis_to_json(doc);
  if (!out) throw IoError("cannot write " + path.string());
}

// ---------------------------------------------------------------------------
// Scene documents

namespace {

json common_scene(const AnalysisDocument& doc, const FrameSequence& seq, const LayerKey& stacking,
                  const LayerKey& colour, const QoiProbe& probe, HeightMode heights, const std::string& colormap,
                  double inner_radius, const std::array<double, 2>& colour_range,
                  const std::array<double, 2>& stack_range, const std::vector<std::size_t>& stack_order) {
  const auto& e = doc.ensemble;
  json j;
  j["schema_version"] = kSchemaVersion;
  j["toolkit_version"] = kToolkitVersion;
  std::vector<std::string> axes;
  for (const auto& s : e.input_specs()) axes.push_back(s.name);
  json keys = json::array({"qoi", "hdr"});
  for (const auto& a : axes) keys.push_back("input:" + a);
  j["keys"] = keys;
  j["stacking_key"] = stacking.kind == LayerKey::Kind::Input ? "input:" + stacking.input : stacking.name();
  j["colour_key"] = colour.kind == LayerKey::Kind::Input ? "input:" + colour.input : colour.name();
  j["qoi_probe"] = probe.name();
  j["heights"] = heights == HeightMode::Rank ? "rank" : "value";
  j["colormap"] = colormap;
  j["inner_radius"] = inner_radius;
  j["legend"] = {{"colour", {{"key", j["colour_key"]}, {"min", colour_range[0]}, {"max", colour_range[1]}}},
                 {"stacking", {{"key", j["stacking_key"]}, {"min", stack_range[0]}, {"max", stack_range[1]}}}};
  j["stack_order"] = stack_order;
  j["median_index"] = doc.hdr.median_index;
  j["frame_duration"] = seq.frame_duration;
  const auto tones = tone_manifest(seq, doc.hdr, doc.tones.f_base, doc.tones.f_max);
  j["sequence"] = {{"strategy", seq.strategy.name()}, {"seed", seq.strategy.seed}, {"order", seq.order}};
  j["tones"] = {{"f_base", tones.f_base},
                {"f_max", tones.f_max},
                {"d_ref", tones.d_ref},
                {"frame_duration", tones.frame_duration},
                {"frequencies", tones.frequencies}};
  return j;
}

template <typename Item>
json layer_values(const AnalysisDocument& doc, const Item& item, double frequency) {
  const auto& e = doc.ensemble;
  json inputs = json::object();
  for (std::size_t a = 0; a < e.input_dim(); ++a) inputs[e.input_specs()[a].name] = item.inputs[a];
  json j;
  j["realization"] = item.realization;
  if (!e.labels().empty()) j["label"] = e.labels()[item.realization];
  j["z"] = item.z;
  j["stack_rank"] = item.stack_rank;
  j["stack_value"] = item.stack_value;
  j["colour_value"] = item.colour_value;
  j["colour"] = item.colour.hex();
  j["inputs"] = inputs;
  j["normalized"] = item.normalized;
  j["qoi"] = item.qoi;
  j["distance"] = item.distance;
  j["outlier"] = item.outlier;
  j["frequency"] = frequency;
  return j;
}

std::vector<double> realization_frequencies(const AnalysisDocument& doc) {
  return distances_to_frequencies(doc.hdr.distances, doc.tones.d_ref, doc.tones.f_base, doc.tones.f_max);
}

}  // namespace

std::string scene_to_json(const KiviatScene& scene, const AnalysisDocument& doc, const FrameSequence& seq) {
  json j = common_scene(doc, seq, scene.stacking, scene.colour, scene.probe, scene.heights, scene.colormap,
                        scene.inner_radius, scene.colour_range, scene.stack_range, scene.stack_order);
  j["kind"] = "kiviat";
  j["axes"] = scene.axes;
  j["axis_angles"] = scene.axis_angles;
  const auto freq = realization_frequencies(doc);
  json layers = json::array();
  for (const auto& layer : scene.layers) {
    json l = layer_values(doc, layer, freq[layer.realization]);
    json verts = json::array();
    for (const auto& v : layer.vertices) verts.push_back({v[0], v[1]});
    l["vertices"] = verts;
    l["radii"] = layer.radii;
    layers.push_back(std::move(l));
  }
  j["layers"] = layers;
  return j.dump(1) + "\n";
}

std::string tree_to_json(const TreeGeometry& tree, const AnalysisDocument& doc, const FrameSequence& seq) {
  json j = common_scene(doc, seq, tree.stacking, tree.colour, tree.probe, tree.heights, tree.colormap,
                        tree.inner_radius, tree.colour_range, tree.stack_range, tree.stack_order);
  j["kind"] = "tree";
  j["axes"] = tree.axes;
  j["theta_max"] = tree.theta_max;
  const auto freq = realization_frequencies(doc);
  json segments = json::array();
  for (const auto& seg : tree.segments) {
    json s = layer_values(doc, seg, freq[seg.realization]);
    s["first"] = seg.first;
    s["second"] = seg.second;
    s["theta"] = seg.theta;
    segments.push_back(std::move(s));
  }
  j["segments"] = segments;
  return j.dump(1) + "\n";
}

}  // namespace spider
