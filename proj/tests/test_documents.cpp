#include "support.hpp"

#include "spider/documents.hpp"
#include "spider/error.hpp"
#include "spider/version.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <optional>

using namespace spider;
using nlohmann::json;

namespace {

AnalysisDocument synthetic(std::size_t p = 4) {
  AnalysisParameters params;
  params.strategy = "by_distance";
  return analyze(synthesize_ensemble(5, 40, p, 15, 1), params, "synthetic");
}

// Restores an environment variable on scope exit.
struct EnvGuard {
  std::string name;
  std::optional<std::string> saved;
  explicit EnvGuard(std::string n) : name(std::move(n)) {
    if (const char* v = std::getenv(name.c_str())) saved = v;
  }
  ~EnvGuard() {
    if (saved)
      ::setenv(name.c_str(), saved->c_str(), 1);
    else
      ::unsetenv(name.c_str());
  }
};

}  // namespace

TEST_CASE("analysis documents round-trip byte for byte") {
  const auto doc = synthetic();
  const auto text = analysis_to_json(doc);
  const auto back = analysis_from_json(text);
  CHECK(analysis_to_json(back) == text);
  CHECK(back.ensemble == doc.ensemble);
  CHECK(back.parameters == doc.parameters);
  CHECK(back.sequence == doc.sequence);
  CHECK(back.tones == doc.tones);
  CHECK(back.hdr.median_index == doc.hdr.median_index);
  CHECK(back.hdr.distances == doc.hdr.distances);
  CHECK(back.reduction.scores == doc.reduction.scores);

  const auto j = json::parse(text);
  CHECK(j["schema_version"] == kSchemaVersion);
  CHECK(j["toolkit_version"] == kToolkitVersion);
  CHECK(j["dimensions"]["N"] == 40);
  CHECK(j["dimensions"]["p"] == 4);
  CHECK(j["dimensions"]["m"] == 15);
  CHECK(j["dimensions"]["r"] == doc.reduction.dim());
  CHECK(j["source"] == "synthetic");

  test::TempDir dir;
  save_analysis(doc, dir / "analysis.json");
  CHECK(test::read_text(dir / "analysis.json") == text);
  CHECK(analysis_to_json(load_analysis(dir / "analysis.json")) == text);
  CHECK_THROWS_AS(load_analysis(dir / "missing.json"), IoError);
}

TEST_CASE("analysis documents are validated") {
  const auto j = json::parse(analysis_to_json(synthetic()));
  CHECK_THROWS_AS(analysis_from_json("{ not json"), ParseError);
  SUBCASE("schema version") {
    auto bad = j;
    bad["schema_version"] = kSchemaVersion + 1;
    CHECK_THROWS_AS(analysis_from_json(bad.dump()), ValidationError);
  }
  SUBCASE("inconsistent N") {
    auto bad = j;
    bad["hdr"]["distances"].erase(0);
    CHECK_THROWS_AS(analysis_from_json(bad.dump()), ValidationError);
  }
  SUBCASE("inconsistent r") {
    auto bad = j;
    bad["dimensions"]["r"] = 7;
    CHECK_THROWS_AS(analysis_from_json(bad.dump()), ValidationError);
  }
  SUBCASE("missing section") {
    auto bad = j;
    bad.erase("reduction");
    CHECK_THROWS_AS(analysis_from_json(bad.dump()), ValidationError);
  }
}

TEST_CASE("analyze follows its parameters") {
  AnalysisParameters params;
  params.alphas = {0.5, 0.1, 0.05};
  params.variance_target = 0.95;
  const auto doc = analyze(synthesize_ensemble(5, 40, 2, 15, 0), params);
  CHECK(doc.hdr.envelopes.size() == 3);
  CHECK(doc.reduction.cumulative_ratio() >= 0.95);
  CHECK(doc.sequence.order.size() == 40);
  CHECK(doc.tones.frequencies.size() == 40);
  params.strategy = "sideways";
  CHECK_THROWS_AS(analyze(synthesize_ensemble(5, 40, 2, 15, 0), params), ValidationError);
}

TEST_CASE("tones follow the distance mapping") {
  const auto doc = synthetic();
  const auto seq = build_sequence(doc.ensemble, doc.hdr, SequenceStrategy::by_distance());
  const auto tones = tone_manifest(seq, doc.hdr);
  const double dmax = doc.hdr.distances.maxCoeff();
  CHECK(tones.d_ref == dmax);
  for (std::size_t k = 0; k < seq.size(); ++k) {
    const double d = doc.hdr.distances[static_cast<Eigen::Index>(seq.order[k])];
    CHECK(std::abs(tones.frequencies[k] - (220.0 + 660.0 * d / dmax)) <= 1e-6);
  }
  CHECK(tones.frequencies.front() == 220.0);
  CHECK(tones.frequencies.back() == 880.0);
  const auto track = tone_track(tones);
  CHECK(track.frequencies == tones.frequencies);
}

TEST_CASE("scene JSON carries every key and layer") {
  const auto doc = synthetic();
  const auto seq = build_sequence(doc.ensemble, doc.hdr, SequenceStrategy::by_distance());
  const auto scene = build_scene(doc.ensemble, doc.hdr);
  const auto j = json::parse(scene_to_json(scene, doc, seq));
  CHECK(j["kind"] == "kiviat");
  CHECK(j["schema_version"] == kSchemaVersion);
  CHECK(j["stacking_key"] == "qoi");
  CHECK(j["colour_key"] == "hdr");
  CHECK(j["axes"].size() == 4);
  CHECK(j["axis_angles"].size() == 4);
  CHECK(j["layers"].size() == 40);
  CHECK(j["stack_order"].size() == 40);
  CHECK(j["median_index"] == doc.hdr.median_index);
  const auto keys = j["keys"].get<std::vector<std::string>>();
  CHECK(keys.size() == 6);
  CHECK(keys[0] == "qoi");
  CHECK(keys[1] == "hdr");
  CHECK(keys[2] == "input:Ks1");

  const auto& median_layer = j["layers"][doc.hdr.median_index];
  CHECK(median_layer["distance"] == 0.0);
  CHECK(median_layer["frequency"] == 220.0);
  CHECK(median_layer["vertices"].size() == 4);
  CHECK(median_layer["inputs"].size() == 4);
  const auto& last = j["layers"][39];
  CHECK(last["outlier"] == doc.hdr.is_outlier(39));
  CHECK(last["label"] == "outlier-39");

  // Frequencies in frame order agree with per-layer frequencies.
  const auto order = j["sequence"]["order"].get<std::vector<std::size_t>>();
  const auto freqs = j["tones"]["frequencies"].get<std::vector<double>>();
  REQUIRE(order.size() == freqs.size());
  for (std::size_t k = 0; k < order.size(); ++k) CHECK(j["layers"][order[k]]["frequency"] == freqs[k]);
}

TEST_CASE("tree JSON") {
  const auto doc = synthetic(2);
  const auto seq = build_sequence(doc.ensemble, doc.hdr, SequenceStrategy::by_distance());
  const auto tree = build_tree(doc.ensemble, doc.hdr, {}, 1.0);
  const auto j = json::parse(tree_to_json(tree, doc, seq));
  CHECK(j["kind"] == "tree");
  CHECK(j["theta_max"] == 1.0);
  CHECK(j["segments"].size() == 40);
  CHECK(j["segments"][doc.hdr.median_index]["theta"] == 0.0);
  CHECK_FALSE(j.contains("layers"));
}

TEST_CASE("the environment seed") {
  EnvGuard guard("SOUNDING_SPIDER_SEED");
  ::unsetenv("SOUNDING_SPIDER_SEED");
  CHECK(default_seed() == kDefaultSeed);
  ::setenv("SOUNDING_SPIDER_SEED", "1234", 1);
  CHECK(default_seed() == 1234u);
  ::setenv("SOUNDING_SPIDER_SEED", " 77 ", 1);
  CHECK(default_seed() == 77u);
  ::setenv("SOUNDING_SPIDER_SEED", "-3", 1);
  CHECK_THROWS_AS(default_seed(), ValidationError);
  ::setenv("SOUNDING_SPIDER_SEED", "12abc", 1);
  CHECK_THROWS_AS(default_seed(), ValidationError);
}
