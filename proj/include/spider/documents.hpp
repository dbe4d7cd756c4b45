#pragma once

#include "spider/dataset.hpp"
#include "spider/density.hpp"
#include "spider/fhops.hpp"
#include "spider/kiviat.hpp"
#include "spider/reduction.hpp"
#include "spider/sonify.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace spider {

/// Default shuffle seed; SOUNDING_SPIDER_SEED overrides it.
inline constexpr std::uint64_t kDefaultSeed = 0;
std::uint64_t default_seed();

struct AnalysisParameters {
  double variance_target = 0.8;
  std::vector<double> alphas{0.5, 0.1};
  double outlier_alpha = 0.01;
  std::string reference = "median";
  std::string strategy = "shuffle";
  std::uint64_t seed = kDefaultSeed;
  double frame_duration = 0.25;
  double f_base = kDefaultBaseFrequency;
  double f_max = kDefaultMaxFrequency;

  bool operator==(const AnalysisParameters&) const = default;
};

struct SequenceManifest {
  std::string strategy;
  std::uint64_t seed = 0;
  double frame_duration = 0.25;
  std::vector<std::size_t> order;

  bool operator==(const SequenceManifest&) const = default;
};

/// Frequencies listed in frame order.
struct ToneManifest {
  double f_base = kDefaultBaseFrequency;
  double f_max = kDefaultMaxFrequency;
  double d_ref = 0.0;
  double frame_duration = 0.25;
  double sample_rate = 44100.0;
  std::vector<double> frequencies;

  bool operator==(const ToneManifest&) const = default;
};

SequenceManifest sequence_manifest(const FrameSequence& seq);
/// Tones for `seq` against the dataset's maximal distance.
ToneManifest tone_manifest(const FrameSequence& seq, const HdrSummary& h, double f_base = kDefaultBaseFrequency,
                           double f_max = kDefaultMaxFrequency);
ToneTrack tone_track(const ToneManifest& manifest);

/// Output of the hdr stage, input of the fhops and kiviat stages.
struct AnalysisDocument {
  int schema_version = 0;
  std::string toolkit_version;
  std::string source;
  Ensemble ensemble;
  ReducedSpace reduction;
  HdrSummary hdr;
  AnalysisParameters parameters;
  SequenceManifest sequence;
  ToneManifest tones;
};

/// Runs reduction, HDR statistics and the default frame sequence.
AnalysisDocument analyze(Ensemble ensemble, const AnalysisParameters& params, std::string source = {});

std::string analysis_to_json(const AnalysisDocument& doc);
/// Throws ParseError on malformed JSON, ValidationError on a wrong schema
/// version or sections that disagree on N, p, m or r.
AnalysisDocument analysis_from_json(const std::string& text);
AnalysisDocument load_analysis(const std::filesystem::path& path);
void save_analysis(const AnalysisDocument& doc, const std::filesystem::path& path);

/// Scene documents for the viewer. Every layer carries the values of each
/// available key so stacking and colouring can be redone client-side.
std::string scene_to_json(const KiviatScene& scene, const AnalysisDocument& doc, const FrameSequence& seq);
std::string tree_to_json(const TreeGeometry& tree, const AnalysisDocument& doc, const FrameSequence& seq);

}  // namespace spider
