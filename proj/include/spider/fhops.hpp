#pragma once

#include "spider/dataset.hpp"
#include "spider/density.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace spider {

/// Frame ordering for functional hypothetical outcome plots.
struct SequenceStrategy {
  enum class Kind { Shuffle, ByDistance, ByIndex };
  Kind kind = Kind::Shuffle;
  std::uint64_t seed = 0;

  static SequenceStrategy shuffle(std::uint64_t seed) { return {Kind::Shuffle, seed}; }
  static SequenceStrategy by_distance() { return {Kind::ByDistance, 0}; }
  static SequenceStrategy by_index() { return {Kind::ByIndex, 0}; }

  /// "shuffle", "by_distance", "by_index".
  std::string name() const;
};

SequenceStrategy parse_strategy(const std::string& name, std::uint64_t seed);

struct FramePayload {
  std::size_t realization = 0;
  Eigen::VectorXd curve;
  double distance = 0.0;
  double density = 0.0;
  bool outlier = false;
  BandMembership band;
};

struct FrameSequence {
  std::vector<std::size_t> order;
  std::vector<FramePayload> frames;  // frames[k] describes order[k]
  double frame_duration = 0.25;
  SequenceStrategy strategy;

  std::size_t size() const { return order.size(); }
};

/// Orders every realization once and attaches its HDR annotations.
FrameSequence build_sequence(const Ensemble& e, const HdrSummary& h, SequenceStrategy strategy,
                             double frame_duration = 0.25);

/// Throws std::out_of_range for k >= N.
const FramePayload& frame_payload(const FrameSequence& seq, std::size_t k);

}  // namespace spider
