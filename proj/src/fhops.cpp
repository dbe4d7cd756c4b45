#include "spider/fhops.hpp"

#include "spider/error.hpp"
#include "spider/random.hpp"

#include <algorithm>
#include <numeric>
#include <span>

namespace spider {

std::string SequenceStrategy::name() const {
  switch (kind) {
    case Kind::Shuffle: return "shuffle";
    case Kind::ByDistance: return "by_distance";
    case Kind::ByIndex: return "by_index";
  }
  return "shuffle";
}

SequenceStrategy parse_strategy(const std::string& name, std::uint64_t seed) {
  if (name == "shuffle") return SequenceStrategy::shuffle(seed);
  if (name == "by_distance") return SequenceStrategy::by_distance();
  if (name == "by_index") return SequenceStrategy::by_index();
  throw ValidationError("unknown strategy '" + name + "' (shuffle, by_distance, by_index)");
}

FrameSequence build_sequence(const Ensemble& e, const HdrSummary& h, SequenceStrategy strategy,
                             double frame_duration) {
  const auto n = e.size();
  if (static_cast<std::size_t>(h.distances.size()) != n ||
      static_cast<std::size_t>(h.sample_densities.size()) != n)
    throw ValidationError("HDR summary was not computed on this ensemble");
  if (!(frame_duration > 0.0)) throw ValidationError("frame_duration must be positive");

  FrameSequence seq;
  seq.frame_duration = frame_duration;
  seq.strategy = strategy;
  seq.order.resize(n);
  std::iota(seq.order.begin(), seq.order.end(), std::size_t{0});

  switch (strategy.kind) {
    case SequenceStrategy::Kind::ByIndex:
      break;
    case SequenceStrategy::Kind::ByDistance:
      std::stable_sort(seq.order.begin(), seq.order.end(), [&](std::size_t a, std::size_t b) {
        return h.distances[static_cast<Eigen::Index>(a)] < h.distances[static_cast<Eigen::Index>(b)];
      });
      break;
    case SequenceStrategy::Kind::Shuffle: {
      Rng rng(strategy.seed);
      rng.shuffle(std::span<std::size_t>(seq.order));
      break;
    }
  }

  seq.frames.reserve(n);
  for (std::size_t idx : seq.order) {
    const auto i = static_cast<Eigen::Index>(idx);
    FramePayload f;
    f.realization = idx;
    f.curve = e.outputs().row(i).transpose();
    f.distance = h.distances[i];
    f.density = h.sample_densities[i];
    f.outlier = h.is_outlier(idx);
    f.band = classify_density(h, f.density);
    seq.frames.push_back(std::move(f));
  }
  return seq;
}

const FramePayload& frame_payload(const FrameSequence& seq, std::size_t k) {
  if (k >= seq.frames.size())
    throw std::out_of_range("frame " + std::to_string(k) + " out of range (" +
                            std::to_string(seq.frames.size()) + " frames)");
  return seq.frames[k];
}

}  // namespace spider
