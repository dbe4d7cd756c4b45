#include "support.hpp"

#include "spider/error.hpp"
#include "spider/fhops.hpp"

#include <doctest.h>

#include <algorithm>
#include <numeric>

using namespace spider;

namespace {

struct Fixture {
  Ensemble e;
  ReducedSpace rs;
  HdrSummary h;
  explicit Fixture(std::size_t n = 40)
      : e(synthesize_ensemble(5, n, 0, 20, 1)), rs(fit_pca(e, 0.8)), h(fit_hdr(rs, {}, &e.outputs())) {}
};

bool is_permutation_of_all(const std::vector<std::size_t>& order, std::size_t n) {
  auto sorted = order;
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::size_t> all(n);
  std::iota(all.begin(), all.end(), std::size_t{0});
  return sorted == all;
}

}  // namespace

TEST_CASE("every strategy visits each realization once") {
  Fixture f;
  for (const auto& s : {SequenceStrategy::shuffle(0), SequenceStrategy::by_distance(), SequenceStrategy::by_index()}) {
    const auto seq = build_sequence(f.e, f.h, s);
    CHECK(seq.size() == 40);
    CHECK(is_permutation_of_all(seq.order, 40));
    CHECK(seq.frame_duration == 0.25);
    for (std::size_t k = 0; k < seq.size(); ++k) CHECK(seq.frames[k].realization == seq.order[k]);
  }
}

TEST_CASE("by_index keeps storage order, by_distance sorts stably") {
  Fixture f;
  const auto idx = build_sequence(f.e, f.h, SequenceStrategy::by_index());
  for (std::size_t k = 0; k < 40; ++k) CHECK(idx.order[k] == k);
  const auto dist = build_sequence(f.e, f.h, SequenceStrategy::by_distance());
  CHECK(dist.order.front() == f.h.median_index);
  for (std::size_t k = 1; k < 40; ++k) {
    CHECK(dist.frames[k - 1].distance <= dist.frames[k].distance);
    if (dist.frames[k - 1].distance == dist.frames[k].distance) CHECK(dist.order[k - 1] < dist.order[k]);
  }
}

TEST_CASE("shuffle depends only on the seed") {
  Fixture f;
  const auto a = build_sequence(f.e, f.h, SequenceStrategy::shuffle(3));
  const auto b = build_sequence(f.e, f.h, SequenceStrategy::shuffle(3));
  const auto c = build_sequence(f.e, f.h, SequenceStrategy::shuffle(4));
  CHECK(a.order == b.order);
  CHECK(a.order != c.order);
}

TEST_CASE("frame payloads carry HDR annotations") {
  // The 1% plug-in threshold can only flag anything once N > 100.
  Fixture f(150);
  const auto seq = build_sequence(f.e, f.h, SequenceStrategy::by_index());
  const auto& last = frame_payload(seq, 149);
  CHECK(last.outlier);
  CHECK(last.band.label() == "outside");
  CHECK(last.curve == f.e.outputs().row(149).transpose());
  const auto& median = frame_payload(seq, f.h.median_index);
  CHECK(median.distance == 0.0);
  CHECK(median.band.label() == "inside_50");
  CHECK(median.density == f.h.sample_densities[static_cast<Eigen::Index>(f.h.median_index)]);
  CHECK_THROWS_AS(frame_payload(seq, 150), std::out_of_range);
}

TEST_CASE("strategy names and validation") {
  CHECK(parse_strategy("by_distance", 0).kind == SequenceStrategy::Kind::ByDistance);
  CHECK(parse_strategy("shuffle", 9).seed == 9);
  CHECK(SequenceStrategy::by_index().name() == "by_index");
  CHECK_THROWS_AS(parse_strategy("random", 0), ValidationError);
  Fixture f;
  CHECK_THROWS_AS(build_sequence(f.e, f.h, SequenceStrategy::by_index(), 0.0), ValidationError);
  const auto other = synthesize_ensemble(5, 30, 0, 20, 0);
  CHECK_THROWS_AS(build_sequence(other, f.h, SequenceStrategy::by_index()), ValidationError);
}
