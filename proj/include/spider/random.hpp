#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>

namespace spider {

/// Platform-stable pseudo-random source.
///
/// std::mt19937_64 has a standardized output sequence, but the standard
/// distributions do not, so every derived variate is computed here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();

  /// Uniform integer in [0, bound), rejection sampled (no modulo bias).
  std::size_t below(std::size_t bound);

  /// Standard normal via Box-Muller; caches the second variate.
  double normal();

  /// In-place Fisher-Yates shuffle.
  template <typename T>
  void shuffle(std::span<T> values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      std::size_t j = below(i);
      std::swap(values[i - 1], values[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace spider
