#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace spider {

/// 8-bit sRGB triple.
struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  bool operator==(const Rgb&) const = default;
  /// "#rrggbb".
  std::string hex() const;
};

/// 256-entry lookup table built from a few control points.
class Colormap {
 public:
  /// "viridis" or "plasma"; throws ValidationError otherwise.
  static const Colormap& named(const std::string& name);
  static std::vector<std::string> names();

  const std::string& name() const { return name_; }

  /// Colour at t in [0, 1] (clamped), interpolating between table entries.
  Rgb at(double t) const;

  /// Maps value from [lo, hi] onto the table; a degenerate range maps to 0.
  Rgb map(double value, double lo, double hi) const;

 private:
  Colormap(std::string name, const std::vector<std::array<double, 3>>& control);

  std::string name_;
  std::array<std::array<double, 3>, 256> table_{};
};

}  // namespace spider
