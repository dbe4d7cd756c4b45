#include "spider/colormap.hpp"

#include "spider/error.hpp"

#include <algorithm>
#include <cmath>

namespace spider {

std::string Rgb::hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out = "#";
  for (std::uint8_t c : {r, g, b}) {
    out.push_back(kDigits[c >> 4]);
    out.push_back(kDigits[c & 0xF]);
  }
  return out;
}

Colormap::Colormap(std::string name, const std::vector<std::array<double, 3>>& control)
    : name_(std::move(name)) {
  const double segments = static_cast<double>(control.size() - 1);
  for (std::size_t k = 0; k < table_.size(); ++k) {
    const double pos = static_cast<double>(k) / 255.0 * segments;
    const auto lo = std::min(static_cast<std::size_t>(pos), control.size() - 2);
    const double w = pos - static_cast<double>(lo);
    for (int c = 0; c < 3; ++c)
      table_[k][static_cast<std::size_t>(c)] =
          (1.0 - w) * control[lo][static_cast<std::size_t>(c)] + w * control[lo + 1][static_cast<std::size_t>(c)];
  }
}

const Colormap& Colormap::named(const std::string& name) {
  // Control points sampled from the matplotlib maps at 1/8 steps.
  static const Colormap viridis("viridis", {{68, 1, 84},
                                            {71, 44, 122},
                                            {59, 81, 139},
                                            {44, 113, 142},
                                            {33, 144, 141},
                                            {39, 173, 129},
                                            {92, 200, 99},
                                            {170, 220, 50},
                                            {253, 231, 37}});
  static const Colormap plasma("plasma", {{13, 8, 135},
                                          {75, 3, 161},
                                          {126, 3, 168},
                                          {170, 35, 149},
                                          {204, 71, 120},
                                          {230, 108, 92},
                                          {248, 149, 64},
                                          {253, 195, 40},
                                          {240, 249, 33}});
  if (name == "viridis") return viridis;
  if (name == "plasma") return plasma;
  throw ValidationError("unknown colormap '" + name + "'");
}

std::vector<std::string> Colormap::names() { return {"viridis", "plasma"}; }

Rgb Colormap::at(double t) const {
  if (!std::isfinite(t)) t = 0.0;
  const double pos = std::clamp(t, 0.0, 1.0) * 255.0;
  const auto lo = std::min(static_cast<std::size_t>(pos), std::size_t{254});
  const double w = pos - static_cast<double>(lo);
  auto channel = [&](std::size_t c) {
    const double v = (1.0 - w) * table_[lo][c] + w * table_[lo + 1][c];
    return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
  };
  return {channel(0), channel(1), channel(2)};
}

Rgb Colormap::map(double value, double lo, double hi) const {
  if (!(hi > lo)) return at(0.0);
  return at((value - lo) / (hi - lo));
}

}  // namespace spider
