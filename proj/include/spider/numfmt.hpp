#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace spider {

/// Shortest decimal text that parses back to exactly `value`.
std::string format_exact(double value);

/// Fixed-point text with `decimals` digits after the point ("-0.00" is
/// normalized to "0.00").
std::string format_fixed(double value, int decimals);

/// Strict decimal parse: the whole (trimmed) token must be consumed.
std::optional<double> parse_double(std::string_view text);

std::string_view trim(std::string_view text);

}  // namespace spider
