#pragma once

#include <string>
#include <utility>
#include <vector>

namespace spider::svg {

using Attributes = std::vector<std::pair<std::string, std::string>>;
using Points = std::vector<std::pair<double, double>>;

/// Escapes &, <, >, " and ' for use in text or attribute values.
std::string escape(const std::string& text);

/// Streaming SVG 1.1 writer. Coordinates are written with two decimals so
/// that identical inputs give byte-identical documents.
class Writer {
 public:
  Writer(double width, double height);

  /// XML comment; "--" sequences are broken up to keep the comment valid.
  void comment(const std::string& text);
  void open_group(const Attributes& attrs = {});
  void close_group();

  void rect(double x, double y, double w, double h, const Attributes& attrs = {});
  void line(double x1, double y1, double x2, double y2, const Attributes& attrs = {});
  void polyline(const Points& pts, const Attributes& attrs = {});
  void polygon(const Points& pts, const Attributes& attrs = {});
  void circle(double cx, double cy, double r, const Attributes& attrs = {});
  void text(double x, double y, const std::string& content, const Attributes& attrs = {});

  /// Closes open groups and the root element.
  std::string finish();

  static std::string num(double v);
  static std::string points(const Points& pts);

 private:
  void element(const std::string& tag, const Attributes& base, const Attributes& attrs,
               const std::string& content = {});

  std::string out_;
  int depth_ = 1;
  int open_groups_ = 0;
};

}  // namespace spider::svg
