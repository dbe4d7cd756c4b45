#include "spider/svg.hpp"

#include "spider/numfmt.hpp"

namespace spider::svg {

std::string escape(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string Writer::num(double v) { return format_fixed(v, 2); }

std::string Writer::points(const Points& pts) {
  std::string out;
  out.reserve(pts.size() * 14);
  for (const auto& [x, y] : pts) {
    if (!out.empty()) out.push_back(' ');
    out += num(x);
    out.push_back(',');
    out += num(y);
  }
  return out;
}

Writer::Writer(double width, double height) {
  out_ = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out_ += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + num(width) +
          "\" height=\"" + num(height) + "\" viewBox=\"0 0 " + num(width) + " " + num(height) + "\">\n";
}

void Writer::comment(const std::string& text) {
  std::string safe;
  for (char c : text) {
    if (c == '-' && !safe.empty() && safe.back() == '-') safe.push_back(' ');
    safe.push_back(c);
  }
  if (!safe.empty() && safe.back() == '-') safe.push_back(' ');
  out_.append(static_cast<std::size_t>(depth_) * 2, ' ');
  out_ += "<!-- " + safe + " -->\n";
}

void Writer::element(const std::string& tag, const Attributes& base, const Attributes& attrs,
                     const std::string& content) {
  out_.append(static_cast<std::size_t>(depth_) * 2, ' ');
  out_ += "<" + tag;
  for (const auto& [k, v] : base) out_ += " " + k + "=\"" + escape(v) + "\"";
  for (const auto& [k, v] : attrs) out_ += " " + k + "=\"" + escape(v) + "\"";
  if (content.empty()) {
    out_ += "/>\n";
  } else {
    out_ += ">" + escape(content) + "</" + tag + ">\n";
  }
}

void Writer::open_group(const Attributes& attrs) {
  out_.append(static_cast<std::size_t>(depth_) * 2, ' ');
  out_ += "<g";
  for (const auto& [k, v] : attrs) out_ += " " + k + "=\"" + escape(v) + "\"";
  out_ += ">\n";
  ++depth_;
  ++open_groups_;
}

void Writer::close_group() {
  if (open_groups_ == 0) return;
  --depth_;
  --open_groups_;
  out_.append(static_cast<std::size_t>(depth_) * 2, ' ');
  out_ += "</g>\n";
}

void Writer::rect(double x, double y, double w, double h, const Attributes& attrs) {
  element("rect", {{"x", num(x)}, {"y", num(y)}, {"width", num(w)}, {"height", num(h)}}, attrs);
}

void Writer::line(double x1, double y1, double x2, double y2, const Attributes& attrs) {
  element("line", {{"x1", num(x1)}, {"y1", num(y1)}, {"x2", num(x2)}, {"y2", num(y2)}}, attrs);
}

void Writer::polyline(const Points& pts, const Attributes& attrs) {
  element("polyline", {{"points", points(pts)}, {"fill", "none"}}, attrs);
}

void Writer::polygon(const Points& pts, const Attributes& attrs) {
  element("polygon", {{"points", points(pts)}}, attrs);
}

void Writer::circle(double cx, double cy, double r, const Attributes& attrs) {
  element("circle", {{"cx", num(cx)}, {"cy", num(cy)}, {"r", num(r)}}, attrs);
}

void Writer::text(double x, double y, const std::string& content, const Attributes& attrs) {
  // Empty text would collapse to a self-closing tag; keep the element.
  element("text", {{"x", num(x)}, {"y", num(y)}}, attrs, content.empty() ? " " : content);
}

std::string Writer::finish() {
  while (open_groups_ > 0) close_group();
  out_ += "</svg>\n";
  return std::move(out_);
}

}  // namespace spider::svg
