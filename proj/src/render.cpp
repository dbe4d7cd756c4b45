#include "spider/render.hpp"

#include "spider/colormap.hpp"
#include "spider/error.hpp"
#include "spider/numfmt.hpp"
#include "spider/svg.hpp"
#include "spider/version.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <numeric>
#include <thread>

namespace spider {

void FigureSpec::validate() const {
  if (!(width > 0.0) || !(height > 0.0)) throw ValidationError("figure dimensions must be positive");
  if (!(width - margins.left - margins.right > 0.0) || !(height - margins.top - margins.bottom > 0.0))
    throw ValidationError("figure margins leave no plot area");
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw IoError("cannot write " + path.string());
}

namespace {

constexpr const char* kOutlierPalette[] = {"#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2"};
constexpr const char* kCurveColour = "#5fb7c9";
constexpr const char* kFont = "sans-serif";

std::string metadata(const std::string& figure, const std::string& params) {
  return std::string(kToolkitName) + " " + kToolkitVersion + "; figure=" + figure + "; " + params;
}

std::string join(const std::vector<double>& values) {
  std::string out;
  for (double v : values) out += (out.empty() ? "" : ",") + format_exact(v);
  return out;
}

// Linear data-to-pixel mapping over the plot area of a figure.
struct Frame {
  double x_lo, x_hi, y_lo, y_hi;
  double left, right, top, bottom;

  Frame(const FigureSpec& spec, double xl, double xh, double yl, double yh)
      : x_lo(xl), x_hi(xh), y_lo(yl), y_hi(yh), left(spec.margins.left),
        right(spec.width - spec.margins.right), top(spec.margins.top),
        bottom(spec.height - spec.margins.bottom) {
    if (!(x_hi > x_lo)) {
      x_lo -= 0.5;
      x_hi += 0.5;
    }
    if (!(y_hi > y_lo)) {
      y_lo -= 0.5;
      y_hi += 0.5;
    }
  }

  double px(double x) const { return left + (x - x_lo) / (x_hi - x_lo) * (right - left); }
  double py(double y) const { return bottom - (y - y_lo) / (y_hi - y_lo) * (bottom - top); }

  svg::Points curve(const Eigen::VectorXd& xs, const Eigen::VectorXd& ys) const {
    svg::Points pts;
    pts.reserve(static_cast<std::size_t>(xs.size()));
    for (Eigen::Index k = 0; k < xs.size(); ++k) pts.emplace_back(px(xs[k]), py(ys[k]));
    return pts;
  }
};

std::string tick_label(double v, double span) {
  const int decimals = span >= 100.0 ? 0 : span >= 10.0 ? 1 : span >= 1.0 ? 2 : 3;
  return format_fixed(v, decimals);
}

void draw_axes(svg::Writer& w, const Frame& f, const FigureSpec& spec) {
  w.open_group({{"class", "axes"}, {"stroke", "#333333"}, {"font-family", kFont}, {"font-size", "11"}});
  w.line(f.left, f.bottom, f.right, f.bottom, {{"class", "x-axis"}});
  w.line(f.left, f.top, f.left, f.bottom, {{"class", "y-axis"}});
  constexpr int kTicks = 5;
  for (int t = 0; t <= kTicks; ++t) {
    const double xv = f.x_lo + (f.x_hi - f.x_lo) * t / kTicks;
    const double yv = f.y_lo + (f.y_hi - f.y_lo) * t / kTicks;
    w.line(f.px(xv), f.bottom, f.px(xv), f.bottom + 5);
    w.text(f.px(xv), f.bottom + 18, tick_label(xv, f.x_hi - f.x_lo),
           {{"text-anchor", "middle"}, {"stroke", "none"}, {"fill", "#333333"}});
    w.line(f.left - 5, f.py(yv), f.left, f.py(yv));
    w.text(f.left - 8, f.py(yv) + 4, tick_label(yv, f.y_hi - f.y_lo),
           {{"text-anchor", "end"}, {"stroke", "none"}, {"fill", "#333333"}});
  }
  w.text((f.left + f.right) / 2, spec.height - 15, spec.x_label,
         {{"class", "x-label"}, {"text-anchor", "middle"}, {"stroke", "none"}, {"fill", "#333333"}});
  w.text(18, (f.top + f.bottom) / 2, spec.y_label,
         {{"class", "y-label"},
          {"text-anchor", "middle"},
          {"stroke", "none"},
          {"fill", "#333333"},
          {"transform", "rotate(-90 18 " + svg::Writer::num((f.top + f.bottom) / 2) + ")"}});
  w.close_group();
  if (!spec.title.empty())
    w.text(spec.width / 2, spec.margins.top / 2 + 6, spec.title,
           {{"class", "title"}, {"text-anchor", "middle"}, {"font-family", kFont}, {"font-size", "15"}});
}

// Vertical extent shared by the boxplot and every f-HOPs frame.
std::pair<double, double> value_range(const Ensemble& e, const HdrSummary& h) {
  double lo = e.outputs().minCoeff();
  double hi = e.outputs().maxCoeff();
  for (const auto& env : h.envelopes) {
    lo = std::min(lo, env.lower.minCoeff());
    hi = std::max(hi, env.upper.maxCoeff());
  }
  lo = std::min(lo, h.median_curve.minCoeff());
  hi = std::max(hi, h.median_curve.maxCoeff());
  const double pad = 0.05 * (hi - lo);
  return {lo - pad, hi + pad};
}

Frame curve_frame(const Ensemble& e, const HdrSummary& h, const FigureSpec& spec) {
  const auto [lo, hi] = value_range(e, h);
  return Frame(spec, e.coordinate().minCoeff(), e.coordinate().maxCoeff(), lo, hi);
}

// Envelope bands widest first so the narrower ones stay visible.
std::vector<const Envelope*> bands_widest_first(const HdrSummary& h) {
  std::vector<const Envelope*> out;
  for (const auto& env : h.envelopes) out.push_back(&env);
  std::stable_sort(out.begin(), out.end(), [](const Envelope* a, const Envelope* b) { return a->alpha < b->alpha; });
  return out;
}

// Grey shades darken towards the centre.
std::string band_fill(std::size_t b, std::size_t count) {
  const int shade = 215 - static_cast<int>(45 * (b + 1) / count);
  char fill[8];
  std::snprintf(fill, sizeof fill, "#%02x%02x%02x", shade, shade, shade);
  return fill;
}

void draw_bands(svg::Writer& w, const Frame& f, const Ensemble& e, const HdrSummary& h) {
  const auto bands = bands_widest_first(h);
  w.open_group({{"class", "bands"}});
  for (std::size_t b = 0; b < bands.size(); ++b) {
    const auto& env = *bands[b];
    svg::Points pts = f.curve(e.coordinate(), env.upper);
    for (Eigen::Index k = e.coordinate().size() - 1; k >= 0; --k)
      pts.emplace_back(f.px(e.coordinate()[k]), f.py(env.lower[k]));
    const auto label = BandMembership{env.alpha}.label();
    w.polygon(pts, {{"class", "band " + label},
                    {"data-alpha", format_exact(env.alpha)},
                    {"fill", band_fill(b, bands.size())},
                    {"fill-opacity", "0.8"},
                    {"stroke", "none"}});
  }
  w.close_group();
}

void draw_median(svg::Writer& w, const Frame& f, const Ensemble& e, const HdrSummary& h, double width) {
  w.polyline(f.curve(e.coordinate(), h.median_curve),
             {{"class", "median"}, {"stroke", "#000000"}, {"stroke-width", svg::Writer::num(width)}});
}

}  // namespace

// ---------------------------------------------------------------------------

std::string render_hdr_boxplot(const Ensemble& e, const HdrSummary& h, const FigureSpec& spec) {
  spec.validate();
  if (h.envelopes.empty()) throw ValidationError("HDR boxplot needs at least one alpha level");
  const auto f = curve_frame(e, h, spec);
  svg::Writer w(spec.width, spec.height);
  w.comment(metadata("hdr_boxplot", "N=" + std::to_string(e.size()) + " m=" + std::to_string(e.output_dim()) +
                                        " alphas=" + join(h.alphas) + " outlier_alpha=" + format_exact(h.outlier_alpha) +
                                        " reference=" + h.reference));
  w.rect(0, 0, spec.width, spec.height, {{"class", "background"}, {"fill", "#ffffff"}});
  draw_bands(w, f, e, h);

  w.open_group({{"class", "curves"}, {"stroke", kCurveColour}, {"stroke-width", "0.8"}, {"stroke-opacity", "0.7"}});
  for (std::size_t i = 0; i < e.size(); ++i)
    w.polyline(f.curve(e.coordinate(), e.outputs().row(static_cast<Eigen::Index>(i)).transpose()),
               {{"class", "curve"}, {"data-index", std::to_string(i)}});
  w.close_group();

  draw_median(w, f, e, h, 3.0);

  if (!h.outlier_indices.empty()) {
    w.open_group({{"class", "outliers"}, {"stroke-width", "2"}, {"stroke-dasharray", "6,4"}});
    for (std::size_t o = 0; o < h.outlier_indices.size(); ++o) {
      const auto i = h.outlier_indices[o];
      w.polyline(f.curve(e.coordinate(), e.outputs().row(static_cast<Eigen::Index>(i)).transpose()),
                 {{"class", "outlier"},
                  {"data-index", std::to_string(i)},
                  {"stroke", kOutlierPalette[o % std::size(kOutlierPalette)]}});
    }
    w.close_group();
  }

  draw_axes(w, f, spec);

  // Legend.
  w.open_group({{"class", "legend"}, {"font-family", kFont}, {"font-size", "11"}});
  double y = f.top + 12;
  const double x = f.right - 150;
  w.line(x, y - 4, x + 24, y - 4, {{"stroke", "#000000"}, {"stroke-width", "3"}});
  w.text(x + 30, y, "median");
  const auto bands = bands_widest_first(h);
  for (std::size_t b = 0; b < bands.size(); ++b) {
    y += 16;
    w.rect(x, y - 10, 24, 10, {{"fill", band_fill(b, bands.size())}, {"fill-opacity", "0.8"}});
    w.text(x + 30, y, BandMembership{bands[b]->alpha}.text().substr(7) + " HDR");
  }
  if (!h.outlier_indices.empty()) {
    y += 16;
    w.line(x, y - 4, x + 24, y - 4, {{"stroke", kOutlierPalette[0]}, {"stroke-width", "2"}, {"stroke-dasharray", "6,4"}});
    w.text(x + 30, y, "outliers (" + std::to_string(h.outlier_indices.size()) + ")");
  }
  w.close_group();
  return w.finish();
}

std::string frame_filename(std::size_t k) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "frame_%04zu.svg", k);
  return buf;
}

std::string render_fhops_frame(const Ensemble& e, const FrameSequence& seq, std::size_t k,
                               const HdrSummary& h, const FigureSpec& spec) {
  spec.validate();
  const auto& frame = frame_payload(seq, k);
  const auto f = curve_frame(e, h, spec);
  svg::Writer w(spec.width, spec.height);
  w.comment(metadata("fhops_frame", "frame=" + std::to_string(k) + " of=" + std::to_string(seq.size()) +
                                        " strategy=" + seq.strategy.name() +
                                        " frame_duration=" + format_exact(seq.frame_duration)));
  w.rect(0, 0, spec.width, spec.height, {{"class", "background"}, {"fill", "#ffffff"}});
  draw_bands(w, f, e, h);
  draw_median(w, f, e, h, 1.5);

  svg::Attributes style = frame.outlier
                              ? svg::Attributes{{"class", "frame-curve outlier"},
                                                {"stroke", kOutlierPalette[0]},
                                                {"stroke-width", "2.5"},
                                                {"stroke-dasharray", "6,4"}}
                              : svg::Attributes{{"class", "frame-curve"}, {"stroke", "#1f77b4"}, {"stroke-width", "2.5"}};
  style.emplace_back("data-index", std::to_string(frame.realization));
  w.polyline(f.curve(e.coordinate(), frame.curve), style);

  draw_axes(w, f, spec);

  std::string who = "realization " + std::to_string(frame.realization);
  if (!e.labels().empty()) who += " (" + e.labels()[frame.realization] + ")";
  w.text(f.left + 10, f.top + 16,
         "frame " + std::to_string(k + 1) + "/" + std::to_string(seq.size()) + "  " + who,
         {{"class", "annotation"}, {"font-family", kFont}, {"font-size", "12"}});
  w.text(f.left + 10, f.top + 32,
         "d = " + format_fixed(frame.distance, 2) + "  " + frame.band.text() + (frame.outlier ? "  outlier" : ""),
         {{"class", "annotation distance"},
          {"data-band", frame.band.label()},
          {"font-family", kFont},
          {"font-size", "12"}});
  return w.finish();
}

std::vector<std::filesystem::path> write_fhops_frames(const std::filesystem::path& dir, const Ensemble& e,
                                                      const FrameSequence& seq, const HdrSummary& h,
                                                      const FigureSpec& spec) {
  spec.validate();
  const std::size_t n = seq.size();
  std::vector<std::string> pages(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < n; k = next++) pages[k] = render_fhops_frame(e, seq, k, h, spec);
  };
  const std::size_t workers = std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, 8);
  {
    std::vector<std::jthread> pool;
    for (std::size_t t = 1; t < std::min(workers, n); ++t) pool.emplace_back(worker);
    worker();
  }
  std::vector<std::filesystem::path> paths;
  for (std::size_t k = 0; k < n; ++k) {
    auto path = dir / frame_filename(k);
    write_file(path, pages[k]);
    paths.push_back(std::move(path));
  }
  return paths;
}

// ---------------------------------------------------------------------------
// Pointwise densities

double silverman_bandwidth(const Eigen::VectorXd& values) {
  const auto n = values.size();
  if (n < 2) throw ValidationError("bandwidth needs at least 2 values");
  const double mean = values.mean();
  const double sigma = std::sqrt((values.array() - mean).square().sum() / static_cast<double>(n - 1));
  const double scale = std::max(1.0, values.cwiseAbs().maxCoeff());
  if (!(sigma > 1e-12 * scale)) throw DegenerateError("zero-variance values have no bandwidth");
  return sigma * std::pow(4.0 / (3.0 * static_cast<double>(n)), 0.2);
}

Eigen::VectorXd kde1d(const Eigen::VectorXd& values, double bandwidth, const Eigen::VectorXd& grid) {
  const double norm = 1.0 / (static_cast<double>(values.size()) * bandwidth * std::sqrt(2.0 * std::numbers::pi));
  Eigen::VectorXd out(grid.size());
  for (Eigen::Index g = 0; g < grid.size(); ++g) {
    double sum = 0.0;
    for (double v : values) {
      const double z = (grid[g] - v) / bandwidth;
      sum += std::exp(-0.5 * z * z);
    }
    out[g] = norm * sum;
  }
  return out;
}

namespace {

double median_of(Eigen::VectorXd v) {
  std::sort(v.begin(), v.end());
  const auto n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

FunctionalPdf functional_pdf(const Ensemble& e, std::size_t levels) {
  if (levels < 2) throw ValidationError("functional PDF needs at least 2 levels");
  const auto m = static_cast<Eigen::Index>(e.output_dim());
  FunctionalPdf pdf;
  pdf.bandwidths = Eigen::VectorXd::Zero(m);
  pdf.pointwise_median.resize(m);
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (Eigen::Index k = 0; k < m; ++k) {
    const Eigen::VectorXd col = e.outputs().col(k);
    pdf.pointwise_median[k] = median_of(col);
    double pad = 0.0;
    try {
      pdf.bandwidths[k] = silverman_bandwidth(col);
      pad = 4.0 * pdf.bandwidths[k];
    } catch (const DegenerateError&) {
      pdf.degenerate.push_back(static_cast<std::size_t>(k));
    }
    lo = std::min(lo, col.minCoeff() - pad);
    hi = std::max(hi, col.maxCoeff() + pad);
  }
  if (!(hi > lo)) {
    lo -= 0.5;
    hi += 0.5;
  }
  pdf.levels = Eigen::VectorXd::LinSpaced(static_cast<Eigen::Index>(levels), lo, hi);
  pdf.density = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(levels), m);
  for (Eigen::Index k = 0; k < m; ++k)
    if (pdf.bandwidths[k] > 0.0) pdf.density.col(k) = kde1d(e.outputs().col(k), pdf.bandwidths[k], pdf.levels);
  return pdf;
}

std::string render_functional_pdf(const Ensemble& e, const FigureSpec& spec, std::optional<std::size_t> probe) {
  spec.validate();
  const auto& cmap = Colormap::named(spec.colormap);

  if (probe) {
    if (*probe >= e.output_dim())
      throw ValidationError("probe index " + std::to_string(*probe) + " out of range (m = " +
                            std::to_string(e.output_dim()) + ")");
    const Eigen::VectorXd col = e.outputs().col(static_cast<Eigen::Index>(*probe));
    const double coord = e.coordinate()[static_cast<Eigen::Index>(*probe)];
    svg::Writer w(spec.width, spec.height);
    w.comment(metadata("pointwise_pdf", "N=" + std::to_string(e.size()) + " probe=" + std::to_string(*probe) +
                                            " coordinate=" + format_exact(coord)));
    w.rect(0, 0, spec.width, spec.height, {{"class", "background"}, {"fill", "#ffffff"}});
    FigureSpec local = spec;
    local.x_label = spec.y_label;
    local.y_label = "density";
    if (local.title.empty()) local.title = "PDF at coordinate " + format_exact(coord);

    double h = 0.0;
    try {
      h = silverman_bandwidth(col);
    } catch (const DegenerateError&) {
      const Frame f(local, col[0] - 0.5, col[0] + 0.5, 0.0, 1.0);
      w.line(f.px(col[0]), f.bottom, f.px(col[0]), f.top,
             {{"class", "degenerate"}, {"stroke", "#d62728"}, {"stroke-width", "2"}, {"data-value", format_exact(col[0])}});
      draw_axes(w, f, local);
      return w.finish();
    }
    const Eigen::VectorXd grid =
        Eigen::VectorXd::LinSpaced(256, col.minCoeff() - 4.0 * h, col.maxCoeff() + 4.0 * h);
    const Eigen::VectorXd dens = kde1d(col, h, grid);
    const Frame f(local, grid[0], grid[grid.size() - 1], 0.0, 1.05 * dens.maxCoeff());
    w.polyline(f.curve(grid, dens), {{"class", "pdf"}, {"stroke", "#1f77b4"}, {"stroke-width", "2"}});
    w.open_group({{"class", "rug"}, {"stroke", "#555555"}, {"stroke-width", "0.6"}});
    for (double v : col) w.line(f.px(v), f.bottom, f.px(v), f.bottom - 6);
    w.close_group();
    draw_axes(w, f, local);
    return w.finish();
  }

  const auto pdf = functional_pdf(e);
  const auto& x = e.coordinate();
  const auto m = x.size();
  const Frame f(spec, x.minCoeff(), x.maxCoeff(), pdf.levels[0], pdf.levels[pdf.levels.size() - 1]);
  const double peak = pdf.density.maxCoeff();

  svg::Writer w(spec.width, spec.height);
  w.comment(metadata("functional_pdf", "N=" + std::to_string(e.size()) + " m=" + std::to_string(e.output_dim()) +
                                           " levels=" + std::to_string(pdf.levels.size()) + " colormap=" + cmap.name()));
  w.rect(0, 0, spec.width, spec.height, {{"class", "background"}, {"fill", "#ffffff"}});
  w.rect(f.left, f.top, f.right - f.left, f.bottom - f.top, {{"class", "heatmap-base"}, {"fill", cmap.at(0.0).hex()}});

  // Column k spans halfway to its neighbours; row g likewise between levels.
  auto edge_x = [&](Eigen::Index k, bool right) {
    if (m == 1) return right ? f.right : f.left;
    if (right) return k + 1 < m ? f.px(0.5 * (x[k] + x[k + 1])) : f.right;
    return k > 0 ? f.px(0.5 * (x[k - 1] + x[k])) : f.left;
  };
  const double cell_h = (f.bottom - f.top) / static_cast<double>(pdf.levels.size() - 1);
  w.open_group({{"class", "heatmap"}, {"stroke", "none"}});
  for (Eigen::Index k = 0; k < m; ++k) {
    const double x0 = edge_x(k, false), x1 = edge_x(k, true);
    for (Eigen::Index g = 0; g < pdf.levels.size(); ++g) {
      const double t = peak > 0.0 ? pdf.density(g, k) / peak : 0.0;
      if (t < 0.5 / 255.0) continue;
      const double yc = f.py(pdf.levels[g]);
      w.rect(x0, yc - cell_h / 2, x1 - x0, cell_h, {{"fill", cmap.at(t).hex()}});
    }
  }
  w.close_group();

  if (!pdf.degenerate.empty()) {
    w.open_group({{"class", "degenerate-columns"}, {"stroke", "#d62728"}, {"stroke-width", "2"}});
    for (std::size_t k : pdf.degenerate) {
      const auto kk = static_cast<Eigen::Index>(k);
      const double v = e.outputs()(0, kk);
      w.line(edge_x(kk, false), f.py(v), edge_x(kk, true), f.py(v),
             {{"class", "degenerate"}, {"data-index", std::to_string(k)}});
    }
    w.close_group();
  }

  w.polyline(f.curve(x, pdf.pointwise_median),
             {{"class", "median"}, {"stroke", "#ffffff"}, {"stroke-width", "2"}});
  draw_axes(w, f, spec);
  w.text(f.right - 5, f.top - 8, "density 0 .. " + format_fixed(peak, 4),
         {{"class", "legend"}, {"data-min", "0"}, {"data-max", format_exact(peak)}, {"text-anchor", "end"},
          {"font-family", kFont}, {"font-size", "11"}});
  return w.finish();
}

// ---------------------------------------------------------------------------
// Parallel coordinates

std::vector<bool> highlight_mask(const Eigen::VectorXd& qoi, double highlight_quantile) {
  if (!(highlight_quantile >= 0.0 && highlight_quantile <= 1.0))
    throw ValidationError("highlight quantile must lie in [0, 1]");
  const auto n = static_cast<std::size_t>(qoi.size());
  std::vector<bool> mask(n, false);
  if (n == 0) return mask;
  const auto count = static_cast<std::size_t>(
      std::clamp(std::ceil((1.0 - highlight_quantile) * static_cast<double>(n) - 1e-9), 0.0, static_cast<double>(n)));
  if (count == 0) return mask;
  std::vector<double> sorted(qoi.begin(), qoi.end());
  std::sort(sorted.begin(), sorted.end());
  const double cut = sorted[n - count];
  for (std::size_t i = 0; i < n; ++i) mask[i] = qoi[static_cast<Eigen::Index>(i)] >= cut;
  return mask;
}

std::string render_parallel_coordinates(const Ensemble& e, const QoiProbe& probe, double highlight_quantile,
                                        const FigureSpec& spec) {
  spec.validate();
  const auto p = e.input_dim();
  if (p < 1) throw ValidationError("parallel coordinates need at least one input");
  const Eigen::VectorXd qoi = probe_values(e, probe);
  const auto mask = highlight_mask(qoi, highlight_quantile);

  const auto axes = p + 1;
  Eigen::MatrixXd values(static_cast<Eigen::Index>(e.size()), static_cast<Eigen::Index>(axes));
  values.leftCols(static_cast<Eigen::Index>(p)) = e.inputs();
  values.col(static_cast<Eigen::Index>(p)) = qoi;
  std::vector<std::string> names;
  for (const auto& s : e.input_specs()) names.push_back(s.name);
  names.push_back("QoI (" + probe.name() + ")");

  // Inset so the outer axis names fit.
  const double left = spec.margins.left, right = spec.width - spec.margins.right - 40.0;
  const double top = spec.margins.top, bottom = spec.height - spec.margins.bottom;
  auto axis_x = [&](std::size_t a) { return left + (right - left) * static_cast<double>(a) / static_cast<double>(axes - 1); };
  std::vector<double> lo(axes), hi(axes);
  for (std::size_t a = 0; a < axes; ++a) {
    lo[a] = values.col(static_cast<Eigen::Index>(a)).minCoeff();
    hi[a] = values.col(static_cast<Eigen::Index>(a)).maxCoeff();
  }
  auto axis_y = [&](std::size_t a, double v) {
    if (!(hi[a] > lo[a])) return 0.5 * (top + bottom);
    if (v == hi[a]) return top;
    if (v == lo[a]) return bottom;
    return bottom - (v - lo[a]) / (hi[a] - lo[a]) * (bottom - top);
  };
  auto polyline_for = [&](std::size_t i) {
    svg::Points pts;
    for (std::size_t a = 0; a < axes; ++a)
      pts.emplace_back(axis_x(a), axis_y(a, values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(a))));
    return pts;
  };

  const auto highlighted = static_cast<std::size_t>(std::count(mask.begin(), mask.end(), true));
  svg::Writer w(spec.width, spec.height);
  w.comment(metadata("parallel_coordinates", "N=" + std::to_string(e.size()) + " p=" + std::to_string(p) +
                                                 " probe=" + probe.name() + " highlight_quantile=" +
                                                 format_exact(highlight_quantile) + " highlighted=" +
                                                 std::to_string(highlighted)));
  w.rect(0, 0, spec.width, spec.height, {{"class", "background"}, {"fill", "#ffffff"}});
  w.open_group({{"class", "lines low"}, {"stroke", "#bbbbbb"}, {"stroke-width", "0.8"}});
  for (std::size_t i = 0; i < e.size(); ++i)
    if (!mask[i]) w.polyline(polyline_for(i), {{"class", "low"}, {"data-index", std::to_string(i)}});
  w.close_group();
  w.open_group({{"class", "lines high"}, {"stroke", "#d62728"}, {"stroke-width", "1.2"}});
  for (std::size_t i = 0; i < e.size(); ++i)
    if (mask[i]) w.polyline(polyline_for(i), {{"class", "high"}, {"data-index", std::to_string(i)}});
  w.close_group();

  w.open_group({{"class", "axes"}, {"stroke", "#333333"}, {"font-family", kFont}, {"font-size", "11"}});
  for (std::size_t a = 0; a < axes; ++a) {
    const double xa = axis_x(a);
    w.line(xa, top, xa, bottom, {{"class", "axis"}, {"data-min", format_exact(lo[a])}, {"data-max", format_exact(hi[a])}});
    w.text(xa, bottom + 18, names[a], {{"text-anchor", "middle"}, {"stroke", "none"}});
    w.text(xa, top - 6, tick_label(hi[a], hi[a] - lo[a]), {{"text-anchor", "middle"}, {"stroke", "none"}});
    w.text(xa, bottom + 32, tick_label(lo[a], hi[a] - lo[a]), {{"text-anchor", "middle"}, {"stroke", "none"}});
  }
  w.close_group();
  if (!spec.title.empty())
    w.text(spec.width / 2, spec.margins.top / 2, spec.title,
           {{"class", "title"}, {"text-anchor", "middle"}, {"font-family", kFont}, {"font-size", "15"}});
  return w.finish();
}

}  // namespace spider
