#include "glomap/plot.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>

namespace glomap {

namespace {

constexpr std::array<const char*, 20> kPalette = {
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2",
    "#7f7f7f", "#bcbd22", "#17becf", "#aec7e8", "#ffbb78", "#98df8a", "#ff9896",
    "#c5b0d5", "#c49c94", "#f7b6d2", "#c7c7c7", "#dbdb8d", "#9edae5"};

// Anchor points of a viridis-like ramp.
constexpr std::array<std::array<double, 3>, 9> kRamp = {{{68, 1, 84},
                                                         {71, 44, 122},
                                                         {59, 81, 139},
                                                         {44, 113, 142},
                                                         {33, 144, 141},
                                                         {39, 173, 129},
                                                         {92, 200, 99},
                                                         {170, 220, 50},
                                                         {253, 231, 37}}};

std::string hex(int r, int g, int b) {
  char buf[8];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", r, g, b);
  return buf;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::vector<std::string> point_colors(const PlotPanel& p) {
  const auto n = static_cast<std::size_t>(p.z.rows());
  if (!p.color) return std::vector<std::string>(n, "#1f77b4");
  const auto& vals = p.color->values;
  if (vals.size() != n) throw Error("color column length differs from the number of points");
  std::vector<std::string> out(n);
  if (p.color->kind == ColorColumn::Kind::kCategorical) {
    std::map<double, Index> rank;
    for (double v : vals) rank.emplace(v, 0);
    Index k = 0;
    for (auto& [v, r] : rank) r = k++;
    for (std::size_t i = 0; i < n; ++i) out[i] = categorical_color(rank[vals[i]]);
  } else {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (double v : vals) {
      if (std::isfinite(v)) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
    }
    const double span = hi > lo ? hi - lo : 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      out[i] = std::isfinite(vals[i]) ? continuous_color((vals[i] - lo) / span) : "#999999";
    }
  }
  return out;
}

}  // namespace

std::string categorical_color(Index k) {
  const auto m = static_cast<Index>(kPalette.size());
  return kPalette[static_cast<std::size_t>(((k % m) + m) % m)];
}

std::string continuous_color(double t) {
  t = std::clamp(std::isfinite(t) ? t : 0.0, 0.0, 1.0);
  const double pos = t * static_cast<double>(kRamp.size() - 1);
  const auto lo = std::min(static_cast<std::size_t>(pos), kRamp.size() - 2);
  const double f = pos - static_cast<double>(lo);
  int rgb[3];
  for (int c = 0; c < 3; ++c) {
    rgb[c] = static_cast<int>(std::lround(kRamp[lo][c] * (1.0 - f) + kRamp[lo + 1][c] * f));
  }
  return hex(rgb[0], rgb[1], rgb[2]);
}

std::string render_svg(std::span<const PlotPanel> panels, const PlotOptions& opts) {
  if (panels.empty()) throw Error("nothing to plot");
  for (const auto& p : panels) {
    if (p.z.cols() != 2) {
      throw Error("plot needs a 2-D embedding, got " + std::to_string(p.z.cols()) + " columns");
    }
  }
  const Index count = static_cast<Index>(panels.size());
  const Index cols = std::max<Index>(1, std::min(opts.columns, count));
  const Index rows = (count + cols - 1) / cols;
  const double s = opts.panel_size;
  const double title_h = opts.title.empty() ? 0.0 : 28.0;
  const double label_h = 20.0;
  const double pad = 10.0;
  const double cell_h = s + label_h;
  const double width = static_cast<double>(cols) * s;
  const double height = title_h + static_cast<double>(rows) * cell_h;

  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(width) + "\" height=\"" +
         num(height) + "\" viewBox=\"0 0 " + num(width) + " " + num(height) + "\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!opts.title.empty()) {
    out += "<text x=\"" + num(width / 2) + "\" y=\"20\" text-anchor=\"middle\" "
           "font-family=\"sans-serif\" font-size=\"16\">" + escape(opts.title) + "</text>\n";
  }
  for (Index k = 0; k < count; ++k) {
    const PlotPanel& p = panels[static_cast<std::size_t>(k)];
    const double ox = static_cast<double>(k % cols) * s;
    const double oy = title_h + static_cast<double>(k / cols) * cell_h;
    out += "<g>\n";
    out += "<rect x=\"" + num(ox + 1) + "\" y=\"" + num(oy + 1) + "\" width=\"" + num(s - 2) +
           "\" height=\"" + num(s - 2) + "\" fill=\"none\" stroke=\"#dddddd\"/>\n";
    if (!p.title.empty()) {
      out += "<text x=\"" + num(ox + s / 2) + "\" y=\"" + num(oy + s + 14) +
             "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" +
             escape(p.title) + "</text>\n";
    }
    if (p.z.rows() > 0) {
      const auto lo = p.z.colwise().minCoeff();
      const auto hi = p.z.colwise().maxCoeff();
      const double range = std::max({hi[0] - lo[0], hi[1] - lo[1], 1e-12});
      const double scale = (s - 2 * pad) / range;
      const double cx = (lo[0] + hi[0]) / 2;
      const double cy = (lo[1] + hi[1]) / 2;
      const auto colors = point_colors(p);
      for (Index i = 0; i < p.z.rows(); ++i) {
        const double x = ox + s / 2 + (p.z(i, 0) - cx) * scale;
        const double y = oy + s / 2 - (p.z(i, 1) - cy) * scale;
        out += "<circle cx=\"" + num(x) + "\" cy=\"" + num(y) + "\" r=\"" +
               num(opts.point_radius) + "\" fill=\"" + colors[static_cast<std::size_t>(i)] +
               "\"/>\n";
      }
    }
    out += "</g>\n";
  }
  out += "</svg>\n";
  return out;
}

void write_svg(const std::filesystem::path& path, std::span<const PlotPanel> panels,
               const PlotOptions& opts) {
  const std::string doc = render_svg(panels, opts);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  out << doc;
}

}  // namespace glomap
