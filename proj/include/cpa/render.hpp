#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <string>
#include <string_view>

#include "cpa/corridor_model.hpp"
#include "cpa/diagrams.hpp"
#include "cpa/error.hpp"

namespace cpa {

struct Rgb {
  int r = 0;
  int g = 0;
  int b = 0;
  friend bool operator==(const Rgb&, const Rgb&) = default;
};

/// Piecewise-linear color ramp over u in [0, 1].
struct ColorScale {
  std::string_view name;
  std::array<Rgb, 3> stops;  // u = 0, 0.5, 1

  Rgb at(double u) const {
    u = std::clamp(u, 0.0, 1.0);
    const Rgb& a = u <= 0.5 ? stops[0] : stops[1];
    const Rgb& b = u <= 0.5 ? stops[1] : stops[2];
    const double w = u <= 0.5 ? u * 2.0 : (u - 0.5) * 2.0;
    auto mix = [w](int x, int y) { return static_cast<int>(std::lround(x + (y - x) * w)); };
    return {mix(a.r, b.r), mix(a.g, b.g), mix(a.b, b.b)};
  }
};

inline constexpr ColorScale kBlueYellowRed{"blue-yellow-red", {{{0, 0, 255}, {255, 255, 0}, {255, 0, 0}}}};
inline constexpr ColorScale kRedYellowGreen{"red-yellow-green", {{{255, 0, 0}, {255, 255, 0}, {0, 255, 0}}}};
inline constexpr ColorScale kGrayscale{"grayscale", {{{255, 255, 255}, {128, 128, 128}, {0, 0, 0}}}};

inline const ColorScale& color_scale(std::string_view name) {
  for (const ColorScale* s : {&kBlueYellowRed, &kRedYellowGreen, &kGrayscale}) {
    if (s->name == name) return *s;
  }
  throw ConfigError("unknown color scale '" + std::string(name) + "'");
}

struct RenderSpec {
  int width_px = 1200;
  int height_px = 700;
  std::string color_scale;  // empty: product default
  bool intersection_labels = true;
  bool two_cycles = true;          // TSD / PPD
  bool threshold_overlay = false;  // heat map
  double threshold_mph = kDefaultQueueThresholdMph;

  void validate() const {
    if (width_px <= 0 || height_px <= 0) throw ConfigError("canvas dimensions must be positive");
    if (!color_scale.empty()) (void)cpa::color_scale(color_scale);
  }
};

/// `{product}_{plan}_{direction}_{zset}.svg`
inline std::string output_name(std::string_view product, std::string_view plan, std::string_view direction,
                               std::string_view zset, std::string_view ext = "svg") {
  std::string out;
  for (std::string_view part : {product, plan, direction, zset}) {
    if (!out.empty()) out += '_';
    for (char c : part) out += (std::isalnum(static_cast<unsigned char>(c)) || c == '-') ? c : '-';
  }
  return out + "." + std::string(ext);
}

namespace svg {

/// Six significant digits, never "-0".
inline std::string num(double v) {
  if (v == 0.0 || std::abs(v) < 1e-12) return "0";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

inline std::string color(Rgb c) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", c.r, c.g, c.b);
  return buf;
}

inline std::string escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace svg

/// Affine map between (time, milepost) and canvas pixels. Time runs left to
/// right over [0, time_span); milepost runs bottom (0) to top (L).
class PlotLayout {
 public:
  static constexpr double kLeft = 90.0;
  static constexpr double kRight = 20.0;
  static constexpr double kTop = 30.0;
  static constexpr double kBottom = 50.0;

  PlotLayout(const RenderSpec& spec, double time_span, double length_ft)
      : width_(spec.width_px), height_(spec.height_px), time_span_(time_span), length_ft_(length_ft) {}

  double plot_width() const { return width_ - kLeft - kRight; }
  double plot_height() const { return height_ - kTop - kBottom; }
  double x_of_time(double t) const { return kLeft + t * plot_width() / time_span_; }
  double y_of_milepost(double mp) const { return kTop + plot_height() * (1.0 - mp / length_ft_); }
  double time_of_x(double x) const { return (x - kLeft) * time_span_ / plot_width(); }
  double milepost_of_y(double y) const { return length_ft_ * (1.0 - (y - kTop) / plot_height()); }
  double width() const { return width_; }
  double height() const { return height_; }

 private:
  double width_;
  double height_;
  double time_span_;
  double length_ft_;
};

/// Pixel rect placement for a grid: cell (t, x) in repeat `copy` maps to
/// the rect whose top-left is rect_x/rect_y.
class GridLayout {
 public:
  GridLayout(const RenderSpec& spec, const GridSpec& grid, int copies)
      : plot_(spec, grid.dt() * static_cast<double>(grid.n_t()) * copies, grid.dx() * static_cast<double>(grid.n_x())),
        n_t_(grid.n_t()),
        n_x_(grid.n_x()),
        copies_(copies) {}

  double cell_width() const { return plot_.plot_width() / static_cast<double>(n_t_ * copies_); }
  double cell_height() const { return plot_.plot_height() / static_cast<double>(n_x_); }
  double rect_x(std::size_t t, int copy = 0) const {
    return PlotLayout::kLeft + static_cast<double>(t + n_t_ * static_cast<std::size_t>(copy)) * cell_width();
  }
  double rect_y(std::size_t x) const {
    return PlotLayout::kTop + static_cast<double>(n_x_ - 1 - x) * cell_height();
  }
  /// Inverse of rect_x/rect_y: (t_bin, copy) and x_bin from a rect corner.
  std::pair<std::size_t, int> decode_x(double px) const {
    const auto col = static_cast<std::size_t>(std::lround((px - PlotLayout::kLeft) / cell_width()));
    return {col % n_t_, static_cast<int>(col / n_t_)};
  }
  std::size_t decode_y(double py) const {
    const auto row = static_cast<std::size_t>(std::lround((py - PlotLayout::kTop) / cell_height()));
    return n_x_ - 1 - row;
  }
  const PlotLayout& plot() const { return plot_; }

 private:
  PlotLayout plot_;
  std::size_t n_t_;
  std::size_t n_x_;
  int copies_;
};

namespace detail {

inline void svg_open(std::string& out, const RenderSpec& spec, std::string_view title) {
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + std::to_string(spec.width_px) +
         "\" height=\"" + std::to_string(spec.height_px) + "\" viewBox=\"0 0 " + std::to_string(spec.width_px) + " " +
         std::to_string(spec.height_px) + "\">\n";
  out += "<title>" + svg::escape(title) + "</title>\n";
  out += "<rect x=\"0\" y=\"0\" width=\"" + std::to_string(spec.width_px) + "\" height=\"" +
         std::to_string(spec.height_px) + "\" fill=\"#ffffff\"/>\n";
}

inline void svg_frame(std::string& out, const PlotLayout& plot) {
  out += "<rect class=\"frame\" x=\"" + svg::num(PlotLayout::kLeft) + "\" y=\"" + svg::num(PlotLayout::kTop) +
         "\" width=\"" + svg::num(plot.plot_width()) + "\" height=\"" + svg::num(plot.plot_height()) +
         "\" fill=\"none\" stroke=\"#000000\" stroke-width=\"1\"/>\n";
}

inline void svg_intersections(std::string& out, const PlotLayout& plot, const CorridorModel& model, bool labels) {
  out += "<g class=\"intersections\" stroke=\"#555555\" stroke-width=\"0.5\" stroke-dasharray=\"4 3\">\n";
  for (const auto& x : model.intersections()) {
    const std::string y = svg::num(plot.y_of_milepost(x.milepost_ft));
    out += "<line x1=\"" + svg::num(PlotLayout::kLeft) + "\" y1=\"" + y + "\" x2=\"" +
           svg::num(PlotLayout::kLeft + plot.plot_width()) + "\" y2=\"" + y + "\"/>\n";
  }
  out += "</g>\n";
  if (!labels) return;
  out += "<g class=\"intersection-labels\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"end\">\n";
  for (const auto& x : model.intersections()) {
    out += "<text x=\"" + svg::num(PlotLayout::kLeft - 4.0) + "\" y=\"" +
           svg::num(plot.y_of_milepost(x.milepost_ft) + 3.0) + "\">" + svg::escape(x.name) + "</text>\n";
  }
  out += "</g>\n";
}

inline void svg_cycle_axis(std::string& out, const PlotLayout& plot, double cycle_s, int copies) {
  out += "<g class=\"time-axis\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">\n";
  for (int c = 0; c < copies; ++c) {
    const double mid = plot.x_of_time((c + 0.5) * cycle_s);
    out += "<text x=\"" + svg::num(mid) + "\" y=\"" + svg::num(plot.height() - 15.0) + "\">Cycle " +
           std::to_string(c + 1) + "</text>\n";
    if (c > 0) {
      const std::string x = svg::num(plot.x_of_time(c * cycle_s));
      out += "<line x1=\"" + x + "\" y1=\"" + svg::num(PlotLayout::kTop) + "\" x2=\"" + x + "\" y2=\"" +
             svg::num(PlotLayout::kTop + plot.plot_height()) + "\" stroke=\"#000000\" stroke-width=\"1\"/>\n";
    }
  }
  out += "</g>\n";
}

}  // namespace detail

/// Cyclic time-space diagram; with two_cycles the second cycle repeats the
/// first, shifted by C.
inline std::string render_tsd(const CyclicTsd& tsd, const CorridorModel& model, const RenderSpec& spec = {}) {
  spec.validate();
  const int copies = spec.two_cycles ? 2 : 1;
  const PlotLayout plot(spec, tsd.cycle_s * copies, model.length_ft());
  std::string out;
  detail::svg_open(out, spec, "Cyclic time-space diagram, plan " + tsd.plan + ", C = " + svg::num(tsd.cycle_s) + " s");
  detail::svg_frame(out, plot);
  detail::svg_intersections(out, plot, model, spec.intersection_labels);
  detail::svg_cycle_axis(out, plot, tsd.cycle_s, copies);
  const std::string stroke = spec.color_scale.empty() ? "#1f4e9a" : svg::color(color_scale(spec.color_scale).at(1.0));
  for (int copy = 0; copy < copies; ++copy) {
    out += "<g class=\"cycle-" + std::to_string(copy + 1) + "\" fill=\"none\" stroke=\"" + stroke +
           "\" stroke-width=\"0.8\" stroke-opacity=\"0.6\">\n";
    const double shift = copy * tsd.cycle_s;
    for (const auto& traj : tsd.trajectories) {
      for (const auto& piece : traj.pieces) {
        std::string pts;
        auto add = [&](double tau, double mp) {
          if (!pts.empty()) pts += ' ';
          pts += svg::num(plot.x_of_time(tau + shift)) + "," + svg::num(plot.y_of_milepost(mp));
        };
        for (const auto& p : piece.points) add(p.tau, p.milepost_ft);
        if (piece.exit_milepost_ft) add(tsd.cycle_s, *piece.exit_milepost_ft);
        out += "<polyline points=\"" + pts + "\"/>\n";
      }
    }
    out += "</g>\n";
  }
  out += "</svg>\n";
  return out;
}

/// Platoon progression diagram: one rect per nonzero pixel, colored by count
/// relative to the grid maximum.
inline std::string render_ppd(const PpdGrid& grid, const CorridorModel& model, const RenderSpec& spec = {},
                              std::string_view plan = "") {
  spec.validate();
  const ColorScale& scale = spec.color_scale.empty() ? kBlueYellowRed : color_scale(spec.color_scale);
  const int copies = spec.two_cycles ? 2 : 1;
  const GridLayout layout(spec, grid.spec(), copies);
  std::uint32_t max_count = 0;
  for (auto v : grid.cells()) max_count = std::max(max_count, v);
  std::string out;
  detail::svg_open(out, spec, "Platoon progression diagram" + (plan.empty() ? std::string() : ", plan " + std::string(plan)));
  const std::string w = svg::num(layout.cell_width());
  const std::string h = svg::num(layout.cell_height());
  for (int copy = 0; copy < copies; ++copy) {
    out += "<g class=\"cycle-" + std::to_string(copy + 1) + "\" shape-rendering=\"crispEdges\">\n";
    for (std::size_t t = 0; t < grid.n_t(); ++t) {
      for (std::size_t x = 0; x < grid.n_x(); ++x) {
        const auto v = grid.at(t, x);
        if (v == 0) continue;
        const Rgb c = scale.at(static_cast<double>(v) / static_cast<double>(max_count));
        out += "<rect x=\"" + svg::num(layout.rect_x(t, copy)) + "\" y=\"" + svg::num(layout.rect_y(x)) +
               "\" width=\"" + w + "\" height=\"" + h + "\" fill=\"" + svg::color(c) + "\"/>\n";
      }
    }
    out += "</g>\n";
  }
  detail::svg_frame(out, layout.plot());
  detail::svg_intersections(out, layout.plot(), model, spec.intersection_labels);
  detail::svg_cycle_axis(out, layout.plot(), grid.spec().period(), copies);
  out += "</svg>\n";
  return out;
}

/// Hour-by-segment mean speed field. Green at the speed limit, red at 0;
/// cells without data stay uncolored. With threshold_overlay, queued cells
/// (mean < threshold) are hatched.
inline std::string render_heatmap(const HeatmapGrid& grid, const CorridorModel& model, const RenderSpec& spec = {},
                                  std::string_view title = "") {
  spec.validate();
  const ColorScale& scale = spec.color_scale.empty() ? kRedYellowGreen : color_scale(spec.color_scale);
  const GridLayout layout(spec, grid.spec(), 1);
  const double limit = model.speed_limit_mph();
  std::string out;
  detail::svg_open(out, spec, title.empty() ? std::string("Speed heat map") : std::string(title));
  out += "<defs><pattern id=\"hatch\" patternUnits=\"userSpaceOnUse\" width=\"6\" height=\"6\">"
         "<path d=\"M0,6 L6,0\" stroke=\"#000000\" stroke-width=\"1\"/></pattern></defs>\n";
  const std::string w = svg::num(layout.cell_width());
  const std::string h = svg::num(layout.cell_height());
  std::string hatches;
  out += "<g class=\"cells\" shape-rendering=\"crispEdges\">\n";
  for (std::size_t t = 0; t < grid.n_t(); ++t) {
    for (std::size_t x = 0; x < grid.n_x(); ++x) {
      const auto mean = grid.at(t, x).mean_mph();
      if (!mean) continue;
      const std::string pos = "x=\"" + svg::num(layout.rect_x(t)) + "\" y=\"" + svg::num(layout.rect_y(x)) +
                              "\" width=\"" + w + "\" height=\"" + h + "\"";
      out += "<rect " + pos + " fill=\"" + svg::color(scale.at(*mean / limit)) + "\"/>\n";
      if (spec.threshold_overlay && classify_queued(mean, spec.threshold_mph) == QueueState::queued)
        hatches += "<rect class=\"queued\" " + pos + " fill=\"url(#hatch)\"/>\n";
    }
  }
  out += "</g>\n";
  if (!hatches.empty()) out += "<g class=\"queued-overlay\">\n" + hatches + "</g>\n";
  detail::svg_frame(out, layout.plot());
  detail::svg_intersections(out, layout.plot(), model, spec.intersection_labels);
  out += "<g class=\"time-axis\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"middle\">\n";
  const double dt = grid.spec().dt();
  const std::size_t step = std::max<std::size_t>(1, grid.n_t() / 12);
  for (std::size_t t = 0; t < grid.n_t(); t += step) {
    out += "<text x=\"" + svg::num(layout.rect_x(t) + layout.cell_width() / 2.0) + "\" y=\"" +
           svg::num(layout.plot().height() - 30.0) + "\">" + svg::num(static_cast<double>(t) * dt / 3600.0) + "h</text>\n";
  }
  out += "</g>\n</svg>\n";
  return out;
}

}  // namespace cpa
