#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

namespace temponet {

/// Minimal static SVG renderings for the figure data files: enough to eyeball
/// a run, not a plotting library.
namespace svg {

struct Series {
  std::string label;
  std::vector<std::pair<double, double>> points;
};

namespace detail {

inline constexpr double kWidth = 640.0;
inline constexpr double kHeight = 420.0;
inline constexpr double kMargin = 56.0;

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

inline const char* palette(std::size_t i) {
  static constexpr const char* colors[] = {
      "#4878d0", "#ee854a", "#6acc64", "#d65f5f", "#956cb4",
      "#8c613c", "#dc7ec0", "#797979", "#d5bb67", "#82c6e2"};
  return colors[i % 10];
}

struct Range {
  double lo = 0.0;
  double hi = 1.0;

  double scale(double v, double out_lo, double out_hi) const {
    const double span = hi - lo;
    const double t = span > 0.0 ? (v - lo) / span : 0.5;
    return out_lo + t * (out_hi - out_lo);
  }
};

inline Range range_of(const std::vector<Series>& series, bool y_axis) {
  Range r{0.0, 1.0};
  bool first = true;
  for (const auto& s : series) {
    for (const auto& [x, y] : s.points) {
      const double v = y_axis ? y : x;
      if (first) {
        r.lo = r.hi = v;
        first = false;
      } else {
        r.lo = std::min(r.lo, v);
        r.hi = std::max(r.hi, v);
      }
    }
  }
  if (y_axis) r.lo = std::min(r.lo, 0.0);
  if (r.hi <= r.lo) r.hi = r.lo + 1.0;
  return r;
}

inline void open_canvas(std::string& out, const std::string& title) {
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) +
         "\" height=\"" + num(kHeight) + "\" viewBox=\"0 0 " + num(kWidth) +
         " " + num(kHeight) + "\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out += "<text x=\"" + num(kWidth / 2) +
         "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"15\">" +
         title + "</text>\n";
}

inline void draw_axes(std::string& out, const Range& xr, const Range& yr,
                      const std::string& x_label, const std::string& y_label) {
  const double x0 = kMargin, x1 = kWidth - kMargin;
  const double y0 = kHeight - kMargin, y1 = kMargin;
  out += "<line x1=\"" + num(x0) + "\" y1=\"" + num(y0) + "\" x2=\"" + num(x1) +
         "\" y2=\"" + num(y0) + "\" stroke=\"black\"/>\n";
  out += "<line x1=\"" + num(x0) + "\" y1=\"" + num(y0) + "\" x2=\"" + num(x0) +
         "\" y2=\"" + num(y1) + "\" stroke=\"black\"/>\n";
  for (int t = 0; t <= 4; ++t) {
    const double f = t / 4.0;
    const double xv = xr.lo + f * (xr.hi - xr.lo);
    const double yv = yr.lo + f * (yr.hi - yr.lo);
    const double xp = x0 + f * (x1 - x0);
    const double yp = y0 - f * (y0 - y1);
    out += "<text x=\"" + num(xp) + "\" y=\"" + num(y0 + 18) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"11\">" +
           num(xv) + "</text>\n";
    out += "<text x=\"" + num(x0 - 6) + "\" y=\"" + num(yp + 4) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" "
           "font-size=\"11\">" +
           num(yv) + "</text>\n";
  }
  out += "<text x=\"" + num((x0 + x1) / 2) + "\" y=\"" + num(kHeight - 12) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"12\">" +
         x_label + "</text>\n";
  out += "<text x=\"16\" y=\"" + num((y0 + y1) / 2) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"12\" transform=\"rotate(-90 16 " +
         num((y0 + y1) / 2) + ")\">" + y_label + "</text>\n";
}

}  // namespace detail

/// Line chart with optional point markers; used for ratio and curve figures.
inline std::string line_chart(const std::string& title,
                              const std::string& x_label,
                              const std::string& y_label,
                              const std::vector<Series>& series,
                              bool markers = false) {
  using namespace detail;
  const Range xr = range_of(series, false);
  const Range yr = range_of(series, true);
  std::string out;
  open_canvas(out, title);
  draw_axes(out, xr, yr, x_label, y_label);
  const double x0 = kMargin, x1 = kWidth - kMargin;
  const double y0 = kHeight - kMargin, y1 = kMargin;
  for (std::size_t si = 0; si < series.size(); ++si) {
    const auto& s = series[si];
    if (s.points.empty()) continue;
    std::string path;
    for (const auto& [x, y] : s.points) {
      path += path.empty() ? "M" : " L";
      path += num(xr.scale(x, x0, x1)) + " " + num(yr.scale(y, y0, y1));
    }
    out += "<path d=\"" + path + "\" fill=\"none\" stroke=\"" +
           palette(si) + "\" stroke-width=\"1.5\"/>\n";
    if (markers) {
      for (const auto& [x, y] : s.points) {
        out += "<circle cx=\"" + num(xr.scale(x, x0, x1)) + "\" cy=\"" +
               num(yr.scale(y, y0, y1)) + "\" r=\"3\" fill=\"" + palette(si) +
               "\"/>\n";
      }
    }
  }
  out += "</svg>\n";
  return out;
}

/// Bar chart over integer x values; used for histograms.
inline std::string bar_chart(const std::string& title,
                             const std::string& x_label,
                             const std::string& y_label,
                             const std::vector<std::pair<double, double>>& bars) {
  using namespace detail;
  std::vector<Series> wrap{{"", bars}};
  Range xr = range_of(wrap, false);
  xr.lo -= 0.5;
  xr.hi += 0.5;
  const Range yr = range_of(wrap, true);
  std::string out;
  open_canvas(out, title);
  draw_axes(out, xr, yr, x_label, y_label);
  const double x0 = kMargin, x1 = kWidth - kMargin;
  const double y0 = kHeight - kMargin, y1 = kMargin;
  const double slot = bars.empty() ? 1.0 : (x1 - x0) / (xr.hi - xr.lo);
  for (const auto& [x, y] : bars) {
    const double xp = xr.scale(x, x0, x1);
    const double yp = yr.scale(y, y0, y1);
    const double w = std::max(1.0, slot * 0.8);
    out += "<rect x=\"" + num(xp - w / 2) + "\" y=\"" + num(yp) +
           "\" width=\"" + num(w) + "\" height=\"" + num(y0 - yp) +
           "\" fill=\"#4878d0\"/>\n";
  }
  out += "</svg>\n";
  return out;
}

/// Stacked area chart; used for the community evolution figure. Series must
/// share the same x grid.
inline std::string stacked_area(const std::string& title,
                                const std::string& x_label,
                                const std::string& y_label,
                                const std::vector<double>& xs,
                                const std::vector<Series>& series) {
  using namespace detail;
  std::vector<double> top(xs.size(), 0.0);
  for (const auto& s : series) {
    for (std::size_t i = 0; i < xs.size() && i < s.points.size(); ++i) {
      top[i] += s.points[i].second;
    }
  }
  Range xr{xs.empty() ? 0.0 : xs.front(), xs.empty() ? 1.0 : xs.back()};
  if (xr.hi <= xr.lo) xr.hi = xr.lo + 1.0;
  Range yr{0.0, 1.0};
  for (const auto v : top) yr.hi = std::max(yr.hi, v);
  std::string out;
  open_canvas(out, title);
  draw_axes(out, xr, yr, x_label, y_label);
  const double x0 = kMargin, x1 = kWidth - kMargin;
  const double y0 = kHeight - kMargin, y1 = kMargin;
  std::vector<double> base(xs.size(), 0.0);
  for (std::size_t si = 0; si < series.size(); ++si) {
    const auto& s = series[si];
    std::string path;
    for (std::size_t i = 0; i < xs.size() && i < s.points.size(); ++i) {
      path += path.empty() ? "M" : " L";
      path += num(xr.scale(xs[i], x0, x1)) + " " +
              num(yr.scale(base[i] + s.points[i].second, y0, y1));
    }
    for (std::size_t i = std::min(xs.size(), s.points.size()); i-- > 0;) {
      path += " L" + num(xr.scale(xs[i], x0, x1)) + " " +
              num(yr.scale(base[i], y0, y1));
    }
    out += "<path d=\"" + path + " Z\" fill=\"" + palette(si) +
           "\" fill-opacity=\"0.85\" stroke=\"none\"/>\n";
    for (std::size_t i = 0; i < xs.size() && i < s.points.size(); ++i) {
      base[i] += s.points[i].second;
    }
  }
  out += "</svg>\n";
  return out;
}

}  // namespace svg
}  // namespace temponet
