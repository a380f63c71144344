#pragma once
// Minimal SVG line/scatter plots for the experiment reports. No dependencies;
// output is deterministic for identical input.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "lrpc/common.hpp"

namespace lrpc {

struct PlotSeries {
  std::string label;
  std::string color = "#1f77b4";
  std::vector<double> x, y;
  std::vector<double> ylo, yhi;  // optional error bars
  bool line = true;
};

struct Plot {
  std::string title, xlabel, ylabel;
  std::vector<PlotSeries> series;
  int width = 640, height = 440;
};

namespace detail {

inline std::string fmt_num(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

inline double nice_step(double span) {
  if (span <= 0) return 1.0;
  const double raw = span / 6.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0, 10.0})
    if (raw <= m * mag) return m * mag;
  return 10.0 * mag;
}

}  // namespace detail

inline void write_svg_plot(const Plot& plot, const std::string& path) {
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& s : plot.series) {
    for (double v : s.x) { xmin = std::min(xmin, v); xmax = std::max(xmax, v); }
    for (double v : s.y) { ymin = std::min(ymin, v); ymax = std::max(ymax, v); }
    for (double v : s.ylo) ymin = std::min(ymin, v);
    for (double v : s.yhi) ymax = std::max(ymax, v);
  }
  if (xmin > xmax) { xmin = 0; xmax = 1; }
  if (ymin > ymax) { ymin = 0; ymax = 1; }
  if (xmax == xmin) { xmax = xmin + 1; }
  if (ymax == ymin) { ymax = ymin + 1; }
  const double xpad = 0.05 * (xmax - xmin), ypad = 0.08 * (ymax - ymin);
  xmin -= xpad; xmax += xpad; ymin -= ypad; ymax += ypad;

  const int ml = 62, mr = 16, mt = 34, mb = 46;
  const double pw = plot.width - ml - mr, ph = plot.height - mt - mb;
  auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * pw; };
  auto py = [&](double y) { return mt + ph - (y - ymin) / (ymax - ymin) * ph; };

  std::ofstream os(path);
  if (!os) throw error("cannot write " + path);
  os << "<svg xmlns='http://www.w3.org/2000/svg' width='" << plot.width
     << "' height='" << plot.height << "' font-family='sans-serif' font-size='11'>\n"
     << "<rect width='100%' height='100%' fill='white'/>\n";

  // Axes, ticks, grid.
  const double xstep = detail::nice_step(xmax - xmin);
  const double ystep = detail::nice_step(ymax - ymin);
  os << "<g stroke='#cccccc' stroke-width='0.5'>\n";
  for (double t = std::ceil(xmin / xstep) * xstep; t <= xmax; t += xstep)
    os << "<line x1='" << px(t) << "' y1='" << mt << "' x2='" << px(t)
       << "' y2='" << mt + ph << "'/>\n";
  for (double t = std::ceil(ymin / ystep) * ystep; t <= ymax; t += ystep)
    os << "<line x1='" << ml << "' y1='" << py(t) << "' x2='" << ml + pw
       << "' y2='" << py(t) << "'/>\n";
  os << "</g>\n<g fill='black'>\n";
  for (double t = std::ceil(xmin / xstep) * xstep; t <= xmax; t += xstep)
    os << "<text x='" << px(t) << "' y='" << mt + ph + 16
       << "' text-anchor='middle'>" << detail::fmt_num(t) << "</text>\n";
  for (double t = std::ceil(ymin / ystep) * ystep; t <= ymax; t += ystep)
    os << "<text x='" << ml - 6 << "' y='" << py(t) + 4
       << "' text-anchor='end'>" << detail::fmt_num(t) << "</text>\n";
  os << "</g>\n";
  os << "<rect x='" << ml << "' y='" << mt << "' width='" << pw
     << "' height='" << ph << "' fill='none' stroke='black'/>\n";
  os << "<text x='" << plot.width / 2 << "' y='18' text-anchor='middle' "
        "font-size='13'>" << plot.title << "</text>\n";
  os << "<text x='" << ml + pw / 2 << "' y='" << plot.height - 8
     << "' text-anchor='middle'>" << plot.xlabel << "</text>\n";
  os << "<text x='14' y='" << mt + ph / 2
     << "' text-anchor='middle' transform='rotate(-90 14 " << mt + ph / 2
     << ")'>" << plot.ylabel << "</text>\n";

  int legend_y = mt + 8;
  for (const auto& s : plot.series) {
    if (!s.ylo.empty())
      for (std::size_t i = 0; i < s.x.size(); ++i)
        os << "<line x1='" << px(s.x[i]) << "' y1='" << py(s.ylo[i])
           << "' x2='" << px(s.x[i]) << "' y2='" << py(s.yhi[i])
           << "' stroke='" << s.color << "' stroke-width='1'/>\n";
    if (s.line && s.x.size() > 1) {
      os << "<polyline fill='none' stroke='" << s.color
         << "' stroke-width='1.6' points='";
      for (std::size_t i = 0; i < s.x.size(); ++i)
        os << px(s.x[i]) << ',' << py(s.y[i]) << ' ';
      os << "'/>\n";
    }
    for (std::size_t i = 0; i < s.x.size(); ++i)
      os << "<circle cx='" << px(s.x[i]) << "' cy='" << py(s.y[i])
         << "' r='2.6' fill='" << s.color << "'/>\n";
    os << "<line x1='" << ml + pw - 150 << "' y1='" << legend_y << "' x2='"
       << ml + pw - 130 << "' y2='" << legend_y << "' stroke='" << s.color
       << "' stroke-width='2'/>\n"
       << "<text x='" << ml + pw - 124 << "' y='" << legend_y + 4 << "'>"
       << s.label << "</text>\n";
    legend_y += 16;
  }
  os << "</svg>\n";
}

}  // namespace lrpc
