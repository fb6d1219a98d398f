/* svg.hpp
 *
 * Minimal native SVG line plots (linear or log-log) for series reports.
 * Deterministic text output; purely a convenience, never load-bearing.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "csv.hpp"

namespace schwave {

inline void svg_series_plot(const std::string& path, const std::string& title,
                            const std::vector<std::pair<double, double>>& xy,
                            bool loglog) {
  const double W = 640, H = 420, ml = 70, mr = 20, mt = 40, mb = 50;
  auto tx = [&](double x) { return loglog ? std::log10(x) : x; };
  double xlo = 1e300, xhi = -1e300, ylo = 1e300, yhi = -1e300;
  std::vector<std::pair<double, double>> pts;
  for (auto [x, y] : xy) {
    if (loglog && (x <= 0.0 || y <= 0.0)) continue;
    double a = tx(x), b = tx(y);
    if (!std::isfinite(a) || !std::isfinite(b)) continue;
    pts.push_back({a, b});
    xlo = std::min(xlo, a); xhi = std::max(xhi, a);
    ylo = std::min(ylo, b); yhi = std::max(yhi, b);
  }
  if (pts.empty()) { xlo = 0; xhi = 1; ylo = 0; yhi = 1; }
  if (xhi <= xlo) xhi = xlo + 1.0;
  if (yhi <= ylo) yhi = ylo + 1.0;
  auto px = [&](double a) { return ml + (a - xlo) / (xhi - xlo) * (W - ml - mr); };
  auto py = [&](double b) { return H - mb - (b - ylo) / (yhi - ylo) * (H - mt - mb); };
  char buf[256];
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DiskError("cannot open for writing: " + path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W
      << "\" height=\"" << H << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" "
         "font-family=\"monospace\" font-size=\"14\">" << title
      << (loglog ? " (log-log)" : "") << "</text>\n";
  std::snprintf(buf, sizeof buf,
                "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" "
                "stroke=\"black\"/>\n",
                ml, H - mb, W - mr, H - mb);
  out << buf;
  std::snprintf(buf, sizeof buf,
                "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" "
                "stroke=\"black\"/>\n",
                ml, mt, ml, H - mb);
  out << buf;
  for (int i = 0; i <= 4; ++i) {
    double a = xlo + (xhi - xlo) * i / 4.0;
    double b = ylo + (yhi - ylo) * i / 4.0;
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%.1f\" y=\"%.1f\" text-anchor=\"middle\" "
                  "font-family=\"monospace\" font-size=\"10\">%.3g</text>\n",
                  px(a), H - mb + 16, loglog ? std::pow(10.0, a) : a);
    out << buf;
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%.1f\" y=\"%.1f\" text-anchor=\"end\" "
                  "font-family=\"monospace\" font-size=\"10\">%.3g</text>\n",
                  ml - 6, py(b) + 4, loglog ? std::pow(10.0, b) : b);
    out << buf;
  }
  out << "<polyline fill=\"none\" stroke=\"#3366cc\" stroke-width=\"1.5\" "
         "points=\"";
  for (auto [a, b] : pts) {
    std::snprintf(buf, sizeof buf, "%.2f,%.2f ", px(a), py(b));
    out << buf;
  }
  out << "\"/>\n</svg>\n";
  if (!out) throw DiskError("write failure on SVG stream");
}

}  // namespace schwave
