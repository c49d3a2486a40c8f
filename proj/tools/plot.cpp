// Copyright 2026 The chairbot Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "plot.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "chairbot/error.hpp"
#include "chairbot/format.hpp"

namespace chairbot::cli {

namespace {

constexpr double kWidth = 800.0;
constexpr double kPanelHeight = 240.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 130.0;
constexpr double kTop = 20.0;
constexpr double kBottom = 40.0;

constexpr std::array<const char*, 6> kColors{"#1f77b4", "#d62728", "#2ca02c",
                                             "#9467bd", "#ff7f0e", "#8c564b"};

struct Panel {
  const char* label;
  std::vector<const char*> columns;
};

std::string fmt(double v) { return format_fixed(v, 2); }

}  // namespace

std::pair<double, double> auto_range(double lo, double hi) {
  if (!(hi - lo > 1e-12)) return {lo - 1.0, hi + 1.0};
  const double pad = 0.05 * (hi - lo);
  return {lo - pad, hi + pad};
}

std::string render_plot(const CsvTable& table) {
  if (table.rows.empty()) throw ParseError("no data rows");
  const std::vector<Panel> panels{
      {"position [m]", {"x", "y"}},
      {"attitude [deg]", {"roll", "pitch", "yaw"}},
      {"command [deg]", {"theta0", "theta1", "theta2", "theta3", "theta4", "theta5"}},
  };
  auto values = [&table](const char* name) {
    const std::size_t c = table.column(name);
    std::vector<double> out;
    out.reserve(table.rows.size());
    for (const auto& row : table.rows) out.push_back(parse_double(row[c]));
    return out;
  };

  const std::vector<double> t = values("t");
  const auto [t_lo, t_hi] = auto_range(*std::min_element(t.begin(), t.end()),
                                       *std::max_element(t.begin(), t.end()));
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kPanelHeight - kTop - kBottom;
  const double height = kPanelHeight * static_cast<double>(panels.size());

  std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(kWidth) +
                    "\" height=\"" + fmt(height) + "\" viewBox=\"0 0 " + fmt(kWidth) + " " +
                    fmt(height) + "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  svg += "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  for (std::size_t p = 0; p < panels.size(); ++p) {
    const Panel& panel = panels[p];
    std::vector<std::vector<double>> series;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const char* name : panel.columns) {
      series.push_back(values(name));
      lo = std::min(lo, *std::min_element(series.back().begin(), series.back().end()));
      hi = std::max(hi, *std::max_element(series.back().begin(), series.back().end()));
    }
    const auto [y_lo, y_hi] = auto_range(lo, hi);
    const double x0 = kLeft;
    const double y0 = kPanelHeight * static_cast<double>(p) + kTop;
    auto sx = [&](double v) { return x0 + (v - t_lo) / (t_hi - t_lo) * plot_w; };
    auto sy = [&](double v) { return y0 + plot_h - (v - y_lo) / (y_hi - y_lo) * plot_h; };

    svg += "  <g class=\"panel\" id=\"panel" + std::to_string(p) + "\">\n";
    svg += "    <rect x=\"" + fmt(x0) + "\" y=\"" + fmt(y0) + "\" width=\"" + fmt(plot_w) +
           "\" height=\"" + fmt(plot_h) + "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int k = 0; k <= 4; ++k) {
      const double yv = y_lo + (y_hi - y_lo) * k / 4.0;
      const double xv = t_lo + (t_hi - t_lo) * k / 4.0;
      svg += "    <text x=\"" + fmt(x0 - 6) + "\" y=\"" + fmt(sy(yv) + 4) +
             "\" text-anchor=\"end\">" + format_fixed(yv, 3) + "</text>\n";
      svg += "    <text x=\"" + fmt(sx(xv)) + "\" y=\"" + fmt(y0 + plot_h + 14) +
             "\" text-anchor=\"middle\">" + format_fixed(xv, 1) + "</text>\n";
    }
    svg += "    <text x=\"" + fmt(x0 + plot_w / 2) + "\" y=\"" + fmt(y0 + plot_h + 30) +
           "\" text-anchor=\"middle\">t [s]</text>\n";
    svg += "    <text x=\"14\" y=\"" + fmt(y0 + plot_h / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 14 " +
           fmt(y0 + plot_h / 2) + ")\">" + panel.label + "</text>\n";
    for (std::size_t s = 0; s < series.size(); ++s) {
      svg += "    <polyline fill=\"none\" stroke=\"" + std::string(kColors[s]) +
             "\" stroke-width=\"1.5\" points=\"";
      for (std::size_t i = 0; i < t.size(); ++i) {
        if (i) svg += ' ';
        svg += fmt(sx(t[i])) + "," + fmt(sy(series[s][i]));
      }
      svg += "\"/>\n";
      const double ly = y0 + 12 + 16 * static_cast<double>(s);
      const double lx = x0 + plot_w + 12;
      svg += "    <line x1=\"" + fmt(lx) + "\" y1=\"" + fmt(ly - 4) + "\" x2=\"" + fmt(lx + 20) +
             "\" y2=\"" + fmt(ly - 4) + "\" stroke=\"" + kColors[s] + "\" stroke-width=\"2\"/>\n";
      svg += "    <text x=\"" + fmt(lx + 26) + "\" y=\"" + fmt(ly) + "\">" + panel.columns[s] +
             "</text>\n";
    }
    svg += "  </g>\n";
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace chairbot::cli
