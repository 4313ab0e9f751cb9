// Copyright 2026 The MIA Disparity Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include "mia/cli/svg.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"

namespace mia::cli {
namespace {

constexpr double kWidth = 640;
constexpr double kHeight = 420;
constexpr double kMargin = 60;
constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

std::string Escape(const std::string& s) {
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

std::string Header(double w, double h) {
  return absl::StrFormat(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%g\" height=\"%g\" "
      "font-family=\"sans-serif\" font-size=\"12\">\n"
      "<rect width=\"100%%\" height=\"100%%\" fill=\"white\"/>\n",
      w, h);
}

}  // namespace

std::string LinePlotSvg(const std::vector<Series>& series,
                        const PlotOptions& options) {
  auto tx = [&](double x) { return options.log_x ? std::log10(x) : x; };
  double x_lo = std::numeric_limits<double>::infinity();
  double x_hi = -x_lo;
  double y_lo = x_lo;
  double y_hi = -x_lo;
  for (const auto& s : series) {
    for (const auto& [x, y] : s.points) {
      if ((options.log_x && x <= 0) || !std::isfinite(y)) continue;
      x_lo = std::min(x_lo, tx(x));
      x_hi = std::max(x_hi, tx(x));
      y_lo = std::min(y_lo, y);
      y_hi = std::max(y_hi, y);
    }
  }
  if (!std::isfinite(x_lo)) x_lo = 0, x_hi = 1, y_lo = 0, y_hi = 1;
  if (x_hi == x_lo) x_hi = x_lo + 1;
  if (y_hi == y_lo) y_hi = y_lo + 1;

  const double pw = kWidth - 2 * kMargin;
  const double ph = kHeight - 2 * kMargin;
  auto px = [&](double x) { return kMargin + (tx(x) - x_lo) / (x_hi - x_lo) * pw; };
  auto py = [&](double y) { return kHeight - kMargin - (y - y_lo) / (y_hi - y_lo) * ph; };

  std::string out = Header(kWidth, kHeight);
  absl::StrAppendFormat(&out,
                        "<text x=\"%g\" y=\"24\" text-anchor=\"middle\" "
                        "font-size=\"15\">%s</text>\n",
                        kWidth / 2, Escape(options.title));
  absl::StrAppendFormat(&out,
                        "<rect x=\"%g\" y=\"%g\" width=\"%g\" height=\"%g\" "
                        "fill=\"none\" stroke=\"#444\"/>\n",
                        kMargin, kMargin, pw, ph);
  for (int t = 0; t <= 4; ++t) {
    const double fx = x_lo + (x_hi - x_lo) * t / 4;
    const double fy = y_lo + (y_hi - y_lo) * t / 4;
    const double xv = options.log_x ? std::pow(10.0, fx) : fx;
    absl::StrAppendFormat(&out,
                          "<text x=\"%g\" y=\"%g\" text-anchor=\"middle\">%.3g</text>\n",
                          kMargin + pw * t / 4, kHeight - kMargin + 16, xv);
    absl::StrAppendFormat(&out,
                          "<text x=\"%g\" y=\"%g\" text-anchor=\"end\">%.3g</text>\n",
                          kMargin - 6, kHeight - kMargin - ph * t / 4 + 4, fy);
  }
  absl::StrAppendFormat(&out,
                        "<text x=\"%g\" y=\"%g\" text-anchor=\"middle\">%s</text>\n",
                        kWidth / 2, kHeight - 18, Escape(options.x_label));
  absl::StrAppendFormat(&out,
                        "<text x=\"16\" y=\"%g\" text-anchor=\"middle\" "
                        "transform=\"rotate(-90 16 %g)\">%s</text>\n",
                        kHeight / 2, kHeight / 2, Escape(options.y_label));

  for (size_t i = 0; i < series.size(); ++i) {
    const char* color = kPalette[i % std::size(kPalette)];
    std::string path;
    for (const auto& [x, y] : series[i].points) {
      if ((options.log_x && x <= 0) || !std::isfinite(y)) continue;
      absl::StrAppendFormat(&path, "%s%.2f,%.2f", path.empty() ? "" : " ",
                            px(x), py(y));
    }
    absl::StrAppendFormat(&out,
                          "<polyline fill=\"none\" stroke=\"%s\" "
                          "stroke-width=\"1.5\" points=\"%s\"/>\n",
                          color, path);
    absl::StrAppendFormat(&out,
                          "<text x=\"%g\" y=\"%g\" fill=\"%s\">%s</text>\n",
                          kMargin + 8, kMargin + 16 + 14.0 * i, color,
                          Escape(series[i].name));
  }
  out += "</svg>\n";
  return out;
}

std::string HeatmapSvg(const std::vector<std::string>& labels,
                       const RealMatrix& values, const std::string& title) {
  const size_t n = labels.size();
  const double cell = 48;
  const double left = 140;
  const double top = 50;
  std::string out = Header(left + cell * n + 20, top + cell * n + 120);
  absl::StrAppendFormat(&out, "<text x=\"10\" y=\"24\" font-size=\"15\">%s</text>\n",
                        Escape(title));
  for (size_t r = 0; r < n; ++r) {
    absl::StrAppendFormat(&out,
                          "<text x=\"%g\" y=\"%g\" text-anchor=\"end\">%s</text>\n",
                          left - 6, top + cell * r + cell / 2 + 4,
                          Escape(labels[r]));
    for (size_t c = 0; c < n; ++c) {
      const double v = std::clamp(values(r, c), 0.0, 1.0);
      const int shade = static_cast<int>(std::lround(255 * (1 - v)));
      absl::StrAppendFormat(
          &out,
          "<rect x=\"%g\" y=\"%g\" width=\"%g\" height=\"%g\" "
          "fill=\"rgb(%d,%d,255)\" stroke=\"white\"/>\n"
          "<text x=\"%g\" y=\"%g\" text-anchor=\"middle\" fill=\"%s\">%.2f</text>\n",
          left + cell * c, top + cell * r, cell, cell, shade, shade,
          left + cell * c + cell / 2, top + cell * r + cell / 2 + 4,
          v > 0.5 ? "white" : "black", values(r, c));
    }
  }
  for (size_t c = 0; c < n; ++c) {
    const double x = left + cell * c + cell / 2;
    const double y = top + cell * n + 10;
    absl::StrAppendFormat(&out,
                          "<text x=\"%g\" y=\"%g\" transform=\"rotate(45 %g %g)\">%s</text>\n",
                          x, y, x, y, Escape(labels[c]));
  }
  out += "</svg>\n";
  return out;
}

}  // namespace mia::cli
