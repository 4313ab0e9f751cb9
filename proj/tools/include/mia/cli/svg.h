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

#ifndef MIA_CLI_SVG_H_
#define MIA_CLI_SVG_H_

#include <string>
#include <utility>
#include <vector>

#include "mia/matrix.h"

namespace mia::cli {

struct Series {
  std::string name;
  std::vector<std::pair<double, double>> points;
};

struct PlotOptions {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
};

// Minimal self-contained line chart; non-positive x values are dropped on a
// log axis.
std::string LinePlotSvg(const std::vector<Series>& series,
                        const PlotOptions& options);

// Square heatmap with values in [0, 1].
std::string HeatmapSvg(const std::vector<std::string>& labels,
                       const RealMatrix& values, const std::string& title);

}  // namespace mia::cli

#endif  // MIA_CLI_SVG_H_
