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
#include "mia/kde.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "absl/strings/str_cat.h"
#include "mia/status_macros.h"

namespace mia {
namespace {

absl::StatusOr<std::vector<double>> SortedFinite(std::span<const double> values) {
  if (values.size() < 2) {
    return absl::InvalidArgumentError("KDE needs at least two values");
  }
  std::vector<double> sorted(values.begin(), values.end());
  for (double v : sorted) {
    if (!std::isfinite(v)) {
      return absl::InvalidArgumentError("KDE input contains non-finite values");
    }
  }
  std::sort(sorted.begin(), sorted.end());
  return sorted;
}

double SilvermanFromSorted(std::span<const double> sorted) {
  const double n = static_cast<double>(sorted.size());
  const double mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : sorted) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / (n - 1.0));
  const double iqr =
      (SortedQuantile(sorted, 0.75) - SortedQuantile(sorted, 0.25)) / 1.34;
  double spread = std::min(sd, iqr);
  if (!(spread > 0.0)) spread = std::max(sd, iqr);
  return 0.9 * spread * std::pow(n, -0.2);
}

}  // namespace

double SortedQuantile(std::span<const double> sorted, double q) {
  if (sorted.empty()) return 0.0;
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<size_t>(std::floor(pos));
  const size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

absl::StatusOr<std::vector<double>> ConfidenceMargin(
    const RealMatrix& confidences) {
  if (confidences.cols() < 2) {
    return absl::InvalidArgumentError(
        absl::StrCat("confidence margin needs at least 2 classes, got ",
                     confidences.cols()));
  }
  std::vector<double> margins(confidences.rows());
  for (size_t r = 0; r < confidences.rows(); ++r) {
    double top1 = -std::numeric_limits<double>::infinity();
    double top2 = top1;
    for (double v : confidences.row(r)) {
      if (v > top1) {
        top2 = top1;
        top1 = v;
      } else if (v > top2) {
        top2 = v;
      }
    }
    margins[r] = top1 - top2;
  }
  return margins;
}

absl::StatusOr<double> SilvermanBandwidth(std::span<const double> values) {
  ASSIGN_OR_RETURN(std::vector<double> sorted, SortedFinite(values));
  const double h = SilvermanFromSorted(sorted);
  if (!(h > 0.0)) return absl::InvalidArgumentError("degenerate sample");
  return h;
}

absl::StatusOr<std::vector<double>> Kde(std::span<const double> values,
                                        std::span<const double> eval_points,
                                        std::optional<double> bandwidth) {
  // Sorting first makes the summation order, and so the result, independent
  // of the input order.
  ASSIGN_OR_RETURN(std::vector<double> sorted, SortedFinite(values));
  if (sorted.front() == sorted.back()) {
    return absl::InvalidArgumentError("degenerate sample");
  }
  double h = bandwidth.has_value() ? *bandwidth : SilvermanFromSorted(sorted);
  if (!(h > 0.0) || !std::isfinite(h)) {
    return absl::InvalidArgumentError(
        absl::StrCat("bandwidth must be positive, got ", h));
  }
  const double norm =
      1.0 / (static_cast<double>(sorted.size()) * h *
             std::sqrt(2.0 * std::numbers::pi));
  std::vector<double> density(eval_points.size());
  for (size_t e = 0; e < eval_points.size(); ++e) {
    double s = 0.0;
    for (double v : sorted) {
      const double z = (eval_points[e] - v) / h;
      s += std::exp(-0.5 * z * z);
    }
    density[e] = s * norm;
  }
  return density;
}

}  // namespace mia
