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

#ifndef MIA_KDE_H_
#define MIA_KDE_H_

#include <optional>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "mia/matrix.h"

namespace mia {

// 0.9 * min(sd, IQR / 1.34) * n^(-1/5). Falls back to the non-zero of the two
// spreads when the other vanishes; fails on a sample with no spread at all.
absl::StatusOr<double> SilvermanBandwidth(std::span<const double> values);

// Gaussian kernel density estimate of `values` at `eval_points`. Uses the
// Silverman bandwidth unless one is given.
absl::StatusOr<std::vector<double>> Kde(
    std::span<const double> values, std::span<const double> eval_points,
    std::optional<double> bandwidth = std::nullopt);

// Linear-interpolation quantile of sorted data, q in [0, 1].
double SortedQuantile(std::span<const double> sorted, double q);

// Top-1 minus top-2 confidence of each row of an n x C matrix, C >= 2.
absl::StatusOr<std::vector<double>> ConfidenceMargin(
    const RealMatrix& confidences);

}  // namespace mia

#endif  // MIA_KDE_H_
