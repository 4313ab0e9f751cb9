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

#ifndef MIA_VALIDATE_H_
#define MIA_VALIDATE_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "mia/types.h"

namespace mia {

struct Violation {
  std::string type;   // e.g. "ScoreMatrix"
  std::string field;  // e.g. "attacks[lira].values"
  std::optional<size_t> row;
  std::optional<size_t> column;
  std::string message;

  std::string ToString() const;
};

struct ValidationReport {
  std::vector<Violation> violations;
  // Non-fatal observations, e.g. unbalanced member/non-member counts.
  std::vector<std::string> warnings;

  bool ok() const { return violations.empty(); }
  std::string ToString() const;
};

// Checks every invariant of the bundle's data model. Never aborts; an empty
// violation list means the bundle is accepted by all downstream operations.
ValidationReport ValidateBundle(const ExperimentBundle& bundle);

// Precondition shared by ROC-based operations: non-empty 0/1 labels with both
// classes present.
absl::Status CheckGroundTruth(const GroundTruth& gt);

// Scores must be finite and aligned with the labels.
absl::Status CheckScores(const GroundTruth& gt, std::span<const double> scores);

// Binary predictions must be 0/1 and aligned with the labels.
absl::Status CheckPredictions(const GroundTruth& gt,
                              std::span<const uint8_t> predictions);

}  // namespace mia

#endif  // MIA_VALIDATE_H_
