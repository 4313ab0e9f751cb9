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
#include "mia/validate.h"

#include <cmath>
#include <set>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"

namespace mia {
namespace {

void Add(ValidationReport& report, std::string type, std::string field,
         std::string message, std::optional<size_t> row = std::nullopt,
         std::optional<size_t> column = std::nullopt) {
  report.violations.push_back(Violation{std::move(type), std::move(field), row,
                                        column, std::move(message)});
}

void ValidateGroundTruth(const GroundTruth& gt, ValidationReport& report) {
  if (gt.labels.empty()) {
    Add(report, "GroundTruth", "labels", "ground truth is empty");
    return;
  }
  for (size_t i = 0; i < gt.size(); ++i) {
    if (gt.labels[i] > 1) {
      Add(report, "GroundTruth", "labels",
          absl::StrCat("label ", int{gt.labels[i]}, " is not 0 or 1"),
          std::nullopt, i);
    }
  }
  const size_t members = gt.num_members();
  if (members == 0 || members == gt.size()) {
    Add(report, "GroundTruth", "labels",
        "degenerate ground truth: both members and non-members are required");
  } else if (members != gt.num_nonmembers()) {
    report.warnings.push_back(absl::StrCat(
        "unbalanced membership prior: ", members, " members vs ",
        gt.num_nonmembers(), " non-members"));
  }
}

void ValidateScoreMatrix(const std::string& key, const ScoreMatrix& m,
                         size_t n_samples, ValidationReport& report) {
  const std::string field = absl::StrCat("attacks[", key, "]");
  if (m.attack_name != key) {
    Add(report, "ScoreMatrix", field + ".attack_name",
        absl::StrCat("attack_name '", m.attack_name, "' differs from key '",
                     key, "'"));
  }
  if (m.num_instances() == 0) {
    Add(report, "ScoreMatrix", field + ".values",
        absl::StrCat("attack ", key, " has no instances"));
  }
  if (m.num_samples() != n_samples) {
    Add(report, "ScoreMatrix", field + ".values",
        absl::StrCat("length mismatch: gt=", n_samples,
                     ", scores=", m.num_samples()));
  }
  for (size_t r = 0; r < m.values.rows(); ++r) {
    for (size_t c = 0; c < m.values.cols(); ++c) {
      if (!std::isfinite(m.values(r, c))) {
        Add(report, "ScoreMatrix", field + ".values",
            absl::StrCat("non-finite score in attack ", key, " at row ", r,
                         ", column ", c),
            r, c);
      }
    }
  }
  if (m.seed_labels.size() != m.num_instances()) {
    Add(report, "ScoreMatrix", field + ".seed_labels",
        absl::StrCat("attack ", key, " has ", m.seed_labels.size(),
                     " seed labels for ", m.num_instances(), " instances"));
  }
  std::set<std::string> seen;
  for (size_t i = 0; i < m.seed_labels.size(); ++i) {
    if (!seen.insert(m.seed_labels[i]).second) {
      Add(report, "ScoreMatrix", field + ".seed_labels",
          absl::StrCat("duplicate seed label '", m.seed_labels[i],
                       "' in attack ", key),
          i);
    }
  }
}

}  // namespace

std::string Violation::ToString() const {
  std::string out = absl::StrCat(type, ".", field);
  if (row.has_value()) absl::StrAppend(&out, " row=", *row);
  if (column.has_value()) absl::StrAppend(&out, " column=", *column);
  absl::StrAppend(&out, ": ", message);
  return out;
}

std::string ValidationReport::ToString() const {
  std::vector<std::string> lines;
  for (const auto& v : violations) lines.push_back("error: " + v.ToString());
  for (const auto& w : warnings) lines.push_back("warning: " + w);
  return absl::StrJoin(lines, "\n");
}

ValidationReport ValidateBundle(const ExperimentBundle& bundle) {
  ValidationReport report;
  ValidateGroundTruth(bundle.ground_truth, report);
  const size_t n = bundle.num_samples();

  for (const auto& [key, matrix] : bundle.attacks) {
    ValidateScoreMatrix(key, matrix, n, report);
  }

  for (const auto& [name, signal] : bundle.signals) {
    const std::string field = absl::StrCat("signals[", name, "]");
    if (signal.cols() != n) {
      Add(report, "ExperimentBundle", field,
          absl::StrCat("length mismatch: gt=", n, ", signal=", signal.cols()));
    }
    // NaN marks an absent entry of a ragged per-sample array; infinities are
    // never meaningful.
    for (size_t r = 0; r < signal.rows(); ++r) {
      for (size_t c = 0; c < signal.cols(); ++c) {
        if (std::isinf(signal(r, c))) {
          Add(report, "ExperimentBundle", field,
              absl::StrCat("infinite value in signal ", name, " at row ", r,
                           ", column ", c),
              r, c);
        }
      }
    }
  }

  if (bundle.canary_mask.has_value()) {
    const auto& mask = *bundle.canary_mask;
    if (mask.size() != n) {
      Add(report, "ExperimentBundle", "canary_mask",
          absl::StrCat("length mismatch: gt=", n, ", canary_mask=",
                       mask.size()));
    } else {
      for (size_t i = 0; i < n; ++i) {
        if (mask[i] > 1) {
          Add(report, "ExperimentBundle", "canary_mask",
              "canary flag is not 0 or 1", std::nullopt, i);
        } else if (mask[i] == 1 && !bundle.ground_truth.is_member(i)) {
          Add(report, "ExperimentBundle", "canary_mask",
              absl::StrCat("sample ", i, " is a canary but not a member"),
              std::nullopt, i);
        }
      }
    }
  }
  return report;
}

absl::Status CheckGroundTruth(const GroundTruth& gt) {
  if (gt.labels.empty()) {
    return absl::InvalidArgumentError("ground truth is empty");
  }
  size_t members = 0;
  for (uint8_t v : gt.labels) {
    if (v > 1) return absl::InvalidArgumentError("labels must be 0 or 1");
    members += v;
  }
  if (members == 0 || members == gt.size()) {
    return absl::InvalidArgumentError("degenerate ground truth");
  }
  return absl::OkStatus();
}

absl::Status CheckScores(const GroundTruth& gt,
                         std::span<const double> scores) {
  if (scores.size() != gt.size()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "length mismatch: gt=", gt.size(), ", scores=", scores.size()));
  }
  for (size_t i = 0; i < scores.size(); ++i) {
    if (!std::isfinite(scores[i])) {
      return absl::InvalidArgumentError(
          absl::StrCat("non-finite score at index ", i));
    }
  }
  return absl::OkStatus();
}

absl::Status CheckPredictions(const GroundTruth& gt,
                              std::span<const uint8_t> predictions) {
  if (predictions.size() != gt.size()) {
    return absl::InvalidArgumentError(
        absl::StrCat("length mismatch: gt=", gt.size(),
                     ", predictions=", predictions.size()));
  }
  for (uint8_t p : predictions) {
    if (p > 1) return absl::InvalidArgumentError("predictions must be 0 or 1");
  }
  return absl::OkStatus();
}

}  // namespace mia
