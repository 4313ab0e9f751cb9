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

#ifndef MIA_METRICS_H_
#define MIA_METRICS_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "mia/types.h"

namespace mia {

// Empirical ROC with one point per distinct score value (rule: member iff
// score >= threshold), preceded by a (0, 0) point whose threshold lies above
// every score. Counts are kept alongside the rates so callers can compare
// FPRs exactly.
struct RocCurve {
  std::vector<double> fprs;
  std::vector<double> tprs;
  std::vector<double> thresholds;  // strictly decreasing
  std::vector<size_t> false_positives;
  std::vector<size_t> true_positives;
  size_t num_positives = 0;
  size_t num_negatives = 0;

  size_t size() const { return fprs.size(); }
};

absl::StatusOr<RocCurve> ComputeRoc(const GroundTruth& gt,
                                    std::span<const double> scores);

// Index of the ROC point whose FPR is closest to `beta`. When several FPR
// values are equally close the lower one wins; among points sharing that FPR
// the one with the highest TPR (lowest threshold) is returned.
size_t SelectRocIndex(const RocCurve& roc, double beta);

// Membership predictions calibrated to a target false positive rate.
struct FprThreshold {
  std::vector<uint8_t> predictions;
  double threshold = 0.0;
  double achieved_fpr = 0.0;
  double achieved_tpr = 0.0;
  size_t roc_index = 0;
};

absl::StatusOr<FprThreshold> AdjustFpr(const GroundTruth& gt,
                                       std::span<const double> scores,
                                       double beta);

// Caches the ROC of one score vector so it can be thresholded at many FPR
// targets without re-sorting.
class FprCalibrator {
 public:
  static absl::StatusOr<FprCalibrator> Create(const GroundTruth& gt,
                                              std::span<const double> scores);

  absl::StatusOr<FprThreshold> Calibrate(double beta) const;
  const RocCurve& roc() const { return roc_; }

 private:
  FprCalibrator(std::vector<uint8_t> labels, std::vector<double> scores,
                RocCurve roc)
      : labels_(std::move(labels)),
        scores_(std::move(scores)),
        roc_(std::move(roc)) {}

  std::vector<uint8_t> labels_;
  std::vector<double> scores_;
  RocCurve roc_;
};

// Trapezoidal area under the curve.
double Auc(const RocCurve& roc);

// (TPR + TNR) / 2.
absl::StatusOr<double> BalancedAccuracy(const GroundTruth& gt,
                                        std::span<const uint8_t> predictions);

absl::StatusOr<double> TprAtFpr(const GroundTruth& gt,
                                std::span<const double> scores, double beta);

// TP / (TP + FP); std::nullopt when nothing is predicted positive.
absl::StatusOr<std::optional<double>> Precision(
    const GroundTruth& gt, std::span<const uint8_t> predictions);

struct ConfusionCounts {
  size_t true_positives = 0;
  size_t false_positives = 0;
  size_t true_negatives = 0;
  size_t false_negatives = 0;
};
ConfusionCounts CountConfusion(const GroundTruth& gt,
                               std::span<const uint8_t> predictions);

// Thresholds the first `num_instances` rows (all rows when unset) of `scores`
// at the same target FPR, one calibration per row.
absl::StatusOr<PredictionMatrix> CalibratePredictions(
    const ScoreMatrix& scores, const GroundTruth& gt, double beta,
    std::optional<size_t> num_instances = std::nullopt);

}  // namespace mia

#endif  // MIA_METRICS_H_
