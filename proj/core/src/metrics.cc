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
#include "mia/metrics.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "absl/strings/str_cat.h"
#include "mia/status_macros.h"
#include "mia/validate.h"

namespace mia {
namespace {

absl::Status CheckBeta(double beta) {
  if (!(beta >= 0.0 && beta <= 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("target FPR must lie in [0, 1], got ", beta));
  }
  return absl::OkStatus();
}

double SentinelAbove(double max_score) {
  double sentinel = max_score + 1.0;
  if (!(sentinel > max_score)) {
    sentinel = std::nextafter(max_score, std::numeric_limits<double>::infinity());
  }
  return sentinel;
}

FprThreshold ApplyThreshold(std::span<const uint8_t> labels,
                            std::span<const double> scores,
                            const RocCurve& roc, size_t index) {
  FprThreshold out;
  out.roc_index = index;
  out.threshold = roc.thresholds[index];
  out.predictions.resize(scores.size());
  size_t fp = 0;
  size_t tp = 0;
  for (size_t i = 0; i < scores.size(); ++i) {
    const uint8_t pred = scores[i] >= out.threshold ? 1 : 0;
    out.predictions[i] = pred;
    if (pred) (labels[i] ? tp : fp)++;
  }
  out.achieved_fpr =
      static_cast<double>(fp) / static_cast<double>(roc.num_negatives);
  out.achieved_tpr =
      static_cast<double>(tp) / static_cast<double>(roc.num_positives);
  return out;
}

}  // namespace

absl::StatusOr<RocCurve> ComputeRoc(const GroundTruth& gt,
                                    std::span<const double> scores) {
  RETURN_IF_ERROR(CheckGroundTruth(gt));
  RETURN_IF_ERROR(CheckScores(gt, scores));

  std::vector<size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t a, size_t b) { return scores[a] > scores[b]; });

  RocCurve roc;
  roc.num_positives = gt.num_members();
  roc.num_negatives = gt.size() - roc.num_positives;
  const double pos = static_cast<double>(roc.num_positives);
  const double neg = static_cast<double>(roc.num_negatives);

  auto push = [&](double threshold, size_t fp, size_t tp) {
    if (!roc.fprs.empty() && roc.false_positives.back() == fp &&
        roc.true_positives.back() == tp) {
      return;
    }
    roc.thresholds.push_back(threshold);
    roc.false_positives.push_back(fp);
    roc.true_positives.push_back(tp);
    roc.fprs.push_back(static_cast<double>(fp) / neg);
    roc.tprs.push_back(static_cast<double>(tp) / pos);
  };

  push(SentinelAbove(scores[order.front()]), 0, 0);
  size_t fp = 0;
  size_t tp = 0;
  for (size_t k = 0; k < order.size();) {
    const double value = scores[order[k]];
    // All samples sharing a score cross the threshold together.
    while (k < order.size() && scores[order[k]] == value) {
      (gt.is_member(order[k]) ? tp : fp)++;
      ++k;
    }
    push(value, fp, tp);
  }
  return roc;
}

size_t SelectRocIndex(const RocCurve& roc, double beta) {
  size_t best = 0;
  double best_distance = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < roc.size(); ++i) {
    const double distance = std::abs(roc.fprs[i] - beta);
    if (distance < best_distance) {
      best_distance = distance;
      best = i;
    }
  }
  while (best + 1 < roc.size() &&
         roc.false_positives[best + 1] == roc.false_positives[best]) {
    ++best;
  }
  return best;
}

absl::StatusOr<FprThreshold> AdjustFpr(const GroundTruth& gt,
                                       std::span<const double> scores,
                                       double beta) {
  RETURN_IF_ERROR(CheckBeta(beta));
  ASSIGN_OR_RETURN(RocCurve roc, ComputeRoc(gt, scores));
  return ApplyThreshold(gt.labels, scores, roc, SelectRocIndex(roc, beta));
}

absl::StatusOr<FprCalibrator> FprCalibrator::Create(
    const GroundTruth& gt, std::span<const double> scores) {
  ASSIGN_OR_RETURN(RocCurve roc, ComputeRoc(gt, scores));
  return FprCalibrator(gt.labels,
                       std::vector<double>(scores.begin(), scores.end()),
                       std::move(roc));
}

absl::StatusOr<FprThreshold> FprCalibrator::Calibrate(double beta) const {
  RETURN_IF_ERROR(CheckBeta(beta));
  return ApplyThreshold(labels_, scores_, roc_, SelectRocIndex(roc_, beta));
}

double Auc(const RocCurve& roc) {
  if (roc.size() < 2 || roc.num_positives == 0 || roc.num_negatives == 0) {
    return 0.0;
  }
  // Integer trapezoids: twice the area in units of 1 / (P * N).
  unsigned long long doubled = 0;
  for (size_t i = 1; i < roc.size(); ++i) {
    const unsigned long long dfp =
        roc.false_positives[i] - roc.false_positives[i - 1];
    doubled += dfp * (roc.true_positives[i] + roc.true_positives[i - 1]);
  }
  return static_cast<double>(doubled) /
         (2.0 * static_cast<double>(roc.num_positives) *
          static_cast<double>(roc.num_negatives));
}

ConfusionCounts CountConfusion(const GroundTruth& gt,
                               std::span<const uint8_t> predictions) {
  ConfusionCounts c;
  for (size_t i = 0; i < predictions.size(); ++i) {
    const bool member = gt.is_member(i);
    if (predictions[i]) {
      (member ? c.true_positives : c.false_positives)++;
    } else {
      (member ? c.false_negatives : c.true_negatives)++;
    }
  }
  return c;
}

absl::StatusOr<double> BalancedAccuracy(const GroundTruth& gt,
                                        std::span<const uint8_t> predictions) {
  RETURN_IF_ERROR(CheckGroundTruth(gt));
  RETURN_IF_ERROR(CheckPredictions(gt, predictions));
  const ConfusionCounts c = CountConfusion(gt, predictions);
  const double tpr = static_cast<double>(c.true_positives) /
                     static_cast<double>(c.true_positives + c.false_negatives);
  const double tnr = static_cast<double>(c.true_negatives) /
                     static_cast<double>(c.true_negatives + c.false_positives);
  return (tpr + tnr) / 2.0;
}

absl::StatusOr<double> TprAtFpr(const GroundTruth& gt,
                                std::span<const double> scores, double beta) {
  ASSIGN_OR_RETURN(FprThreshold t, AdjustFpr(gt, scores, beta));
  return t.achieved_tpr;
}

absl::StatusOr<std::optional<double>> Precision(
    const GroundTruth& gt, std::span<const uint8_t> predictions) {
  RETURN_IF_ERROR(CheckPredictions(gt, predictions));
  const ConfusionCounts c = CountConfusion(gt, predictions);
  const size_t positives = c.true_positives + c.false_positives;
  if (positives == 0) return std::optional<double>();
  return std::optional<double>(static_cast<double>(c.true_positives) /
                               static_cast<double>(positives));
}

absl::StatusOr<PredictionMatrix> CalibratePredictions(
    const ScoreMatrix& scores, const GroundTruth& gt, double beta,
    std::optional<size_t> num_instances) {
  const size_t rows = num_instances.value_or(scores.num_instances());
  if (rows > scores.num_instances()) {
    return absl::InvalidArgumentError(
        absl::StrCat("attack ", scores.attack_name, " has ",
                     scores.num_instances(), " instances, ", rows,
                     " requested"));
  }
  PredictionMatrix pm;
  pm.attack_name = scores.attack_name;
  pm.target_fpr = beta;
  pm.values = BinaryMatrix(rows, scores.num_samples());
  pm.achieved_fpr.reserve(rows);
  for (size_t r = 0; r < rows; ++r) {
    ASSIGN_OR_RETURN(FprThreshold t, AdjustFpr(gt, scores.values.row(r), beta));
    std::copy(t.predictions.begin(), t.predictions.end(),
              pm.values.row(r).begin());
    pm.achieved_fpr.push_back(t.achieved_fpr);
  }
  return pm;
}

}  // namespace mia
