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
#include "mia/ensemble.h"

#include <algorithm>
#include <cmath>

#include "absl/strings/str_cat.h"
#include "mia/metrics.h"
#include "mia/status_macros.h"
#include "mia/validate.h"

namespace mia {

const char* ToString(EnsembleStrategy strategy) {
  switch (strategy) {
    case EnsembleStrategy::kStability:
      return "stability";
    case EnsembleStrategy::kCoverage:
      return "coverage";
    case EnsembleStrategy::kMajority:
      return "majority";
  }
  return "unknown";
}

absl::StatusOr<EnsembleStrategy> ParseStrategy(std::string_view name) {
  if (name == "stability") return EnsembleStrategy::kStability;
  if (name == "coverage") return EnsembleStrategy::kCoverage;
  if (name == "majority") return EnsembleStrategy::kMajority;
  return absl::InvalidArgumentError(
      absl::StrCat("unknown ensemble strategy '", std::string(name), "'"));
}

std::vector<double> LogSpacedGrid(double lo, double hi, size_t count) {
  std::vector<double> grid;
  if (count == 0) return grid;
  if (count == 1) return {hi};
  const double a = std::log10(lo);
  const double b = std::log10(hi);
  grid.reserve(count);
  for (size_t i = 0; i < count; ++i) {
    grid.push_back(
        std::pow(10.0, a + (b - a) * static_cast<double>(i) /
                               static_cast<double>(count - 1)));
  }
  // Pin the endpoints exactly.
  grid.front() = lo;
  grid.back() = hi;
  return grid;
}

std::vector<double> DefaultFprGrid() { return LogSpacedGrid(1e-6, 1.0, 100); }

absl::Status ValidateSpec(const EnsembleSpec& spec,
                          std::vector<std::string>* warnings) {
  if (spec.attacks.empty()) {
    return absl::InvalidArgumentError("ensemble needs at least one attack");
  }
  if (spec.num_instances < 1) {
    return absl::InvalidArgumentError("n_instances must be at least 1");
  }
  if (spec.fpr_grid.empty()) {
    return absl::InvalidArgumentError("fpr_grid is empty");
  }
  for (size_t i = 0; i < spec.fpr_grid.size(); ++i) {
    const double b = spec.fpr_grid[i];
    if (!(b > 0.0 && b <= 1.0)) {
      return absl::InvalidArgumentError(
          absl::StrCat("fpr_grid[", i, "] = ", b, " is outside (0, 1]"));
    }
    if (i > 0 && !(b > spec.fpr_grid[i - 1])) {
      return absl::InvalidArgumentError("fpr_grid must be strictly increasing");
    }
  }
  if (spec.strategy == EnsembleStrategy::kMajority &&
      spec.num_instances % 2 == 0 && warnings != nullptr) {
    warnings->push_back(absl::StrCat(
        "majority vote over an even number of instances (", spec.num_instances,
        "); ties resolve to non-member"));
  }
  return absl::OkStatus();
}

std::vector<uint8_t> MultiInstanceCombine(const BinaryMatrix& predictions,
                                          EnsembleStrategy strategy) {
  const size_t n = predictions.rows();
  std::vector<uint8_t> out(predictions.cols(), 0);
  for (size_t c = 0; c < predictions.cols(); ++c) {
    size_t votes = 0;
    for (size_t r = 0; r < n; ++r) votes += predictions(r, c) ? 1 : 0;
    bool member = false;
    switch (strategy) {
      case EnsembleStrategy::kStability:
        member = n > 0 && votes == n;
        break;
      case EnsembleStrategy::kCoverage:
        member = votes > 0;
        break;
      case EnsembleStrategy::kMajority:
        member = 2 * votes > n;
        break;
    }
    out[c] = member ? 1 : 0;
  }
  return out;
}

absl::StatusOr<std::vector<uint8_t>> MultiAttackUnion(
    std::span<const std::vector<uint8_t>> per_attack) {
  if (per_attack.empty()) {
    return absl::InvalidArgumentError("no attack predictions to combine");
  }
  std::vector<uint8_t> out(per_attack.front().size(), 0);
  for (size_t a = 0; a < per_attack.size(); ++a) {
    if (per_attack[a].size() != out.size()) {
      return absl::InvalidArgumentError(
          absl::StrCat("length mismatch: attack 0 has ", out.size(),
                       " predictions, attack ", a, " has ",
                       per_attack[a].size()));
    }
    for (size_t c = 0; c < out.size(); ++c) out[c] |= per_attack[a][c] ? 1 : 0;
  }
  return out;
}

absl::StatusOr<EnsembleEvaluator> EnsembleEvaluator::Create(
    const ExperimentBundle& bundle, const std::vector<std::string>& attacks,
    size_t num_instances) {
  RETURN_IF_ERROR(CheckGroundTruth(bundle.ground_truth));
  if (attacks.empty()) {
    return absl::InvalidArgumentError("ensemble needs at least one attack");
  }
  if (num_instances == 0) {
    return absl::InvalidArgumentError("n_instances must be at least 1");
  }
  EnsembleEvaluator eval;
  eval.gt_ = bundle.ground_truth;
  eval.num_samples_ = bundle.num_samples();
  for (const auto& name : attacks) {
    ASSIGN_OR_RETURN(const ScoreMatrix* scores, bundle.FindAttack(name));
    if (scores->num_instances() < num_instances) {
      return absl::InvalidArgumentError(
          absl::StrCat("insufficient instances for attack ", name, ": has ",
                       scores->num_instances(), ", needs ", num_instances));
    }
    std::vector<FprCalibrator> row;
    row.reserve(num_instances);
    for (size_t i = 0; i < num_instances; ++i) {
      ASSIGN_OR_RETURN(FprCalibrator cal,
                       FprCalibrator::Create(bundle.ground_truth,
                                             scores->values.row(i)));
      row.push_back(std::move(cal));
    }
    eval.calibrators_.push_back(std::move(row));
  }
  return eval;
}

absl::StatusOr<BinaryMatrix> EnsembleEvaluator::InstancePredictions(
    size_t attack, double beta) const {
  if (attack >= calibrators_.size()) {
    return absl::OutOfRangeError("attack index out of range");
  }
  const auto& row = calibrators_[attack];
  BinaryMatrix preds(row.size(), num_samples_);
  for (size_t i = 0; i < row.size(); ++i) {
    ASSIGN_OR_RETURN(FprThreshold t, row[i].Calibrate(beta));
    std::copy(t.predictions.begin(), t.predictions.end(),
              preds.row(i).begin());
  }
  return preds;
}

absl::StatusOr<std::vector<std::vector<uint8_t>>> EnsembleEvaluator::PredictAll(
    std::span<const EnsembleStrategy> strategies, double beta) const {
  std::vector<std::vector<std::vector<uint8_t>>> per_strategy(strategies.size());
  for (size_t a = 0; a < calibrators_.size(); ++a) {
    ASSIGN_OR_RETURN(BinaryMatrix preds, InstancePredictions(a, beta));
    for (size_t s = 0; s < strategies.size(); ++s) {
      per_strategy[s].push_back(MultiInstanceCombine(preds, strategies[s]));
    }
  }
  std::vector<std::vector<uint8_t>> out;
  out.reserve(strategies.size());
  for (const auto& combined : per_strategy) {
    ASSIGN_OR_RETURN(std::vector<uint8_t> u, MultiAttackUnion(combined));
    out.push_back(std::move(u));
  }
  return out;
}

absl::StatusOr<std::vector<uint8_t>> EnsembleEvaluator::Predict(
    EnsembleStrategy strategy, double beta) const {
  const EnsembleStrategy one[] = {strategy};
  ASSIGN_OR_RETURN(auto all, PredictAll(one, beta));
  return std::move(all.front());
}

std::vector<RocPoint> UpperEnvelope(std::vector<RocPoint> points) {
  std::sort(points.begin(), points.end(), [](const RocPoint& a, const RocPoint& b) {
    return a.fpr != b.fpr ? a.fpr < b.fpr : a.tpr > b.tpr;
  });
  std::vector<RocPoint> out;
  for (const RocPoint& p : points) {
    if (out.empty() || p.tpr > out.back().tpr) out.push_back(p);
  }
  return out;
}

double TrapezoidAuc(std::vector<RocPoint> points) {
  std::sort(points.begin(), points.end(), [](const RocPoint& a, const RocPoint& b) {
    return a.fpr != b.fpr ? a.fpr < b.fpr : a.tpr < b.tpr;
  });
  double area = 0.0;
  for (size_t i = 1; i < points.size(); ++i) {
    area += (points[i].fpr - points[i - 1].fpr) *
            (points[i].tpr + points[i - 1].tpr) / 2.0;
  }
  return area;
}

double EnvelopeTprAt(std::span<const RocPoint> envelope, double fpr) {
  if (envelope.empty() || fpr < envelope.front().fpr) return 0.0;
  for (size_t i = 1; i < envelope.size(); ++i) {
    const RocPoint& a = envelope[i - 1];
    const RocPoint& b = envelope[i];
    if (fpr > b.fpr) continue;
    if (b.fpr == a.fpr) return b.tpr;
    return a.tpr + (fpr - a.fpr) / (b.fpr - a.fpr) * (b.tpr - a.tpr);
  }
  return envelope.back().tpr;
}

absl::StatusOr<EnsembleSweep> EnsembleRocSweep(const ExperimentBundle& bundle,
                                               const EnsembleSpec& spec) {
  EnsembleSweep sweep;
  sweep.strategy = spec.strategy;
  RETURN_IF_ERROR(ValidateSpec(spec, &sweep.warnings));
  ASSIGN_OR_RETURN(EnsembleEvaluator eval,
                   EnsembleEvaluator::Create(bundle, spec.attacks,
                                             spec.num_instances));
  const GroundTruth& gt = bundle.ground_truth;
  const double members = static_cast<double>(gt.num_members());
  const double nonmembers = static_cast<double>(gt.num_nonmembers());

  for (double beta : spec.fpr_grid) {
    ASSIGN_OR_RETURN(std::vector<uint8_t> preds,
                     eval.Predict(spec.strategy, beta));
    const ConfusionCounts c = CountConfusion(gt, preds);
    SweepPoint p;
    p.beta = beta;
    p.false_positives = c.false_positives;
    p.true_positives = c.true_positives;
    p.fpr = static_cast<double>(c.false_positives) / nonmembers;
    p.tpr = static_cast<double>(c.true_positives) / members;
    sweep.points.push_back(p);
  }
  std::stable_sort(sweep.points.begin(), sweep.points.end(),
                   [](const SweepPoint& a, const SweepPoint& b) {
                     return a.fpr != b.fpr ? a.fpr < b.fpr : a.tpr < b.tpr;
                   });

  std::vector<RocPoint> curve = {{0.0, 0.0}};
  for (const auto& p : sweep.points) curve.push_back({p.fpr, p.tpr});
  curve.push_back({1.0, 1.0});
  sweep.raw_auc = TrapezoidAuc(curve);
  sweep.envelope = UpperEnvelope(curve);
  // (1,1) is weakly dominated once some point reaches TPR 1, but the curve
  // still has to end there.
  if (sweep.envelope.back().fpr < 1.0) sweep.envelope.push_back({1.0, 1.0});
  sweep.envelope_auc = TrapezoidAuc(sweep.envelope);
  return sweep;
}

}  // namespace mia
