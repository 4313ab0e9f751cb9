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

#ifndef MIA_ENSEMBLE_H_
#define MIA_ENSEMBLE_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "mia/matrix.h"
#include "mia/metrics.h"
#include "mia/types.h"

namespace mia {

enum class EnsembleStrategy {
  kStability,  // all instances agree (conjunction)
  kCoverage,   // any instance (disjunction)
  kMajority,   // strictly more than half of the instances
};

const char* ToString(EnsembleStrategy strategy);
absl::StatusOr<EnsembleStrategy> ParseStrategy(std::string_view name);

// `count` points evenly spaced in log10 between lo and hi inclusive.
std::vector<double> LogSpacedGrid(double lo, double hi, size_t count);

// 100 log-spaced instance FPRs in [1e-6, 1].
std::vector<double> DefaultFprGrid();

struct EnsembleSpec {
  EnsembleStrategy strategy = EnsembleStrategy::kStability;
  std::vector<std::string> attacks;
  size_t num_instances = 1;
  std::vector<double> fpr_grid = DefaultFprGrid();
};

// Checks an EnsembleSpec in isolation. Even-sized majority votes are legal but
// produce a warning, since ties resolve to non-member.
absl::Status ValidateSpec(const EnsembleSpec& spec,
                          std::vector<std::string>* warnings = nullptr);

// Per-sample combination of one attack's instance rows.
std::vector<uint8_t> MultiInstanceCombine(const BinaryMatrix& predictions,
                                          EnsembleStrategy strategy);

// Element-wise disjunction across attacks.
absl::StatusOr<std::vector<uint8_t>> MultiAttackUnion(
    std::span<const std::vector<uint8_t>> per_attack);

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;

  bool operator==(const RocPoint&) const = default;
};

struct SweepPoint {
  double beta = 0.0;  // FPR every base instance was calibrated to
  double fpr = 0.0;   // achieved by the ensemble
  double tpr = 0.0;
  size_t false_positives = 0;
  size_t true_positives = 0;
};

struct EnsembleSweep {
  EnsembleStrategy strategy = EnsembleStrategy::kStability;
  // Every grid point, sorted by (fpr, tpr, beta).
  std::vector<SweepPoint> points;
  // Pareto upper envelope of the points plus (0,0) and (1,1) anchors; it
  // always ends at (1,1).
  std::vector<RocPoint> envelope;
  double envelope_auc = 0.0;
  // Trapezoid over every point plus anchors.
  double raw_auc = 0.0;
  std::vector<std::string> warnings;
};

// Thresholds every base instance of the named attacks at a common FPR and
// combines them. Calibrations are computed once and reused across FPRs.
class EnsembleEvaluator {
 public:
  static absl::StatusOr<EnsembleEvaluator> Create(
      const ExperimentBundle& bundle, const std::vector<std::string>& attacks,
      size_t num_instances);

  // Instance predictions of attack `a` at `beta`, one row per instance.
  absl::StatusOr<BinaryMatrix> InstancePredictions(size_t attack,
                                                   double beta) const;
  // Multi-instance step followed by the multi-attack union.
  absl::StatusOr<std::vector<uint8_t>> Predict(EnsembleStrategy strategy,
                                               double beta) const;
  // Same at `beta` for every strategy, sharing the calibrations.
  absl::StatusOr<std::vector<std::vector<uint8_t>>> PredictAll(
      std::span<const EnsembleStrategy> strategies, double beta) const;

  size_t num_attacks() const { return calibrators_.size(); }
  const GroundTruth& ground_truth() const { return gt_; }

 private:
  EnsembleEvaluator() = default;

  GroundTruth gt_;
  size_t num_samples_ = 0;
  // calibrators_[attack][instance]
  std::vector<std::vector<FprCalibrator>> calibrators_;
};

absl::StatusOr<EnsembleSweep> EnsembleRocSweep(const ExperimentBundle& bundle,
                                               const EnsembleSpec& spec);

// Points not dominated in (lower fpr, higher tpr), sorted by fpr.
std::vector<RocPoint> UpperEnvelope(std::vector<RocPoint> points);

// Trapezoid rule over points sorted by (fpr, tpr).
double TrapezoidAuc(std::vector<RocPoint> points);

// TPR of the envelope at `fpr`, linear between neighbouring points (the same
// curve TrapezoidAuc integrates). 0 left of the first point.
double EnvelopeTprAt(std::span<const RocPoint> envelope, double fpr);

}  // namespace mia

#endif  // MIA_ENSEMBLE_H_
