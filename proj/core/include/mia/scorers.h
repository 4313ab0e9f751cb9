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

#ifndef MIA_SCORERS_H_
#define MIA_SCORERS_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "mia/types.h"

namespace mia {

// Bundle signal names. Per-instance shadow signals carry a "/<seed>" suffix,
// e.g. "shadow_in_losses/3"; unsuffixed names describe a single instance.
inline constexpr char kTargetLoss[] = "target_loss";
inline constexpr char kTargetConfidence[] = "target_confidence";
inline constexpr char kTargetLogits[] = "target_logits";
inline constexpr char kShadowLoss[] = "shadow_loss";
inline constexpr char kShadowInLosses[] = "shadow_in_losses";
inline constexpr char kShadowOutLosses[] = "shadow_out_losses";
inline constexpr char kShadowConfidences[] = "shadow_confidences";

// Model outputs for one attack instance. Ragged arrays hold one list per
// sample (one entry per shadow model) and are empty when absent.
struct SignalSet {
  std::vector<double> target_loss;
  std::optional<std::vector<double>> shadow_loss;
  std::vector<std::vector<double>> shadow_in_losses;
  std::vector<std::vector<double>> shadow_out_losses;
  std::vector<std::vector<double>> shadow_confidences;
  std::optional<std::vector<double>> target_confidence;

  size_t num_samples() const { return target_loss.size(); }
};

// (x - min) / (max - min); all values map to 0.5 when max == min.
std::vector<double> MinMaxNormalize(std::span<const double> values);

struct LossScores {
  std::vector<double> scores;  // 1 - normalized loss
  double threshold = 0.0;      // mean loss, in score space
  double raw_threshold = 0.0;  // mean loss
};

// Global-threshold loss attack: a sample is a member when its loss is below
// the mean loss, i.e. when its score is strictly above `threshold`.
absl::StatusOr<LossScores> LossScorer(const SignalSet& signals);

// 1[score > threshold].
std::vector<uint8_t> PredictAbove(std::span<const double> scores,
                                  double threshold);

// Difficulty calibration: 1 - normalized (target_loss - shadow_loss).
absl::StatusOr<std::vector<double>> CalibrationScorer(const SignalSet& signals);

// Best-accuracy threshold (predict member iff score >= tau) among 1,000
// evenly spaced candidates over [min, max] of the auxiliary scores. Ties go
// to the smallest candidate; a degenerate range returns min.
absl::StatusOr<double> CalibrationThreshold(std::span<const double> aux_scores,
                                            const GroundTruth& aux_gt);

enum class VarianceMode {
  kPerSample,  // sigma fitted per sample and side
  kGlobal,     // sigma pooled over all samples, per side
};

inline constexpr double kLiraSigmaFloor = 1e-8;

// Gaussian likelihood ratio log N(l; mu_in, s_in) - log N(l; mu_out, s_out) of
// the target loss under the in/out shadow-loss fits.
absl::StatusOr<std::vector<double>> LiraScorer(const SignalSet& signals,
                                               VarianceMode mode);

// Fraction of shadow models whose confidence does not exceed the target
// model's confidence.
absl::StatusOr<std::vector<double>> ReferenceScorer(const SignalSet& signals);

// Instance labels discovered from suffixed shadow signals, in numeric order
// when all labels are integers. Empty when only unsuffixed signals exist.
std::vector<std::string> SignalInstances(const ExperimentBundle& bundle);

// Assembles the SignalSet of one instance ("" for unsuffixed signals).
absl::StatusOr<SignalSet> SignalsForInstance(const ExperimentBundle& bundle,
                                             const std::string& instance);

struct ScoringOptions {
  VarianceMode lira_variance = VarianceMode::kPerSample;
  // Subset of {"loss", "calibration", "lira", "reference"}. Empty means every
  // scorer whose signals are present; named scorers must have their signals.
  std::vector<std::string> scorers;
};

// Adds one ScoreMatrix per scorer, one row per signal instance.
absl::StatusOr<ExperimentBundle> ScoreBundle(const ExperimentBundle& bundle,
                                             const ScoringOptions& options);

}  // namespace mia

#endif  // MIA_SCORERS_H_
