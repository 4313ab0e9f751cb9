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

#ifndef MIA_DISPARITY_H_
#define MIA_DISPARITY_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "mia/matrix.h"
#include "mia/types.h"

namespace mia {

// Which predicted positives count as "detected members".
enum class DetectionMode {
  kTruePositivesOnly,  // pred = 1 and gt = 1 (default)
  kAllPositives,       // pred = 1
};

// How the instances of one attack are aggregated into a single sample set.
enum class SetBasis {
  kCoverage,        // union over instances
  kStability,       // intersection over instances
  kSingleInstance,  // first instance only
};

const char* ToString(DetectionMode mode);
const char* ToString(SetBasis basis);

// |a ∩ b| / |a ∪ b|, with J(∅, ∅) = 1.
absl::StatusOr<double> Jaccard(const SampleSet& a, const SampleSet& b);

absl::StatusOr<SampleSet> DetectedMembers(std::span<const uint8_t> predictions,
                                          const GroundTruth& gt,
                                          DetectionMode mode);

// Mean pairwise Jaccard similarity of the instances' detected-member sets.
// Requires at least two instances.
absl::StatusOr<double> Consistency(
    const PredictionMatrix& pm, const GroundTruth& gt,
    DetectionMode mode = DetectionMode::kTruePositivesOnly);

// Union of detected members over all instances.
absl::StatusOr<SampleSet> CoverageSet(
    const PredictionMatrix& pm, const GroundTruth& gt,
    DetectionMode mode = DetectionMode::kTruePositivesOnly);

// Intersection of detected members over all instances.
absl::StatusOr<SampleSet> StabilitySet(
    const PredictionMatrix& pm, const GroundTruth& gt,
    DetectionMode mode = DetectionMode::kTruePositivesOnly);

struct ConvergencePoint {
  size_t k = 0;  // number of aggregated instances
  double tpr = 0.0;
  double fpr = 0.0;
  std::optional<double> precision;
  size_t set_size = 0;
};

struct ConvergenceCurve {
  std::vector<ConvergencePoint> coverage;
  std::vector<ConvergencePoint> stability;
};

// Coverage and stability metrics of every prefix of `instance_order` (the
// ingestion order when empty). FPR and precision always use all predicted
// positives; `mode` only affects set_size.
absl::StatusOr<ConvergenceCurve> ConvergenceCurves(
    const PredictionMatrix& pm, const GroundTruth& gt, DetectionMode mode,
    std::span<const size_t> instance_order = {});

// Seeded permutation of [0, n), for averaging curves over instance orders.
std::vector<size_t> ShuffledInstanceOrder(size_t n, uint64_t seed);

struct SetOptions {
  double beta = 0.1;
  // Leading instances to use; all when unset.
  std::optional<size_t> num_instances;
  DetectionMode mode = DetectionMode::kTruePositivesOnly;
};

// Calibrates each instance of `attack` at options.beta and aggregates the
// detected members according to `basis`.
absl::StatusOr<SampleSet> AttackSampleSet(const ExperimentBundle& bundle,
                                          const std::string& attack,
                                          SetBasis basis,
                                          const SetOptions& options);

struct SimilarityMatrix {
  std::vector<std::string> attack_names;
  RealMatrix values;
  SetBasis basis = SetBasis::kCoverage;
};

// Pairwise Jaccard similarity between the aggregated sets of `attacks` (all
// bundle attacks when empty).
absl::StatusOr<SimilarityMatrix> MethodSimilarity(
    const ExperimentBundle& bundle, SetBasis basis, const SetOptions& options,
    std::vector<std::string> attacks = {});

// Mean of the strictly upper triangle; 1 for a single attack.
double MeanOffDiagonal(const SimilarityMatrix& similarity);

// Members in `attack`'s aggregated set that no other attack's set contains.
// `others` defaults to every other attack in the bundle.
absl::StatusOr<SampleSet> UniqueSamples(
    const ExperimentBundle& bundle, const std::string& attack,
    const SetOptions& options, SetBasis basis = SetBasis::kStability,
    std::vector<std::string> others = {});

// Members identified by `attack`'s coverage.
absl::StatusOr<SampleSet> CoveredSamples(const ExperimentBundle& bundle,
                                         const std::string& attack,
                                         const SetOptions& options);

}  // namespace mia

#endif  // MIA_DISPARITY_H_
