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

#ifndef MIA_TYPES_H_
#define MIA_TYPES_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "mia/matrix.h"

namespace mia {

// Binary membership labels: 1 = member of the target training set.
struct GroundTruth {
  std::vector<uint8_t> labels;

  size_t size() const { return labels.size(); }
  size_t num_members() const;
  size_t num_nonmembers() const { return size() - num_members(); }
  bool is_member(size_t i) const { return labels[i] != 0; }

  bool operator==(const GroundTruth&) const = default;
};

// Real-valued membership scores of one attack. Row i holds the scores that
// instance `seed_labels[i]` assigned to every target sample. Higher scores
// mean "more likely a member".
struct ScoreMatrix {
  std::string attack_name;
  RealMatrix values;
  std::vector<std::string> seed_labels;

  size_t num_instances() const { return values.rows(); }
  size_t num_samples() const { return values.cols(); }

  bool operator==(const ScoreMatrix&) const = default;
};

// Binary predictions obtained by calibrating each row of a ScoreMatrix to a
// common target false positive rate.
struct PredictionMatrix {
  std::string attack_name;
  BinaryMatrix values;
  double target_fpr = 0.0;
  std::vector<double> achieved_fpr;

  size_t num_instances() const { return values.rows(); }
  size_t num_samples() const { return values.cols(); }
};

// Strictly increasing set of sample indices drawn from [0, universe_size).
class SampleSet {
 public:
  SampleSet() = default;
  explicit SampleSet(size_t universe_size) : universe_size_(universe_size) {}

  // Fails if `indices` is not strictly increasing or exceeds the universe.
  static absl::StatusOr<SampleSet> Create(std::vector<size_t> indices,
                                          size_t universe_size);
  // Sorts and de-duplicates. Out-of-range indices are an error.
  static absl::StatusOr<SampleSet> FromUnsorted(std::vector<size_t> indices,
                                                size_t universe_size);
  static SampleSet FromMask(std::span<const uint8_t> mask);

  const std::vector<size_t>& indices() const { return indices_; }
  size_t universe_size() const { return universe_size_; }
  size_t size() const { return indices_.size(); }
  bool empty() const { return indices_.empty(); }
  bool contains(size_t index) const;

  std::vector<uint8_t> ToMask() const;

  // Set algebra. Both operands must share the universe.
  SampleSet Union(const SampleSet& other) const;
  SampleSet Intersection(const SampleSet& other) const;
  SampleSet Difference(const SampleSet& other) const;
  size_t IntersectionSize(const SampleSet& other) const;
  bool IsSubsetOf(const SampleSet& other) const;

  bool operator==(const SampleSet&) const = default;

 private:
  size_t universe_size_ = 0;
  std::vector<size_t> indices_;
};

// A complete experiment: labels, per-attack score matrices and the raw
// signals (losses, confidences, logits) that scorers consume. Signal matrices
// use one row per shadow model or feature and one column per sample.
struct ExperimentBundle {
  GroundTruth ground_truth;
  std::map<std::string, ScoreMatrix> attacks;
  std::map<std::string, RealMatrix> signals;
  std::optional<std::vector<uint8_t>> canary_mask;
  std::map<std::string, std::string> metadata;

  size_t num_samples() const { return ground_truth.size(); }
  std::vector<std::string> attack_names() const;
  absl::StatusOr<const ScoreMatrix*> FindAttack(const std::string& name) const;
  const RealMatrix* FindSignal(const std::string& name) const;

  bool operator==(const ExperimentBundle&) const = default;
};

}  // namespace mia

#endif  // MIA_TYPES_H_
