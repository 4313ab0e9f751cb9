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
#include "mia/disparity.h"

#include <algorithm>
#include <numeric>

#include "absl/strings/str_cat.h"
#include "mia/metrics.h"
#include "mia/prng.h"
#include "mia/status_macros.h"
#include "mia/validate.h"

namespace mia {
namespace {

absl::Status CheckMatrix(const PredictionMatrix& pm, const GroundTruth& gt,
                         size_t min_instances) {
  if (pm.num_instances() < min_instances) {
    return absl::InvalidArgumentError(
        absl::StrCat("attack ", pm.attack_name, " needs at least ",
                     min_instances, " instances, has ", pm.num_instances()));
  }
  if (pm.num_samples() != gt.size()) {
    return absl::InvalidArgumentError(
        absl::StrCat("length mismatch: gt=", gt.size(),
                     ", predictions=", pm.num_samples()));
  }
  return absl::OkStatus();
}

bool Detected(uint8_t pred, bool member, DetectionMode mode) {
  return pred && (member || mode == DetectionMode::kAllPositives);
}

std::vector<uint8_t> DetectedMask(std::span<const uint8_t> predictions,
                                  const GroundTruth& gt, DetectionMode mode) {
  std::vector<uint8_t> mask(predictions.size());
  for (size_t i = 0; i < predictions.size(); ++i) {
    mask[i] = Detected(predictions[i], gt.is_member(i), mode) ? 1 : 0;
  }
  return mask;
}

}  // namespace

const char* ToString(DetectionMode mode) {
  return mode == DetectionMode::kTruePositivesOnly ? "tp-only" : "all";
}

const char* ToString(SetBasis basis) {
  switch (basis) {
    case SetBasis::kCoverage:
      return "coverage";
    case SetBasis::kStability:
      return "stability";
    case SetBasis::kSingleInstance:
      return "single-instance";
  }
  return "unknown";
}

absl::StatusOr<double> Jaccard(const SampleSet& a, const SampleSet& b) {
  if (a.universe_size() != b.universe_size()) {
    return absl::InvalidArgumentError(
        absl::StrCat("universe mismatch: ", a.universe_size(), " vs ",
                     b.universe_size()));
  }
  const size_t inter = a.IntersectionSize(b);
  const size_t uni = a.size() + b.size() - inter;
  if (uni == 0) return 1.0;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

absl::StatusOr<SampleSet> DetectedMembers(std::span<const uint8_t> predictions,
                                          const GroundTruth& gt,
                                          DetectionMode mode) {
  RETURN_IF_ERROR(CheckPredictions(gt, predictions));
  return SampleSet::FromMask(DetectedMask(predictions, gt, mode));
}

absl::StatusOr<double> Consistency(const PredictionMatrix& pm,
                                   const GroundTruth& gt, DetectionMode mode) {
  RETURN_IF_ERROR(CheckMatrix(pm, gt, 2));
  std::vector<SampleSet> sets;
  sets.reserve(pm.num_instances());
  for (size_t r = 0; r < pm.num_instances(); ++r) {
    ASSIGN_OR_RETURN(SampleSet s, DetectedMembers(pm.values.row(r), gt, mode));
    sets.push_back(std::move(s));
  }
  double sum = 0.0;
  size_t pairs = 0;
  for (size_t i = 0; i < sets.size(); ++i) {
    for (size_t j = i + 1; j < sets.size(); ++j) {
      ASSIGN_OR_RETURN(double jac, Jaccard(sets[i], sets[j]));
      sum += jac;
      ++pairs;
    }
  }
  return sum / static_cast<double>(pairs);
}

absl::StatusOr<SampleSet> CoverageSet(const PredictionMatrix& pm,
                                      const GroundTruth& gt,
                                      DetectionMode mode) {
  RETURN_IF_ERROR(CheckMatrix(pm, gt, 1));
  std::vector<uint8_t> mask(pm.num_samples(), 0);
  for (size_t r = 0; r < pm.num_instances(); ++r) {
    auto row = pm.values.row(r);
    for (size_t c = 0; c < row.size(); ++c) mask[c] |= row[c];
  }
  return SampleSet::FromMask(DetectedMask(mask, gt, mode));
}

absl::StatusOr<SampleSet> StabilitySet(const PredictionMatrix& pm,
                                       const GroundTruth& gt,
                                       DetectionMode mode) {
  RETURN_IF_ERROR(CheckMatrix(pm, gt, 1));
  std::vector<uint8_t> mask(pm.num_samples(), 1);
  for (size_t r = 0; r < pm.num_instances(); ++r) {
    auto row = pm.values.row(r);
    for (size_t c = 0; c < row.size(); ++c) mask[c] &= row[c];
  }
  return SampleSet::FromMask(DetectedMask(mask, gt, mode));
}

absl::StatusOr<ConvergenceCurve> ConvergenceCurves(
    const PredictionMatrix& pm, const GroundTruth& gt, DetectionMode mode,
    std::span<const size_t> instance_order) {
  RETURN_IF_ERROR(CheckMatrix(pm, gt, 1));
  RETURN_IF_ERROR(CheckGroundTruth(gt));
  const size_t n = pm.num_instances();
  std::vector<size_t> order(instance_order.begin(), instance_order.end());
  if (order.empty()) {
    order.resize(n);
    std::iota(order.begin(), order.end(), 0);
  }
  {
    std::vector<size_t> sorted = order;
    std::sort(sorted.begin(), sorted.end());
    for (size_t i = 0; i < sorted.size(); ++i) {
      if (sorted.size() != n || sorted[i] != i) {
        return absl::InvalidArgumentError(
            "instance_order must be a permutation of the instance rows");
      }
    }
  }

  const double members = static_cast<double>(gt.num_members());
  const double nonmembers = static_cast<double>(gt.num_nonmembers());
  auto point = [&](size_t k, const std::vector<uint8_t>& mask) {
    size_t tp = 0;
    size_t fp = 0;
    for (size_t c = 0; c < mask.size(); ++c) {
      if (mask[c]) (gt.is_member(c) ? tp : fp)++;
    }
    ConvergencePoint p;
    p.k = k;
    p.tpr = static_cast<double>(tp) / members;
    p.fpr = static_cast<double>(fp) / nonmembers;
    if (tp + fp > 0) {
      p.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
    }
    p.set_size = mode == DetectionMode::kTruePositivesOnly ? tp : tp + fp;
    return p;
  };

  ConvergenceCurve curve;
  std::vector<uint8_t> uni(pm.num_samples(), 0);
  std::vector<uint8_t> inter(pm.num_samples(), 1);
  for (size_t k = 0; k < n; ++k) {
    auto row = pm.values.row(order[k]);
    for (size_t c = 0; c < row.size(); ++c) {
      uni[c] |= row[c];
      inter[c] &= row[c];
    }
    curve.coverage.push_back(point(k + 1, uni));
    curve.stability.push_back(point(k + 1, inter));
  }
  return curve;
}

std::vector<size_t> ShuffledInstanceOrder(size_t n, uint64_t seed) {
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  PrngStream rng = MakeStream(seed, StreamKey("instance-order"));
  for (size_t i = n; i > 1; --i) {
    std::uniform_int_distribution<size_t> pick(0, i - 1);
    std::swap(order[i - 1], order[pick(rng)]);
  }
  return order;
}

absl::StatusOr<SampleSet> AttackSampleSet(const ExperimentBundle& bundle,
                                          const std::string& attack,
                                          SetBasis basis,
                                          const SetOptions& options) {
  ASSIGN_OR_RETURN(const ScoreMatrix* scores, bundle.FindAttack(attack));
  size_t rows = options.num_instances.value_or(scores->num_instances());
  if (basis == SetBasis::kSingleInstance) rows = 1;
  if (rows == 0 || rows > scores->num_instances()) {
    return absl::InvalidArgumentError(
        absl::StrCat("insufficient instances for attack ", attack, ": has ",
                     scores->num_instances(), ", needs ", rows));
  }
  ASSIGN_OR_RETURN(PredictionMatrix pm,
                   CalibratePredictions(*scores, bundle.ground_truth,
                                        options.beta, rows));
  if (basis == SetBasis::kStability) {
    return StabilitySet(pm, bundle.ground_truth, options.mode);
  }
  return CoverageSet(pm, bundle.ground_truth, options.mode);
}

absl::StatusOr<SimilarityMatrix> MethodSimilarity(
    const ExperimentBundle& bundle, SetBasis basis, const SetOptions& options,
    std::vector<std::string> attacks) {
  if (attacks.empty()) attacks = bundle.attack_names();
  std::vector<SampleSet> sets;
  sets.reserve(attacks.size());
  for (const auto& name : attacks) {
    ASSIGN_OR_RETURN(SampleSet s, AttackSampleSet(bundle, name, basis, options));
    sets.push_back(std::move(s));
  }
  SimilarityMatrix out;
  out.basis = basis;
  out.attack_names = attacks;
  out.values = RealMatrix(attacks.size(), attacks.size(), 1.0);
  for (size_t i = 0; i < sets.size(); ++i) {
    for (size_t j = i + 1; j < sets.size(); ++j) {
      ASSIGN_OR_RETURN(double jac, Jaccard(sets[i], sets[j]));
      out.values(i, j) = jac;
      out.values(j, i) = jac;
    }
  }
  return out;
}

double MeanOffDiagonal(const SimilarityMatrix& similarity) {
  const size_t n = similarity.values.rows();
  if (n < 2) return 1.0;
  double sum = 0.0;
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) sum += similarity.values(i, j);
  }
  return sum / static_cast<double>(n * (n - 1) / 2);
}

absl::StatusOr<SampleSet> UniqueSamples(const ExperimentBundle& bundle,
                                        const std::string& attack,
                                        const SetOptions& options,
                                        SetBasis basis,
                                        std::vector<std::string> others) {
  RETURN_IF_ERROR(bundle.FindAttack(attack).status());
  if (others.empty()) {
    for (const auto& name : bundle.attack_names()) {
      if (name != attack) others.push_back(name);
    }
  }
  others.erase(std::remove(others.begin(), others.end(), attack),
               others.end());
  if (others.empty()) {
    return absl::InvalidArgumentError(
        "unique samples need at least two attacks");
  }
  ASSIGN_OR_RETURN(SampleSet own,
                   AttackSampleSet(bundle, attack, basis, options));
  SampleSet rest(bundle.num_samples());
  for (const auto& name : others) {
    ASSIGN_OR_RETURN(SampleSet s, AttackSampleSet(bundle, name, basis, options));
    rest = rest.Union(s);
  }
  return own.Difference(rest);
}

absl::StatusOr<SampleSet> CoveredSamples(const ExperimentBundle& bundle,
                                         const std::string& attack,
                                         const SetOptions& options) {
  return AttackSampleSet(bundle, attack, SetBasis::kCoverage, options);
}

}  // namespace mia
