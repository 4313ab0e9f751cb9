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
// Randomized checks of the library-wide invariants.

#include <algorithm>
#include <random>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "mia/disparity.h"
#include "mia/ensemble.h"
#include "mia/metrics.h"
#include "mia/simulator.h"
#include "mia/validate.h"
#include "test_util.h"

namespace mia {
namespace {

using ::mia::testing::Predictions;
using ::mia::testing::RandomBinary;
using ::mia::testing::RandomGt;
using ::mia::testing::RandomScores;

constexpr int kTrials = 100;

bool Subset(std::span<const uint8_t> a, std::span<const uint8_t> b) {
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] > b[i]) return false;
  }
  return true;
}

ExperimentBundle RandomBundle(std::mt19937_64& rng, size_t n_attacks) {
  std::uniform_int_distribution<size_t> size(4, 60);
  std::uniform_int_distribution<size_t> rows(2, 5);
  ExperimentBundle b;
  const size_t n = size(rng);
  b.ground_truth = RandomGt(rng, n);
  for (size_t k = 0; k < n_attacks; ++k) {
    ScoreMatrix sm;
    sm.attack_name = "a" + std::to_string(k);
    const size_t r = rows(rng);
    sm.values = RealMatrix(r, n);
    for (size_t i = 0; i < r; ++i) {
      const auto s = RandomScores(rng, n, 7);
      std::copy(s.begin(), s.end(), sm.values.row(i).begin());
      sm.seed_labels.push_back(std::to_string(i));
    }
    b.attacks[sm.attack_name] = std::move(sm);
  }
  return b;
}

TEST(PropertyTest, ValidatedBundlesFlowThroughEveryStage) {
  std::mt19937_64 rng(101);
  for (int t = 0; t < kTrials; ++t) {
    const ExperimentBundle b = RandomBundle(rng, 3);
    const ValidationReport first = ValidateBundle(b);
    const ValidationReport second = ValidateBundle(b);
    ASSERT_TRUE(first.ok()) << first.ToString();
    EXPECT_EQ(first.ToString(), second.ToString());
    SetOptions opts;
    opts.num_instances = 2;
    EXPECT_OK(MethodSimilarity(b, SetBasis::kCoverage, opts).status());
    EXPECT_OK(UniqueSamples(b, "a0", opts).status());
    EnsembleSpec spec{EnsembleStrategy::kMajority, b.attack_names(), 2};
    EXPECT_OK(EnsembleRocSweep(b, spec).status());
    for (const auto& [name, sm] : b.attacks) {
      ASSERT_OK_AND_ASSIGN(PredictionMatrix pm, CalibratePredictions(sm, b.ground_truth, 0.2));
      EXPECT_OK(Consistency(pm, b.ground_truth).status());
      EXPECT_OK(ConvergenceCurves(pm, b.ground_truth, DetectionMode::kAllPositives).status());
    }
  }
}

TEST(PropertyTest, AdjustFprIsExactAndMonotoneInBeta) {
  std::mt19937_64 rng(102);
  std::uniform_real_distribution<double> u;
  for (int t = 0; t < kTrials; ++t) {
    const size_t n = 2 + rng() % 80;
    const GroundTruth gt = RandomGt(rng, n);
    const auto scores = RandomScores(rng, n, 1 + rng() % 12);
    ASSERT_OK_AND_ASSIGN(RocCurve roc, ComputeRoc(gt, scores));
    double b1 = u(rng), b2 = u(rng);
    if (b1 > b2) std::swap(b1, b2);
    ASSERT_OK_AND_ASSIGN(FprThreshold lo, AdjustFpr(gt, scores, b1));
    ASSERT_OK_AND_ASSIGN(FprThreshold hi, AdjustFpr(gt, scores, b2));
    for (const FprThreshold* f : {&lo, &hi}) {
      EXPECT_EQ(f->achieved_fpr, roc.fprs[f->roc_index]);
      size_t fp = 0;
      for (size_t x = 0; x < n; ++x) fp += f->predictions[x] && !gt.labels[x];
      EXPECT_EQ(f->achieved_fpr, static_cast<double>(fp) / gt.num_nonmembers());
    }
    EXPECT_GE(lo.threshold, hi.threshold);
    EXPECT_TRUE(Subset(lo.predictions, hi.predictions));
  }
}

TEST(PropertyTest, StabilityInsideEveryInstanceInsideCoverage) {
  std::mt19937_64 rng(103);
  for (int t = 0; t < kTrials; ++t) {
    const size_t n = 2 + rng() % 50;
    const size_t rows = 1 + rng() % 6;
    const GroundTruth gt = RandomGt(rng, n);
    const PredictionMatrix pm = Predictions(RandomBinary(rng, rows, n, 0.6));
    for (DetectionMode mode : {DetectionMode::kTruePositivesOnly, DetectionMode::kAllPositives}) {
      ASSERT_OK_AND_ASSIGN(SampleSet cov, CoverageSet(pm, gt, mode));
      ASSERT_OK_AND_ASSIGN(SampleSet stab, StabilitySet(pm, gt, mode));
      for (size_t i = 0; i < rows; ++i) {
        ASSERT_OK_AND_ASSIGN(SampleSet d, DetectedMembers(pm.values.row(i), gt, mode));
        EXPECT_TRUE(stab.IsSubsetOf(d));
        EXPECT_TRUE(d.IsSubsetOf(cov));
      }
      // One more instance.
      PredictionMatrix more = pm;
      BinaryMatrix grown(rows + 1, n);
      std::copy(pm.values.data().begin(), pm.values.data().end(), grown.data().begin());
      const BinaryMatrix extra = RandomBinary(rng, 1, n);
      std::copy(extra.data().begin(), extra.data().end(), grown.row(rows).begin());
      more = Predictions(std::move(grown));
      EXPECT_TRUE(cov.IsSubsetOf(*CoverageSet(more, gt, mode)));
      EXPECT_TRUE(StabilitySet(more, gt, mode)->IsSubsetOf(stab));
    }
  }
}

TEST(PropertyTest, ConsistencyIsOneExactlyForIdenticalSets) {
  std::mt19937_64 rng(104);
  for (int t = 0; t < kTrials; ++t) {
    const size_t n = 2 + rng() % 30;
    const size_t rows = 2 + rng() % 4;
    const GroundTruth gt = RandomGt(rng, n);
    BinaryMatrix m = RandomBinary(rng, rows, n, 0.5);
    if (t % 3 == 0) {
      for (size_t i = 1; i < rows; ++i) {
        std::copy(m.row(0).begin(), m.row(0).end(), m.row(i).begin());
      }
    }
    const PredictionMatrix pm = Predictions(m);
    ASSERT_OK_AND_ASSIGN(double c, Consistency(pm, gt));
    EXPECT_GE(c, 0.0);
    EXPECT_LE(c, 1.0);
    bool identical = true;
    const SampleSet first = *DetectedMembers(pm.values.row(0), gt, DetectionMode::kTruePositivesOnly);
    for (size_t i = 1; i < rows; ++i) {
      identical &= *DetectedMembers(pm.values.row(i), gt, DetectionMode::kTruePositivesOnly) == first;
    }
    EXPECT_EQ(c == 1.0, identical);
  }
}

TEST(PropertyTest, MethodSimilarityIsSymmetricWithUnitDiagonal) {
  std::mt19937_64 rng(105);
  for (int t = 0; t < 30; ++t) {
    const ExperimentBundle b = RandomBundle(rng, 4);
    for (SetBasis basis : {SetBasis::kCoverage, SetBasis::kStability}) {
      SetOptions opts;
      opts.beta = 0.3;
      opts.num_instances = 2;
      ASSERT_OK_AND_ASSIGN(SimilarityMatrix s, MethodSimilarity(b, basis, opts));
      for (size_t i = 0; i < 4; ++i) {
        EXPECT_EQ(s.values(i, i), 1.0);
        for (size_t j = 0; j < 4; ++j) EXPECT_EQ(s.values(i, j), s.values(j, i));
      }
    }
  }
}

TEST(PropertyTest, CombineStrategiesNest) {
  std::mt19937_64 rng(106);
  for (int t = 0; t < kTrials; ++t) {
    const BinaryMatrix m = RandomBinary(rng, 1 + rng() % 7, 1 + rng() % 40, 0.5);
    const auto s = MultiInstanceCombine(m, EnsembleStrategy::kStability);
    const auto j = MultiInstanceCombine(m, EnsembleStrategy::kMajority);
    const auto c = MultiInstanceCombine(m, EnsembleStrategy::kCoverage);
    EXPECT_TRUE(Subset(s, j));
    EXPECT_TRUE(Subset(j, c));
  }
}

TEST(PropertyTest, EnsemblePredictionsGrowWithBeta) {
  std::mt19937_64 rng(107);
  std::uniform_real_distribution<double> u;
  for (int t = 0; t < 40; ++t) {
    const ExperimentBundle b = RandomBundle(rng, 2);
    ASSERT_OK_AND_ASSIGN(EnsembleEvaluator eval,
                         EnsembleEvaluator::Create(b, b.attack_names(), 2));
    double b1 = u(rng), b2 = u(rng);
    if (b1 > b2) std::swap(b1, b2);
    for (EnsembleStrategy s : {EnsembleStrategy::kStability, EnsembleStrategy::kMajority,
                               EnsembleStrategy::kCoverage}) {
      ASSERT_OK_AND_ASSIGN(auto lo, eval.Predict(s, b1));
      ASSERT_OK_AND_ASSIGN(auto hi, eval.Predict(s, b2));
      EXPECT_TRUE(Subset(lo, hi));
    }
  }
}

TEST(PropertyTest, UnionIsExact) {
  std::mt19937_64 rng(108);
  for (int t = 0; t < kTrials; ++t) {
    const size_t n = 1 + rng() % 40;
    std::vector<std::vector<uint8_t>> sets(1 + rng() % 5);
    std::vector<uint8_t> expected(n, 0);
    for (auto& s : sets) {
      const BinaryMatrix m = RandomBinary(rng, 1, n, 0.2);
      s.assign(m.row(0).begin(), m.row(0).end());
      for (size_t x = 0; x < n; ++x) expected[x] |= s[x];
    }
    EXPECT_EQ(*MultiAttackUnion(sets), expected);
  }
}

TEST(PropertyTest, SweepValuesAreExactCounts) {
  std::mt19937_64 rng(109);
  for (int t = 0; t < 20; ++t) {
    const ExperimentBundle b = RandomBundle(rng, 2);
    EnsembleSpec spec{EnsembleStrategy::kCoverage, b.attack_names(), 2, LogSpacedGrid(1e-3, 1, 20)};
    ASSERT_OK_AND_ASSIGN(EnsembleSweep sweep, EnsembleRocSweep(b, spec));
    ASSERT_OK_AND_ASSIGN(EnsembleEvaluator eval,
                         EnsembleEvaluator::Create(b, b.attack_names(), 2));
    for (const SweepPoint& p : sweep.points) {
      ASSERT_OK_AND_ASSIGN(auto preds, eval.Predict(spec.strategy, p.beta));
      size_t fp = 0, tp = 0;
      for (size_t x = 0; x < preds.size(); ++x) {
        if (!preds[x]) continue;
        (b.ground_truth.labels[x] ? tp : fp)++;
      }
      EXPECT_EQ(p.false_positives, fp);
      EXPECT_EQ(p.true_positives, tp);
      EXPECT_EQ(p.fpr, static_cast<double>(fp) / b.ground_truth.num_nonmembers());
      EXPECT_EQ(p.tpr, static_cast<double>(tp) / b.ground_truth.num_members());
    }
  }
}

TEST(PropertyTest, GenerateIsAPureFunctionOfConfig) {
  for (uint64_t seed : {0u, 1u, 99u}) {
    SimConfig c;
    c.n_samples = 200;
    c.seed = seed;
    c.canary_fraction = 0.1;
    c.canary_strength = 1.0;
    ASSERT_OK_AND_ASSIGN(ExperimentBundle a, Generate(c));
    ASSERT_OK_AND_ASSIGN(ExperimentBundle b, Generate(c));
    EXPECT_TRUE(a == b);
  }
}

}  // namespace
}  // namespace mia
