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

#include <cmath>
#include <random>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "mia/metrics.h"
#include "mia/simulator.h"
#include "test_util.h"

namespace mia {
namespace {

using ::mia::testing::Gt;
using ::testing::DoubleNear;
using ::testing::ElementsAre;
using ::testing::HasSubstr;
using ::testing::IsEmpty;
using ::testing::SizeIs;

constexpr EnsembleStrategy kAll[] = {EnsembleStrategy::kStability,
                                     EnsembleStrategy::kMajority,
                                     EnsembleStrategy::kCoverage};

ExperimentBundle SimBundle(size_t n_attacks, size_t n_samples, uint64_t seed) {
  SimConfig c;
  c.n_samples = n_samples;
  c.n_attacks = n_attacks;
  c.emit_signals = false;
  c.seed = seed;
  return *Generate(c);
}

TEST(StrategyTest, NamesRoundTrip) {
  for (EnsembleStrategy s : kAll) {
    EXPECT_EQ(*ParseStrategy(ToString(s)), s);
  }
  EXPECT_FALSE(ParseStrategy("unanimous").ok());
}

TEST(GridTest, DefaultGrid) {
  const std::vector<double> g = DefaultFprGrid();
  ASSERT_THAT(g, SizeIs(100));
  EXPECT_NEAR(g.front(), 1e-6, 1e-20);
  EXPECT_EQ(g.back(), 1.0);
  for (size_t i = 1; i < g.size(); ++i) {
    EXPECT_GT(g[i], g[i - 1]);
    EXPECT_NEAR(std::log10(g[i]) - std::log10(g[i - 1]), 6.0 / 99.0, 1e-12);
  }
  EXPECT_THAT(LogSpacedGrid(0.01, 0.01, 1), ElementsAre(0.01));
}

TEST(ValidateSpecTest, Errors) {
  EnsembleSpec spec;
  EXPECT_FALSE(ValidateSpec(spec).ok());
  spec.attacks = {"a"};
  EXPECT_OK(ValidateSpec(spec));
  spec.num_instances = 0;
  EXPECT_FALSE(ValidateSpec(spec).ok());
  spec.num_instances = 1;
  spec.fpr_grid = {0.1, 0.1};
  EXPECT_FALSE(ValidateSpec(spec).ok());
  spec.fpr_grid = {0.0, 0.1};
  EXPECT_FALSE(ValidateSpec(spec).ok());
  spec.fpr_grid = {0.1, 1.5};
  EXPECT_FALSE(ValidateSpec(spec).ok());
  spec.fpr_grid = {};
  EXPECT_FALSE(ValidateSpec(spec).ok());
}

TEST(ValidateSpecTest, EvenMajorityWarns) {
  EnsembleSpec spec;
  spec.attacks = {"a"};
  spec.strategy = EnsembleStrategy::kMajority;
  spec.num_instances = 4;
  std::vector<std::string> warnings;
  EXPECT_OK(ValidateSpec(spec, &warnings));
  ASSERT_THAT(warnings, SizeIs(1));
  EXPECT_THAT(warnings[0], HasSubstr("even"));
  warnings.clear();
  spec.num_instances = 5;
  EXPECT_OK(ValidateSpec(spec, &warnings));
  EXPECT_THAT(warnings, IsEmpty());
}

TEST(CombineTest, HandEvaluation) {
  const BinaryMatrix m = BinaryMatrix::FromRows({{1, 1, 0}, {1, 0, 0}, {1, 0, 1}});
  EXPECT_THAT(MultiInstanceCombine(m, EnsembleStrategy::kStability), ElementsAre(1, 0, 0));
  EXPECT_THAT(MultiInstanceCombine(m, EnsembleStrategy::kCoverage), ElementsAre(1, 1, 1));
  EXPECT_THAT(MultiInstanceCombine(m, EnsembleStrategy::kMajority), ElementsAre(1, 0, 0));
}

TEST(CombineTest, SingleRowAndZeros) {
  const BinaryMatrix one = BinaryMatrix::FromRows({{0, 1, 1}});
  const BinaryMatrix zeros(3, 4);
  for (EnsembleStrategy s : kAll) {
    EXPECT_THAT(MultiInstanceCombine(one, s), ElementsAre(0, 1, 1));
    EXPECT_THAT(MultiInstanceCombine(zeros, s), ElementsAre(0, 0, 0, 0));
  }
}

TEST(CombineTest, EvenMajorityTieIsNonMember) {
  const BinaryMatrix m = BinaryMatrix::FromRows({{1, 1}, {1, 0}, {0, 1}, {0, 1}});
  EXPECT_THAT(MultiInstanceCombine(m, EnsembleStrategy::kMajority), ElementsAre(0, 1));
}

TEST(UnionTest, Basics) {
  const std::vector<std::vector<uint8_t>> one = {{1, 0, 1}};
  EXPECT_THAT(*MultiAttackUnion(one), ElementsAre(1, 0, 1));
  const std::vector<std::vector<uint8_t>> two = {{1, 0, 0}, {0, 1, 0}};
  EXPECT_THAT(*MultiAttackUnion(two), ElementsAre(1, 1, 0));
  const std::vector<std::vector<uint8_t>> bad = {{1, 0, 0}, {0, 1}};
  EXPECT_FALSE(MultiAttackUnion(bad).ok());
}

TEST(UnionTest, FourSimulatedAttacksMatchFold) {
  const ExperimentBundle b = SimBundle(4, 500, 3);
  ASSERT_OK_AND_ASSIGN(EnsembleEvaluator eval,
                       EnsembleEvaluator::Create(b, b.attack_names(), 3));
  for (EnsembleStrategy s : kAll) {
    std::vector<uint8_t> fold(500, 0);
    for (size_t a = 0; a < 4; ++a) {
      ASSERT_OK_AND_ASSIGN(BinaryMatrix rows, eval.InstancePredictions(a, 0.05));
      const auto combined = MultiInstanceCombine(rows, s);
      for (size_t x = 0; x < fold.size(); ++x) fold[x] = fold[x] || combined[x];
    }
    ASSERT_OK_AND_ASSIGN(std::vector<uint8_t> preds, eval.Predict(s, 0.05));
    EXPECT_EQ(preds, fold);
  }
}

TEST(EvaluatorTest, InstancePredictionsMatchAdjustFpr) {
  const ExperimentBundle b = SimBundle(2, 300, 4);
  ASSERT_OK_AND_ASSIGN(EnsembleEvaluator eval,
                       EnsembleEvaluator::Create(b, {"attack_1"}, 2));
  ASSERT_OK_AND_ASSIGN(BinaryMatrix rows, eval.InstancePredictions(0, 0.1));
  const ScoreMatrix& sm = b.attacks.at("attack_1");
  for (size_t i = 0; i < 2; ++i) {
    ASSERT_OK_AND_ASSIGN(FprThreshold t, AdjustFpr(b.ground_truth, sm.values.row(i), 0.1));
    EXPECT_TRUE(std::equal(t.predictions.begin(), t.predictions.end(), rows.row(i).begin()));
  }
  EXPECT_FALSE(eval.InstancePredictions(5, 0.1).ok());
}

TEST(EvaluatorTest, Errors) {
  const ExperimentBundle b = SimBundle(2, 100, 4);
  EXPECT_FALSE(EnsembleEvaluator::Create(b, {}, 2).ok());
  EXPECT_FALSE(EnsembleEvaluator::Create(b, {"attack_0"}, 0).ok());
  EXPECT_EQ(EnsembleEvaluator::Create(b, {"nope"}, 1).status().code(),
            absl::StatusCode::kNotFound);
  auto too_many = EnsembleEvaluator::Create(b, {"attack_0"}, 99);
  EXPECT_THAT(std::string(too_many.status().message()), HasSubstr("insufficient"));
}

TEST(SweepTest, SingleInstanceReproducesBaseRoc) {
  const ExperimentBundle b = SimBundle(1, 400, 6);
  EnsembleSpec spec;
  spec.attacks = {"attack_0"};
  spec.num_instances = 1;
  const auto scores = b.attacks.at("attack_0").values.row(0);
  for (EnsembleStrategy s : kAll) {
    spec.strategy = s;
    ASSERT_OK_AND_ASSIGN(EnsembleSweep sweep, EnsembleRocSweep(b, spec));
    ASSERT_THAT(sweep.points, SizeIs(100));
    for (const SweepPoint& p : sweep.points) {
      ASSERT_OK_AND_ASSIGN(FprThreshold t, AdjustFpr(b.ground_truth, scores, p.beta));
      EXPECT_EQ(p.fpr, t.achieved_fpr);
      EXPECT_EQ(p.tpr, t.achieved_tpr);
    }
  }
}

TEST(SweepTest, IdenticalRowsMakeStrategiesCoincide) {
  ExperimentBundle b = SimBundle(1, 300, 2);
  ScoreMatrix& sm = b.attacks.at("attack_0");
  for (size_t r = 1; r < sm.num_instances(); ++r) {
    for (size_t c = 0; c < sm.num_samples(); ++c) sm.values(r, c) = sm.values(0, c);
  }
  b.attacks["copy"] = sm;
  b.attacks["copy"].attack_name = "copy";
  EnsembleSpec spec;
  spec.attacks = {"attack_0", "copy"};
  spec.num_instances = 5;
  std::vector<EnsembleSweep> sweeps;
  for (EnsembleStrategy s : kAll) {
    spec.strategy = s;
    sweeps.push_back(*EnsembleRocSweep(b, spec));
  }
  for (size_t i = 0; i < sweeps[0].points.size(); ++i) {
    EXPECT_EQ(sweeps[0].points[i].fpr, sweeps[1].points[i].fpr);
    EXPECT_EQ(sweeps[0].points[i].tpr, sweeps[2].points[i].tpr);
  }
  EXPECT_EQ(sweeps[0].envelope_auc, sweeps[2].envelope_auc);
}

TEST(SweepTest, CountsAreExactAndSorted) {
  const ExperimentBundle b = SimBundle(2, 400, 8);
  EnsembleSpec spec;
  spec.attacks = b.attack_names();
  spec.num_instances = 3;
  spec.strategy = EnsembleStrategy::kMajority;
  ASSERT_OK_AND_ASSIGN(EnsembleSweep sweep, EnsembleRocSweep(b, spec));
  EXPECT_THAT(sweep.warnings, IsEmpty());
  for (size_t i = 0; i < sweep.points.size(); ++i) {
    const SweepPoint& p = sweep.points[i];
    EXPECT_EQ(p.fpr, static_cast<double>(p.false_positives) / 200.0);
    EXPECT_EQ(p.tpr, static_cast<double>(p.true_positives) / 200.0);
    if (i > 0) EXPECT_GE(p.fpr, sweep.points[i - 1].fpr);
  }
  EXPECT_EQ(sweep.envelope.front().fpr, 0.0);
  EXPECT_EQ(sweep.envelope.back(), (RocPoint{1.0, 1.0}));
  EXPECT_GE(sweep.envelope_auc, sweep.raw_auc - 1e-15);
}

TEST(SweepTest, EvenMajoritySweepCarriesWarning) {
  const ExperimentBundle b = SimBundle(1, 100, 8);
  EnsembleSpec spec{EnsembleStrategy::kMajority, {"attack_0"}, 4};
  ASSERT_OK_AND_ASSIGN(EnsembleSweep sweep, EnsembleRocSweep(b, spec));
  EXPECT_THAT(sweep.warnings, SizeIs(1));
}

TEST(SweepTest, StabilityEnsembleAucBeatsBestInstance) {
  SimConfig c;
  c.n_samples = 6000;
  c.n_attacks = 2;
  c.latent_dim = 3;
  c.angle_spread_deg = 45;
  c.instance_noise_sigma = 1.0;
  c.n_instances = 6;
  c.emit_signals = false;
  c.seed = 31;
  ASSERT_OK_AND_ASSIGN(ExperimentBundle b, Generate(c));
  EnsembleSpec spec{EnsembleStrategy::kStability, b.attack_names(), 6};
  ASSERT_OK_AND_ASSIGN(EnsembleSweep sweep, EnsembleRocSweep(b, spec));
  double best = 0.0;
  for (const auto& [name, sm] : b.attacks) {
    for (size_t i = 0; i < sm.num_instances(); ++i) {
      best = std::max(best, Auc(*ComputeRoc(b.ground_truth, sm.values.row(i))));
    }
  }
  EXPECT_GT(sweep.envelope_auc, best);
}

TEST(EnvelopeTest, DropsDominatedPoints) {
  const std::vector<RocPoint> pts = {{0.0, 0.0}, {0.1, 0.5}, {0.2, 0.4},
                                     {0.2, 0.6}, {0.5, 0.6}, {1.0, 1.0}};
  EXPECT_THAT(UpperEnvelope(pts),
              ElementsAre(RocPoint{0.0, 0.0}, RocPoint{0.1, 0.5},
                          RocPoint{0.2, 0.6}, RocPoint{1.0, 1.0}));
}

TEST(EnvelopeTest, TrapezoidAndReadout) {
  const std::vector<RocPoint> env = {{0.0, 0.0}, {0.5, 1.0}, {1.0, 1.0}};
  EXPECT_DOUBLE_EQ(TrapezoidAuc(env), 0.75);
  EXPECT_DOUBLE_EQ(EnvelopeTprAt(env, 0.4), 0.8);
  EXPECT_EQ(EnvelopeTprAt(env, 0.5), 1.0);
  EXPECT_EQ(EnvelopeTprAt(env, 0.0), 0.0);
  EXPECT_EQ(EnvelopeTprAt(env, 1.0), 1.0);
  const std::vector<RocPoint> steep = {{0.0, 0.3}, {0.2, 0.5}, {1.0, 1.0}};
  EXPECT_DOUBLE_EQ(EnvelopeTprAt(steep, 0.0), 0.3);
  EXPECT_DOUBLE_EQ(EnvelopeTprAt(steep, 0.1), 0.4);
}

}  // namespace
}  // namespace mia
