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
#include "mia/scorers.h"

#include <cmath>
#include <random>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "mia/disparity.h"
#include "mia/metrics.h"
#include "mia/simulator.h"
#include "oracles.h"
#include "test_util.h"

namespace mia {
namespace {

using ::mia::testing::Gt;
using ::testing::DoubleEq;
using ::testing::DoubleNear;
using ::testing::ElementsAre;
using ::testing::Each;
using ::testing::HasSubstr;

SignalSet Losses(std::vector<double> target) {
  SignalSet s;
  s.target_loss = std::move(target);
  return s;
}

TEST(MinMaxTest, EndpointsAndDegenerate) {
  EXPECT_THAT(MinMaxNormalize(std::vector{2.0, 4.0, 3.0}), ElementsAre(0.0, 1.0, 0.5));
  EXPECT_THAT(MinMaxNormalize(std::vector{7.0, 7.0}), ElementsAre(0.5, 0.5));
}

TEST(LossScorerTest, Endpoints) {
  ASSERT_OK_AND_ASSIGN(LossScores s, LossScorer(Losses({0.0, 1.0})));
  EXPECT_THAT(s.scores, ElementsAre(1.0, 0.0));
  EXPECT_DOUBLE_EQ(s.raw_threshold, 0.5);
  EXPECT_DOUBLE_EQ(s.threshold, 0.5);
}

TEST(LossScorerTest, ConstantLosses) {
  ASSERT_OK_AND_ASSIGN(LossScores s, LossScorer(Losses({2.0, 2.0, 2.0})));
  EXPECT_THAT(s.scores, Each(0.5));
}

TEST(LossScorerTest, GlobalThresholdIsStrict) {
  ASSERT_OK_AND_ASSIGN(LossScores s, LossScorer(Losses({0.2, 0.8, 0.5, 0.5})));
  EXPECT_DOUBLE_EQ(s.raw_threshold, 0.5);
  // loss < mean  <=>  score > threshold.
  EXPECT_THAT(PredictAbove(s.scores, s.threshold), ElementsAre(1, 0, 0, 0));
}

TEST(LossScorerTest, Errors) {
  EXPECT_FALSE(LossScorer(Losses({})).ok());
  EXPECT_FALSE(LossScorer(Losses({0.1, NAN})).ok());
  EXPECT_FALSE(LossScorer(Losses({0.1, -0.5})).ok());
}

TEST(LossScorerTest, AffineTransformKeepsAuc) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  const GroundTruth gt = testing::RandomGt(rng, 50);
  std::vector<double> loss(50);
  for (auto& l : loss) l = u(rng);
  std::vector<double> scaled(50);
  for (size_t i = 0; i < 50; ++i) scaled[i] = 4.0 * loss[i] + 2.5;
  ASSERT_OK_AND_ASSIGN(LossScores a, LossScorer(Losses(loss)));
  ASSERT_OK_AND_ASSIGN(LossScores b, LossScorer(Losses(scaled)));
  EXPECT_NEAR(Auc(*ComputeRoc(gt, a.scores)), Auc(*ComputeRoc(gt, b.scores)), 1e-12);
}

TEST(CalibrationScorerTest, Examples) {
  SignalSet s = Losses({0.3, 0.6, 0.9});
  s.shadow_loss = std::vector{0.3, 0.6, 0.9};
  EXPECT_THAT(*CalibrationScorer(s), Each(0.5));
  SignalSet t = Losses({0.1, 0.9});
  t.shadow_loss = std::vector{0.9, 0.1};
  EXPECT_THAT(*CalibrationScorer(t), ElementsAre(1.0, 0.0));
}

TEST(CalibrationScorerTest, MatchesHandFormula) {
  const std::vector<double> target = {0.4, 1.2, 0.05, 0.7, 2.0};
  const std::vector<double> shadow = {0.5, 0.3, 0.2, 0.9, 1.1};
  SignalSet s = Losses(target);
  s.shadow_loss = shadow;
  ASSERT_OK_AND_ASSIGN(std::vector<double> scores, CalibrationScorer(s));
  std::vector<double> cal(5);
  for (size_t i = 0; i < 5; ++i) cal[i] = target[i] - shadow[i];
  const double lo = *std::min_element(cal.begin(), cal.end());
  const double hi = *std::max_element(cal.begin(), cal.end());
  for (size_t i = 0; i < 5; ++i) {
    EXPECT_NEAR(scores[i], 1.0 - (cal[i] - lo) / (hi - lo), 1e-15);
  }
}

TEST(CalibrationScorerTest, MissingShadowLoss) {
  auto r = CalibrationScorer(Losses({0.1, 0.2}));
  ASSERT_FALSE(r.ok());
  EXPECT_THAT(std::string(r.status().message()), HasSubstr("shadow_loss"));
}

TEST(CalibrationThresholdTest, SeparatedClasses) {
  const GroundTruth gt = Gt({1, 1, 0, 0});
  const std::vector<double> aux = {0.9, 0.8, 0.2, 0.1};
  ASSERT_OK_AND_ASSIGN(double tau, CalibrationThreshold(aux, gt));
  EXPECT_GT(tau, 0.2);
  EXPECT_LE(tau, 0.8);
}

TEST(CalibrationThresholdTest, ConstantScores) {
  const GroundTruth gt = Gt({1, 0});
  EXPECT_EQ(*CalibrationThreshold(std::vector{0.4, 0.4}, gt), 0.4);
}

TEST(CalibrationThresholdTest, MatchesGridSearchOracle) {
  std::mt19937_64 rng(20);
  std::normal_distribution<double> noise(0.0, 1.0);
  const GroundTruth gt = testing::RandomGt(rng, 20);
  std::vector<double> aux(20);
  for (size_t i = 0; i < 20; ++i) aux[i] = noise(rng) + gt.labels[i];
  const double lo = *std::min_element(aux.begin(), aux.end());
  const double hi = *std::max_element(aux.begin(), aux.end());
  double best = lo;
  int best_acc = -1;
  for (int j = 0; j < 1000; ++j) {
    const double tau = lo + (hi - lo) * j / 999.0;
    int acc = 0;
    for (size_t i = 0; i < 20; ++i) acc += (aux[i] >= tau) == (gt.labels[i] == 1);
    if (acc > best_acc) {
      best_acc = acc;
      best = tau;
    }
  }
  EXPECT_EQ(*CalibrationThreshold(aux, gt), best);
}

TEST(LiraScorerTest, SymmetricFitsScoreZero) {
  SignalSet s = Losses({0.3, 5.0});
  s.shadow_in_losses = {{0.1, 0.3}, {0.1, 0.3}};
  s.shadow_out_losses = {{0.1, 0.3}, {0.1, 0.3}};
  EXPECT_THAT(*LiraScorer(s, VarianceMode::kPerSample), Each(0.0));
}

TEST(LiraScorerTest, LossAtInMeanIsPositive) {
  SignalSet s = Losses({0.2});
  s.shadow_in_losses = {{0.1, 0.3}};
  s.shadow_out_losses = {{2.1, 2.3}};
  EXPECT_GT((*LiraScorer(s, VarianceMode::kPerSample))[0], 0.0);
}

TEST(LiraScorerTest, MatchesClosedFormNormalDensities) {
  SignalSet s = Losses({0.12});
  s.shadow_in_losses = {{0.1, 0.2, 0.15}};
  s.shadow_out_losses = {{1.0, 1.1, 0.9}};
  ASSERT_OK_AND_ASSIGN(std::vector<double> scores,
                       LiraScorer(s, VarianceMode::kPerSample));
  const double sd_in = std::sqrt(0.005 / 3.0);
  const double sd_out = std::sqrt(0.02 / 3.0);
  const double expected = testing::NormalLogPdf(0.12, 0.15, sd_in) -
                          testing::NormalLogPdf(0.12, 1.0, sd_out);
  EXPECT_NEAR(scores[0], expected, 1e-10);
}

TEST(LiraScorerTest, GlobalModePoolsVariance) {
  SignalSet s = Losses({0.5, 0.5});
  s.shadow_in_losses = {{0.0, 1.0}, {0.4, 0.6}};
  s.shadow_out_losses = {{2.0, 4.0}, {1.0, 1.0}};
  ASSERT_OK_AND_ASSIGN(std::vector<double> scores, LiraScorer(s, VarianceMode::kGlobal));
  const double sd_in = std::sqrt((0.5 + 0.02) / 4.0);
  const double sd_out = std::sqrt(2.0 / 4.0);
  for (size_t i = 0; i < 2; ++i) {
    const double mu_in = i == 0 ? 0.5 : 0.5;
    const double mu_out = i == 0 ? 3.0 : 1.0;
    EXPECT_NEAR(scores[i],
                testing::NormalLogPdf(0.5, mu_in, sd_in) -
                    testing::NormalLogPdf(0.5, mu_out, sd_out),
                1e-10);
  }
}

TEST(LiraScorerTest, SingleShadowPairInGlobalModeStaysFinite) {
  SignalSet s = Losses({0.2, 0.4});
  s.shadow_in_losses = {{0.1}, {0.1}};
  s.shadow_out_losses = {{0.9}, {0.9}};
  ASSERT_OK_AND_ASSIGN(std::vector<double> scores, LiraScorer(s, VarianceMode::kGlobal));
  for (double v : scores) EXPECT_TRUE(std::isfinite(v));
  EXPECT_FALSE(LiraScorer(s, VarianceMode::kPerSample).ok());
}

TEST(LiraScorerTest, MissingArrays) {
  EXPECT_FALSE(LiraScorer(Losses({0.1}), VarianceMode::kGlobal).ok());
}

TEST(ReferenceScorerTest, Examples) {
  SignalSet s = Losses({0.1, 0.1, 0.1});
  s.target_confidence = std::vector{0.95, 0.05, 0.7};
  s.shadow_confidences = {{0.6, 0.7, 0.8, 0.9}, {0.6, 0.7, 0.8, 0.9}, {0.6, 0.7, 0.8, 0.9}};
  EXPECT_THAT(*ReferenceScorer(s), ElementsAre(1.0, 0.0, 0.5));
}

TEST(ReferenceScorerTest, EmptyShadowList) {
  SignalSet s = Losses({0.1, 0.1});
  s.target_confidence = std::vector{0.5, 0.5};
  s.shadow_confidences = {{0.4}, {}};
  EXPECT_FALSE(ReferenceScorer(s).ok());
  s.shadow_confidences.clear();
  EXPECT_FALSE(ReferenceScorer(s).ok());
}

TEST(ReferenceScorerTest, OutputsLieOnLattice) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const size_t m = 7;
  SignalSet s = Losses(std::vector<double>(30, 0.1));
  s.target_confidence = std::vector<double>(30);
  for (auto& c : *s.target_confidence) c = u(rng);
  s.shadow_confidences.resize(30);
  for (auto& row : s.shadow_confidences) {
    for (size_t j = 0; j < m; ++j) row.push_back(u(rng));
  }
  ASSERT_OK_AND_ASSIGN(std::vector<double> scores, ReferenceScorer(s));
  for (double v : scores) {
    EXPECT_EQ(v * m, std::round(v * m));
    EXPECT_EQ(std::round(v * m) / m, v);
  }
}

TEST(ScorersTest, PermutationEquivariant) {
  SignalSet s = Losses({0.3, 0.9, 0.1, 0.5});
  s.shadow_loss = std::vector{0.2, 0.2, 0.4, 0.1};
  s.shadow_in_losses = {{0.1, 0.2}, {0.5, 0.9}, {0.0, 0.1}, {0.4, 0.3}};
  s.shadow_out_losses = {{0.8, 1.0}, {0.9, 1.2}, {0.7, 0.5}, {0.6, 1.1}};
  const std::vector<size_t> perm = {2, 0, 3, 1};
  SignalSet p;
  p.shadow_loss.emplace();
  for (size_t i : perm) {
    p.target_loss.push_back(s.target_loss[i]);
    p.shadow_loss->push_back((*s.shadow_loss)[i]);
    p.shadow_in_losses.push_back(s.shadow_in_losses[i]);
    p.shadow_out_losses.push_back(s.shadow_out_losses[i]);
  }
  const auto a = *CalibrationScorer(s);
  const auto b = *CalibrationScorer(p);
  const auto la = *LiraScorer(s, VarianceMode::kPerSample);
  const auto lb = *LiraScorer(p, VarianceMode::kPerSample);
  for (size_t k = 0; k < perm.size(); ++k) {
    EXPECT_EQ(b[k], a[perm[k]]);
    EXPECT_EQ(lb[k], la[perm[k]]);
  }
}

TEST(ScoreBundleTest, AddsOneRowPerSignalInstance) {
  SimConfig c;
  c.n_samples = 300;
  c.n_instances = 3;
  c.seed = 9;
  ASSERT_OK_AND_ASSIGN(ExperimentBundle sim, Generate(c));
  EXPECT_EQ(SignalInstances(sim), (std::vector<std::string>{"0", "1", "2"}));
  ASSERT_OK_AND_ASSIGN(ExperimentBundle scored, ScoreBundle(sim, {}));
  for (const char* name : {"loss", "calibration", "lira", "reference"}) {
    ASSERT_OK_AND_ASSIGN(const ScoreMatrix* sm, scored.FindAttack(name));
    EXPECT_EQ(sm->num_instances(), 3u) << name;
    EXPECT_EQ(sm->num_samples(), 300u) << name;
    // Every scorer sees real membership signal.
    EXPECT_GT(Auc(*ComputeRoc(scored.ground_truth, sm->values.row(0))), 0.6) << name;
  }
  ScoringOptions only;
  only.scorers = {"bogus"};
  EXPECT_FALSE(ScoreBundle(sim, only).ok());
}

TEST(ScoreBundleTest, NoiseFreeSimulationIsPerfectlyConsistent) {
  SimConfig c;
  c.n_samples = 400;
  c.instance_noise_sigma = 0.0;
  c.seed = 12;
  ASSERT_OK_AND_ASSIGN(ExperimentBundle sim, Generate(c));
  ASSERT_OK_AND_ASSIGN(ExperimentBundle scored, ScoreBundle(sim, {}));
  for (const char* name : {"loss", "calibration", "lira", "reference"}) {
    ASSERT_OK_AND_ASSIGN(const ScoreMatrix* sm, scored.FindAttack(name));
    for (double beta : {0.01, 0.1, 0.5}) {
      ASSERT_OK_AND_ASSIGN(PredictionMatrix pm,
                           CalibratePredictions(*sm, scored.ground_truth, beta));
      EXPECT_EQ(*Consistency(pm, scored.ground_truth), 1.0) << name;
    }
  }
}

TEST(ScoreBundleTest, MissingTargetLoss) {
  ExperimentBundle b;
  b.ground_truth = Gt({1, 0});
  EXPECT_FALSE(ScoreBundle(b, {}).ok());
}

}  // namespace
}  // namespace mia
