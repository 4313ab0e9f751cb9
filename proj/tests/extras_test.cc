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
#include <algorithm>
#include <array>
#include <cmath>
#include <random>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "mia/cost.h"
#include "mia/kde.h"
#include "mia/pca.h"
#include "oracles.h"
#include "test_util.h"

namespace mia {
namespace {

using ::mia::testing::SymmetricEigen3;
using ::mia::testing::TrapezoidIntegral;
using ::testing::ElementsAre;
using ::testing::HasSubstr;
using ::testing::SizeIs;

std::vector<double> Grid(double lo, double hi, size_t n) {
  std::vector<double> g(n);
  for (size_t i = 0; i < n; ++i) g[i] = lo + (hi - lo) * i / (n - 1);
  return g;
}

TEST(PcaTest, PointsOnALine) {
  RealMatrix data(5, 3);
  for (size_t i = 0; i < 5; ++i) data(i, 0) = static_cast<double>(i) - 2.0;
  ASSERT_OK_AND_ASSIGN(PcaResult r, PcaProject(data, 1));
  EXPECT_NEAR(r.components(0, 0), 1.0, 1e-12);
  EXPECT_NEAR(r.components(0, 1), 0.0, 1e-12);
  EXPECT_NEAR(r.explained_variance_ratio[0], 1.0, 1e-12);
  for (size_t i = 0; i < 5; ++i) EXPECT_NEAR(r.projections(i, 0), i - 2.0, 1e-12);
}

TEST(PcaTest, IsotropicGaussianSplitsVarianceEvenly) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> z;
  RealMatrix data(10000, 2);
  for (size_t i = 0; i < data.rows(); ++i) {
    data(i, 0) = z(rng);
    data(i, 1) = z(rng);
  }
  // Closed-form 2x2 eigenvalues of the sample covariance.
  double m0 = 0, m1 = 0;
  for (size_t i = 0; i < data.rows(); ++i) { m0 += data(i, 0); m1 += data(i, 1); }
  m0 /= data.rows();
  m1 /= data.rows();
  double a = 0, b = 0, c = 0;
  for (size_t i = 0; i < data.rows(); ++i) {
    const double x = data(i, 0) - m0, y = data(i, 1) - m1;
    a += x * x; b += x * y; c += y * y;
  }
  const double disc = std::sqrt((a - c) * (a - c) / 4 + b * b);
  const double l1 = (a + c) / 2 + disc, l2 = (a + c) / 2 - disc;

  ASSERT_OK_AND_ASSIGN(PcaResult r, PcaProject(data, 2));
  ASSERT_THAT(r.explained_variance_ratio, SizeIs(2));
  EXPECT_NEAR(r.explained_variance_ratio[0], l1 / (l1 + l2), 1e-8);
  EXPECT_NEAR(r.explained_variance_ratio[1], l2 / (l1 + l2), 1e-8);
  for (double ratio : r.explained_variance_ratio) EXPECT_NEAR(ratio, 0.5, 0.05);
}

TEST(PcaTest, HandMatrixMatchesCharacteristicPolynomial) {
  const RealMatrix data = RealMatrix::FromRows(
      {{2.0, 0.5, 1.0}, {-1.0, 1.5, 0.0}, {0.5, -2.0, 3.0}, {1.0, 1.0, -1.5}});
  std::array<double, 3> mean{};
  for (size_t i = 0; i < 4; ++i)
    for (size_t j = 0; j < 3; ++j) mean[j] += data(i, j) / 4.0;
  std::array<std::array<double, 3>, 3> cov{};
  for (size_t i = 0; i < 4; ++i)
    for (size_t j = 0; j < 3; ++j)
      for (size_t k = 0; k < 3; ++k)
        cov[j][k] += (data(i, j) - mean[j]) * (data(i, k) - mean[k]) / 3.0;
  const auto oracle = SymmetricEigen3(cov);

  ASSERT_OK_AND_ASSIGN(PcaResult r, PcaProject(data, 2));
  const double trace = cov[0][0] + cov[1][1] + cov[2][2];
  for (size_t k = 0; k < 2; ++k) {
    EXPECT_NEAR(r.eigenvalues[k], oracle.values[k], 1e-8);
    EXPECT_NEAR(r.explained_variance_ratio[k], oracle.values[k] / trace, 1e-8);
    for (size_t i = 0; i < 4; ++i) {
      double proj = 0;
      for (size_t j = 0; j < 3; ++j) proj += (data(i, j) - mean[j]) * oracle.vectors[k][j];
      EXPECT_NEAR(std::abs(r.projections(i, k)), std::abs(proj), 1e-8);
    }
    // Largest-magnitude loading is positive.
    auto comp = r.components.row(k);
    const auto it = std::max_element(comp.begin(), comp.end(), [](double x, double y) {
      return std::abs(x) < std::abs(y);
    });
    EXPECT_GT(*it, 0.0);
  }
}

TEST(PcaTest, ShiftInvariantAndRatiosBounded) {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> z;
  RealMatrix data(300, 4), shifted(300, 4);
  for (size_t i = 0; i < 300; ++i) {
    for (size_t j = 0; j < 4; ++j) {
      data(i, j) = z(rng) * (1.0 + j);
      shifted(i, j) = data(i, j) + 100.0 * (j + 1);
    }
  }
  ASSERT_OK_AND_ASSIGN(PcaResult a, PcaProject(data, 3));
  ASSERT_OK_AND_ASSIGN(PcaResult b, PcaProject(shifted, 3));
  double total = 0;
  for (size_t k = 0; k < 3; ++k) {
    total += a.explained_variance_ratio[k];
    for (size_t i = 0; i < 300; ++i) {
      EXPECT_NEAR(std::abs(a.projections(i, k)), std::abs(b.projections(i, k)), 1e-7);
    }
  }
  EXPECT_LE(total, 1.0 + 1e-12);
}

TEST(PcaTest, Errors) {
  RealMatrix small(2, 3);
  EXPECT_FALSE(PcaProject(small, 2).ok());
  EXPECT_FALSE(PcaProject(small, 0).ok());
  RealMatrix bad(4, 2);
  bad(1, 1) = NAN;
  EXPECT_FALSE(PcaProject(bad, 1).ok());
  const RealMatrix line = RealMatrix::FromRows({{1, 0}, {2, 0}, {3, 0}, {4, 1}});
  PcaOptions starved;
  starved.max_iterations = 0;
  starved.squarings = 0;
  const auto r = PcaProject(line, 1, starved);
  ASSERT_FALSE(r.ok());
  EXPECT_THAT(std::string(r.status().message()), HasSubstr("0 iterations"));
}

TEST(MarginTest, Examples) {
  const RealMatrix conf = RealMatrix::FromRows(
      {{0, 1, 0}, {1.0 / 3, 1.0 / 3, 1.0 / 3}, {0.5, 0.3, 0.2}});
  ASSERT_OK_AND_ASSIGN(std::vector<double> m, ConfidenceMargin(conf));
  EXPECT_DOUBLE_EQ(m[0], 1.0);
  EXPECT_DOUBLE_EQ(m[1], 0.0);
  EXPECT_NEAR(m[2], 0.2, 1e-15);
  EXPECT_FALSE(ConfidenceMargin(RealMatrix(3, 1)).ok());
}

TEST(KdeTest, SymmetricDataGivesSymmetricDensity) {
  const std::vector<double> values = {-3, -1, -0.5, 0, 0.5, 1, 3};
  const std::vector<double> eval = {-2.5, -1.0, -0.25, 0.25, 1.0, 2.5};
  ASSERT_OK_AND_ASSIGN(std::vector<double> d, Kde(values, eval));
  for (size_t i = 0; i < 3; ++i) EXPECT_NEAR(d[i], d[5 - i], 1e-9);
}

TEST(KdeTest, IntegratesToOne) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> z(0.5, 0.01);
  std::vector<double> values(500);
  for (double& v : values) v = z(rng);
  const std::vector<double> grid = Grid(0.0, 1.0, 4001);
  ASSERT_OK_AND_ASSIGN(std::vector<double> d, Kde(values, grid));
  EXPECT_GE(TrapezoidIntegral(grid, d), 0.99);
  for (double v : d) EXPECT_GE(v, 0.0);
}

TEST(KdeTest, TwoClustersGiveTwoModes) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> z(0.0, 0.05);
  std::vector<double> values;
  for (int i = 0; i < 200; ++i) values.push_back(z(rng) + 0.2);
  for (int i = 0; i < 200; ++i) values.push_back(z(rng) + 0.8);
  const std::vector<double> grid = Grid(0.0, 1.0, 1001);
  ASSERT_OK_AND_ASSIGN(std::vector<double> d, Kde(values, grid));
  std::vector<double> modes;
  for (size_t i = 1; i + 1 < d.size(); ++i) {
    if (d[i] > d[i - 1] && d[i] > d[i + 1]) modes.push_back(grid[i]);
  }
  ASSERT_THAT(modes, SizeIs(2));
  EXPECT_NEAR(modes[0], 0.2, 0.05);
  EXPECT_NEAR(modes[1], 0.8, 0.05);
}

TEST(KdeTest, PermutationInvariant) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u;
  std::vector<double> values(100);
  for (double& v : values) v = u(rng);
  const std::vector<double> grid = Grid(0.0, 1.0, 51);
  ASSERT_OK_AND_ASSIGN(std::vector<double> a, Kde(values, grid));
  std::shuffle(values.begin(), values.end(), rng);
  ASSERT_OK_AND_ASSIGN(std::vector<double> b, Kde(values, grid));
  EXPECT_EQ(a, b);
}

TEST(KdeTest, SilvermanBandwidth) {
  // sd (ddof=1) of 1..5 is sqrt(2.5); type-7 IQR is 2.
  const std::vector<double> v = {5, 1, 3, 2, 4};
  const double expected =
      0.9 * std::min(std::sqrt(2.5), 2.0 / 1.34) * std::pow(5.0, -0.2);
  EXPECT_NEAR(*SilvermanBandwidth(v), expected, 1e-15);
  // Zero IQR falls back to the standard deviation.
  const std::vector<double> spiky = {0, 0, 0, 0, 0, 0, 10};
  ASSERT_OK_AND_ASSIGN(double h, SilvermanBandwidth(spiky));
  EXPECT_GT(h, 0.0);
}

TEST(KdeTest, DegenerateSample) {
  const std::vector<double> constant = {0.3, 0.3, 0.3};
  const std::vector<double> eval = {0.3};
  const auto r = Kde(constant, eval);
  ASSERT_FALSE(r.ok());
  EXPECT_THAT(std::string(r.status().message()), HasSubstr("degenerate sample"));
  EXPECT_FALSE(Kde(std::vector<double>{1.0}, eval).ok());
  // An explicit bandwidth still needs a valid sample, but a valid one works.
  EXPECT_OK(Kde(std::vector<double>{0.0, 1.0}, eval, 0.1).status());
}

TEST(CostTest, SharedShadowModelsDeductedPerInstance) {
  const CostTable t = DefaultCostTable();
  EXPECT_OK(ValidateCostTable(t));
  EXPECT_DOUBLE_EQ(*EnsembleCost(t, {"lira", "reference"}, 1), 580.0);
  EXPECT_DOUBLE_EQ(*EnsembleCost(t, {"lira", "reference"}, 3), 3 * 580.0);
  EXPECT_DOUBLE_EQ(*EnsembleCost(t, {"lira"}, 1), 580.0);
  EXPECT_DOUBLE_EQ(*EnsembleCost(t, {"loss_trajectory"}, 4), 4 * 17.0);
  EXPECT_DOUBLE_EQ(*EnsembleCost(t, {"calibration", "reference"}, 2), 2 * 545.0);
  EXPECT_DOUBLE_EQ(
      *EnsembleCost(t, {"lira", "loss_trajectory", "calibration", "reference"}, 2),
      2 * (580.0 + 17 + 5));
}

TEST(CostTest, Errors) {
  const CostTable t = DefaultCostTable();
  const auto unknown = EnsembleCost(t, {"lira", "mystery"}, 1);
  ASSERT_FALSE(unknown.ok());
  EXPECT_THAT(std::string(unknown.status().message()), HasSubstr("mystery"));
  EXPECT_FALSE(EnsembleCost(t, {}, 1).ok());
  EXPECT_FALSE(EnsembleCost(t, {"lira"}, 0).ok());
  CostTable negative = t;
  negative.per_instance_cost["lira"] = -1;
  EXPECT_FALSE(ValidateCostTable(negative).ok());
  CostTable greedy = t;
  greedy.shared[0].deduction = 5000;
  EXPECT_FALSE(ValidateCostTable(greedy).ok());
  EXPECT_FALSE(CostPareto(t, {}).ok());
}

TEST(CostTest, FrontierDropsDominated) {
  const CostTable t = DefaultCostTable();
  ASSERT_OK_AND_ASSIGN(
      CostFrontier f,
      CostPareto(t, {{{"calibration"}, 1, 0.60},
                     {{"lira"}, 1, 0.70},
                     {{"reference"}, 1, 0.55}}));
  ASSERT_THAT(f.points, SizeIs(3));
  ASSERT_THAT(f.frontier, SizeIs(2));
  EXPECT_EQ(f.frontier[0].candidate.attacks, std::vector<std::string>{"calibration"});
  EXPECT_EQ(f.frontier[1].candidate.attacks, std::vector<std::string>{"lira"});
  EXPECT_EQ(f.points[0].cost, 5.0);
  EXPECT_FALSE(f.points[1].on_frontier);
  EXPECT_EQ(f.points[1].candidate.attacks, std::vector<std::string>{"reference"});
}

TEST(CostTest, FrontierIsMutuallyNonDominated) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u;
  const std::vector<std::string> names = {"lira", "loss_trajectory", "calibration",
                                          "reference"};
  std::vector<CostCandidate> cands;
  for (int i = 0; i < 60; ++i) {
    CostCandidate c;
    for (const auto& n : names) if (u(rng) < 0.5) c.attacks.push_back(n);
    if (c.attacks.empty()) c.attacks.push_back("calibration");
    c.n_instances = 1 + static_cast<size_t>(u(rng) * 4);
    c.performance = std::round(u(rng) * 20) / 20;
    cands.push_back(c);
  }
  ASSERT_OK_AND_ASSIGN(CostFrontier f, CostPareto(DefaultCostTable(), cands));
  EXPECT_THAT(f.points, SizeIs(60));
  for (const CostPoint& a : f.frontier) {
    for (const CostPoint& b : f.frontier) {
      const bool dominates = a.cost <= b.cost && a.candidate.performance >= b.candidate.performance &&
                             (a.cost < b.cost || a.candidate.performance > b.candidate.performance);
      EXPECT_FALSE(dominates);
    }
  }
  // Every excluded point is dominated by some frontier point.
  for (const CostPoint& p : f.points) {
    if (p.on_frontier) continue;
    bool dominated = false;
    for (const CostPoint& q : f.frontier) {
      dominated |= q.cost <= p.cost && q.candidate.performance >= p.candidate.performance;
    }
    EXPECT_TRUE(dominated);
  }
}

}  // namespace
}  // namespace mia
