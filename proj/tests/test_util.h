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

#ifndef MIA_TESTS_TEST_UTIL_H_
#define MIA_TESTS_TEST_UTIL_H_

#include <cstdint>
#include <random>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "gtest/gtest.h"
#include "mia/types.h"

#define MIA_TEST_CONCAT_INNER(a, b) a##b
#define MIA_TEST_CONCAT(a, b) MIA_TEST_CONCAT_INNER(a, b)

#define ASSERT_OK_AND_ASSIGN(lhs, expr)                                \
  auto MIA_TEST_CONCAT(_status_or_, __LINE__) = (expr);                \
  ASSERT_TRUE(MIA_TEST_CONCAT(_status_or_, __LINE__).ok())             \
      << MIA_TEST_CONCAT(_status_or_, __LINE__).status();              \
  lhs = *std::move(MIA_TEST_CONCAT(_status_or_, __LINE__))

#define EXPECT_OK(expr) EXPECT_TRUE((expr).ok()) << (expr)
#define ASSERT_OK(expr) ASSERT_TRUE((expr).ok()) << (expr)

namespace mia::testing {

inline GroundTruth Gt(std::vector<uint8_t> labels) {
  return GroundTruth{std::move(labels)};
}

// Random labels with both classes present.
inline GroundTruth RandomGt(std::mt19937_64& rng, size_t n) {
  std::bernoulli_distribution coin(0.5);
  GroundTruth gt;
  gt.labels.resize(n);
  for (auto& l : gt.labels) l = coin(rng);
  gt.labels[0] = 1;
  gt.labels[1] = 0;
  std::shuffle(gt.labels.begin(), gt.labels.end(), rng);
  return gt;
}

// Scores drawn from a small integer grid so that ties are common.
inline std::vector<double> RandomScores(std::mt19937_64& rng, size_t n,
                                        int levels) {
  std::uniform_int_distribution<int> level(0, levels - 1);
  std::vector<double> s(n);
  for (auto& v : s) v = level(rng) / static_cast<double>(levels);
  return s;
}

inline BinaryMatrix RandomBinary(std::mt19937_64& rng, size_t rows,
                                 size_t cols, double p = 0.5) {
  std::bernoulli_distribution coin(p);
  BinaryMatrix m(rows, cols);
  for (auto& v : m.data()) v = coin(rng);
  return m;
}

inline PredictionMatrix Predictions(BinaryMatrix values) {
  PredictionMatrix pm;
  pm.attack_name = "test";
  pm.achieved_fpr.assign(values.rows(), 0.0);
  pm.values = std::move(values);
  return pm;
}

inline SampleSet Set(std::vector<size_t> indices, size_t universe) {
  return *SampleSet::Create(std::move(indices), universe);
}

}  // namespace mia::testing

#endif  // MIA_TESTS_TEST_UTIL_H_
