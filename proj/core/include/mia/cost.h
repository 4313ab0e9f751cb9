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

#ifndef MIA_COST_H_
#define MIA_COST_H_

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace mia {

// Attacks that reuse each other's preparation (e.g. shadow models). When every
// member of the group is in an ensemble, `deduction` GPU-minutes per instance
// are subtracted once.
struct SharedCostGroup {
  std::vector<std::string> attacks;
  double deduction = 0.0;
};

struct CostTable {
  std::map<std::string, double> per_instance_cost;  // GPU-minutes
  std::vector<SharedCostGroup> shared;
};

// Preparation costs of the four ensemble attacks on a ResNet-56 / CIFAR-10
// setup; LiRA and the reference attack share their shadow models.
CostTable DefaultCostTable();

absl::Status ValidateCostTable(const CostTable& table);

// n * sum(per-instance costs) - n * sum(deductions of fully included groups).
absl::StatusOr<double> EnsembleCost(const CostTable& table,
                                    const std::vector<std::string>& attacks,
                                    size_t n_instances);

struct CostCandidate {
  std::vector<std::string> attacks;
  size_t n_instances = 1;
  double performance = 0.0;
};

struct CostPoint {
  CostCandidate candidate;
  double cost = 0.0;
  bool on_frontier = false;
};

struct CostFrontier {
  std::vector<CostPoint> points;    // every candidate, by (cost, performance)
  std::vector<CostPoint> frontier;  // non-dominated subset, same order
};

// Pareto frontier under (lower cost, higher performance). Identical points
// are all kept.
absl::StatusOr<CostFrontier> CostPareto(const CostTable& table,
                                        std::vector<CostCandidate> candidates);

}  // namespace mia

#endif  // MIA_COST_H_
