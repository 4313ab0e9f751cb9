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
#include "mia/cost.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "mia/status_macros.h"

namespace mia {

CostTable DefaultCostTable() {
  CostTable table;
  table.per_instance_cost = {
      {"lira", 580.0},
      {"loss_trajectory", 17.0},
      {"calibration", 5.0},
      {"reference", 540.0},
  };
  table.shared.push_back({{"lira", "reference"}, 540.0});
  return table;
}

absl::Status ValidateCostTable(const CostTable& table) {
  for (const auto& [name, cost] : table.per_instance_cost) {
    if (!(cost >= 0.0) || !std::isfinite(cost)) {
      return absl::InvalidArgumentError(
          absl::StrCat("cost of ", name, " must be finite and >= 0"));
    }
  }
  for (const auto& group : table.shared) {
    if (!(group.deduction >= 0.0)) {
      return absl::InvalidArgumentError("shared deductions must be >= 0");
    }
    double total = 0.0;
    for (const auto& name : group.attacks) {
      auto it = table.per_instance_cost.find(name);
      if (it == table.per_instance_cost.end()) {
        return absl::InvalidArgumentError(
            absl::StrCat("shared group names unknown attack '", name, "'"));
      }
      total += it->second;
    }
    if (group.deduction > total) {
      return absl::InvalidArgumentError(absl::StrCat(
          "deduction ", group.deduction, " exceeds the group's total cost ",
          total, " (", absl::StrJoin(group.attacks, "+"), ")"));
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<double> EnsembleCost(const CostTable& table,
                                    const std::vector<std::string>& attacks,
                                    size_t n_instances) {
  if (attacks.empty()) return absl::InvalidArgumentError("empty attack subset");
  if (n_instances < 1) return absl::InvalidArgumentError("n_instances must be >= 1");
  std::set<std::string> included;
  double per_instance = 0.0;
  for (const auto& name : attacks) {
    auto it = table.per_instance_cost.find(name);
    if (it == table.per_instance_cost.end()) {
      return absl::InvalidArgumentError(
          absl::StrCat("no cost defined for attack '", name, "'"));
    }
    if (!included.insert(name).second) {
      return absl::InvalidArgumentError(
          absl::StrCat("attack '", name, "' listed twice"));
    }
    per_instance += it->second;
  }
  for (const auto& group : table.shared) {
    const bool all = std::all_of(
        group.attacks.begin(), group.attacks.end(),
        [&](const std::string& a) { return included.count(a) > 0; });
    if (all) per_instance -= group.deduction;
  }
  return static_cast<double>(n_instances) * per_instance;
}

absl::StatusOr<CostFrontier> CostPareto(const CostTable& table,
                                        std::vector<CostCandidate> candidates) {
  RETURN_IF_ERROR(ValidateCostTable(table));
  if (candidates.empty()) {
    return absl::InvalidArgumentError("no cost candidates");
  }
  CostFrontier out;
  for (auto& c : candidates) {
    ASSIGN_OR_RETURN(double cost, EnsembleCost(table, c.attacks, c.n_instances));
    out.points.push_back(CostPoint{std::move(c), cost, false});
  }
  std::stable_sort(out.points.begin(), out.points.end(),
                   [](const CostPoint& a, const CostPoint& b) {
                     if (a.cost != b.cost) return a.cost < b.cost;
                     return a.candidate.performance < b.candidate.performance;
                   });
  for (auto& p : out.points) {
    p.on_frontier = std::none_of(
        out.points.begin(), out.points.end(), [&](const CostPoint& q) {
          return q.cost <= p.cost &&
                 q.candidate.performance >= p.candidate.performance &&
                 (q.cost < p.cost ||
                  q.candidate.performance > p.candidate.performance);
        });
    if (p.on_frontier) out.frontier.push_back(p);
  }
  return out;
}

}  // namespace mia
