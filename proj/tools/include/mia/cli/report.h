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

#ifndef MIA_CLI_REPORT_H_
#define MIA_CLI_REPORT_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "mia/cost.h"
#include "mia/disparity.h"
#include "mia/ensemble.h"
#include "mia/types.h"

namespace mia::cli {

struct AnalysisConfig {
  std::vector<double> betas = {0.001, 0.01, 0.1, 0.2};
  std::optional<size_t> n_instances;  // leading instances; all when unset
  DetectionMode mode = DetectionMode::kTruePositivesOnly;
  std::vector<std::string> attacks;   // all bundle attacks when empty
  // Convergence curves follow a seeded shuffle of the instances when set.
  std::optional<uint64_t> order_seed;
  // Principal components of the logits of unique samples; 0 disables.
  size_t pca_components = 2;
};

struct EnsembleConfig {
  std::vector<EnsembleStrategy> strategies;  // all three when empty
  std::vector<std::string> attacks;          // all bundle attacks when empty
  // Smallest instance count across the attacks when unset.
  std::optional<size_t> n_instances;
  std::vector<double> fpr_grid = DefaultFprGrid();
  std::vector<double> readout_fprs = {1e-3, 1e-2, 1e-1};
};

// A JSON document plus named sidecar files, all relative to an output
// directory.
struct Report {
  std::string name;
  std::string json;
  std::vector<std::pair<std::string, std::string>> sidecars;
};

// One run per bundle; with several bundles the similarity matrices and
// consistencies are also averaged across runs.
absl::StatusOr<Report> RunAnalysis(std::span<const ExperimentBundle> bundles,
                                   const AnalysisConfig& config, bool svg);

absl::StatusOr<Report> RunEnsemble(const ExperimentBundle& bundle,
                                   const EnsembleConfig& config, bool svg);

absl::StatusOr<Report> RunCost(const CostTable& table,
                               std::vector<CostCandidate> candidates,
                               bool svg);

absl::Status WriteReport(const Report& report,
                         const std::filesystem::path& dir);

// Number rounded to 12 significant digits.
double Round12(double value);

}  // namespace mia::cli

#endif  // MIA_CLI_REPORT_H_
