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

#ifndef MIA_CLI_CONFIG_H_
#define MIA_CLI_CONFIG_H_

#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "mia/cli/report.h"
#include "mia/cost.h"
#include "mia/simulator.h"

namespace mia::cli {

// JSON config parsers. Keys mirror the struct field names; unknown keys are
// rejected so that typos do not silently fall back to defaults. `source`
// names the file in error messages.
absl::StatusOr<SimConfig> ParseSimConfig(std::string_view text,
                                         const std::string& source);
absl::StatusOr<AnalysisConfig> ParseAnalysisConfig(std::string_view text,
                                                   const std::string& source);
// EnsembleSpec field names: strategy (string or list), attacks,
// num_instances, fpr_grid, plus readout_fprs.
absl::StatusOr<EnsembleConfig> ParseEnsembleConfig(std::string_view text,
                                                   const std::string& source);
// {"per_instance_cost": {...}, "shared": [{"attacks": [...],
// "deduction": x}]}
absl::StatusOr<CostTable> ParseCostTable(std::string_view text,
                                         const std::string& source);

// CSV with header attacks,n_instances,performance; attacks joined by '+'.
absl::StatusOr<std::vector<CostCandidate>> ParsePerformanceCsv(
    std::string_view text, const std::string& source);

absl::StatusOr<DetectionMode> ParseMode(std::string_view name);

}  // namespace mia::cli

#endif  // MIA_CLI_CONFIG_H_
