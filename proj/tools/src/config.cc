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
#include "mia/cli/config.h"

#include <functional>
#include <map>

#include "absl/strings/str_cat.h"
#include "json.hpp"
#include "mia/cli/bundle_io.h"
#include "mia/status_macros.h"

namespace mia::cli {
namespace {

using json = nlohmann::json;
using Setter = std::function<void(const json&)>;

absl::StatusOr<json> ParseObject(std::string_view text,
                                 const std::string& source) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    return absl::InvalidArgumentError(absl::StrCat(source, ": ", e.what()));
  }
  if (!j.is_object()) {
    return absl::InvalidArgumentError(
        absl::StrCat(source, ": config must be a JSON object"));
  }
  return j;
}

// Applies one setter per key; type errors and unknown keys are reported.
absl::Status Apply(const json& j, const std::map<std::string, Setter>& setters,
                   const std::string& source) {
  for (const auto& [key, value] : j.items()) {
    auto it = setters.find(key);
    if (it == setters.end()) {
      return absl::InvalidArgumentError(
          absl::StrCat(source, ": unknown key '", key, "'"));
    }
    try {
      it->second(value);
    } catch (const json::exception& e) {
      return absl::InvalidArgumentError(
          absl::StrCat(source, ": key '", key, "': ", e.what()));
    }
  }
  return absl::OkStatus();
}

std::vector<std::string_view> Split(std::string_view text, char sep) {
  std::vector<std::string_view> out;
  size_t start = 0;
  while (true) {
    const size_t pos = text.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(text.substr(start));
      return out;
    }
    out.push_back(text.substr(start, pos - start));
    start = pos + 1;
  }
}

template <typename T>
Setter Set(T* target) {
  return [target](const json& v) { *target = v.get<T>(); };
}

template <typename T>
Setter SetOptional(std::optional<T>* target) {
  return [target](const json& v) {
    if (v.is_null()) {
      target->reset();
    } else {
      *target = v.get<T>();
    }
  };
}

}  // namespace

absl::StatusOr<DetectionMode> ParseMode(std::string_view name) {
  if (name == "tp-only") return DetectionMode::kTruePositivesOnly;
  if (name == "all") return DetectionMode::kAllPositives;
  return absl::InvalidArgumentError(absl::StrCat(
      "unknown mode '", std::string(name), "' (expected tp-only or all)"));
}

absl::StatusOr<SimConfig> ParseSimConfig(std::string_view text,
                                         const std::string& source) {
  ASSIGN_OR_RETURN(json j, ParseObject(text, source));
  SimConfig c;
  RETURN_IF_ERROR(Apply(
      j,
      {
          {"n_samples", Set(&c.n_samples)},
          {"member_fraction", Set(&c.member_fraction)},
          {"latent_dim", Set(&c.latent_dim)},
          {"n_attacks", Set(&c.n_attacks)},
          {"directions", Set(&c.directions)},
          {"angle_spread_deg", Set(&c.angle_spread_deg)},
          {"member_signal_strength", Set(&c.member_signal_strength)},
          {"instance_noise_sigma", Set(&c.instance_noise_sigma)},
          {"n_instances", Set(&c.n_instances)},
          {"canary_fraction", Set(&c.canary_fraction)},
          {"canary_strength", Set(&c.canary_strength)},
          {"seed", Set(&c.seed)},
          {"emit_signals", Set(&c.emit_signals)},
          {"n_shadow_models", Set(&c.n_shadow_models)},
          {"shadow_spread", Set(&c.shadow_spread)},
          {"n_classes", Set(&c.n_classes)},
      },
      source));
  return c;
}

absl::StatusOr<AnalysisConfig> ParseAnalysisConfig(std::string_view text,
                                                   const std::string& source) {
  ASSIGN_OR_RETURN(json j, ParseObject(text, source));
  AnalysisConfig c;
  std::string mode;
  RETURN_IF_ERROR(Apply(j,
                        {
                            {"betas", Set(&c.betas)},
                            {"n_instances", SetOptional(&c.n_instances)},
                            {"mode", Set(&mode)},
                            {"attacks", Set(&c.attacks)},
                            {"order_seed", SetOptional(&c.order_seed)},
                            {"pca_components", Set(&c.pca_components)},
                        },
                        source));
  if (!mode.empty()) {
    auto parsed = ParseMode(mode);
    if (!parsed.ok()) {
      return absl::InvalidArgumentError(
          absl::StrCat(source, ": ", parsed.status().message()));
    }
    c.mode = *parsed;
  }
  return c;
}

absl::StatusOr<EnsembleConfig> ParseEnsembleConfig(std::string_view text,
                                                   const std::string& source) {
  ASSIGN_OR_RETURN(json j, ParseObject(text, source));
  EnsembleConfig c;
  std::vector<std::string> strategies;
  RETURN_IF_ERROR(Apply(
      j,
      {
          {"strategy",
           [&](const json& v) {
             strategies = v.is_array() ? v.get<std::vector<std::string>>()
                                       : std::vector{v.get<std::string>()};
           }},
          {"attacks", Set(&c.attacks)},
          {"num_instances", SetOptional(&c.n_instances)},
          {"fpr_grid", Set(&c.fpr_grid)},
          {"readout_fprs", Set(&c.readout_fprs)},
      },
      source));
  for (const auto& s : strategies) {
    auto parsed = ParseStrategy(s);
    if (!parsed.ok()) {
      return absl::InvalidArgumentError(
          absl::StrCat(source, ": ", parsed.status().message()));
    }
    c.strategies.push_back(*parsed);
  }
  return c;
}

absl::StatusOr<CostTable> ParseCostTable(std::string_view text,
                                         const std::string& source) {
  ASSIGN_OR_RETURN(json j, ParseObject(text, source));
  CostTable table;
  RETURN_IF_ERROR(Apply(
      j,
      {
          {"per_instance_cost", Set(&table.per_instance_cost)},
          {"shared",
           [&](const json& v) {
             for (const json& g : v) {
               table.shared.push_back(
                   {g.at("attacks").get<std::vector<std::string>>(),
                    g.at("deduction").get<double>()});
             }
           }},
      },
      source));
  absl::Status valid = ValidateCostTable(table);
  if (!valid.ok()) {
    return absl::InvalidArgumentError(
        absl::StrCat(source, ": ", valid.message()));
  }
  return table;
}

absl::StatusOr<std::vector<CostCandidate>> ParsePerformanceCsv(
    std::string_view text, const std::string& source) {
  std::vector<std::string_view> lines = Split(text, '\n');
  std::vector<CostCandidate> out;
  bool header_seen = false;
  for (size_t i = 0; i < lines.size(); ++i) {
    std::string_view line = lines[i];
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    const size_t line_no = i + 1;
    std::vector<std::string> fields = SplitList(line);
    if (!header_seen) {
      if (fields != std::vector<std::string>{"attacks", "n_instances",
                                             "performance"}) {
        return absl::InvalidArgumentError(absl::StrCat(
            source, ": expected header 'attacks,n_instances,performance'"));
      }
      header_seen = true;
      continue;
    }
    if (fields.size() != 3) {
      return absl::InvalidArgumentError(absl::StrCat(
          source, ": line ", line_no, ": expected 3 columns, got ",
          fields.size()));
    }
    CostCandidate c;
    for (std::string_view a : Split(fields[0], '+')) {
      if (!a.empty()) c.attacks.emplace_back(a);
    }
    auto n = ParseDouble(fields[1]);
    if (!n.ok() || *n < 1 || *n != static_cast<double>(static_cast<size_t>(*n))) {
      return absl::InvalidArgumentError(absl::StrCat(
          source, ": line ", line_no, ", column 2: invalid instance count '",
          fields[1], "'"));
    }
    c.n_instances = static_cast<size_t>(*n);
    auto perf = ParseDouble(fields[2]);
    if (!perf.ok()) {
      return absl::InvalidArgumentError(
          absl::StrCat(source, ": line ", line_no, ", column 3: non-numeric ",
                       "cell '", fields[2], "'"));
    }
    c.performance = *perf;
    out.push_back(std::move(c));
  }
  if (!header_seen) {
    return absl::InvalidArgumentError(absl::StrCat(source, ": empty file"));
  }
  return out;
}

}  // namespace mia::cli
