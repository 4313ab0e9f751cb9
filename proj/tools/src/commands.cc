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
#include "mia/cli/commands.h"

#include <filesystem>
#include <optional>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "mia/cli/bundle_io.h"
#include "mia/cli/config.h"
#include "mia/cli/report.h"
#include "mia/ensemble.h"
#include "mia/scorers.h"
#include "mia/simulator.h"
#include "mia/validate.h"

namespace mia::cli {
namespace {

namespace fs = std::filesystem;

struct Flags {
  std::vector<std::string> manifests;
  std::string config;
  std::string out;
  std::string fpr;
  std::optional<size_t> instances;
  std::string mode;
  std::string strategy;
  std::string attacks;
  std::string grid;
  std::optional<uint64_t> seed;
  bool svg = false;
  std::string costs;
  std::string performance;
  std::string lira_variance = "per-sample";
  std::string scorers;
};

// Thrown from flag post-processing; mapped to the usage exit code.
struct UsageError {
  std::string message;
};

int Fail(const absl::Status& status, std::ostream& err) {
  err << "error: " << status.message() << "\n";
  return kExitFailure;
}

int Usage(const std::string& message, std::ostream& err) {
  err << "usage error: " << message << "\n";
  return kExitUsage;
}

template <typename T>
T UsageOr(absl::StatusOr<T> value) {
  if (!value.ok()) throw UsageError{std::string(value.status().message())};
  return *std::move(value);
}

int Emit(const Report& report, const Flags& flags, std::ostream& out,
         std::ostream& err) {
  if (flags.out.empty()) {
    out << report.json;
    return kExitOk;
  }
  absl::Status written = WriteReport(report, flags.out);
  if (!written.ok()) return Fail(written, err);
  out << "wrote " << (fs::path(flags.out) / report.name).string() << " and "
      << report.sidecars.size() << " sidecar files\n";
  return kExitOk;
}

int Simulate(const Flags& flags, std::ostream& out, std::ostream& err) {
  SimConfig config;
  if (!flags.config.empty()) {
    auto text = ReadFile(flags.config);
    if (!text.ok()) return Fail(text.status(), err);
    auto parsed = ParseSimConfig(*text, flags.config);
    if (!parsed.ok()) return Fail(parsed.status(), err);
    config = *parsed;
  }
  if (flags.seed.has_value()) config.seed = *flags.seed;
  auto bundle = Generate(config);
  if (!bundle.ok()) return Fail(bundle.status(), err);
  absl::Status written = WriteBundle(*bundle, flags.out);
  if (!written.ok()) return Fail(written, err);
  out << "wrote " << (fs::path(flags.out) / kManifestFile).string() << "\n";
  return kExitOk;
}

int Score(const Flags& flags, std::ostream& out, std::ostream& err) {
  ScoringOptions options;
  if (flags.lira_variance == "global") {
    options.lira_variance = VarianceMode::kGlobal;
  } else if (flags.lira_variance != "per-sample") {
    throw UsageError{"--lira-variance must be per-sample or global"};
  }
  options.scorers = SplitList(flags.scorers);
  auto bundle = IngestBundle(flags.manifests.front());
  if (!bundle.ok()) return Fail(bundle.status(), err);
  auto scored = ScoreBundle(*bundle, options);
  if (!scored.ok()) return Fail(scored.status(), err);
  absl::Status written = WriteBundle(*scored, flags.out);
  if (!written.ok()) return Fail(written, err);
  out << "wrote " << (fs::path(flags.out) / kManifestFile).string() << "\n";
  return kExitOk;
}

int Analyze(const Flags& flags, std::ostream& out, std::ostream& err) {
  AnalysisConfig config;
  if (!flags.config.empty()) {
    auto text = ReadFile(flags.config);
    if (!text.ok()) return Fail(text.status(), err);
    auto parsed = ParseAnalysisConfig(*text, flags.config);
    if (!parsed.ok()) return Fail(parsed.status(), err);
    config = *parsed;
  }
  if (!flags.fpr.empty()) config.betas = UsageOr(ParseDoubleList(flags.fpr));
  if (flags.instances.has_value()) config.n_instances = flags.instances;
  if (!flags.mode.empty()) config.mode = UsageOr(ParseMode(flags.mode));
  if (!flags.attacks.empty()) config.attacks = SplitList(flags.attacks);
  if (flags.seed.has_value()) config.order_seed = flags.seed;

  std::vector<ExperimentBundle> bundles;
  for (const auto& m : flags.manifests) {
    auto bundle = IngestBundle(m);
    if (!bundle.ok()) return Fail(bundle.status(), err);
    bundles.push_back(*std::move(bundle));
  }
  auto report = RunAnalysis(bundles, config, flags.svg);
  if (!report.ok()) return Fail(report.status(), err);
  return Emit(*report, flags, out, err);
}

int Ensemble(const Flags& flags, std::ostream& out, std::ostream& err) {
  if (flags.manifests.size() != 1) {
    throw UsageError{"ensemble takes exactly one --manifest"};
  }
  EnsembleConfig config;
  if (!flags.config.empty()) {
    auto text = ReadFile(flags.config);
    if (!text.ok()) return Fail(text.status(), err);
    auto parsed = ParseEnsembleConfig(*text, flags.config);
    if (!parsed.ok()) return Fail(parsed.status(), err);
    config = *parsed;
  }
  if (!flags.strategy.empty()) {
    config.strategies.clear();
    for (const auto& s : SplitList(flags.strategy)) {
      config.strategies.push_back(UsageOr(ParseStrategy(s)));
    }
  }
  if (!flags.attacks.empty()) config.attacks = SplitList(flags.attacks);
  if (flags.instances.has_value()) config.n_instances = flags.instances;
  if (!flags.fpr.empty()) config.readout_fprs = UsageOr(ParseDoubleList(flags.fpr));
  if (!flags.grid.empty()) {
    std::vector<double> g = UsageOr(ParseDoubleList(flags.grid));
    if (g.size() != 3 || !(g[0] > 0) || !(g[1] >= g[0]) || !(g[2] >= 1) ||
        g[2] != static_cast<double>(static_cast<size_t>(g[2]))) {
      throw UsageError{"--grid expects lo,hi,count with 0 < lo <= hi"};
    }
    config.fpr_grid = LogSpacedGrid(g[0], g[1], static_cast<size_t>(g[2]));
  }
  auto bundle = IngestBundle(flags.manifests.front());
  if (!bundle.ok()) return Fail(bundle.status(), err);
  auto report = RunEnsemble(*bundle, config, flags.svg);
  if (!report.ok()) return Fail(report.status(), err);
  return Emit(*report, flags, out, err);
}

int Cost(const Flags& flags, std::ostream& out, std::ostream& err) {
  CostTable table = DefaultCostTable();
  if (!flags.costs.empty()) {
    auto text = ReadFile(flags.costs);
    if (!text.ok()) return Fail(text.status(), err);
    auto parsed = ParseCostTable(*text, flags.costs);
    if (!parsed.ok()) return Fail(parsed.status(), err);
    table = *parsed;
  }
  auto text = ReadFile(flags.performance);
  if (!text.ok()) return Fail(text.status(), err);
  auto candidates = ParsePerformanceCsv(*text, flags.performance);
  if (!candidates.ok()) return Fail(candidates.status(), err);
  auto report = RunCost(table, *std::move(candidates), flags.svg);
  if (!report.ok()) return Fail(report.status(), err);
  return Emit(*report, flags, out, err);
}

int Validate(const Flags& flags, std::ostream& out, std::ostream& err) {
  int status = kExitOk;
  for (const auto& m : flags.manifests) {
    auto bundle = LoadBundle(m);
    if (!bundle.ok()) {
      Fail(bundle.status(), err);
      status = kExitFailure;
      continue;
    }
    const ValidationReport report = ValidateBundle(*bundle);
    out << m << ": " << (report.ok() ? "valid" : "invalid") << "\n";
    if (!report.ToString().empty()) out << report.ToString() << "\n";
    if (!report.ok()) status = kExitFailure;
  }
  return status;
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Membership-inference disparity analysis", "mia"};
  app.require_subcommand(1);
  Flags flags;

  auto add_manifest = [&](CLI::App* cmd, bool many) {
    if (many) {
      cmd->add_option("--manifest", flags.manifests, "Bundle manifest (repeatable)")
          ->required();
    } else {
      cmd->add_option("--manifest", flags.manifests, "Bundle manifest")
          ->required()
          ->expected(1);
    }
  };
  auto add_out = [&](CLI::App* cmd, bool required) {
    auto* opt = cmd->add_option("--out", flags.out, "Output directory");
    if (required) opt->required();
  };

  CLI::App* simulate = app.add_subcommand("simulate", "Generate a synthetic bundle");
  simulate->add_option("--config", flags.config, "SimConfig JSON");
  simulate->add_option("--seed", flags.seed, "Override the config seed");
  add_out(simulate, true);

  CLI::App* score = app.add_subcommand("score", "Turn model signals into attack scores");
  add_manifest(score, false);
  add_out(score, true);
  score->add_option("--lira-variance", flags.lira_variance, "per-sample or global");
  score->add_option("--scorers", flags.scorers, "Subset of loss,calibration,lira,reference");

  CLI::App* analyze = app.add_subcommand("analyze", "Consistency, coverage and similarity report");
  add_manifest(analyze, true);
  analyze->add_option("--config", flags.config, "Analysis config JSON");
  analyze->add_option("--fpr", flags.fpr, "Comma-separated target FPRs");
  analyze->add_option("--instances", flags.instances, "Leading instances to use");
  analyze->add_option("--mode", flags.mode, "tp-only or all");
  analyze->add_option("--attacks", flags.attacks, "Comma-separated attack names");
  analyze->add_option("--seed", flags.seed, "Shuffle seed for convergence order");
  add_out(analyze, false);
  analyze->add_flag("--svg", flags.svg, "Also render SVG plots");

  CLI::App* ensemble = app.add_subcommand("ensemble", "Ensemble ROC sweep report");
  add_manifest(ensemble, false);
  ensemble->add_option("--config", flags.config, "EnsembleSpec JSON");
  ensemble->add_option("--strategy", flags.strategy, "stability, coverage and/or majority");
  ensemble->add_option("--attacks", flags.attacks, "Comma-separated attack names");
  ensemble->add_option("--instances", flags.instances, "Instances per attack");
  ensemble->add_option("--grid", flags.grid, "lo,hi,count log-spaced FPR grid");
  ensemble->add_option("--fpr", flags.fpr, "FPRs for TPR readouts");
  add_out(ensemble, false);
  ensemble->add_flag("--svg", flags.svg, "Also render SVG plots");

  CLI::App* cost = app.add_subcommand("cost", "Cost versus performance frontier");
  cost->add_option("--costs", flags.costs, "CostTable JSON (built-in table by default)");
  cost->add_option("--performance", flags.performance, "attacks,n_instances,performance CSV")
      ->required();
  add_out(cost, false);
  cost->add_flag("--svg", flags.svg, "Also render an SVG plot");

  CLI::App* validate = app.add_subcommand("validate", "Check bundles without analyzing them");
  add_manifest(validate, true);

  std::vector<char*> argv;
  std::vector<std::string> storage = args;
  if (storage.empty()) storage.push_back("mia");
  for (auto& a : storage) argv.push_back(a.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kExitOk;
    }
    return Usage(e.what(), err);
  }

  try {
    if (simulate->parsed()) return Simulate(flags, out, err);
    if (score->parsed()) return Score(flags, out, err);
    if (analyze->parsed()) return Analyze(flags, out, err);
    if (ensemble->parsed()) return Ensemble(flags, out, err);
    if (cost->parsed()) return Cost(flags, out, err);
    if (validate->parsed()) return Validate(flags, out, err);
  } catch (const UsageError& e) {
    return Usage(e.message, err);
  }
  return Usage("no subcommand", err);
}

}  // namespace mia::cli
