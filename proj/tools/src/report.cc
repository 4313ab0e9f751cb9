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
#include "mia/cli/report.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "json.hpp"
#include "mia/cli/bundle_io.h"
#include "mia/cli/svg.h"
#include "mia/kde.h"
#include "mia/metrics.h"
#include "mia/pca.h"
#include "mia/scorers.h"
#include "mia/status_macros.h"
#include "mia/validate.h"

namespace mia::cli {
namespace {

using json = nlohmann::json;

constexpr size_t kKdeGridPoints = 101;

json Num(double v) {
  if (!std::isfinite(v)) return nullptr;
  return Round12(v);
}

json Num(std::optional<double> v) {
  return v.has_value() ? Num(*v) : json(nullptr);
}

std::string Cell(double v) { return FormatDouble(Round12(v)); }

std::string Cell(std::optional<double> v) {
  return v.has_value() ? Cell(*v) : std::string();
}

std::string Tag(double beta) { return absl::StrCat("b", FormatDouble(beta)); }

std::string SafeName(const std::string& name) {
  std::string out = name;
  for (char& c : out) {
    if (c == '/' || c == '\\' || c == ' ' || c == '+') c = '@';
  }
  return out;
}

json SetJson(const SampleSet& set, const GroundTruth& gt) {
  size_t members = 0;
  for (size_t i : set.indices()) members += gt.is_member(i);
  return json{{"size", set.size()},
              {"tpr", Num(static_cast<double>(members) /
                          static_cast<double>(gt.num_members()))}};
}

std::string ConvergenceCsv(const ConvergenceCurve& curve) {
  std::string out =
      "k,coverage_tpr,coverage_fpr,coverage_precision,coverage_size,"
      "stability_tpr,stability_fpr,stability_precision,stability_size\n";
  for (size_t i = 0; i < curve.coverage.size(); ++i) {
    const ConvergencePoint& c = curve.coverage[i];
    const ConvergencePoint& s = curve.stability[i];
    absl::StrAppend(&out, c.k, ",", Cell(c.tpr), ",", Cell(c.fpr), ",",
                    Cell(c.precision), ",", c.set_size, ",", Cell(s.tpr), ",",
                    Cell(s.fpr), ",", Cell(s.precision), ",", s.set_size,
                    "\n");
  }
  return out;
}

std::string SimilarityCsv(const SimilarityMatrix& sim) {
  std::string out = absl::StrCat("attack,", absl::StrJoin(sim.attack_names, ","),
                                 "\n");
  for (size_t r = 0; r < sim.attack_names.size(); ++r) {
    out += sim.attack_names[r];
    for (size_t c = 0; c < sim.attack_names.size(); ++c) {
      absl::StrAppend(&out, ",", Cell(sim.values(r, c)));
    }
    out += "\n";
  }
  return out;
}

json MatrixJson(const RealMatrix& m) {
  json rows = json::array();
  for (size_t r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (double v : m.row(r)) row.push_back(Num(v));
    rows.push_back(std::move(row));
  }
  return rows;
}

// Row-wise softmax of the transposed logits (C x n) into n x C confidences.
RealMatrix Softmax(const RealMatrix& logits) {
  RealMatrix conf(logits.cols(), logits.rows());
  for (size_t x = 0; x < logits.cols(); ++x) {
    double top = -std::numeric_limits<double>::infinity();
    for (size_t c = 0; c < logits.rows(); ++c) top = std::max(top, logits(c, x));
    double total = 0.0;
    for (size_t c = 0; c < logits.rows(); ++c) {
      conf(x, c) = std::exp(logits(c, x) - top);
      total += conf(x, c);
    }
    for (size_t c = 0; c < logits.rows(); ++c) conf(x, c) /= total;
  }
  return conf;
}

std::vector<double> Gather(const std::vector<double>& values,
                           const SampleSet& set) {
  std::vector<double> out;
  out.reserve(set.size());
  for (size_t i : set.indices()) out.push_back(values[i]);
  return out;
}

double Mean(const std::vector<double>& v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

struct AttackCache {
  std::string name;
  std::map<double, SampleSet> coverage;
  std::map<double, SampleSet> stability;
  std::map<double, double> consistency;
};

// Everything the report says about one bundle.
absl::StatusOr<json> AnalyzeRun(const ExperimentBundle& bundle,
                                const AnalysisConfig& config,
                                const std::string& prefix, bool svg,
                                Report& report,
                                std::vector<std::vector<SimilarityMatrix>>* sims) {
  const GroundTruth& gt = bundle.ground_truth;
  const std::vector<std::string> attacks =
      config.attacks.empty() ? bundle.attack_names() : config.attacks;
  for (const auto& a : attacks) RETURN_IF_ERROR(bundle.FindAttack(a).status());

  json run;
  run["n_samples"] = bundle.num_samples();
  run["n_members"] = gt.num_members();
  run["warnings"] = ValidateBundle(bundle).warnings;

  std::vector<AttackCache> caches;
  json attacks_json = json::object();
  for (const auto& name : attacks) {
    ASSIGN_OR_RETURN(const ScoreMatrix* sm, bundle.FindAttack(name));
    const size_t n_used = config.n_instances.has_value()
                              ? std::min(*config.n_instances, sm->num_instances())
                              : sm->num_instances();
    if (config.n_instances.has_value() &&
        *config.n_instances > sm->num_instances()) {
      return absl::InvalidArgumentError(absl::StrCat(
          "attack '", name, "' has ", sm->num_instances(),
          " instances, ", *config.n_instances, " requested"));
    }
    json a;
    a["n_instances"] = n_used;
    json instances = json::array();
    double auc_sum = 0.0;
    for (size_t i = 0; i < n_used; ++i) {
      ASSIGN_OR_RETURN(RocCurve roc, ComputeRoc(gt, sm->values.row(i)));
      const double auc = Auc(roc);
      auc_sum += auc;
      instances.push_back(json{{"seed", sm->seed_labels[i]}, {"auc", Num(auc)}});
    }
    a["instances"] = std::move(instances);
    a["mean_auc"] = Num(auc_sum / static_cast<double>(n_used));

    std::vector<size_t> order;
    if (config.order_seed.has_value()) {
      order = ShuffledInstanceOrder(n_used, *config.order_seed);
    }

    AttackCache cache{name, {}, {}, {}};
    json by_fpr = json::array();
    std::vector<Series> coverage_series;
    std::vector<Series> stability_series;
    for (double beta : config.betas) {
      ASSIGN_OR_RETURN(PredictionMatrix pm,
                       CalibratePredictions(*sm, gt, beta, n_used));
      json entry;
      entry["beta"] = Num(beta);
      if (n_used >= 2) {
        ASSIGN_OR_RETURN(double c, Consistency(pm, gt, config.mode));
        entry["consistency"] = Num(c);
        cache.consistency[beta] = c;
      } else {
        entry["consistency"] = nullptr;
      }
      json per_instance = json::array();
      for (size_t i = 0; i < n_used; ++i) {
        auto row = pm.values.row(i);
        const ConfusionCounts cc = CountConfusion(gt, row);
        ASSIGN_OR_RETURN(double bacc, BalancedAccuracy(gt, row));
        ASSIGN_OR_RETURN(std::optional<double> prec, Precision(gt, row));
        per_instance.push_back(json{
            {"seed", sm->seed_labels[i]},
            {"achieved_fpr", Num(pm.achieved_fpr[i])},
            {"tpr", Num(static_cast<double>(cc.true_positives) /
                        static_cast<double>(gt.num_members()))},
            {"precision", Num(prec)},
            {"balanced_accuracy", Num(bacc)},
        });
      }
      entry["instances"] = std::move(per_instance);
      ASSIGN_OR_RETURN(SampleSet cov, CoverageSet(pm, gt, config.mode));
      ASSIGN_OR_RETURN(SampleSet stab, StabilitySet(pm, gt, config.mode));
      entry["coverage"] = SetJson(cov, gt);
      entry["stability"] = SetJson(stab, gt);

      ASSIGN_OR_RETURN(ConvergenceCurve curve,
                       ConvergenceCurves(pm, gt, config.mode, order));
      const std::string file = absl::StrCat(prefix, "convergence_",
                                            SafeName(name), "_", Tag(beta),
                                            ".csv");
      report.sidecars.emplace_back(file, ConvergenceCsv(curve));
      entry["convergence_csv"] = file;
      if (svg) {
        Series cs{absl::StrCat("beta=", FormatDouble(beta)), {}};
        Series ss = cs;
        for (size_t i = 0; i < curve.coverage.size(); ++i) {
          cs.points.emplace_back(static_cast<double>(curve.coverage[i].k),
                                 curve.coverage[i].tpr);
          ss.points.emplace_back(static_cast<double>(curve.stability[i].k),
                                 curve.stability[i].fpr);
        }
        coverage_series.push_back(std::move(cs));
        stability_series.push_back(std::move(ss));
      }
      cache.coverage.emplace(beta, std::move(cov));
      cache.stability.emplace(beta, std::move(stab));
      by_fpr.push_back(std::move(entry));
    }
    a["by_fpr"] = std::move(by_fpr);
    if (svg) {
      report.sidecars.emplace_back(
          absl::StrCat(prefix, "coverage_tpr_", SafeName(name), ".svg"),
          LinePlotSvg(coverage_series,
                      {absl::StrCat(name, ": coverage TPR"), "instances",
                       "TPR", false}));
      report.sidecars.emplace_back(
          absl::StrCat(prefix, "stability_fpr_", SafeName(name), ".svg"),
          LinePlotSvg(stability_series,
                      {absl::StrCat(name, ": stability FPR"), "instances",
                       "FPR", false}));
    }
    attacks_json[name] = std::move(a);
    caches.push_back(std::move(cache));
  }

  // Unique and covered samples, canary breakdown and logit analyses.
  const RealMatrix* logits = bundle.FindSignal(kTargetLogits);
  std::optional<std::vector<double>> margins;
  if (logits != nullptr && logits->rows() >= 2) {
    ASSIGN_OR_RETURN(margins, ConfidenceMargin(Softmax(*logits)));
  }
  std::vector<double> kde_grid(kKdeGridPoints);
  for (size_t i = 0; i < kKdeGridPoints; ++i) {
    kde_grid[i] = static_cast<double>(i) / (kKdeGridPoints - 1);
  }
  const SampleSet all_members = SampleSet::FromMask(gt.labels);

  for (size_t ai = 0; ai < caches.size(); ++ai) {
    const AttackCache& cache = caches[ai];
    json& by_fpr = attacks_json[cache.name]["by_fpr"];
    for (size_t bi = 0; bi < config.betas.size(); ++bi) {
      const double beta = config.betas[bi];
      SampleSet others(gt.size());
      for (size_t oi = 0; oi < caches.size(); ++oi) {
        if (oi != ai) others = others.Union(caches[oi].stability.at(beta));
      }
      SampleSet unique = cache.stability.at(beta).Difference(others);
      // Unique sets are defined over members even when all positives count.
      unique = unique.Intersection(all_members);
      const SampleSet covered =
          cache.coverage.at(beta).Intersection(all_members);
      json& entry = by_fpr[bi];
      entry["unique_count"] = unique.size();
      entry["covered_count"] = covered.size();
      const std::string file = absl::StrCat(prefix, "unique_",
                                            SafeName(cache.name), "_",
                                            Tag(beta), ".csv");
      std::string csv = "sample\n";
      for (size_t i : unique.indices()) absl::StrAppend(&csv, i, "\n");
      report.sidecars.emplace_back(file, std::move(csv));
      entry["unique_csv"] = file;

      if (bundle.canary_mask.has_value()) {
        const SampleSet canaries = SampleSet::FromMask(*bundle.canary_mask);
        const SampleSet regular = all_members.Difference(canaries);
        auto rate = [](const SampleSet& found, const SampleSet& pool) {
          return pool.empty() ? std::numeric_limits<double>::quiet_NaN()
                              : static_cast<double>(found.IntersectionSize(pool)) /
                                    static_cast<double>(pool.size());
        };
        entry["canary"] = json{
            {"n_canaries", canaries.size()},
            {"coverage_rate", Num(rate(cache.coverage.at(beta), canaries))},
            {"stability_rate", Num(rate(cache.stability.at(beta), canaries))},
            {"regular_coverage_rate",
             Num(rate(cache.coverage.at(beta), regular))},
            {"regular_stability_rate",
             Num(rate(cache.stability.at(beta), regular))},
        };
      }

      if (logits != nullptr && config.pca_components > 0 &&
          unique.size() > config.pca_components) {
        RealMatrix rows(unique.size(), logits->rows());
        for (size_t r = 0; r < unique.size(); ++r) {
          for (size_t c = 0; c < logits->rows(); ++c) {
            rows(r, c) = (*logits)(c, unique.indices()[r]);
          }
        }
        auto pca = PcaProject(rows, std::min(config.pca_components,
                                             logits->rows()));
        if (pca.ok()) {
          json ratios = json::array();
          for (double v : pca->explained_variance_ratio) ratios.push_back(Num(v));
          entry["unique_pca_explained_ratio"] = std::move(ratios);
        } else {
          entry["unique_pca_error"] = std::string(pca.status().message());
        }
      }

      if (margins.has_value()) {
        const std::vector<double> unique_m = Gather(*margins, unique);
        const std::vector<double> member_m = Gather(*margins, all_members);
        entry["unique_mean_margin"] = Num(Mean(unique_m));
        entry["member_mean_margin"] = Num(Mean(member_m));
        auto unique_kde = Kde(unique_m, kde_grid);
        auto member_kde = Kde(member_m, kde_grid);
        if (unique_kde.ok() && member_kde.ok()) {
          const std::string kde_file = absl::StrCat(
              prefix, "margin_kde_", SafeName(cache.name), "_", Tag(beta),
              ".csv");
          std::string kcsv = "margin,unique_density,member_density\n";
          for (size_t i = 0; i < kde_grid.size(); ++i) {
            absl::StrAppend(&kcsv, Cell(kde_grid[i]), ",",
                            Cell((*unique_kde)[i]), ",",
                            Cell((*member_kde)[i]), "\n");
          }
          report.sidecars.emplace_back(kde_file, std::move(kcsv));
          entry["margin_kde_csv"] = kde_file;
        }
      }
    }
  }
  run["attacks"] = std::move(attacks_json);

  json similarity = json::array();
  std::vector<SimilarityMatrix> run_sims;
  for (SetBasis basis : {SetBasis::kCoverage, SetBasis::kStability}) {
    for (double beta : config.betas) {
      SetOptions opts{beta, config.n_instances, config.mode};
      ASSIGN_OR_RETURN(SimilarityMatrix sim,
                       MethodSimilarity(bundle, basis, opts, attacks));
      const std::string file = absl::StrCat(prefix, "similarity_",
                                            ToString(basis), "_", Tag(beta),
                                            ".csv");
      report.sidecars.emplace_back(file, SimilarityCsv(sim));
      if (svg) {
        report.sidecars.emplace_back(
            absl::StrCat(prefix, "similarity_", ToString(basis), "_",
                         Tag(beta), ".svg"),
            HeatmapSvg(sim.attack_names, sim.values,
                       absl::StrCat(ToString(basis), " similarity, beta=",
                                    FormatDouble(beta))));
      }
      similarity.push_back(json{
          {"basis", ToString(basis)},
          {"beta", Num(beta)},
          {"attacks", sim.attack_names},
          {"matrix", MatrixJson(sim.values)},
          {"mean_off_diagonal", Num(MeanOffDiagonal(sim))},
          {"csv", file},
      });
      run_sims.push_back(std::move(sim));
    }
  }
  run["similarity"] = std::move(similarity);
  sims->push_back(std::move(run_sims));
  return run;
}

}  // namespace

double Round12(double value) {
  if (!std::isfinite(value) || value == 0.0) return value;
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", value);
  return std::strtod(buf, nullptr);
}

absl::StatusOr<Report> RunAnalysis(std::span<const ExperimentBundle> bundles,
                                   const AnalysisConfig& config, bool svg) {
  if (bundles.empty()) {
    return absl::InvalidArgumentError("analysis needs at least one bundle");
  }
  if (config.betas.empty()) {
    return absl::InvalidArgumentError("analysis needs at least one FPR");
  }
  for (double beta : config.betas) {
    if (!(beta >= 0.0 && beta <= 1.0)) {
      return absl::InvalidArgumentError(
          absl::StrCat("FPR ", FormatDouble(beta), " outside [0, 1]"));
    }
  }
  Report report;
  report.name = "analysis_report.json";
  json root;
  root["kind"] = "analysis";
  json cfg;
  json betas = json::array();
  for (double b : config.betas) betas.push_back(Num(b));
  cfg["betas"] = std::move(betas);
  cfg["mode"] = config.mode == DetectionMode::kTruePositivesOnly ? "tp-only"
                                                                   : "all";
  cfg["n_instances"] = config.n_instances.has_value()
                           ? json(*config.n_instances)
                           : json(nullptr);
  cfg["order_seed"] = config.order_seed.has_value()
                          ? json(*config.order_seed)
                          : json(nullptr);
  cfg["attacks"] = config.attacks;
  cfg["pca_components"] = config.pca_components;
  root["config"] = std::move(cfg);

  std::vector<std::vector<SimilarityMatrix>> sims;
  json runs = json::array();
  for (size_t r = 0; r < bundles.size(); ++r) {
    const std::string prefix =
        bundles.size() == 1 ? std::string() : absl::StrCat("run", r, "_");
    ASSIGN_OR_RETURN(json run,
                     AnalyzeRun(bundles[r], config, prefix, svg, report, &sims));
    runs.push_back(std::move(run));
  }
  root["runs"] = runs;

  if (bundles.size() > 1) {
    json average;
    json avg_sim = json::array();
    for (size_t s = 0; s < sims.front().size(); ++s) {
      SimilarityMatrix mean = sims.front()[s];
      for (size_t r = 1; r < sims.size(); ++r) {
        if (sims[r][s].attack_names != mean.attack_names) {
          return absl::InvalidArgumentError(
              "runs being averaged must analyze the same attacks");
        }
        for (size_t i = 0; i < mean.values.data().size(); ++i) {
          mean.values.data()[i] += sims[r][s].values.data()[i];
        }
      }
      for (double& v : mean.values.data()) v /= static_cast<double>(sims.size());
      const double beta = config.betas[s % config.betas.size()];
      const std::string file = absl::StrCat("average_similarity_",
                                            ToString(mean.basis), "_",
                                            Tag(beta), ".csv");
      report.sidecars.emplace_back(file, SimilarityCsv(mean));
      avg_sim.push_back(json{
          {"basis", ToString(mean.basis)},
          {"beta", Num(beta)},
          {"attacks", mean.attack_names},
          {"matrix", MatrixJson(mean.values)},
          {"mean_off_diagonal", Num(MeanOffDiagonal(mean))},
          {"csv", file},
      });
    }
    average["similarity"] = std::move(avg_sim);

    json consistency = json::object();
    for (const auto& [name, a] : runs.front()["attacks"].items()) {
      json per_beta = json::array();
      for (size_t b = 0; b < config.betas.size(); ++b) {
        double total = 0.0;
        bool defined = true;
        for (const json& run : runs) {
          const json& c = run["attacks"][name]["by_fpr"][b]["consistency"];
          if (c.is_null()) {
            defined = false;
            break;
          }
          total += c.get<double>();
        }
        per_beta.push_back(
            json{{"beta", Num(config.betas[b])},
                 {"consistency",
                  defined ? Num(total / static_cast<double>(runs.size()))
                          : json(nullptr)}});
      }
      consistency[name] = std::move(per_beta);
    }
    average["consistency"] = std::move(consistency);
    root["average"] = std::move(average);
  }

  report.json = root.dump(2) + "\n";
  std::sort(report.sidecars.begin(), report.sidecars.end());
  return report;
}

absl::StatusOr<Report> RunEnsemble(const ExperimentBundle& bundle,
                                   const EnsembleConfig& config, bool svg) {
  const GroundTruth& gt = bundle.ground_truth;
  const std::vector<std::string> attacks =
      config.attacks.empty() ? bundle.attack_names() : config.attacks;
  std::vector<const ScoreMatrix*> matrices;
  for (const auto& a : attacks) {
    ASSIGN_OR_RETURN(const ScoreMatrix* sm, bundle.FindAttack(a));
    matrices.push_back(sm);
  }
  size_t n_instances = 0;
  if (config.n_instances.has_value()) {
    n_instances = *config.n_instances;
  } else if (!matrices.empty()) {
    n_instances = matrices.front()->num_instances();
    for (const ScoreMatrix* sm : matrices) {
      n_instances = std::min(n_instances, sm->num_instances());
    }
  }
  std::vector<EnsembleStrategy> strategies = config.strategies;
  if (strategies.empty()) {
    strategies = {EnsembleStrategy::kStability, EnsembleStrategy::kMajority,
                  EnsembleStrategy::kCoverage};
  }

  Report report;
  report.name = "ensemble_report.json";
  json root;
  root["kind"] = "ensemble";
  root["attacks"] = attacks;
  root["n_instances"] = n_instances;
  root["grid_size"] = config.fpr_grid.size();

  auto readouts = [&](std::span<const RocPoint> envelope) {
    json out = json::object();
    for (double f : config.readout_fprs) {
      out[FormatDouble(f)] = Num(EnvelopeTprAt(envelope, f));
    }
    return out;
  };

  json strategies_json = json::object();
  std::string comparison = "strategy,auc,raw_auc,balanced_accuracy";
  for (double f : config.readout_fprs) {
    absl::StrAppend(&comparison, ",tpr_at_", FormatDouble(f));
  }
  comparison += "\n";
  std::vector<Series> roc_series;
  for (EnsembleStrategy strategy : strategies) {
    EnsembleSpec spec{strategy, attacks, n_instances, config.fpr_grid};
    ASSIGN_OR_RETURN(EnsembleSweep sweep, EnsembleRocSweep(bundle, spec));
    double best_bacc = 0.0;
    for (const RocPoint& p : sweep.envelope) {
      best_bacc = std::max(best_bacc, (p.tpr + 1.0 - p.fpr) / 2.0);
    }
    const std::string name = ToString(strategy);
    std::string sweep_csv = "beta,fpr,tpr,false_positives,true_positives\n";
    for (const SweepPoint& p : sweep.points) {
      absl::StrAppend(&sweep_csv, Cell(p.beta), ",", Cell(p.fpr), ",",
                      Cell(p.tpr), ",", p.false_positives, ",",
                      p.true_positives, "\n");
    }
    std::string env_csv = "fpr,tpr\n";
    Series series{name, {}};
    for (const RocPoint& p : sweep.envelope) {
      absl::StrAppend(&env_csv, Cell(p.fpr), ",", Cell(p.tpr), "\n");
      series.points.emplace_back(p.fpr, p.tpr);
    }
    roc_series.push_back(std::move(series));
    const std::string sweep_file = absl::StrCat("ensemble_", name, "_sweep.csv");
    const std::string env_file = absl::StrCat("ensemble_", name, "_envelope.csv");
    report.sidecars.emplace_back(sweep_file, std::move(sweep_csv));
    report.sidecars.emplace_back(env_file, std::move(env_csv));

    json tpr_at = readouts(sweep.envelope);
    absl::StrAppend(&comparison, name, ",", Cell(sweep.envelope_auc), ",",
                    Cell(sweep.raw_auc), ",", Cell(best_bacc));
    for (double f : config.readout_fprs) {
      absl::StrAppend(&comparison, ",", Cell(EnvelopeTprAt(sweep.envelope, f)));
    }
    comparison += "\n";
    strategies_json[name] = json{
        {"auc", Num(sweep.envelope_auc)},
        {"raw_auc", Num(sweep.raw_auc)},
        {"balanced_accuracy", Num(best_bacc)},
        {"tpr_at", std::move(tpr_at)},
        {"n_points", sweep.points.size()},
        {"n_envelope_points", sweep.envelope.size()},
        {"warnings", sweep.warnings},
        {"sweep_csv", sweep_file},
        {"envelope_csv", env_file},
    };
  }
  root["strategies"] = std::move(strategies_json);
  report.sidecars.emplace_back("ensemble_comparison.csv", std::move(comparison));
  if (svg) {
    report.sidecars.emplace_back(
        "ensemble_roc.svg",
        LinePlotSvg(roc_series, {"Ensemble ROC envelopes", "FPR", "TPR", true}));
  }

  // Single-instance and multi-instance-only baselines.
  json baselines = json::object();
  double best_auc = 0.0;
  std::map<double, double> best_tpr;
  for (size_t a = 0; a < attacks.size(); ++a) {
    const ScoreMatrix& sm = *matrices[a];
    json b;
    double max_auc = 0.0;
    double sum_auc = 0.0;
    std::map<double, double> max_tpr;
    for (size_t i = 0; i < std::min(n_instances, sm.num_instances()); ++i) {
      ASSIGN_OR_RETURN(RocCurve roc, ComputeRoc(gt, sm.values.row(i)));
      const double auc = Auc(roc);
      max_auc = std::max(max_auc, auc);
      sum_auc += auc;
      for (double f : config.readout_fprs) {
        ASSIGN_OR_RETURN(double t, TprAtFpr(gt, sm.values.row(i), f));
        max_tpr[f] = std::max(max_tpr[f], t);
      }
    }
    best_auc = std::max(best_auc, max_auc);
    json tprs = json::object();
    for (double f : config.readout_fprs) {
      tprs[FormatDouble(f)] = Num(max_tpr[f]);
      best_tpr[f] = std::max(best_tpr[f], max_tpr[f]);
    }
    b["max_instance_auc"] = Num(max_auc);
    b["mean_instance_auc"] =
        Num(n_instances > 0 ? sum_auc / static_cast<double>(n_instances) : 0.0);
    b["max_instance_tpr_at"] = std::move(tprs);
    json multi = json::object();
    for (EnsembleStrategy strategy : strategies) {
      EnsembleSpec spec{strategy, {attacks[a]}, n_instances, config.fpr_grid};
      ASSIGN_OR_RETURN(EnsembleSweep sweep, EnsembleRocSweep(bundle, spec));
      multi[ToString(strategy)] = json{{"auc", Num(sweep.envelope_auc)},
                                       {"tpr_at", readouts(sweep.envelope)}};
    }
    b["multi_instance"] = std::move(multi);
    baselines[attacks[a]] = std::move(b);
  }
  root["baselines"] = std::move(baselines);
  json best = json::object();
  for (double f : config.readout_fprs) best[FormatDouble(f)] = Num(best_tpr[f]);
  root["best_single_instance"] = json{{"auc", Num(best_auc)},
                                      {"tpr_at", std::move(best)}};

  // stability <= majority <= coverage at every grid point.
  ASSIGN_OR_RETURN(EnsembleEvaluator evaluator,
                   EnsembleEvaluator::Create(bundle, attacks, n_instances));
  const EnsembleStrategy order[] = {EnsembleStrategy::kStability,
                                    EnsembleStrategy::kMajority,
                                    EnsembleStrategy::kCoverage};
  size_t violations = 0;
  for (double beta : config.fpr_grid) {
    ASSIGN_OR_RETURN(auto preds, evaluator.PredictAll(order, beta));
    for (size_t x = 0; x < preds[0].size(); ++x) {
      if (preds[0][x] > preds[1][x] || preds[1][x] > preds[2][x]) {
        ++violations;
        break;
      }
    }
  }
  root["nesting"] = json{{"holds", violations == 0},
                         {"checked_points", config.fpr_grid.size()},
                         {"violating_points", violations}};

  report.json = root.dump(2) + "\n";
  std::sort(report.sidecars.begin(), report.sidecars.end());
  return report;
}

absl::StatusOr<Report> RunCost(const CostTable& table,
                               std::vector<CostCandidate> candidates,
                               bool svg) {
  ASSIGN_OR_RETURN(CostFrontier frontier,
                   CostPareto(table, std::move(candidates)));
  Report report;
  report.name = "cost_report.json";
  auto point_json = [](const CostPoint& p) {
    return json{{"attacks", p.candidate.attacks},
                {"n_instances", p.candidate.n_instances},
                {"cost", Num(p.cost)},
                {"performance", Num(p.candidate.performance)},
                {"on_frontier", p.on_frontier}};
  };
  json points = json::array();
  json front = json::array();
  std::string csv = "attacks,n_instances,cost,performance,on_frontier\n";
  Series series{"frontier", {}};
  for (const CostPoint& p : frontier.points) {
    points.push_back(point_json(p));
    absl::StrAppend(&csv, absl::StrJoin(p.candidate.attacks, "+"), ",",
                    p.candidate.n_instances, ",", Cell(p.cost), ",",
                    Cell(p.candidate.performance), ",",
                    p.on_frontier ? 1 : 0, "\n");
  }
  for (const CostPoint& p : frontier.frontier) {
    front.push_back(point_json(p));
    series.points.emplace_back(p.cost, p.candidate.performance);
  }
  json tbl;
  tbl["per_instance_cost"] = json::object();
  for (const auto& [name, cost] : table.per_instance_cost) {
    tbl["per_instance_cost"][name] = Num(cost);
  }
  tbl["shared"] = json::array();
  for (const SharedCostGroup& g : table.shared) {
    tbl["shared"].push_back(
        json{{"attacks", g.attacks}, {"deduction", Num(g.deduction)}});
  }
  json root{{"kind", "cost"},
            {"table", std::move(tbl)},
            {"points", std::move(points)},
            {"frontier", std::move(front)}};
  report.json = root.dump(2) + "\n";
  report.sidecars.emplace_back("cost_frontier.csv", std::move(csv));
  if (svg) {
    report.sidecars.emplace_back(
        "cost_frontier.svg",
        LinePlotSvg({series},
                    {"Performance vs cost", "GPU-minutes", "performance", false}));
  }
  return report;
}

absl::Status WriteReport(const Report& report,
                         const std::filesystem::path& dir) {
  for (const auto& [name, content] : report.sidecars) {
    RETURN_IF_ERROR(WriteFileAtomic(dir / name, content));
  }
  return WriteFileAtomic(dir / report.name, report.json);
}

}  // namespace mia::cli
