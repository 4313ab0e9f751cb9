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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "absl/strings/str_cat.h"
#include "mia/status_macros.h"
#include "mia/validate.h"

namespace mia {
namespace {

absl::Status CheckLosses(std::span<const double> losses, const char* name) {
  if (losses.empty()) {
    return absl::InvalidArgumentError(absl::StrCat(name, " is empty"));
  }
  for (size_t i = 0; i < losses.size(); ++i) {
    if (!std::isfinite(losses[i]) || losses[i] < 0.0) {
      return absl::InvalidArgumentError(absl::StrCat(
          name, "[", i, "] must be a finite non-negative loss, got ",
          losses[i]));
    }
  }
  return absl::OkStatus();
}

absl::Status CheckRagged(const std::vector<std::vector<double>>& ragged,
                         size_t n, size_t min_entries, const char* name) {
  if (ragged.size() != n) {
    return absl::InvalidArgumentError(absl::StrCat(
        name, " has ", ragged.size(), " samples, expected ", n));
  }
  for (size_t i = 0; i < n; ++i) {
    if (ragged[i].size() < min_entries) {
      return absl::InvalidArgumentError(
          absl::StrCat(name, "[", i, "] has ", ragged[i].size(),
                       " entries, at least ", min_entries, " required"));
    }
    for (double v : ragged[i]) {
      if (!std::isfinite(v)) {
        return absl::InvalidArgumentError(
            absl::StrCat(name, "[", i, "] contains a non-finite value"));
      }
    }
  }
  return absl::OkStatus();
}

double Mean(std::span<const double> v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double SumSquaredDeviation(std::span<const double> v, double mean) {
  double s = 0.0;
  for (double x : v) s += (x - mean) * (x - mean);
  return s;
}

// Log density up to the shared -0.5 * log(2 pi) term, which cancels in the
// ratio.
double LogDensity(double x, double mean, double sigma) {
  const double z = (x - mean) / sigma;
  return -std::log(sigma) - 0.5 * z * z;
}

std::vector<std::vector<double>> RaggedColumns(const RealMatrix& m) {
  std::vector<std::vector<double>> out(m.cols());
  for (size_t c = 0; c < m.cols(); ++c) {
    for (size_t r = 0; r < m.rows(); ++r) {
      if (!std::isnan(m(r, c))) out[c].push_back(m(r, c));
    }
  }
  return out;
}

std::string SignalName(const char* base, const std::string& instance) {
  return instance.empty() ? std::string(base) : absl::StrCat(base, "/", instance);
}

bool IsShadowSignal(std::string_view base) {
  return base == kShadowLoss || base == kShadowInLosses ||
         base == kShadowOutLosses || base == kShadowConfidences;
}

}  // namespace

std::vector<double> MinMaxNormalize(std::span<const double> values) {
  std::vector<double> out(values.size(), 0.5);
  if (values.empty()) return out;
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  const double range = *hi - *lo;
  if (!(range > 0.0)) return out;
  for (size_t i = 0; i < values.size(); ++i) {
    out[i] = (values[i] - *lo) / range;
  }
  return out;
}

absl::StatusOr<LossScores> LossScorer(const SignalSet& signals) {
  RETURN_IF_ERROR(CheckLosses(signals.target_loss, "target_loss"));
  const auto& loss = signals.target_loss;
  LossScores out;
  out.raw_threshold = Mean(loss);
  std::vector<double> norm = MinMaxNormalize(loss);
  out.scores.resize(loss.size());
  for (size_t i = 0; i < loss.size(); ++i) out.scores[i] = 1.0 - norm[i];

  const auto [lo, hi] = std::minmax_element(loss.begin(), loss.end());
  const double range = *hi - *lo;
  out.threshold =
      range > 0.0 ? 1.0 - (out.raw_threshold - *lo) / range : 0.5;
  return out;
}

std::vector<uint8_t> PredictAbove(std::span<const double> scores,
                                  double threshold) {
  std::vector<uint8_t> out(scores.size());
  for (size_t i = 0; i < scores.size(); ++i) {
    out[i] = scores[i] > threshold ? 1 : 0;
  }
  return out;
}

absl::StatusOr<std::vector<double>> CalibrationScorer(
    const SignalSet& signals) {
  RETURN_IF_ERROR(CheckLosses(signals.target_loss, "target_loss"));
  if (!signals.shadow_loss.has_value()) {
    return absl::InvalidArgumentError(
        "calibration scorer requires shadow_loss");
  }
  const auto& shadow = *signals.shadow_loss;
  if (shadow.size() != signals.num_samples()) {
    return absl::InvalidArgumentError(
        absl::StrCat("shadow_loss has ", shadow.size(), " samples, expected ",
                     signals.num_samples()));
  }
  RETURN_IF_ERROR(CheckLosses(shadow, "shadow_loss"));
  std::vector<double> calibrated(shadow.size());
  for (size_t i = 0; i < shadow.size(); ++i) {
    calibrated[i] = signals.target_loss[i] - shadow[i];
  }
  std::vector<double> scores = MinMaxNormalize(calibrated);
  for (double& s : scores) s = 1.0 - s;
  return scores;
}

absl::StatusOr<double> CalibrationThreshold(std::span<const double> aux_scores,
                                            const GroundTruth& aux_gt) {
  RETURN_IF_ERROR(CheckScores(aux_gt, aux_scores));
  if (aux_scores.empty()) {
    return absl::InvalidArgumentError("auxiliary scores are empty");
  }
  const auto [lo, hi] = std::minmax_element(aux_scores.begin(), aux_scores.end());
  if (!(*hi > *lo)) return *lo;

  constexpr int kCandidates = 1000;
  double best_tau = *lo;
  size_t best_correct = 0;
  for (int j = 0; j < kCandidates; ++j) {
    const double tau =
        *lo + (*hi - *lo) * static_cast<double>(j) / (kCandidates - 1);
    size_t correct = 0;
    for (size_t i = 0; i < aux_scores.size(); ++i) {
      const bool pred = aux_scores[i] >= tau;
      if (pred == aux_gt.is_member(i)) ++correct;
    }
    if (correct > best_correct) {
      best_correct = correct;
      best_tau = tau;
    }
  }
  return best_tau;
}

absl::StatusOr<std::vector<double>> LiraScorer(const SignalSet& signals,
                                               VarianceMode mode) {
  const size_t n = signals.num_samples();
  if (n == 0) return absl::InvalidArgumentError("target_loss is empty");
  for (double v : signals.target_loss) {
    if (!std::isfinite(v)) {
      return absl::InvalidArgumentError("target_loss must be finite");
    }
  }
  if (signals.shadow_in_losses.empty() || signals.shadow_out_losses.empty()) {
    return absl::InvalidArgumentError(
        "LiRA requires shadow_in_losses and shadow_out_losses");
  }
  const size_t min_entries = mode == VarianceMode::kPerSample ? 2 : 1;
  RETURN_IF_ERROR(CheckRagged(signals.shadow_in_losses, n, min_entries,
                              "shadow_in_losses"));
  RETURN_IF_ERROR(CheckRagged(signals.shadow_out_losses, n, min_entries,
                              "shadow_out_losses"));

  std::vector<double> mean_in(n), mean_out(n), sigma_in(n), sigma_out(n);
  double pooled_in = 0.0, pooled_out = 0.0;
  size_t count_in = 0, count_out = 0;
  for (size_t i = 0; i < n; ++i) {
    const auto& in = signals.shadow_in_losses[i];
    const auto& out = signals.shadow_out_losses[i];
    mean_in[i] = Mean(in);
    mean_out[i] = Mean(out);
    const double ss_in = SumSquaredDeviation(in, mean_in[i]);
    const double ss_out = SumSquaredDeviation(out, mean_out[i]);
    sigma_in[i] = std::sqrt(ss_in / static_cast<double>(in.size()));
    sigma_out[i] = std::sqrt(ss_out / static_cast<double>(out.size()));
    pooled_in += ss_in;
    pooled_out += ss_out;
    count_in += in.size();
    count_out += out.size();
  }
  if (mode == VarianceMode::kGlobal) {
    std::fill(sigma_in.begin(), sigma_in.end(),
              std::sqrt(pooled_in / static_cast<double>(count_in)));
    std::fill(sigma_out.begin(), sigma_out.end(),
              std::sqrt(pooled_out / static_cast<double>(count_out)));
  }

  std::vector<double> scores(n);
  for (size_t i = 0; i < n; ++i) {
    const double s_in = std::max(sigma_in[i], kLiraSigmaFloor);
    const double s_out = std::max(sigma_out[i], kLiraSigmaFloor);
    const double loss = signals.target_loss[i];
    scores[i] = LogDensity(loss, mean_in[i], s_in) -
                LogDensity(loss, mean_out[i], s_out);
  }
  return scores;
}

absl::StatusOr<std::vector<double>> ReferenceScorer(const SignalSet& signals) {
  if (!signals.target_confidence.has_value()) {
    return absl::InvalidArgumentError(
        "reference scorer requires target_confidence");
  }
  const auto& target = *signals.target_confidence;
  const size_t n = target.size();
  if (n == 0) return absl::InvalidArgumentError("target_confidence is empty");
  RETURN_IF_ERROR(
      CheckRagged(signals.shadow_confidences, n, 1, "shadow_confidences"));
  std::vector<double> scores(n);
  for (size_t i = 0; i < n; ++i) {
    const auto& shadows = signals.shadow_confidences[i];
    const auto at_most = std::count_if(shadows.begin(), shadows.end(),
                                       [&](double c) { return target[i] >= c; });
    scores[i] = static_cast<double>(at_most) / static_cast<double>(shadows.size());
  }
  return scores;
}

std::vector<std::string> SignalInstances(const ExperimentBundle& bundle) {
  std::set<std::string> labels;
  for (const auto& [name, _] : bundle.signals) {
    const size_t slash = name.find('/');
    if (slash == std::string::npos) continue;
    if (IsShadowSignal(std::string_view(name).substr(0, slash))) {
      labels.insert(name.substr(slash + 1));
    }
  }
  std::vector<std::string> out(labels.begin(), labels.end());
  const bool numeric = std::all_of(out.begin(), out.end(), [](const auto& s) {
    return !s.empty() && std::all_of(s.begin(), s.end(),
                                     [](char c) { return c >= '0' && c <= '9'; });
  });
  if (numeric) {
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
      return a.size() != b.size() ? a.size() < b.size() : a < b;
    });
  }
  return out;
}

absl::StatusOr<SignalSet> SignalsForInstance(const ExperimentBundle& bundle,
                                             const std::string& instance) {
  SignalSet set;
  const RealMatrix* loss = bundle.FindSignal(kTargetLoss);
  if (loss == nullptr || loss->rows() == 0) {
    return absl::NotFoundError("bundle has no target_loss signal");
  }
  set.target_loss.assign(loss->row(0).begin(), loss->row(0).end());
  if (const RealMatrix* conf = bundle.FindSignal(kTargetConfidence);
      conf != nullptr && conf->rows() > 0) {
    set.target_confidence.emplace(conf->row(0).begin(), conf->row(0).end());
  }
  if (const RealMatrix* m = bundle.FindSignal(SignalName(kShadowLoss, instance));
      m != nullptr && m->rows() > 0) {
    set.shadow_loss.emplace(m->row(0).begin(), m->row(0).end());
  }
  if (const RealMatrix* m =
          bundle.FindSignal(SignalName(kShadowInLosses, instance))) {
    set.shadow_in_losses = RaggedColumns(*m);
  }
  if (const RealMatrix* m =
          bundle.FindSignal(SignalName(kShadowOutLosses, instance))) {
    set.shadow_out_losses = RaggedColumns(*m);
  }
  if (const RealMatrix* m =
          bundle.FindSignal(SignalName(kShadowConfidences, instance))) {
    set.shadow_confidences = RaggedColumns(*m);
  }
  return set;
}

absl::StatusOr<ExperimentBundle> ScoreBundle(const ExperimentBundle& bundle,
                                             const ScoringOptions& options) {
  std::vector<std::string> instances = SignalInstances(bundle);
  if (instances.empty()) instances.push_back("");

  std::vector<SignalSet> signal_sets;
  for (const auto& instance : instances) {
    ASSIGN_OR_RETURN(SignalSet s, SignalsForInstance(bundle, instance));
    signal_sets.push_back(std::move(s));
  }
  const SignalSet& first = signal_sets.front();

  std::vector<std::string> scorers = options.scorers;
  const bool explicit_request = !scorers.empty();
  if (!explicit_request) {
    scorers.push_back("loss");
    if (first.shadow_loss.has_value()) scorers.push_back("calibration");
    if (!first.shadow_in_losses.empty() && !first.shadow_out_losses.empty()) {
      scorers.push_back("lira");
    }
    if (first.target_confidence.has_value() &&
        !first.shadow_confidences.empty()) {
      scorers.push_back("reference");
    }
  }

  ExperimentBundle out = bundle;
  for (const auto& scorer : scorers) {
    ScoreMatrix matrix;
    matrix.attack_name = scorer;
    std::vector<std::vector<double>> rows;
    for (size_t k = 0; k < signal_sets.size(); ++k) {
      const SignalSet& s = signal_sets[k];
      std::vector<double> row;
      if (scorer == "loss") {
        ASSIGN_OR_RETURN(LossScores loss, LossScorer(s));
        row = std::move(loss.scores);
      } else if (scorer == "calibration") {
        ASSIGN_OR_RETURN(row, CalibrationScorer(s));
      } else if (scorer == "lira") {
        ASSIGN_OR_RETURN(row, LiraScorer(s, options.lira_variance));
      } else if (scorer == "reference") {
        ASSIGN_OR_RETURN(row, ReferenceScorer(s));
      } else {
        return absl::InvalidArgumentError(
            absl::StrCat("unknown scorer '", scorer, "'"));
      }
      rows.push_back(std::move(row));
      matrix.seed_labels.push_back(instances[k].empty() ? "0" : instances[k]);
    }
    matrix.values = RealMatrix::FromRows(rows);
    out.attacks[scorer] = std::move(matrix);
  }
  return out;
}

}  // namespace mia
