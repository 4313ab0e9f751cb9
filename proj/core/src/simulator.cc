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
#include "mia/simulator.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <string>

#include "absl/strings/str_cat.h"
#include "mia/prng.h"
#include "mia/scorers.h"
#include "mia/status_macros.h"

namespace mia {
namespace {

// The member shift direction u is the first latent axis.
constexpr size_t kSignalAxis = 0;

double Dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

std::vector<double> NormalVector(PrngStream& rng, size_t n) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> v(n);
  for (double& x : v) x = normal(rng);
  return v;
}

enum ShadowSide : uint64_t { kIn = 0, kOut = 1, kReference = 2 };

// Losses of `count` shadow models for instance `instance`. The per-model
// jitter is shared by all instances; only the instance noise varies with it.
RealMatrix ShadowLosses(const SimConfig& config, std::span<const double> base,
                        ShadowSide side, size_t count, size_t instance) {
  const size_t n = base.size();
  RealMatrix out(count, n);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (size_t j = 0; j < count; ++j) {
    PrngStream spread = MakeStream(config.seed, StreamKey("shadow-spread", side, j));
    PrngStream noise =
        MakeStream(config.seed, StreamKey("shadow-instance", side, j, instance));
    for (size_t x = 0; x < n; ++x) {
      const double z = normal(spread);
      const double e = normal(noise);
      out(j, x) = Softplus(-base[x] + config.shadow_spread * z +
                           config.instance_noise_sigma * e);
    }
  }
  return out;
}

RealMatrix Exp(RealMatrix m, double sign) {
  RealMatrix out(m.rows(), m.cols());
  for (size_t r = 0; r < m.rows(); ++r) {
    for (size_t c = 0; c < m.cols(); ++c) out(r, c) = std::exp(sign * m(r, c));
  }
  return out;
}

}  // namespace

double Softplus(double z) {
  return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

absl::Status ValidateConfig(const SimConfig& c) {
  if (c.n_samples < 2) {
    return absl::InvalidArgumentError("n_samples must be at least 2");
  }
  if (!(c.member_fraction >= 0.0 && c.member_fraction <= 1.0)) {
    return absl::InvalidArgumentError("member_fraction must lie in [0, 1]");
  }
  const auto members = static_cast<size_t>(
      std::llround(c.member_fraction * static_cast<double>(c.n_samples)));
  if (members == 0 || members == c.n_samples) {
    return absl::InvalidArgumentError(
        "member_fraction leaves one membership class empty");
  }
  if (!(c.canary_fraction >= 0.0 && c.canary_fraction <= 1.0)) {
    return absl::InvalidArgumentError("canary_fraction must lie in [0, 1]");
  }
  if (c.latent_dim < 1) {
    return absl::InvalidArgumentError("latent_dim must be at least 1");
  }
  if (c.n_attacks < 1 || c.n_instances < 1) {
    return absl::InvalidArgumentError(
        "n_attacks and n_instances must be at least 1");
  }
  if (!(c.member_signal_strength >= 0.0) || !(c.instance_noise_sigma >= 0.0) ||
      !(c.canary_strength >= 0.0) || !(c.shadow_spread >= 0.0)) {
    return absl::InvalidArgumentError("strengths and noise levels must be >= 0");
  }
  if (c.emit_signals && c.n_shadow_models < 1) {
    return absl::InvalidArgumentError("n_shadow_models must be at least 1");
  }
  if (!c.directions.empty()) {
    if (c.directions.size() != c.n_attacks) {
      return absl::InvalidArgumentError(absl::StrCat(
          "expected ", c.n_attacks, " directions, got ", c.directions.size()));
    }
    for (size_t k = 0; k < c.directions.size(); ++k) {
      const auto& w = c.directions[k];
      if (w.size() != c.latent_dim) {
        return absl::InvalidArgumentError(
            absl::StrCat("direction ", k, " has dimension ", w.size(),
                         ", expected ", c.latent_dim));
      }
      if (std::abs(std::sqrt(Dot(w, w)) - 1.0) > 1e-9) {
        return absl::InvalidArgumentError(
            absl::StrCat("direction ", k, " is not unit-norm"));
      }
    }
  } else {
    const double s = std::sin(c.angle_spread_deg * std::numbers::pi / 180.0);
    if (std::abs(s) > 1e-12 && c.latent_dim < c.n_attacks + 1) {
      return absl::InvalidArgumentError(
          absl::StrCat("angle spread needs latent_dim >= n_attacks + 1 (",
                       c.n_attacks + 1, "), got ", c.latent_dim));
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<std::vector<std::vector<double>>> AttackDirections(
    const SimConfig& config) {
  RETURN_IF_ERROR(ValidateConfig(config));
  if (!config.directions.empty()) return config.directions;
  const double angle = config.angle_spread_deg * std::numbers::pi / 180.0;
  const double cos_a = std::cos(angle);
  const double sin_a = std::sin(angle);
  std::vector<std::vector<double>> out;
  for (size_t k = 0; k < config.n_attacks; ++k) {
    std::vector<double> w(config.latent_dim, 0.0);
    w[kSignalAxis] = cos_a;
    if (std::abs(sin_a) > 1e-12) w[1 + k] = sin_a;
    out.push_back(std::move(w));
  }
  return out;
}

absl::StatusOr<SimLatents> GenerateLatents(const SimConfig& config) {
  RETURN_IF_ERROR(ValidateConfig(config));
  const size_t n = config.n_samples;
  const auto members = static_cast<size_t>(
      std::llround(config.member_fraction * static_cast<double>(n)));

  SimLatents lat;
  lat.ground_truth.labels.assign(n, 0);
  std::fill(lat.ground_truth.labels.begin(),
            lat.ground_truth.labels.begin() + members, 1);

  // Canaries: a seeded subset of the members.
  lat.canary_mask.assign(n, 0);
  const auto canaries = static_cast<size_t>(std::llround(
      config.canary_fraction * static_cast<double>(members)));
  if (canaries > 0) {
    std::vector<size_t> idx(members);
    std::iota(idx.begin(), idx.end(), 0);
    PrngStream rng = MakeStream(config.seed, StreamKey("canary"));
    for (size_t i = 0; i < canaries; ++i) {
      std::uniform_int_distribution<size_t> pick(i, members - 1);
      std::swap(idx[i], idx[pick(rng)]);
      lat.canary_mask[idx[i]] = 1;
    }
  }

  lat.latent = RealMatrix(n, config.latent_dim);
  lat.shift.assign(n, 0.0);
  PrngStream rng = MakeStream(config.seed, StreamKey("latent"));
  std::normal_distribution<double> normal(0.0, 1.0);
  for (size_t x = 0; x < n; ++x) {
    for (size_t j = 0; j < config.latent_dim; ++j) lat.latent(x, j) = normal(rng);
    if (lat.ground_truth.is_member(x)) {
      lat.shift[x] = config.member_signal_strength +
                     (lat.canary_mask[x] ? config.canary_strength : 0.0);
      lat.latent(x, kSignalAxis) += lat.shift[x];
    }
  }
  return lat;
}

RealMatrix GenerateAttackScores(const SimConfig& config,
                                const SimLatents& latents,
                                std::span<const double> direction,
                                size_t attack_index) {
  const size_t n = latents.latent.rows();
  std::vector<double> projection(n);
  for (size_t x = 0; x < n; ++x) {
    projection[x] = Dot(latents.latent.row(x), direction);
  }
  RealMatrix scores(config.n_instances, n);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (size_t i = 0; i < config.n_instances; ++i) {
    PrngStream rng = MakeStream(config.seed, StreamKey("score", attack_index, i));
    for (size_t x = 0; x < n; ++x) {
      scores(i, x) = projection[x] + config.instance_noise_sigma * normal(rng);
    }
  }
  return scores;
}

absl::StatusOr<ExperimentBundle> Generate(const SimConfig& config) {
  ASSIGN_OR_RETURN(std::vector<std::vector<double>> directions,
                   AttackDirections(config));
  ASSIGN_OR_RETURN(SimLatents lat, GenerateLatents(config));
  const size_t n = config.n_samples;

  ExperimentBundle bundle;
  bundle.ground_truth = lat.ground_truth;
  if (config.canary_fraction > 0.0) bundle.canary_mask = lat.canary_mask;

  std::vector<std::string> seeds;
  for (size_t i = 0; i < config.n_instances; ++i) {
    seeds.push_back(std::to_string(i));
  }
  for (size_t k = 0; k < config.n_attacks; ++k) {
    ScoreMatrix m;
    m.attack_name = absl::StrCat("attack_", k);
    m.values = GenerateAttackScores(config, lat, directions[k], k);
    m.seed_labels = seeds;
    bundle.attacks[m.attack_name] = std::move(m);
  }

  if (config.emit_signals) {
    const auto& w0 = directions.front();
    const double signal_gain = w0[kSignalAxis];
    std::vector<double> target(n), out_base(n), in_base(n);
    for (size_t x = 0; x < n; ++x) {
      target[x] = Dot(lat.latent.row(x), w0);
      out_base[x] = target[x] - signal_gain * lat.shift[x];
      // Shadow models trained on x see it with the shift it would carry as a
      // member of the target set.
      const double member_shift =
          config.member_signal_strength +
          (lat.canary_mask[x] ? config.canary_strength : 0.0);
      in_base[x] = out_base[x] + signal_gain * member_shift;
    }
    RealMatrix target_loss(1, n);
    for (size_t x = 0; x < n; ++x) target_loss(0, x) = Softplus(-target[x]);
    bundle.signals[kTargetConfidence] = Exp(target_loss, -1.0);
    bundle.signals[kTargetLoss] = std::move(target_loss);

    for (size_t i = 0; i < config.n_instances; ++i) {
      const std::string suffix = absl::StrCat("/", i);
      RealMatrix out_losses =
          ShadowLosses(config, out_base, kOut, config.n_shadow_models, i);
      bundle.signals[kShadowInLosses + suffix] =
          ShadowLosses(config, in_base, kIn, config.n_shadow_models, i);
      bundle.signals[kShadowConfidences + suffix] = Exp(out_losses, -1.0);
      bundle.signals[kShadowOutLosses + suffix] = std::move(out_losses);
      bundle.signals[kShadowLoss + suffix] =
          ShadowLosses(config, out_base, kReference, 1, i);
    }

    if (config.n_classes > 0) {
      PrngStream rng = MakeStream(config.seed, StreamKey("logit-projection"));
      RealMatrix logits(config.n_classes, n);
      for (size_t c = 0; c < config.n_classes; ++c) {
        std::vector<double> a = NormalVector(rng, config.latent_dim);
        for (size_t x = 0; x < n; ++x) logits(c, x) = Dot(lat.latent.row(x), a);
      }
      bundle.signals[kTargetLogits] = std::move(logits);
    }
  }

  bundle.metadata["generator"] = "simulator";
  bundle.metadata["seed"] = std::to_string(config.seed);
  bundle.metadata["n_members"] = std::to_string(bundle.ground_truth.num_members());
  bundle.metadata["n_nonmembers"] =
      std::to_string(bundle.ground_truth.num_nonmembers());
  return bundle;
}

}  // namespace mia
