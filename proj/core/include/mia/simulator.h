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

#ifndef MIA_SIMULATOR_H_
#define MIA_SIMULATOR_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "mia/matrix.h"
#include "mia/types.h"

namespace mia {

// Synthetic experiment. Every sample has a latent vector v ~ N(0, I_d);
// members are shifted by member_signal_strength along a fixed unit vector u
// (canaries by member_signal_strength + canary_strength). Instance i of
// attack k scores sample x as w_k . v_x + N(0, instance_noise_sigma^2).
struct SimConfig {
  size_t n_samples = 2000;
  double member_fraction = 0.5;
  size_t latent_dim = 8;
  size_t n_attacks = 4;
  // Explicit unit directions w_k (n_attacks x latent_dim). When empty, w_k
  // makes angle `angle_spread_deg` with u inside its own plane, so distinct
  // attacks share only the member-signal axis.
  std::vector<std::vector<double>> directions;
  double angle_spread_deg = 30.0;
  double member_signal_strength = 1.5;
  double instance_noise_sigma = 0.5;
  size_t n_instances = 6;
  double canary_fraction = 0.0;
  double canary_strength = 0.0;
  uint64_t seed = 0;

  // Loss/confidence/logit signals for the analytic scorers, derived from
  // attack 0's direction.
  bool emit_signals = true;
  size_t n_shadow_models = 4;  // per side (in / out)
  double shadow_spread = 0.3;  // per-shadow-model loss jitter
  size_t n_classes = 10;       // rows of target_logits; 0 disables
};

absl::Status ValidateConfig(const SimConfig& config);

// Unit attack directions implied by the config.
absl::StatusOr<std::vector<std::vector<double>>> AttackDirections(
    const SimConfig& config);

// Per-sample state shared by all attacks.
struct SimLatents {
  GroundTruth ground_truth;
  std::vector<uint8_t> canary_mask;
  RealMatrix latent;               // n_samples x latent_dim, shift included
  std::vector<double> shift;       // applied shift along u per sample
};

absl::StatusOr<SimLatents> GenerateLatents(const SimConfig& config);

// Scores of attack `attack_index` (n_instances x n_samples) for a given
// direction. Depends only on (seed, attack_index, instance), so changing one
// attack's direction leaves every other attack untouched.
RealMatrix GenerateAttackScores(const SimConfig& config,
                                const SimLatents& latents,
                                std::span<const double> direction,
                                size_t attack_index);

absl::StatusOr<ExperimentBundle> Generate(const SimConfig& config);

double Softplus(double z);

}  // namespace mia

#endif  // MIA_SIMULATOR_H_
