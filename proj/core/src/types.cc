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
#include "mia/types.h"

#include <algorithm>
#include <cassert>
#include <iterator>

#include "absl/strings/str_cat.h"

namespace mia {

size_t GroundTruth::num_members() const {
  return static_cast<size_t>(
      std::count_if(labels.begin(), labels.end(), [](uint8_t v) { return v; }));
}

absl::StatusOr<SampleSet> SampleSet::Create(std::vector<size_t> indices,
                                            size_t universe_size) {
  for (size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] >= universe_size) {
      return absl::InvalidArgumentError(
          absl::StrCat("sample index ", indices[i],
                       " outside universe of size ", universe_size));
    }
    if (i > 0 && indices[i] <= indices[i - 1]) {
      return absl::InvalidArgumentError(
          "sample indices must be strictly increasing");
    }
  }
  SampleSet set(universe_size);
  set.indices_ = std::move(indices);
  return set;
}

absl::StatusOr<SampleSet> SampleSet::FromUnsorted(std::vector<size_t> indices,
                                                  size_t universe_size) {
  std::sort(indices.begin(), indices.end());
  indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
  return Create(std::move(indices), universe_size);
}

SampleSet SampleSet::FromMask(std::span<const uint8_t> mask) {
  SampleSet set(mask.size());
  for (size_t i = 0; i < mask.size(); ++i) {
    if (mask[i]) set.indices_.push_back(i);
  }
  return set;
}

bool SampleSet::contains(size_t index) const {
  return std::binary_search(indices_.begin(), indices_.end(), index);
}

std::vector<uint8_t> SampleSet::ToMask() const {
  std::vector<uint8_t> mask(universe_size_, 0);
  for (size_t i : indices_) mask[i] = 1;
  return mask;
}

SampleSet SampleSet::Union(const SampleSet& other) const {
  assert(universe_size_ == other.universe_size_);
  SampleSet out(universe_size_);
  std::set_union(indices_.begin(), indices_.end(), other.indices_.begin(),
                 other.indices_.end(), std::back_inserter(out.indices_));
  return out;
}

SampleSet SampleSet::Intersection(const SampleSet& other) const {
  assert(universe_size_ == other.universe_size_);
  SampleSet out(universe_size_);
  std::set_intersection(indices_.begin(), indices_.end(),
                        other.indices_.begin(), other.indices_.end(),
                        std::back_inserter(out.indices_));
  return out;
}

SampleSet SampleSet::Difference(const SampleSet& other) const {
  assert(universe_size_ == other.universe_size_);
  SampleSet out(universe_size_);
  std::set_difference(indices_.begin(), indices_.end(), other.indices_.begin(),
                      other.indices_.end(), std::back_inserter(out.indices_));
  return out;
}

size_t SampleSet::IntersectionSize(const SampleSet& other) const {
  size_t count = 0;
  auto a = indices_.begin();
  auto b = other.indices_.begin();
  while (a != indices_.end() && b != other.indices_.end()) {
    if (*a < *b) {
      ++a;
    } else if (*b < *a) {
      ++b;
    } else {
      ++count;
      ++a;
      ++b;
    }
  }
  return count;
}

bool SampleSet::IsSubsetOf(const SampleSet& other) const {
  return universe_size_ == other.universe_size_ &&
         std::includes(other.indices_.begin(), other.indices_.end(),
                       indices_.begin(), indices_.end());
}

std::vector<std::string> ExperimentBundle::attack_names() const {
  std::vector<std::string> names;
  names.reserve(attacks.size());
  for (const auto& [name, _] : attacks) names.push_back(name);
  return names;
}

absl::StatusOr<const ScoreMatrix*> ExperimentBundle::FindAttack(
    const std::string& name) const {
  auto it = attacks.find(name);
  if (it == attacks.end()) {
    return absl::NotFoundError(absl::StrCat("unknown attack '", name, "'"));
  }
  return &it->second;
}

const RealMatrix* ExperimentBundle::FindSignal(const std::string& name) const {
  auto it = signals.find(name);
  return it == signals.end() ? nullptr : &it->second;
}

}  // namespace mia
