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

#ifndef MIA_PRNG_H_
#define MIA_PRNG_H_

#include <cstdint>
#include <random>
#include <string_view>

namespace mia {

using PrngStream = std::mt19937_64;

uint64_t SplitMix64(uint64_t x);

// Stable identifier of a random sub-stream, e.g. StreamKey("score", k, i)
// for instance i of attack k.
uint64_t StreamKey(std::string_view tag, uint64_t a = 0, uint64_t b = 0,
                   uint64_t c = 0);

// Independent generator for (seed, stream_id). Same inputs give the same
// sequence; distinct stream ids give statistically independent sequences.
PrngStream MakeStream(uint64_t seed, uint64_t stream_id);

}  // namespace mia

#endif  // MIA_PRNG_H_
