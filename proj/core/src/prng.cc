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
#include "mia/prng.h"

namespace mia {

uint64_t SplitMix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

uint64_t StreamKey(std::string_view tag, uint64_t a, uint64_t b, uint64_t c) {
  // FNV-1a over the tag, then mix in the indices.
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : tag) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  h = SplitMix64(h ^ SplitMix64(a + 1));
  h = SplitMix64(h ^ SplitMix64(b + 2));
  return SplitMix64(h ^ SplitMix64(c + 3));
}

PrngStream MakeStream(uint64_t seed, uint64_t stream_id) {
  const uint64_t s0 = SplitMix64(seed ^ 0x6a09e667f3bcc909ULL);
  const uint64_t s1 = SplitMix64(s0 ^ stream_id);
  std::seed_seq seq{static_cast<uint32_t>(s0), static_cast<uint32_t>(s0 >> 32),
                    static_cast<uint32_t>(s1), static_cast<uint32_t>(s1 >> 32)};
  return PrngStream(seq);
}

}  // namespace mia
