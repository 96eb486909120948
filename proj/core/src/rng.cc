// Copyright 2026 The omnivi Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "omnivi/rng.h"

#include <algorithm>

#include "omnivi/errors.h"

namespace omnivi {

Rng Rng::Substream(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream),
                    static_cast<std::uint32_t>(stream >> 32), 0x6f6d6e69u};
  std::uint32_t words[2];
  seq.generate(words, words + 2);
  return Rng((static_cast<std::uint64_t>(words[0]) << 32) | words[1]);
}

int Rng::Below(int n) {
  Require(n > 0, ErrorKind::kInput, "Rng::Below requires n > 0");
  int i = static_cast<int>(Uniform() * n);
  return std::min(i, n - 1);
}

int Rng::Categorical(std::span<const double> probs) {
  Require(!probs.empty(), ErrorKind::kInput, "empty distribution");
  const double u = Uniform();
  double acc = 0.0;
  int last_positive = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] <= 0.0) continue;
    acc += probs[i];
    last_positive = static_cast<int>(i);
    if (u < acc) return last_positive;
  }
  // Roundoff left u above the accumulated mass.
  return last_positive;
}

}  // namespace omnivi
