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

#ifndef OMNIVI_RNG_H_
#define OMNIVI_RNG_H_

#include <cstdint>
#include <random>
#include <span>

namespace omnivi {

// Seeded generator with a platform-independent uniform draw. All sampling in
// the library goes through this type so runs are reproducible bit for bit.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

  // Deterministic substream derived from (seed, stream id).
  static Rng Substream(std::uint64_t seed, std::uint64_t stream);

  // Uniform double in [0, 1) with 53 random bits.
  double Uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n).
  int Below(int n);

  // Inverse-CDF draw over a probability vector using exactly one Uniform().
  int Categorical(std::span<const double> probs);

  std::uint64_t NextRaw() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

// Named substreams of the run seed.
enum class Stream : std::uint64_t {
  kEnvironment = 1,
  kLearner = 2,
  kOpponent = 3,
  kGenerator = 4,
  kAudit = 5,
};

inline Rng StreamFor(std::uint64_t seed, Stream s) {
  return Rng::Substream(seed, static_cast<std::uint64_t>(s));
}

}  // namespace omnivi

#endif  // OMNIVI_RNG_H_
