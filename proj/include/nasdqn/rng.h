// Copyright 2026 The nasdqn Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef NASDQN_RNG_H_
#define NASDQN_RNG_H_

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>

namespace nasdqn {

// xoshiro256** seeded through splitmix64. The whole generator is defined in
// this repository so that streams are reproducible independent of the
// standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0);

  // Child stream for a named subsystem. Depends only on (seed, label), not on
  // how many values have been drawn from this stream.
  Rng Split(std::string_view label) const;

  std::uint64_t seed() const { return seed_; }

  std::uint64_t NextU64();

  // Uniform in [lo, hi). Requires lo < hi.
  double Uniform(double lo, double hi);
  // Uniform integer in [0, n). Requires n > 0.
  std::size_t UniformIndex(std::size_t n);
  // Box-Muller. stddev == 0 returns mean exactly; stddev < 0 throws.
  double Normal(double mean, double stddev);
  // Index i with probability weights[i] / sum(weights).
  std::size_t Choice(std::span<const double> weights);

  // "seed:s0:s1:s2:s3" in hex, restorable with Deserialize.
  std::string Serialize() const;
  static Rng Deserialize(std::string_view text);

  friend bool operator==(const Rng&, const Rng&) = default;

 private:
  double NextUnit();  // [0, 1) with 53 random bits

  std::uint64_t seed_;
  std::array<std::uint64_t, 4> s_;
};

// Labels for the independent per-subsystem streams of a trial.
namespace streams {
inline constexpr std::string_view kEnvReset = "env-reset";
inline constexpr std::string_view kPolicy = "policy";
inline constexpr std::string_view kMinibatch = "minibatch";
inline constexpr std::string_view kWeightInit = "weight-init";
inline constexpr std::string_view kController = "controller";
}  // namespace streams

}  // namespace nasdqn

#endif  // NASDQN_RNG_H_
