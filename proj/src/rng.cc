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

#include "nasdqn/rng.h"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>

namespace nasdqn {
namespace {

std::uint64_t SplitMix64(std::uint64_t& x) {
  x += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t Fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

constexpr std::uint64_t Rotl(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

}  // namespace

Rng::Rng(std::uint64_t seed) : seed_(seed) {
  std::uint64_t x = seed;
  for (auto& w : s_) w = SplitMix64(x);
}

Rng Rng::Split(std::string_view label) const {
  std::uint64_t x = seed_ ^ Fnv1a(label);
  return Rng(SplitMix64(x));
}

std::uint64_t Rng::NextU64() {
  const std::uint64_t result = Rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = Rotl(s_[3], 45);
  return result;
}

double Rng::NextUnit() {
  return static_cast<double>(NextU64() >> 11) * 0x1.0p-53;
}

double Rng::Uniform(double lo, double hi) {
  if (!(lo < hi)) throw std::invalid_argument("Rng::Uniform requires lo < hi");
  const double v = lo + (hi - lo) * NextUnit();
  // Rounding can land exactly on hi for very narrow intervals.
  return v < hi ? v : std::nextafter(hi, lo);
}

std::size_t Rng::UniformIndex(std::size_t n) {
  if (n == 0) throw std::invalid_argument("Rng::UniformIndex requires n > 0");
  // Rejection sampling removes modulo bias.
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x;
  do {
    x = NextU64();
  } while (x >= limit);
  return static_cast<std::size_t>(x % n);
}

double Rng::Normal(double mean, double stddev) {
  if (stddev < 0.0) throw std::invalid_argument("Rng::Normal: negative stddev");
  // Always consume two uniforms so the stream position does not depend on
  // stddev.
  const double u1 = 1.0 - NextUnit();  // (0, 1]
  const double u2 = NextUnit();
  if (stddev == 0.0) return mean;
  const double r = std::sqrt(-2.0 * std::log(u1));
  return mean + stddev * r * std::cos(2.0 * std::numbers::pi * u2);
}

std::size_t Rng::Choice(std::span<const double> weights) {
  if (weights.empty()) throw std::invalid_argument("Rng::Choice: empty weights");
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw std::invalid_argument("Rng::Choice: weights must be finite and >= 0");
    }
    total += w;
  }
  if (!(total > 0.0)) throw std::invalid_argument("Rng::Choice: zero total weight");
  const double target = NextUnit() * total;
  double acc = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] == 0.0) continue;
    acc += weights[i];
    last_positive = i;
    if (target < acc) return i;
  }
  // Accumulated rounding left target just past the final bucket.
  return last_positive;
}

std::string Rng::Serialize() const {
  char buf[128];
  std::snprintf(buf, sizeof(buf), "%016llx:%016llx:%016llx:%016llx:%016llx",
                static_cast<unsigned long long>(seed_),
                static_cast<unsigned long long>(s_[0]),
                static_cast<unsigned long long>(s_[1]),
                static_cast<unsigned long long>(s_[2]),
                static_cast<unsigned long long>(s_[3]));
  return buf;
}

Rng Rng::Deserialize(std::string_view text) {
  unsigned long long v[5];
  const std::string s(text);
  if (std::sscanf(s.c_str(), "%llx:%llx:%llx:%llx:%llx", &v[0], &v[1], &v[2],
                  &v[3], &v[4]) != 5) {
    throw std::invalid_argument("Rng::Deserialize: malformed state '" + s + "'");
  }
  Rng rng(v[0]);
  for (int i = 0; i < 4; ++i) rng.s_[i] = v[i + 1];
  return rng;
}

}  // namespace nasdqn
