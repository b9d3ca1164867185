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
#include <stdexcept>
#include <vector>

#include "doctest.h"

namespace nasdqn {
namespace {

TEST_CASE("uniform stays inside its interval") {
  Rng rng(7);
  for (int i = 0; i < 10000; ++i) {
    const double v = rng.Uniform(0.0, 1.0);
    CHECK(v >= 0.0);
    CHECK(v < 1.0);
  }
  for (int i = 0; i < 1000; ++i) {
    const double v = rng.Uniform(2.0, 2.0000001);
    CHECK(v >= 2.0);
    CHECK(v < 2.0000001);
  }
  CHECK_THROWS_AS(rng.Uniform(1.0, 1.0), std::invalid_argument);
}

TEST_CASE("same seed gives the same stream") {
  Rng a(42), b(42), c(43);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const double x = a.Uniform(0, 1);
    CHECK(x == b.Uniform(0, 1));
    differs = differs || x != c.Uniform(0, 1);
  }
  CHECK(differs);
}

TEST_CASE("child streams depend only on seed and label") {
  Rng master(5);
  Rng env1 = master.Split("env-reset");
  master.NextU64();  // drawing from the parent does not move its children
  Rng env2 = master.Split("env-reset");
  Rng policy = master.Split("policy");
  CHECK(env1 == env2);
  CHECK(env1.NextU64() != policy.NextU64());
}

TEST_CASE("serialized state resumes the stream") {
  Rng a(99);
  a.NextU64();
  Rng b = Rng::Deserialize(a.Serialize());
  for (int i = 0; i < 10; ++i) CHECK(a.NextU64() == b.NextU64());
  CHECK_THROWS(Rng::Deserialize("garbage"));
}

TEST_CASE("normal moments") {
  Rng rng(1);
  CHECK(rng.Normal(0.0, 0.0) == 0.0);
  CHECK(rng.Normal(3.5, 0.0) == 3.5);
  CHECK_THROWS_AS(rng.Normal(0.0, -1.0), std::invalid_argument);
  const int n = 100000;
  double sum = 0, sq = 0;
  for (int i = 0; i < n; ++i) {
    const double v = rng.Normal(0.0, 1.0);
    sum += v;
    sq += v * v;
  }
  const double mean = sum / n;
  CHECK(std::abs(mean) < 0.02);
  CHECK(std::abs(sq / n - mean * mean - 1.0) < 0.05);
}

TEST_CASE("choice") {
  Rng rng(3);
  const std::vector<double> one = {1.0};
  CHECK(rng.Choice(one) == 0);
  const std::vector<double> spike = {0.0, 1.0, 0.0};
  for (int i = 0; i < 1000; ++i) CHECK(rng.Choice(spike) == 1);

  const std::vector<double> half = {0.5, 0.5};
  int zeros = 0;
  for (int i = 0; i < 100000; ++i) zeros += rng.Choice(half) == 0;
  CHECK(std::abs(zeros / 100000.0 - 0.5) < 0.01);

  CHECK_THROWS_AS(rng.Choice(std::vector<double>{}), std::invalid_argument);
  CHECK_THROWS_AS(rng.Choice(std::vector<double>{0.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(rng.Choice(std::vector<double>{1.0, -0.5}), std::invalid_argument);
}

TEST_CASE("choice never returns a zero-weight index") {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> w(8);
    for (auto& x : w) x = rng.Uniform(0, 1) < 0.5 ? 0.0 : rng.Uniform(0, 1);
    w[rng.UniformIndex(w.size())] = 0.25;
    for (int i = 0; i < 50; ++i) CHECK(w[rng.Choice(w)] > 0.0);
  }
}

TEST_CASE("uniform index covers its range") {
  Rng rng(8);
  std::vector<int> counts(27, 0);
  for (int i = 0; i < 27000; ++i) ++counts[rng.UniformIndex(27)];
  for (int c : counts) CHECK(c > 800);
  CHECK_THROWS(rng.UniformIndex(0));
}

}  // namespace
}  // namespace nasdqn
