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

#include "nasdqn/replay_buffer.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "doctest.h"

namespace nasdqn {
namespace {

Transition Tagged(int i) {
  Transition t;
  t.reward = i;
  t.action = i % 3;
  return t;
}

TEST_CASE("push and FIFO eviction") {
  ReplayMemory mem(2);
  mem.Push(Tagged(0));
  CHECK(mem.size() == 1);
  mem.Push(Tagged(1));
  mem.Push(Tagged(2));
  CHECK(mem.size() == 2);
  CHECK(mem.at(0).reward == 1);
  CHECK(mem.at(1).reward == 2);
  CHECK(mem.insertion_id(0) == 1);
  CHECK_THROWS(ReplayMemory(0));
}

TEST_CASE("size saturates at capacity") {
  ReplayMemory mem(50000);
  for (int i = 0; i < 100000; ++i) mem.Push(Tagged(i));
  CHECK(mem.size() == 50000);
  CHECK(mem.total_pushed() == 100000);
  CHECK(mem.at(0).reward == 50000);
}

TEST_CASE("sampling edge sizes") {
  Rng rng(1);
  ReplayMemory mem(1000);
  CHECK(mem.Sample(1, rng).empty());
  mem.Push(Tagged(7));
  const auto one = mem.Sample(1, rng);
  REQUIRE(one.size() == 1);
  CHECK(one[0].reward == 7);
  CHECK(mem.Sample(2, rng).empty());

  ReplayMemory hundred(1000);
  for (int i = 0; i < 100; ++i) hundred.Push(Tagged(i));
  auto idx = hundred.SampleIndices(100, rng);
  std::ranges::sort(idx);
  for (std::size_t i = 0; i < 100; ++i) CHECK(idx[i] == i);
}

TEST_CASE("sampling is without replacement") {
  Rng rng(2);
  ReplayMemory mem(500);
  for (int i = 0; i < 300; ++i) mem.Push(Tagged(i));
  for (int rep = 0; rep < 500; ++rep) {
    const auto idx = mem.SampleIndices(64, rng);
    CHECK(std::set<std::size_t>(idx.begin(), idx.end()).size() == 64);
  }
}

TEST_CASE("inclusion frequency is uniform") {
  Rng rng(3);
  ReplayMemory mem(1000);
  for (int i = 0; i < 1000; ++i) mem.Push(Tagged(i));
  const int reps = 10000;
  std::vector<int> hits(1000, 0);
  for (int r = 0; r < reps; ++r)
    for (std::size_t i : mem.SampleIndices(64, rng)) ++hits[i];
  const double p = 64.0 / 1000.0;
  const double se = std::sqrt(p * (1 - p) / reps);
  int outside = 0;
  for (int h : hits) outside += std::abs(h / double(reps) - p) > 3 * se;
  // 3 standard errors: ~0.27% of 1000 cells expected outside by chance.
  CHECK(outside <= 10);
}

TEST_CASE("pruning keeps the most recent quarter") {
  ReplayMemory mem(1000);
  for (int i = 0; i < 400; ++i) mem.Push(Tagged(i));
  mem.PruneToFraction(0.25);
  REQUIRE(mem.size() == 100);
  for (std::size_t i = 0; i < 100; ++i) {
    CHECK(mem.at(i).reward == 300 + static_cast<double>(i));
    CHECK(mem.insertion_id(i) == 300 + i);
  }

  ReplayMemory empty(10);
  empty.PruneToFraction(0.25);
  CHECK(empty.size() == 0);

  ReplayMemory three(10);
  for (int i = 0; i < 3; ++i) three.Push(Tagged(i));
  three.PruneToFraction(0.25);
  CHECK(three.size() == 0);

  CHECK_THROWS(mem.PruneToFraction(1.5));
}

TEST_CASE("prune property: floor count, recency, order") {
  Rng rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    ReplayMemory mem(300);
    const int pushes = static_cast<int>(rng.UniformIndex(700));
    for (int i = 0; i < pushes; ++i) mem.Push(Tagged(i));
    const std::size_t before = mem.size();
    const std::uint64_t first_kept_min = mem.total_pushed() - static_cast<std::uint64_t>(before / 4);
    mem.PruneToFraction(0.25);
    CHECK(mem.size() == before / 4);
    for (std::size_t i = 0; i < mem.size(); ++i) {
      CHECK(mem.insertion_id(i) >= first_kept_min);
      if (i > 0) CHECK(mem.insertion_id(i) == mem.insertion_id(i - 1) + 1);
    }
    // Pushing after a prune continues the id sequence.
    mem.Push(Tagged(-1));
    CHECK(mem.insertion_id(mem.size() - 1) == mem.total_pushed() - 1);
  }
}

}  // namespace
}  // namespace nasdqn
