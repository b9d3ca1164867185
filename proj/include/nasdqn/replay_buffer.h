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

#ifndef NASDQN_REPLAY_BUFFER_H_
#define NASDQN_REPLAY_BUFFER_H_

#include <cstdint>
#include <deque>
#include <vector>

#include "nasdqn/pendulum.h"
#include "nasdqn/rng.h"

namespace nasdqn {

struct Transition {
  Observation s;
  int action = 0;
  double reward = 0.0;
  Observation s_next;
  bool done = false;
};

// Bounded FIFO store. Every pushed transition gets a monotonically increasing
// insertion id, which makes recency checks after pruning trivial.
class ReplayMemory {
 public:
  explicit ReplayMemory(std::size_t capacity);

  void Push(const Transition& t);

  // n distinct transitions drawn uniformly (Floyd's algorithm). Returns an
  // empty vector when size() < n; callers treat that as "not ready".
  std::vector<Transition> Sample(std::size_t n, Rng& rng) const;
  // Indices into the current contents, 0 = oldest.
  std::vector<std::size_t> SampleIndices(std::size_t n, Rng& rng) const;

  // Keeps the floor(keep * size()) most recent transitions.
  void PruneToFraction(double keep = 0.25);

  std::size_t size() const { return items_.size(); }
  std::size_t capacity() const { return capacity_; }
  bool empty() const { return items_.empty(); }

  const Transition& at(std::size_t i) const { return items_.at(i).transition; }
  std::uint64_t insertion_id(std::size_t i) const { return items_.at(i).id; }
  std::uint64_t total_pushed() const { return next_id_; }

 private:
  struct Entry {
    Transition transition;
    std::uint64_t id;
  };
  std::size_t capacity_;
  std::deque<Entry> items_;
  std::uint64_t next_id_ = 0;
};

}  // namespace nasdqn

#endif  // NASDQN_REPLAY_BUFFER_H_
