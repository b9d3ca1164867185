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
#include <stdexcept>

namespace nasdqn {

ReplayMemory::ReplayMemory(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw std::invalid_argument("ReplayMemory capacity must be > 0");
}

void ReplayMemory::Push(const Transition& t) {
  if (items_.size() == capacity_) items_.pop_front();
  items_.push_back({t, next_id_++});
}

std::vector<std::size_t> ReplayMemory::SampleIndices(std::size_t n, Rng& rng) const {
  const std::size_t size = items_.size();
  if (n == 0 || size < n) return {};
  std::vector<std::size_t> chosen;
  chosen.reserve(n);
  for (std::size_t j = size - n; j < size; ++j) {
    const std::size_t t = rng.UniformIndex(j + 1);
    if (std::ranges::find(chosen, t) == chosen.end()) {
      chosen.push_back(t);
    } else {
      chosen.push_back(j);
    }
  }
  return chosen;
}

std::vector<Transition> ReplayMemory::Sample(std::size_t n, Rng& rng) const {
  std::vector<Transition> out;
  for (std::size_t i : SampleIndices(n, rng)) out.push_back(items_[i].transition);
  return out;
}

void ReplayMemory::PruneToFraction(double keep) {
  if (!(keep >= 0.0 && keep <= 1.0)) {
    throw std::invalid_argument("PruneToFraction: keep must be in [0, 1]");
  }
  const auto kept = static_cast<std::size_t>(
      std::floor(keep * static_cast<double>(items_.size())));
  items_.erase(items_.begin(), items_.end() - static_cast<std::ptrdiff_t>(kept));
}

}  // namespace nasdqn
