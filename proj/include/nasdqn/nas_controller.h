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

#ifndef NASDQN_NAS_CONTROLLER_H_
#define NASDQN_NAS_CONTROLLER_H_

#include <string_view>
#include <vector>

#include "nasdqn/network.h"
#include "nasdqn/rng.h"

namespace nasdqn {

enum class ControllerMode { kLearned, kRandom };

struct ControllerParams {
  double epsilon_start = 1.0;
  double epsilon_decay = 0.95;
  double epsilon_min = 0.1;
  double temperature = 1.5;
  double stability_eps = 1e-8;
  std::size_t capacity = 5;

  void Validate() const;
};

// How a sampled architecture was chosen.
enum class SampleBranch {
  kRandomMode,     // Random-NAS: always uniform
  kExplore,        // learned mode, exploration coin came up
  kEmptyFallback,  // learned mode, exploit branch with nothing buffered
  kExploit,        // softmax over the top-K buffer
};
std::string_view BranchName(SampleBranch b);

struct ScoredArchitecture {
  ArchitectureConfig config;
  double score = 0.0;
};

struct ArchitectureSample {
  ArchitectureConfig config;
  SampleBranch branch;
};

// Top-K (architecture, interval score) buffer with decayed-epsilon
// exploration and z-score softmax exploitation.
class NasController {
 public:
  NasController(ControllerMode mode, ControllerParams params = {});

  // Overwrites the score of a buffered config, otherwise inserts it and
  // evicts the lowest score once above capacity. No-op in random mode.
  void UpdateScore(const ArchitectureConfig& c, double score);

  // (S - mean) / (population stddev + stability_eps) over the buffer.
  // Throws std::logic_error on an empty buffer.
  std::vector<double> NormalizedScores() const;
  // Softmax of NormalizedScores() / temperature, aligned with best().
  std::vector<double> SelectionProbabilities() const;

  ArchitectureSample SampleArchitecture(Rng& rng) const;

  // epsilon <- max(epsilon_min, epsilon * decay)
  void DecayExploration();

  ControllerMode mode() const { return mode_; }
  const ControllerParams& params() const { return params_; }
  double epsilon() const { return epsilon_; }
  void set_epsilon(double e) { epsilon_ = e; }
  const std::vector<ScoredArchitecture>& best() const { return best_; }

 private:
  ControllerMode mode_;
  ControllerParams params_;
  double epsilon_;
  // Insertion order; eviction ties go to the earliest entry.
  std::vector<ScoredArchitecture> best_;
};

}  // namespace nasdqn

#endif  // NASDQN_NAS_CONTROLLER_H_
