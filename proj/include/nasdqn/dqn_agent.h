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

#ifndef NASDQN_DQN_AGENT_H_
#define NASDQN_DQN_AGENT_H_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "nasdqn/network.h"
#include "nasdqn/replay_buffer.h"
#include "nasdqn/rng.h"

namespace nasdqn {

struct AgentHyperparams {
  double gamma = 0.99;
  double learning_rate = 1e-3;
  std::size_t batch_size = 64;
  std::uint64_t target_sync_interval = 200;  // environment steps
  double epsilon_start = 1.0;
  double epsilon_decay = 0.995;  // multiplicative, once per episode
  double epsilon_min = 0.01;
  std::size_t warmup = 1000;  // minimum replay size before updates
  double grad_clip = 1.0;
  double prune_keep = 0.25;

  void Validate() const;
};

// Index of the largest entry; ties go to the lowest index.
int Argmax(const QValues& q);

// Double DQN learner bound to one architecture at a time.
class DqnAgent {
 public:
  DqnAgent(const ArchitectureConfig& config, const AgentHyperparams& hp,
           Rng& init_rng);

  // Epsilon-greedy on the online network.
  int SelectAction(const Observation& s, Rng& rng) const;

  // y = r + gamma * Q_target(s', argmax_a Q_online(s', a)), or y = r when done.
  std::vector<double> ComputeTargets(std::span<const Transition> batch) const;

  // One clipped SGD step on a uniformly sampled minibatch. Returns the mean
  // Huber loss, or nullopt while the buffer holds fewer than warmup (or
  // batch_size) transitions.
  std::optional<double> TrainStep(const ReplayMemory& mem, Rng& rng);
  // Same update on an explicit batch.
  double TrainOnBatch(std::span<const Transition> batch);

  // Counts one environment step; copies online -> target every
  // target_sync_interval steps. Returns true when a sync happened.
  bool OnEnvironmentStep();
  // Policy epsilon decay, once per finished episode.
  void OnEpisodeEnd();

  void SyncTarget();

  // Switches to new_config when it differs from the current one: weights are
  // transferred into a fresh online net, the target becomes a copy of it and
  // the replay memory is pruned. Returns false (and changes nothing) when
  // new_config equals the current architecture.
  bool RebuildWithArchitecture(const ArchitectureConfig& new_config, Rng& init_rng,
                               ReplayMemory& mem);

  const ArchitectureConfig& config() const { return online_.config; }
  const NetworkParams& online() const { return online_; }
  const NetworkParams& target() const { return target_; }
  NetworkParams& mutable_online() { return online_; }
  NetworkParams& mutable_target() { return target_; }
  const AgentHyperparams& hyperparams() const { return hp_; }

  double epsilon() const { return epsilon_; }
  void set_epsilon(double e) { epsilon_ = e; }
  std::uint64_t env_steps() const { return env_steps_; }
  std::uint64_t updates() const { return updates_; }
  std::uint64_t target_syncs() const { return syncs_; }

 private:
  AgentHyperparams hp_;
  NetworkParams online_;
  NetworkParams target_;
  double epsilon_;
  std::uint64_t env_steps_ = 0;
  std::uint64_t updates_ = 0;
  std::uint64_t syncs_ = 0;
};

}  // namespace nasdqn

#endif  // NASDQN_DQN_AGENT_H_
