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

#ifndef NASDQN_EXPERIMENT_H_
#define NASDQN_EXPERIMENT_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nasdqn/dqn_agent.h"
#include "nasdqn/metrics.h"
#include "nasdqn/nas_controller.h"
#include "nasdqn/network.h"
#include "nasdqn/pendulum.h"

namespace nasdqn {

enum class AgentKind { kFixedSmall, kFixedMedium, kFixedLarge, kRandomNas, kNasDqn };

inline constexpr std::array<AgentKind, 5> kAllAgents = {
    AgentKind::kFixedSmall, AgentKind::kFixedMedium, AgentKind::kFixedLarge,
    AgentKind::kRandomNas, AgentKind::kNasDqn};

std::string_view AgentName(AgentKind k);  // "fixed-small", ..., "nas-dqn"
AgentKind ParseAgent(std::string_view name);
bool IsSearchAgent(AgentKind k);
// Architecture of a fixed agent; throws for search agents.
ArchitectureConfig FixedArchitecture(AgentKind k);

struct ExperimentConfig {
  AgentKind agent = AgentKind::kNasDqn;
  int episodes = 2000;
  std::vector<std::uint64_t> seeds = {1, 2, 3};
  int update_interval = 200;  // episodes between architecture updates
  std::size_t replay_capacity = 50000;
  PhysicsParams physics;
  ResetDistribution reset;
  AgentHyperparams agent_hp;
  ControllerParams controller;
  MetricsOptions metrics;
  // Agents run by the comparison; defaults to all five.
  std::vector<AgentKind> compare_agents = {kAllAgents.begin(), kAllAgents.end()};

  void Validate() const;
};

struct EpisodeLog {
  int episode = 0;  // 1-based
  double episode_return = 0.0;
  double epsilon = 0.0;  // policy epsilon used during the episode
  ArchitectureConfig config;
};

// One architecture-update step of the outer loop.
struct ControllerEvent {
  int update_index = 0;  // k, 1-based
  int episode = 0;       // episode after which the update ran
  double controller_epsilon = 0.0;  // epsilon_k used for sampling
  ArchitectureConfig scored;
  double score = 0.0;
  int interval_episodes = 0;
  ArchitectureConfig sampled;
  SampleBranch branch = SampleBranch::kExplore;
  bool changed = false;  // rebuild + prune happened
  std::size_t replay_before = 0;
  std::size_t replay_after = 0;
};

struct RunRecord {
  AgentKind agent = AgentKind::kNasDqn;
  std::uint64_t seed = 0;
  ExperimentConfig config;
  std::vector<EpisodeLog> episodes;
  // (first episode, architecture) every time the active architecture changes.
  std::vector<std::pair<int, ArchitectureConfig>> architecture_history;
  std::optional<SampleBranch> initial_branch;  // search agents only
  std::vector<ControllerEvent> controller_events;
  std::uint64_t env_steps = 0;
  std::uint64_t gradient_updates = 0;
  std::uint64_t target_syncs = 0;
  double wall_clock_seconds = 0.0;
  bool valid = true;
  std::string error;

  std::vector<double> Returns() const;
};

using EpisodeCallback = std::function<void(const EpisodeLog&)>;

// The two-level training loop: DQN updates every environment step, and for
// search agents an architecture update every update_interval episodes.
// Numerical failures end the run early with valid = false.
RunRecord RunTrial(const ExperimentConfig& cfg, std::uint64_t seed,
                   const EpisodeCallback& on_episode = {});

struct AgentSummary {
  AgentKind agent;
  std::vector<RunRecord> runs;  // one per seed, in seed order
  std::vector<MetricsReport> metrics;
  Aggregate final_mean;
  Aggregate final_std;
  Aggregate peak_return;
  Aggregate wall_clock;
  // Over converged seeds only; converged_count says how many.
  Aggregate episodes_to_convergence;
  std::size_t converged_count = 0;
};

struct ComparisonReport {
  std::vector<AgentSummary> agents;
  bool all_valid = true;
};

// Runs every (agent, seed) trial, at most max_parallel at a time, then
// aggregates. max_parallel = 0 uses NASDQN_MAX_PARALLEL or the hardware
// concurrency.
ComparisonReport RunComparison(const ExperimentConfig& cfg, unsigned max_parallel = 0);

AgentSummary Summarize(AgentKind agent, std::vector<RunRecord> runs,
                       const MetricsOptions& options);

unsigned DefaultParallelism();

}  // namespace nasdqn

#endif  // NASDQN_EXPERIMENT_H_
