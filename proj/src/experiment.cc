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

#include "nasdqn/experiment.h"

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "nasdqn/replay_buffer.h"
#include "nasdqn/rng.h"

namespace nasdqn {

std::string_view AgentName(AgentKind k) {
  switch (k) {
    case AgentKind::kFixedSmall:
      return "fixed-small";
    case AgentKind::kFixedMedium:
      return "fixed-medium";
    case AgentKind::kFixedLarge:
      return "fixed-large";
    case AgentKind::kRandomNas:
      return "random-nas";
    case AgentKind::kNasDqn:
      return "nas-dqn";
  }
  return "unknown";
}

AgentKind ParseAgent(std::string_view name) {
  for (AgentKind k : kAllAgents)
    if (AgentName(k) == name) return k;
  throw std::invalid_argument("unknown agent '" + std::string(name) +
                              "' (expected fixed-small, fixed-medium, fixed-large, "
                              "random-nas or nas-dqn)");
}

bool IsSearchAgent(AgentKind k) {
  return k == AgentKind::kRandomNas || k == AgentKind::kNasDqn;
}

ArchitectureConfig FixedArchitecture(AgentKind k) {
  switch (k) {
    case AgentKind::kFixedSmall:
      return {2, 32, Activation::kReLU};
    case AgentKind::kFixedMedium:
      return {3, 64, Activation::kReLU};
    case AgentKind::kFixedLarge:
      return {4, 128, Activation::kReLU};
    default:
      throw std::invalid_argument(std::string(AgentName(k)) + " has no fixed architecture");
  }
}

void ExperimentConfig::Validate() const {
  if (episodes < 1) throw std::invalid_argument("episodes must be >= 1");
  if (update_interval < 1) throw std::invalid_argument("update_interval must be >= 1");
  if (replay_capacity < 1) throw std::invalid_argument("replay_capacity must be >= 1");
  physics.Validate();
  reset.Validate();
  agent_hp.Validate();
  controller.Validate();
}

std::vector<double> RunRecord::Returns() const {
  std::vector<double> r;
  r.reserve(episodes.size());
  for (const auto& e : episodes) r.push_back(e.episode_return);
  return r;
}

RunRecord RunTrial(const ExperimentConfig& cfg, std::uint64_t seed,
                   const EpisodeCallback& on_episode) {
  cfg.Validate();
  const auto start = std::chrono::steady_clock::now();

  const Rng master(seed);
  Rng init_rng = master.Split(streams::kWeightInit);
  Rng policy_rng = master.Split(streams::kPolicy);
  Rng batch_rng = master.Split(streams::kMinibatch);
  Rng controller_rng = master.Split(streams::kController);
  PendulumEnv env(cfg.physics, cfg.reset, master.Split(streams::kEnvReset));

  RunRecord rec;
  rec.agent = cfg.agent;
  rec.seed = seed;
  rec.config = cfg;
  rec.episodes.reserve(static_cast<std::size_t>(cfg.episodes));

  const bool search = IsSearchAgent(cfg.agent);
  NasController controller(
      cfg.agent == AgentKind::kRandomNas ? ControllerMode::kRandom : ControllerMode::kLearned,
      cfg.controller);

  ArchitectureConfig current;
  if (search) {
    const ArchitectureSample first = controller.SampleArchitecture(controller_rng);
    current = first.config;
    rec.initial_branch = first.branch;
  } else {
    current = FixedArchitecture(cfg.agent);
  }
  rec.architecture_history.emplace_back(1, current);

  ReplayMemory memory(cfg.replay_capacity);
  DqnAgent agent(current, cfg.agent_hp, init_rng);

  double interval_sum = 0.0;
  int interval_count = 0;

  try {
    for (int episode = 1; episode <= cfg.episodes; ++episode) {
      Observation obs = env.Reset();
      const double episode_epsilon = agent.epsilon();
      double ret = 0.0;
      bool done = false;
      while (!done) {
        const int action = agent.SelectAction(obs, policy_rng);
        const StepResult step = env.Step(action);
        memory.Push({obs, action, step.reward, step.observation, step.done});
        obs = step.observation;
        ret += step.reward;
        done = step.done;
        agent.TrainStep(memory, batch_rng);
        agent.OnEnvironmentStep();
        ++rec.env_steps;
      }
      agent.OnEpisodeEnd();

      rec.episodes.push_back({episode, ret, episode_epsilon, current});
      if (on_episode) on_episode(rec.episodes.back());

      if (!search) continue;
      interval_sum += ret;
      ++interval_count;
      if (interval_count < cfg.update_interval) continue;

      ControllerEvent ev;
      ev.update_index = static_cast<int>(rec.controller_events.size()) + 1;
      ev.episode = episode;
      ev.scored = current;
      ev.interval_episodes = interval_count;
      ev.score = interval_sum / interval_count;
      controller.UpdateScore(current, ev.score);
      ev.controller_epsilon = controller.epsilon();
      const ArchitectureSample next = controller.SampleArchitecture(controller_rng);
      controller.DecayExploration();
      ev.sampled = next.config;
      ev.branch = next.branch;
      ev.replay_before = memory.size();
      ev.changed = agent.RebuildWithArchitecture(next.config, init_rng, memory);
      ev.replay_after = memory.size();
      rec.controller_events.push_back(ev);
      if (ev.changed) {
        current = next.config;
        if (episode < cfg.episodes) rec.architecture_history.emplace_back(episode + 1, current);
      }
      interval_sum = 0.0;
      interval_count = 0;
    }
  } catch (const NonFiniteError& e) {
    rec.valid = false;
    rec.error = e.what();
  }

  rec.gradient_updates = agent.updates();
  rec.target_syncs = agent.target_syncs();
  rec.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

AgentSummary Summarize(AgentKind agent, std::vector<RunRecord> runs,
                       const MetricsOptions& options) {
  AgentSummary s;
  s.agent = agent;
  s.runs = std::move(runs);
  std::vector<double> finals, stds, peaks, clocks, conv;
  for (const auto& run : s.runs) {
    const auto returns = run.Returns();
    if (returns.size() < options.final_window) {
      MetricsReport empty;
      empty.episodes = returns.size();
      empty.final_mean = empty.final_std = empty.peak_return =
          std::numeric_limits<double>::quiet_NaN();
      empty.wall_clock_seconds = run.wall_clock_seconds;
      s.metrics.push_back(empty);
      continue;
    }
    MetricsReport m = ComputeMetrics(returns, run.wall_clock_seconds, options);
    finals.push_back(m.final_mean);
    stds.push_back(m.final_std);
    peaks.push_back(m.peak_return);
    clocks.push_back(m.wall_clock_seconds);
    if (m.episodes_to_convergence) {
      conv.push_back(*m.episodes_to_convergence);
      ++s.converged_count;
    }
    s.metrics.push_back(m);
  }
  s.final_mean = AggregateValues(finals);
  s.final_std = AggregateValues(stds);
  s.peak_return = AggregateValues(peaks);
  s.wall_clock = AggregateValues(clocks);
  s.episodes_to_convergence = AggregateValues(conv);
  return s;
}

unsigned DefaultParallelism() {
  if (const char* env = std::getenv("NASDQN_MAX_PARALLEL")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

ComparisonReport RunComparison(const ExperimentConfig& cfg, unsigned max_parallel) {
  if (cfg.seeds.empty()) throw std::invalid_argument("comparison needs at least one seed");
  if (cfg.compare_agents.empty()) throw std::invalid_argument("comparison needs at least one agent");
  cfg.Validate();

  struct Job {
    std::size_t agent_index;
    std::size_t seed_index;
  };
  std::vector<Job> jobs;
  for (std::size_t a = 0; a < cfg.compare_agents.size(); ++a)
    for (std::size_t s = 0; s < cfg.seeds.size(); ++s) jobs.push_back({a, s});

  std::vector<std::vector<RunRecord>> results(cfg.compare_agents.size(),
                                              std::vector<RunRecord>(cfg.seeds.size()));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto worker = [&] {
    for (std::size_t j = next++; j < jobs.size(); j = next++) {
      try {
        ExperimentConfig trial = cfg;
        trial.agent = cfg.compare_agents[jobs[j].agent_index];
        results[jobs[j].agent_index][jobs[j].seed_index] =
            RunTrial(trial, cfg.seeds[jobs[j].seed_index]);
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const unsigned threads = std::min<unsigned>(
      max_parallel == 0 ? DefaultParallelism() : max_parallel,
      static_cast<unsigned>(jobs.size()));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  ComparisonReport report;
  for (std::size_t a = 0; a < cfg.compare_agents.size(); ++a) {
    for (const auto& run : results[a]) report.all_valid = report.all_valid && run.valid;
    report.agents.push_back(Summarize(cfg.compare_agents[a], std::move(results[a]), cfg.metrics));
  }
  return report;
}

}  // namespace nasdqn
