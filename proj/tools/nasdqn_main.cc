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

// Command-line front end: run a single trial, run the five-agent comparison,
// recompute metrics from a run directory, or estimate the optimal-return
// ceiling of an environment configuration.

#include <cstdio>
#if defined(__GLIBC__)
#include <malloc.h>
#endif
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "nasdqn/experiment.h"
#include "nasdqn/io.h"
#include "nasdqn/optimal_return.h"

namespace fs = std::filesystem;
using nasdqn::ExperimentConfig;

namespace {

ExperimentConfig LoadOrDefault(const std::string& path) {
  return path.empty() ? ExperimentConfig{} : nasdqn::LoadConfig(path);
}

nasdqn::EpisodeCallback Progress(bool quiet, const std::string& tag) {
  if (quiet) return {};
  return [tag](const nasdqn::EpisodeLog& e) {
    if (e.episode % 100 != 0) return;
    std::fprintf(stderr, "[%s] episode %d return %.2f eps %.3f arch %s\n", tag.c_str(),
                 e.episode, e.episode_return, e.epsilon, e.config.ToString().c_str());
  };
}

int RunCommand(const std::string& agent, std::optional<std::uint64_t> seed,
               std::optional<int> episodes, const std::string& config, const std::string& out,
               bool quiet) {
  ExperimentConfig cfg = LoadOrDefault(config);
  if (!agent.empty()) cfg.agent = nasdqn::ParseAgent(agent);
  if (episodes) cfg.episodes = *episodes;
  const std::uint64_t s = seed ? *seed : cfg.seeds.front();
  cfg.Validate();
  const nasdqn::RunRecord rec =
      nasdqn::RunTrial(cfg, s, Progress(quiet, std::string(nasdqn::AgentName(cfg.agent))));
  nasdqn::WriteRunOutputs(rec, out);
  const auto summary = nasdqn::SummaryJson(rec, cfg.metrics);
  std::cout << summary["metrics"].dump(2) << "\n";
  if (!rec.valid) {
    std::cerr << "trial invalid: " << rec.error << "\n";
    return 2;
  }
  return 0;
}

int CompareCommand(const std::string& config, const std::string& out,
                   std::optional<int> episodes, unsigned parallel) {
  ExperimentConfig cfg = LoadOrDefault(config);
  if (episodes) cfg.episodes = *episodes;
  const nasdqn::ComparisonReport report = nasdqn::RunComparison(cfg, parallel);
  nasdqn::WriteComparisonOutputs(report, cfg, out);
  std::cout << nasdqn::ComparisonMarkdown(report);
  if (!report.all_valid) {
    std::cerr << "at least one trial was invalid\n";
    return 2;
  }
  return 0;
}

int MetricsCommand(const std::string& in) {
  const fs::path dir(in);
  const auto returns = nasdqn::ReadEpisodeReturns(dir / "episodes.csv");
  double wall_clock = 0.0;
  nasdqn::MetricsOptions options;
  bool valid = true;
  if (std::ifstream summary(dir / "summary.json"); summary) {
    const auto j = nlohmann::json::parse(summary);
    wall_clock = j.value("wall_clock_seconds", 0.0);
    valid = j.value("valid", true);
    if (j.contains("config")) options = nasdqn::ConfigFromJson(j["config"]).metrics;
  }
  const auto m = nasdqn::ComputeMetrics(returns, wall_clock, options);
  std::cout << nasdqn::MetricsToJson(m).dump(2) << "\n";
  return valid ? 0 : 2;
}

int BoundCommand(const std::string& config, int theta_points, int omega_points) {
  const ExperimentConfig cfg = LoadOrDefault(config);
  nasdqn::ValueGridOptions opts;
  opts.theta_points = theta_points;
  opts.omega_points = omega_points;
  const auto est = nasdqn::EstimateOptimalReturn(cfg.physics, cfg.reset, opts);
  nlohmann::json j = {{"expected_optimal_return", est.expected_return},
                      {"optimal_from_upright", est.from_upright},
                      {"optimal_from_bottom", est.from_bottom},
                      {"reset_theta_range", cfg.reset.theta_range},
                      {"reset_omega_range", cfg.reset.omega_range},
                      {"convergence_threshold", cfg.metrics.convergence_threshold}};
  std::cout << j.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
#if defined(__GLIBC__)
  // Each training step frees a few large Eigen temporaries; with the default
  // trim threshold glibc hands that memory back to the kernel every step.
  mallopt(M_TRIM_THRESHOLD, 256 << 20);
  mallopt(M_MMAP_THRESHOLD, 64 << 20);
#endif
  CLI::App app{"Online architecture search inside Double DQN on an inverted pendulum"};
  app.require_subcommand(1);

  std::string agent, config, out = "out", in;
  std::optional<std::uint64_t> seed;
  std::optional<int> episodes;
  bool quiet = false;
  unsigned parallel = 0;
  int theta_points = 360, omega_points = 241;

  auto* run = app.add_subcommand("run", "Train one agent for one seed");
  run->add_option("--agent", agent,
                  "fixed-small | fixed-medium | fixed-large | random-nas | nas-dqn");
  run->add_option("--seed", seed, "Master seed (default: first seed of the config)");
  run->add_option("--episodes", episodes, "Override the episode count");
  run->add_option("--config", config, "JSON config file");
  run->add_option("--out", out, "Output directory")->capture_default_str();
  run->add_flag("--quiet", quiet, "No progress output");

  auto* compare = app.add_subcommand("compare", "Run every configured agent on every seed");
  compare->add_option("--config", config, "JSON config file");
  compare->add_option("--out", out, "Output directory")->capture_default_str();
  compare->add_option("--episodes", episodes, "Override the episode count");
  compare->add_option("--parallel", parallel,
                      "Max concurrent trials (default: NASDQN_MAX_PARALLEL or core count)");

  auto* metrics = app.add_subcommand("metrics", "Recompute metrics from a run directory");
  metrics->add_option("--in", in, "Run directory containing episodes.csv")->required();

  auto* bound = app.add_subcommand("bound", "Estimate the optimal expected return by value iteration");
  bound->add_option("--config", config, "JSON config file");
  bound->add_option("--theta-points", theta_points)->capture_default_str();
  bound->add_option("--omega-points", omega_points)->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return RunCommand(agent, seed, episodes, config, out, quiet);
    if (*compare) return CompareCommand(config, out, episodes, parallel);
    if (*metrics) return MetricsCommand(in);
    if (*bound) return BoundCommand(config, theta_points, omega_points);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
