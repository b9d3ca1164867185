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

#include "nasdqn/io.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"

namespace nasdqn {
namespace {

using nlohmann::json;

std::vector<std::string> Lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::filesystem::path TempDir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("nasdqn_io_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

ExperimentConfig Tiny(AgentKind agent) {
  ExperimentConfig cfg;
  cfg.agent = agent;
  cfg.episodes = 100;
  cfg.update_interval = 20;
  cfg.physics.horizon = 10;
  cfg.agent_hp.warmup = 64;
  cfg.agent_hp.batch_size = 8;
  return cfg;
}

TEST_CASE("empty config gives defaults") {
  const ExperimentConfig cfg = ConfigFromJson(json::object());
  CHECK(cfg.episodes == 2000);
  CHECK(cfg.update_interval == 200);
  CHECK(cfg.replay_capacity == 50000u);
  CHECK(cfg.seeds == std::vector<std::uint64_t>{1, 2, 3});
  CHECK(cfg.agent == AgentKind::kNasDqn);
  CHECK(cfg.physics.horizon == 200);
  CHECK(cfg.agent_hp.gamma == 0.99);
  CHECK(cfg.controller.temperature == 1.5);
  CHECK(cfg.reset.theta_range == 0.2);
}

TEST_CASE("config fields and presets parse") {
  const json j = json::parse(R"({
    "agent": "fixed-large", "episodes": 300, "seeds": [7, 8],
    "agents": ["fixed-small", "nas-dqn"],
    "physics": {"gravity": 10.0, "horizon": 50},
    "reset": "swing-up",
    "agent_hyperparams": {"learning_rate": 0.0005, "batch_size": 32},
    "controller": {"temperature": 2.0},
    "metrics": {"convergence_threshold": 120.0}
  })");
  const ExperimentConfig cfg = ConfigFromJson(j);
  CHECK(cfg.agent == AgentKind::kFixedLarge);
  CHECK(cfg.episodes == 300);
  CHECK(cfg.seeds == std::vector<std::uint64_t>{7, 8});
  CHECK(cfg.compare_agents == std::vector<AgentKind>{AgentKind::kFixedSmall, AgentKind::kNasDqn});
  CHECK(cfg.physics.gravity == 10.0);
  CHECK(cfg.physics.horizon == 50);
  CHECK(cfg.reset.theta_range == doctest::Approx(M_PI));
  CHECK(cfg.agent_hp.learning_rate == 0.0005);
  CHECK(cfg.agent_hp.batch_size == 32u);
  CHECK(cfg.controller.temperature == 2.0);
  CHECK(cfg.metrics.convergence_threshold == 120.0);

  // Round trip through the serialized form.
  const ExperimentConfig again = ConfigFromJson(ConfigToJson(cfg));
  CHECK(ConfigToJson(again) == ConfigToJson(cfg));
}

TEST_CASE("bad configs are rejected") {
  CHECK_THROWS_AS(ConfigFromJson(json::parse(R"({"episodez": 5})")), std::invalid_argument);
  CHECK_THROWS_AS(ConfigFromJson(json::parse(R"({"physics": {"mas": 1}})")),
                  std::invalid_argument);
  CHECK_THROWS_AS(ConfigFromJson(json::parse(R"({"agent": "nas"})")), std::invalid_argument);
  CHECK_THROWS_AS(ConfigFromJson(json::parse(R"({"reset": "sideways"})")), std::invalid_argument);
  CHECK_THROWS(ConfigFromJson(json::parse(R"({"episodes": "many"})")));
  CHECK_THROWS(ConfigFromJson(json::parse(R"({"episodes": -1})")));
  CHECK_THROWS(ConfigFromJson(json::parse(R"({"controller": {"temperature": 0}})")));
  CHECK_THROWS(ConfigFromJson(json::parse("[1, 2]")));
}

TEST_CASE("config loads from disk") {
  const auto dir = TempDir("load");
  std::ofstream(dir / "c.json") << R"({"episodes": 123})";
  CHECK(LoadConfig(dir / "c.json").episodes == 123);
  std::ofstream(dir / "bad.json") << "{";
  CHECK_THROWS(LoadConfig(dir / "bad.json"));
  CHECK_THROWS(LoadConfig(dir / "missing.json"));
}

TEST_CASE("episode csv layout") {
  const RunRecord rec = RunTrial(Tiny(AgentKind::kFixedSmall), 4);
  std::ostringstream out;
  WriteEpisodesCsv(rec, out);
  const auto lines = Lines(out.str());
  REQUIRE(lines.size() == 101);
  CHECK(lines[0] == "seed,agent,episode,return,epsilon,layers,units,activation");
  CHECK(lines[1].rfind("4,fixed-small,1,", 0) == 0);
  CHECK(lines[1].ends_with(",2,32,relu"));
  CHECK(lines[100].rfind("4,fixed-small,100,", 0) == 0);

  const auto dir = TempDir("episodes");
  WriteRunOutputs(rec, dir);
  CHECK(ReadEpisodeReturns(dir / "episodes.csv") == rec.Returns());
  const json summary = json::parse(std::ifstream(dir / "summary.json"));
  CHECK(summary["agent"] == "fixed-small");
  CHECK(summary["valid"] == true);
  CHECK(summary["code_version"].is_string());
  CHECK(summary["metrics"]["final_mean"].get<double>() ==
        doctest::Approx(ComputeMetrics(rec.Returns()).final_mean));
  CHECK(summary["architecture_history"].size() == 1);
}

TEST_CASE("architecture history csv") {
  const RunRecord rec = RunTrial(Tiny(AgentKind::kNasDqn), 2);
  std::ostringstream out;
  WriteArchitectureHistoryCsv(rec, out);
  const auto lines = Lines(out.str());
  REQUIRE(lines.size() == 1 + 1 + rec.controller_events.size());
  CHECK(lines[0].rfind("event,update,episode,controller_epsilon,", 0) == 0);
  CHECK(lines[1].rfind("initial,0,1,", 0) == 0);
  for (std::size_t k = 0; k < rec.controller_events.size(); ++k) {
    CHECK(lines[2 + k].rfind("update," + std::to_string(k + 1) + "," +
                                 std::to_string(20 * (k + 1)) + ",",
                             0) == 0);
  }

  std::ostringstream fixed;
  WriteArchitectureHistoryCsv(RunTrial(Tiny(AgentKind::kFixedSmall), 2), fixed);
  const auto fl = Lines(fixed.str());
  REQUIRE(fl.size() == 2);
  CHECK(fl[1].find(",fixed,") != std::string::npos);
}

TEST_CASE("comparison outputs") {
  ExperimentConfig cfg = Tiny(AgentKind::kNasDqn);
  cfg.seeds = {1, 2};
  const ComparisonReport report = RunComparison(cfg, 1);
  REQUIRE(report.agents.size() == 5);
  const json j = ComparisonJson(report, cfg);
  REQUIRE(j["agents"].size() == 5);
  for (const auto& a : j["agents"]) {
    for (const char* key : {"final_mean", "stability", "peak_return", "episodes_to_convergence"})
      CHECK(a.contains(key));
    CHECK(a["seeds"].size() == 2);
  }
  for (const char* metric :
       {"final_performance", "sample_efficiency", "peak_performance", "stability"}) {
    REQUIRE(j["directional_comparison"].contains(metric));
    CHECK(j["directional_comparison"][metric]["values"].size() == 5);
  }

  const auto dir = TempDir("compare");
  WriteComparisonOutputs(report, cfg, dir);
  for (const char* f : {"comparison.json", "plot_data.csv", "comparison.md"})
    CHECK(std::filesystem::exists(dir / f));
  CHECK(std::filesystem::exists(dir / "runs" / "nas-dqn-seed2" / "architecture_history.csv"));
  std::ifstream plot(dir / "plot_data.csv");
  std::ostringstream text;
  text << plot.rdbuf();
  const auto lines = Lines(text.str());
  CHECK(lines.size() == 1 + 5 * 2 * 100);
  CHECK(lines[0] == "episode,seed,agent,return,rolling_mean");
  const std::string md = ComparisonMarkdown(report);
  for (AgentKind k : kAllAgents) CHECK(md.find(std::string(AgentName(k))) != std::string::npos);
}

}  // namespace
}  // namespace nasdqn
