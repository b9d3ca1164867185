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

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace nasdqn {
namespace {

using nlohmann::json;

// Reads the listed keys of an object, rejecting anything else.
class Fields {
 public:
  Fields(const json& j, std::string section) : j_(j), section_(std::move(section)) {
    if (!j_.is_object()) throw std::invalid_argument(section_ + " must be a JSON object");
  }
  ~Fields() noexcept(false) {
    if (std::uncaught_exceptions() > 0) return;
    for (const auto& [key, value] : j_.items()) {
      if (!seen_.count(key)) {
        throw std::invalid_argument("unknown config key '" + section_ + key + "'");
      }
    }
  }

  template <typename T>
  void Get(const char* key, T& field) {
    seen_.insert(key);
    if (!j_.contains(key)) return;
    try {
      field = j_.at(key).get<T>();
    } catch (const json::exception& e) {
      throw std::invalid_argument("config key '" + section_ + key + "': " + e.what());
    }
  }
  const json* Sub(const char* key) {
    seen_.insert(key);
    return j_.contains(key) ? &j_.at(key) : nullptr;
  }

 private:
  const json& j_;
  std::string section_;
  std::set<std::string> seen_;
};

std::string FormatDouble(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

json OptionalInt(const std::optional<int>& v) { return v ? json(*v) : json(nullptr); }

json NumberOrNull(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json AggregateJson(const Aggregate& a) {
  return {{"mean", NumberOrNull(a.mean)}, {"std", NumberOrNull(a.stddev)}, {"count", a.count}};
}

json ArchJson(const ArchitectureConfig& c) {
  return {{"layers", c.layers}, {"units", c.units},
          {"activation", std::string(ActivationName(c.activation))}};
}

void WriteFile(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << content;
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace

ExperimentConfig ConfigFromJson(const json& j) {
  ExperimentConfig cfg;
  {
    Fields f(j, "");
    std::string agent(AgentName(cfg.agent));
    f.Get("agent", agent);
    cfg.agent = ParseAgent(agent);
    f.Get("episodes", cfg.episodes);
    f.Get("seeds", cfg.seeds);
    f.Get("update_interval", cfg.update_interval);
    f.Get("replay_capacity", cfg.replay_capacity);
    if (const json* agents = f.Sub("agents")) {
      cfg.compare_agents.clear();
      for (const auto& name : *agents) cfg.compare_agents.push_back(ParseAgent(name.get<std::string>()));
    }
    if (const json* p = f.Sub("physics")) {
      Fields g(*p, "physics.");
      g.Get("mass", cfg.physics.mass);
      g.Get("length", cfg.physics.length);
      g.Get("gravity", cfg.physics.gravity);
      g.Get("dt", cfg.physics.dt);
      g.Get("omega_max", cfg.physics.omega_max);
      g.Get("tau_max", cfg.physics.tau_max);
      g.Get("control_penalty", cfg.physics.control_penalty);
      g.Get("horizon", cfg.physics.horizon);
    }
    if (const json* r = f.Sub("reset")) {
      if (r->is_string()) {
        const auto preset = r->get<std::string>();
        if (preset == "swing-up") {
          cfg.reset = ResetDistribution::SwingUp();
        } else if (preset == "near-upright") {
          cfg.reset = ResetDistribution{};
        } else {
          throw std::invalid_argument("unknown reset preset '" + preset +
                                      "' (expected swing-up or near-upright)");
        }
      } else {
        Fields g(*r, "reset.");
        g.Get("theta_range", cfg.reset.theta_range);
        g.Get("omega_range", cfg.reset.omega_range);
      }
    }
    if (const json* a = f.Sub("agent_hyperparams")) {
      Fields g(*a, "agent_hyperparams.");
      auto& hp = cfg.agent_hp;
      g.Get("gamma", hp.gamma);
      g.Get("learning_rate", hp.learning_rate);
      g.Get("batch_size", hp.batch_size);
      g.Get("target_sync_interval", hp.target_sync_interval);
      g.Get("epsilon_start", hp.epsilon_start);
      g.Get("epsilon_decay", hp.epsilon_decay);
      g.Get("epsilon_min", hp.epsilon_min);
      g.Get("warmup", hp.warmup);
      g.Get("grad_clip", hp.grad_clip);
      g.Get("prune_keep", hp.prune_keep);
    }
    if (const json* c = f.Sub("controller")) {
      Fields g(*c, "controller.");
      auto& cp = cfg.controller;
      g.Get("epsilon_start", cp.epsilon_start);
      g.Get("epsilon_decay", cp.epsilon_decay);
      g.Get("epsilon_min", cp.epsilon_min);
      g.Get("temperature", cp.temperature);
      g.Get("stability_eps", cp.stability_eps);
      g.Get("capacity", cp.capacity);
    }
    if (const json* m = f.Sub("metrics")) {
      Fields g(*m, "metrics.");
      g.Get("final_window", cfg.metrics.final_window);
      g.Get("rolling_window", cfg.metrics.rolling_window);
      g.Get("convergence_threshold", cfg.metrics.convergence_threshold);
    }
  }
  cfg.Validate();
  return cfg;
}

ExperimentConfig LoadConfig(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("config " + path.string() + ": " + e.what());
  }
  return ConfigFromJson(j);
}

json ConfigToJson(const ExperimentConfig& cfg) {
  json agents = json::array();
  for (AgentKind k : cfg.compare_agents) agents.push_back(std::string(AgentName(k)));
  const auto& p = cfg.physics;
  const auto& hp = cfg.agent_hp;
  const auto& cp = cfg.controller;
  return {
      {"agent", std::string(AgentName(cfg.agent))},
      {"episodes", cfg.episodes},
      {"seeds", cfg.seeds},
      {"update_interval", cfg.update_interval},
      {"replay_capacity", cfg.replay_capacity},
      {"agents", agents},
      {"physics",
       {{"mass", p.mass}, {"length", p.length}, {"gravity", p.gravity}, {"dt", p.dt},
        {"omega_max", p.omega_max}, {"tau_max", p.tau_max},
        {"control_penalty", p.control_penalty}, {"horizon", p.horizon}}},
      {"reset", {{"theta_range", cfg.reset.theta_range}, {"omega_range", cfg.reset.omega_range}}},
      {"agent_hyperparams",
       {{"gamma", hp.gamma}, {"learning_rate", hp.learning_rate},
        {"batch_size", hp.batch_size}, {"target_sync_interval", hp.target_sync_interval},
        {"epsilon_start", hp.epsilon_start}, {"epsilon_decay", hp.epsilon_decay},
        {"epsilon_min", hp.epsilon_min}, {"warmup", hp.warmup},
        {"grad_clip", hp.grad_clip}, {"prune_keep", hp.prune_keep}}},
      {"controller",
       {{"epsilon_start", cp.epsilon_start}, {"epsilon_decay", cp.epsilon_decay},
        {"epsilon_min", cp.epsilon_min}, {"temperature", cp.temperature},
        {"stability_eps", cp.stability_eps}, {"capacity", cp.capacity}}},
      {"metrics",
       {{"final_window", cfg.metrics.final_window},
        {"rolling_window", cfg.metrics.rolling_window},
        {"convergence_threshold", cfg.metrics.convergence_threshold}}},
  };
}

json MetricsToJson(const MetricsReport& m) {
  return {{"episodes", m.episodes},
          {"final_mean", NumberOrNull(m.final_mean)},
          {"final_std", NumberOrNull(m.final_std)},
          {"stability", NumberOrNull(m.final_std)},
          {"episodes_to_convergence", OptionalInt(m.episodes_to_convergence)},
          {"converged", m.episodes_to_convergence.has_value()},
          {"peak_return", NumberOrNull(m.peak_return)},
          {"wall_clock_seconds", m.wall_clock_seconds}};
}

json SummaryJson(const RunRecord& rec, const MetricsOptions& options) {
  json j;
  j["code_version"] = kCodeVersion;
  j["agent"] = std::string(AgentName(rec.agent));
  j["seed"] = rec.seed;
  j["valid"] = rec.valid;
  j["error"] = rec.error;
  j["episodes_completed"] = rec.episodes.size();
  j["env_steps"] = rec.env_steps;
  j["gradient_updates"] = rec.gradient_updates;
  j["target_syncs"] = rec.target_syncs;
  j["controller_updates"] = rec.controller_events.size();
  j["wall_clock_seconds"] = rec.wall_clock_seconds;
  const auto returns = rec.Returns();
  j["metrics"] = returns.size() >= options.final_window
                     ? MetricsToJson(ComputeMetrics(returns, rec.wall_clock_seconds, options))
                     : json(nullptr);
  json history = json::array();
  for (const auto& [episode, c] : rec.architecture_history) {
    json h = ArchJson(c);
    h["episode"] = episode;
    history.push_back(h);
  }
  j["architecture_history"] = history;
  j["config"] = ConfigToJson(rec.config);
  return j;
}

void WriteEpisodesCsv(const RunRecord& rec, std::ostream& out) {
  out << "seed,agent,episode,return,epsilon,layers,units,activation\n";
  for (const auto& e : rec.episodes) {
    out << rec.seed << ',' << AgentName(rec.agent) << ',' << e.episode << ','
        << FormatDouble(e.episode_return) << ',' << FormatDouble(e.epsilon) << ','
        << e.config.layers << ',' << e.config.units << ',' << ActivationName(e.config.activation)
        << '\n';
  }
}

void WriteArchitectureHistoryCsv(const RunRecord& rec, std::ostream& out) {
  out << "event,update,episode,controller_epsilon,scored_layers,scored_units,"
         "scored_activation,score,sampled_layers,sampled_units,sampled_activation,"
         "branch,changed,replay_before,replay_after\n";
  const ArchitectureConfig& first = rec.architecture_history.front().second;
  out << "initial,0,1,,,,,," << first.layers << ',' << first.units << ','
      << ActivationName(first.activation) << ','
      << (rec.initial_branch ? BranchName(*rec.initial_branch) : std::string_view("fixed"))
      << ",,,\n";
  for (const auto& ev : rec.controller_events) {
    out << "update," << ev.update_index << ',' << ev.episode << ','
        << FormatDouble(ev.controller_epsilon) << ',' << ev.scored.layers << ','
        << ev.scored.units << ',' << ActivationName(ev.scored.activation) << ','
        << FormatDouble(ev.score) << ',' << ev.sampled.layers << ',' << ev.sampled.units
        << ',' << ActivationName(ev.sampled.activation) << ',' << BranchName(ev.branch) << ','
        << (ev.changed ? 1 : 0) << ',' << ev.replay_before << ',' << ev.replay_after << '\n';
  }
}

void WriteRunOutputs(const RunRecord& rec, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::ostringstream episodes, history;
  WriteEpisodesCsv(rec, episodes);
  WriteArchitectureHistoryCsv(rec, history);
  WriteFile(dir / "episodes.csv", episodes.str());
  WriteFile(dir / "architecture_history.csv", history.str());
  WriteFile(dir / "summary.json", SummaryJson(rec, rec.config.metrics).dump(2) + "\n");
}

std::vector<double> ReadEpisodeReturns(const std::filesystem::path& csv) {
  std::ifstream in(csv);
  if (!in) throw std::runtime_error("cannot open " + csv.string());
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(csv.string() + " is empty");
  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) header.push_back(cell);
  }
  const auto it = std::ranges::find(header, "return");
  if (it == header.end()) throw std::runtime_error(csv.string() + " has no 'return' column");
  const auto column = static_cast<std::size_t>(it - header.begin());
  std::vector<double> returns;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    for (std::size_t c = 0; c <= column; ++c) {
      if (!std::getline(ss, cell, ',')) {
        throw std::runtime_error(csv.string() + ": short row '" + line + "'");
      }
    }
    returns.push_back(std::stod(cell));
  }
  return returns;
}

namespace {

struct MetricView {
  const char* name;
  bool higher_is_better;
  // Value of the metric for one agent; nullopt when it cannot be ranked.
  std::optional<double> (*value)(const AgentSummary&);
};

std::optional<double> FinalMeanOf(const AgentSummary& s) {
  if (s.final_mean.count == 0) return std::nullopt;
  return s.final_mean.mean;
}
std::optional<double> ConvergenceOf(const AgentSummary& s) {
  // Seeds that never converge count as the full run length.
  if (s.metrics.empty()) return std::nullopt;
  double total = 0.0;
  for (const auto& m : s.metrics) {
    total += m.episodes_to_convergence ? *m.episodes_to_convergence
                                       : static_cast<double>(m.episodes + 1);
  }
  return total / static_cast<double>(s.metrics.size());
}
std::optional<double> PeakOf(const AgentSummary& s) {
  if (s.peak_return.count == 0) return std::nullopt;
  return s.peak_return.mean;
}
std::optional<double> StabilityOf(const AgentSummary& s) {
  if (s.final_std.count == 0) return std::nullopt;
  return s.final_std.mean;
}

constexpr MetricView kMetricViews[] = {
    {"final_performance", true, FinalMeanOf},
    {"sample_efficiency", false, ConvergenceOf},
    {"peak_performance", true, PeakOf},
    {"stability", false, StabilityOf},
};

json Directional(const ComparisonReport& report) {
  json out = json::object();
  for (const auto& view : kMetricViews) {
    std::optional<std::size_t> best;
    std::optional<double> best_value;
    for (std::size_t i = 0; i < report.agents.size(); ++i) {
      const auto v = view.value(report.agents[i]);
      if (!v) continue;
      if (!best_value || (view.higher_is_better ? *v > *best_value : *v < *best_value)) {
        best = i;
        best_value = v;
      }
    }
    json entry;
    entry["higher_is_better"] = view.higher_is_better;
    entry["best_agent"] = best ? json(std::string(AgentName(report.agents[*best].agent)))
                               : json(nullptr);
    entry["best_value"] = best_value ? json(*best_value) : json(nullptr);
    json values = json::object();
    for (const auto& a : report.agents) {
      const auto v = view.value(a);
      values[std::string(AgentName(a.agent))] = v ? json(*v) : json(nullptr);
    }
    entry["values"] = values;
    entry["nas_dqn_best"] =
        best.has_value() && report.agents[*best].agent == AgentKind::kNasDqn;
    out[view.name] = entry;
  }
  return out;
}

}  // namespace

json ComparisonJson(const ComparisonReport& report, const ExperimentConfig& cfg) {
  json agents = json::array();
  for (const auto& a : report.agents) {
    json per_seed = json::array();
    for (std::size_t i = 0; i < a.runs.size(); ++i) {
      json m = MetricsToJson(a.metrics[i]);
      m["seed"] = a.runs[i].seed;
      m["valid"] = a.runs[i].valid;
      m["controller_updates"] = a.runs[i].controller_events.size();
      per_seed.push_back(m);
    }
    agents.push_back({
        {"agent", std::string(AgentName(a.agent))},
        {"final_mean", AggregateJson(a.final_mean)},
        {"final_std", AggregateJson(a.final_std)},
        {"stability", AggregateJson(a.final_std)},
        {"peak_return", AggregateJson(a.peak_return)},
        {"wall_clock_seconds", AggregateJson(a.wall_clock)},
        {"episodes_to_convergence", AggregateJson(a.episodes_to_convergence)},
        {"converged_seeds", a.converged_count},
        {"seeds", per_seed},
    });
  }
  return {{"code_version", kCodeVersion},
          {"all_valid", report.all_valid},
          {"agents", agents},
          {"directional_comparison", Directional(report)},
          {"config", ConfigToJson(cfg)}};
}

void WritePlotData(const ComparisonReport& report, const MetricsOptions& options,
                   std::ostream& out) {
  out << "episode,seed,agent,return,rolling_mean\n";
  for (const auto& a : report.agents) {
    for (const auto& run : a.runs) {
      const auto returns = run.Returns();
      const auto rolling = RollingMean(returns, options.rolling_window);
      for (std::size_t i = 0; i < returns.size(); ++i) {
        out << (i + 1) << ',' << run.seed << ',' << AgentName(a.agent) << ','
            << FormatDouble(returns[i]) << ',';
        if (i + 1 >= options.rolling_window) {
          out << FormatDouble(rolling[i + 1 - options.rolling_window]);
        }
        out << '\n';
      }
    }
  }
}

std::string ComparisonMarkdown(const ComparisonReport& report) {
  std::ostringstream md;
  auto pm = [](const Aggregate& a) {
    if (a.count == 0) return std::string("n/a");
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.2f ± %.2f", a.mean, a.stddev);
    return std::string(buf);
  };
  md << "| agent | final mean | stability (final std) | episodes to convergence | "
        "converged seeds | peak return | wall clock (s) |\n";
  md << "|---|---|---|---|---|---|---|\n";
  for (const auto& a : report.agents) {
    md << "| " << AgentName(a.agent) << " | " << pm(a.final_mean) << " | " << pm(a.final_std)
       << " | " << pm(a.episodes_to_convergence) << " | " << a.converged_count << "/"
       << a.runs.size() << " | " << pm(a.peak_return) << " | " << pm(a.wall_clock) << " |\n";
  }
  md << "\nBest agent per metric (unconverged seeds count as run length + 1 for "
        "sample efficiency):\n\n";
  const json dir = Directional(report);
  for (const auto& [metric, entry] : dir.items()) {
    md << "- " << metric << ": "
       << (entry["best_agent"].is_null() ? std::string("n/a")
                                         : entry["best_agent"].get<std::string>())
       << (entry["nas_dqn_best"].get<bool>() ? " (nas-dqn leads)" : "") << "\n";
  }
  return md.str();
}

void WriteComparisonOutputs(const ComparisonReport& report, const ExperimentConfig& cfg,
                            const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (const auto& a : report.agents) {
    for (const auto& run : a.runs) {
      WriteRunOutputs(run, dir / "runs" /
                               (std::string(AgentName(a.agent)) + "-seed" +
                                std::to_string(run.seed)));
    }
  }
  WriteFile(dir / "comparison.json", ComparisonJson(report, cfg).dump(2) + "\n");
  std::ostringstream plot;
  WritePlotData(report, cfg.metrics, plot);
  WriteFile(dir / "plot_data.csv", plot.str());
  WriteFile(dir / "comparison.md", ComparisonMarkdown(report));
}

}  // namespace nasdqn
