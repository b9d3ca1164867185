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

#ifndef NASDQN_IO_H_
#define NASDQN_IO_H_

#include <filesystem>
#include <iosfwd>
#include <string>

#include "json.hpp"

#include "nasdqn/experiment.h"
#include "nasdqn/metrics.h"

namespace nasdqn {

inline constexpr const char* kCodeVersion = NASDQN_VERSION;

// Every field is optional; missing ones keep their defaults. Unknown keys
// are rejected so typos do not silently fall back to defaults.
ExperimentConfig ConfigFromJson(const nlohmann::json& j);
ExperimentConfig LoadConfig(const std::filesystem::path& path);
nlohmann::json ConfigToJson(const ExperimentConfig& cfg);

nlohmann::json MetricsToJson(const MetricsReport& m);
nlohmann::json SummaryJson(const RunRecord& rec, const MetricsOptions& options);

// seed,agent,episode,return,epsilon,layers,units,activation
void WriteEpisodesCsv(const RunRecord& rec, std::ostream& out);
// One "initial" row, then one "update" row per controller step.
void WriteArchitectureHistoryCsv(const RunRecord& rec, std::ostream& out);

// episodes.csv, architecture_history.csv and summary.json under dir.
void WriteRunOutputs(const RunRecord& rec, const std::filesystem::path& dir);

// Returns column of an episodes.csv, in file order.
std::vector<double> ReadEpisodeReturns(const std::filesystem::path& csv);

nlohmann::json ComparisonJson(const ComparisonReport& report, const ExperimentConfig& cfg);
// episode,seed,agent,return,rolling_mean (rolling_mean empty before the
// first full window).
void WritePlotData(const ComparisonReport& report, const MetricsOptions& options,
                   std::ostream& out);
// Markdown table of the aggregated metrics plus the directional comparison.
std::string ComparisonMarkdown(const ComparisonReport& report);

// Per-run directories runs/<agent>-seed<k>/, comparison.json,
// plot_data.csv and comparison.md under dir.
void WriteComparisonOutputs(const ComparisonReport& report, const ExperimentConfig& cfg,
                            const std::filesystem::path& dir);

}  // namespace nasdqn

#endif  // NASDQN_IO_H_
