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

#ifndef NASDQN_METRICS_H_
#define NASDQN_METRICS_H_

#include <optional>
#include <span>
#include <vector>

namespace nasdqn {

struct MetricsOptions {
  std::size_t final_window = 100;
  std::size_t rolling_window = 50;
  double convergence_threshold = 150.0;
};

// Per-run summary. final_std doubles as the stability metric (lower is more
// stable).
struct MetricsReport {
  std::size_t episodes = 0;
  double final_mean = 0.0;
  double final_std = 0.0;
  // 1-based episode at which the rolling mean first reaches the threshold.
  std::optional<int> episodes_to_convergence;
  double peak_return = 0.0;
  double wall_clock_seconds = 0.0;
};

// Rolling mean over episodes (e - window + 1 .. e), 1-based. Element i
// corresponds to episode i + window; episodes before that have no value.
std::vector<double> RollingMean(std::span<const double> returns, std::size_t window);

// Throws std::invalid_argument when fewer than final_window returns exist.
MetricsReport ComputeMetrics(std::span<const double> returns,
                             double wall_clock_seconds = 0.0,
                             const MetricsOptions& options = {});

// Mean and sample standard deviation (n - 1; 0 for a single value).
struct Aggregate {
  double mean = 0.0;
  double stddev = 0.0;
  std::size_t count = 0;
};
Aggregate AggregateValues(std::span<const double> values);

}  // namespace nasdqn

#endif  // NASDQN_METRICS_H_
