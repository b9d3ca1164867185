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

#include "nasdqn/metrics.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace nasdqn {

std::vector<double> RollingMean(std::span<const double> returns, std::size_t window) {
  if (window == 0) throw std::invalid_argument("RollingMean: window must be > 0");
  std::vector<double> out;
  if (returns.size() < window) return out;
  out.reserve(returns.size() - window + 1);
  // Each window is summed directly; a running sum would accumulate drift
  // and could flip a threshold comparison sitting exactly on the boundary.
  for (std::size_t end = window; end <= returns.size(); ++end) {
    double sum = 0.0;
    for (std::size_t i = end - window; i < end; ++i) sum += returns[i];
    out.push_back(sum / static_cast<double>(window));
  }
  return out;
}

MetricsReport ComputeMetrics(std::span<const double> returns, double wall_clock_seconds,
                             const MetricsOptions& options) {
  if (returns.size() < options.final_window || options.final_window == 0) {
    throw std::invalid_argument("ComputeMetrics needs at least " +
                                std::to_string(options.final_window) + " episodes, got " +
                                std::to_string(returns.size()));
  }
  MetricsReport m;
  m.episodes = returns.size();
  m.wall_clock_seconds = wall_clock_seconds;

  const auto tail = returns.last(options.final_window);
  const double n = static_cast<double>(tail.size());
  double mean = 0.0;
  for (double r : tail) mean += r;
  mean /= n;
  double var = 0.0;
  for (double r : tail) var += (r - mean) * (r - mean);
  m.final_mean = mean;
  m.final_std = std::sqrt(var / n);

  m.peak_return = *std::ranges::max_element(returns);

  const auto rolling = RollingMean(returns, options.rolling_window);
  for (std::size_t i = 0; i < rolling.size(); ++i) {
    if (rolling[i] >= options.convergence_threshold) {
      m.episodes_to_convergence = static_cast<int>(i + options.rolling_window);
      break;
    }
  }
  return m;
}

Aggregate AggregateValues(std::span<const double> values) {
  Aggregate a;
  a.count = values.size();
  if (values.empty()) return a;
  for (double v : values) a.mean += v;
  a.mean /= static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - a.mean) * (v - a.mean);
    a.stddev = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return a;
}

}  // namespace nasdqn
