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
#include <vector>

#include "doctest.h"
#include "nasdqn/rng.h"

namespace nasdqn {
namespace {

// Brute-force first episode (1-based) whose trailing window mean reaches the
// threshold.
std::optional<int> FirstCrossing(const std::vector<double>& r, std::size_t w, double thr) {
  for (std::size_t e = w; e <= r.size(); ++e) {
    double s = 0;
    for (std::size_t i = e - w; i < e; ++i) s += r[i];
    if (s / w >= thr) return static_cast<int>(e);
  }
  return std::nullopt;
}

TEST_CASE("constant series") {
  const std::vector<double> r(300, 160.0);
  const MetricsReport m = ComputeMetrics(r, 1.5);
  CHECK(m.final_mean == 160.0);
  CHECK(m.final_std == 0.0);
  REQUIRE(m.episodes_to_convergence.has_value());
  CHECK(*m.episodes_to_convergence == 50);
  CHECK(m.peak_return == 160.0);
  CHECK(m.wall_clock_seconds == 1.5);
}

TEST_CASE("step series converges at episode 1037") {
  std::vector<double> r(2000, 0.0);
  for (std::size_t i = 999; i < r.size(); ++i) r[i] = 200.0;
  const MetricsReport m = ComputeMetrics(r);
  REQUIRE(m.episodes_to_convergence.has_value());
  CHECK(*m.episodes_to_convergence == 1037);
  CHECK(*m.episodes_to_convergence == *FirstCrossing(r, 50, 150.0));
  CHECK(m.final_mean == 200.0);
  CHECK(m.peak_return == 200.0);
}

TEST_CASE("floor series never converges") {
  const std::vector<double> r(500, -200.0);
  const MetricsReport m = ComputeMetrics(r);
  CHECK_FALSE(m.episodes_to_convergence.has_value());
  CHECK(m.final_mean == -200.0);
  CHECK(m.peak_return == -200.0);
}

TEST_CASE("final window statistics use the last 100 raw returns") {
  std::vector<double> r(150, 1000.0);  // outside the window
  for (int i = 0; i < 100; ++i) r.push_back(i % 2 ? 10.0 : 20.0);
  const MetricsReport m = ComputeMetrics(r);
  CHECK(m.final_mean == doctest::Approx(15.0));
  CHECK(m.final_std == doctest::Approx(5.0));
  CHECK(m.peak_return == 1000.0);
  CHECK_THROWS_AS(ComputeMetrics(std::vector<double>(99, 1.0)), std::invalid_argument);
}

TEST_CASE("convergence agrees with brute force on random walks") {
  Rng rng(1);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> r;
    double level = rng.Uniform(-100, 100);
    for (int i = 0; i < 600; ++i) {
      level += rng.Uniform(-5, 6);
      r.push_back(std::clamp(level + rng.Normal(0, 10), -200.8, 200.0));
    }
    const MetricsReport m = ComputeMetrics(r);
    CHECK(m.episodes_to_convergence == FirstCrossing(r, 50, 150.0));
    double last_max = -1e9;
    for (std::size_t i = r.size() - 100; i < r.size(); ++i) last_max = std::max(last_max, r[i]);
    CHECK(m.peak_return >= last_max);
  }
}

TEST_CASE("rolling mean") {
  const std::vector<double> r = {1, 2, 3, 4, 5};
  CHECK(RollingMean(r, 2) == std::vector<double>{1.5, 2.5, 3.5, 4.5});
  CHECK(RollingMean(r, 6).empty());
  CHECK_THROWS(RollingMean(r, 0));
}

TEST_CASE("aggregation across seeds") {
  const Aggregate one = AggregateValues(std::vector<double>{3.0});
  CHECK(one.mean == 3.0);
  CHECK(one.stddev == 0.0);
  const Aggregate three = AggregateValues(std::vector<double>{1.0, 2.0, 6.0});
  CHECK(three.mean == 3.0);
  CHECK(three.stddev == doctest::Approx(std::sqrt(7.0)));
  CHECK(AggregateValues(std::vector<double>{}).count == 0);
}

}  // namespace
}  // namespace nasdqn
