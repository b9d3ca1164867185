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

#include "nasdqn/nas_controller.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace nasdqn {

void ControllerParams::Validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(std::string("ControllerParams: ") + what);
  };
  require(epsilon_min >= 0.0 && epsilon_min <= epsilon_start && epsilon_start <= 1.0,
          "need 0 <= epsilon_min <= epsilon_start <= 1");
  require(epsilon_decay > 0.0 && epsilon_decay <= 1.0, "epsilon_decay must be in (0, 1]");
  require(temperature > 0.0, "temperature must be > 0");
  require(stability_eps > 0.0, "stability_eps must be > 0");
  require(capacity >= 1, "capacity must be >= 1");
}

std::string_view BranchName(SampleBranch b) {
  switch (b) {
    case SampleBranch::kRandomMode:
      return "random_mode";
    case SampleBranch::kExplore:
      return "explore";
    case SampleBranch::kEmptyFallback:
      return "empty_fallback";
    case SampleBranch::kExploit:
      return "exploit";
  }
  return "unknown";
}

NasController::NasController(ControllerMode mode, ControllerParams params)
    : mode_(mode), params_(params), epsilon_(params.epsilon_start) {
  params_.Validate();
}

void NasController::UpdateScore(const ArchitectureConfig& c, double score) {
  if (mode_ == ControllerMode::kRandom) return;
  if (!c.InSearchSpace()) {
    throw std::invalid_argument("UpdateScore: " + c.ToString() + " is outside the search space");
  }
  auto it = std::ranges::find_if(best_, [&](const auto& e) { return e.config == c; });
  if (it != best_.end()) {
    it->score = score;
    return;
  }
  best_.push_back({c, score});
  if (best_.size() > params_.capacity) {
    best_.erase(std::ranges::min_element(
        best_, [](const auto& a, const auto& b) { return a.score < b.score; }));
  }
}

std::vector<double> NasController::NormalizedScores() const {
  if (best_.empty()) throw std::logic_error("NormalizedScores on an empty buffer");
  const double n = static_cast<double>(best_.size());
  double mean = 0.0;
  for (const auto& e : best_) mean += e.score;
  mean /= n;
  double var = 0.0;
  for (const auto& e : best_) var += (e.score - mean) * (e.score - mean);
  const double denom = std::sqrt(var / n) + params_.stability_eps;
  std::vector<double> z;
  z.reserve(best_.size());
  for (const auto& e : best_) z.push_back((e.score - mean) / denom);
  return z;
}

std::vector<double> NasController::SelectionProbabilities() const {
  std::vector<double> p = NormalizedScores();
  // Shifting by the max leaves the softmax unchanged and avoids overflow.
  const double top = *std::ranges::max_element(p);
  double sum = 0.0;
  for (double& v : p) {
    v = std::exp((v - top) / params_.temperature);
    sum += v;
  }
  for (double& v : p) v /= sum;
  return p;
}

ArchitectureSample NasController::SampleArchitecture(Rng& rng) const {
  const auto& space = SearchSpace();
  auto uniform = [&] { return space[rng.UniformIndex(space.size())]; };
  if (mode_ == ControllerMode::kRandom) return {uniform(), SampleBranch::kRandomMode};
  if (rng.Uniform(0.0, 1.0) < epsilon_) return {uniform(), SampleBranch::kExplore};
  if (best_.empty()) return {uniform(), SampleBranch::kEmptyFallback};
  const std::vector<double> p = SelectionProbabilities();
  return {best_[rng.Choice(p)].config, SampleBranch::kExploit};
}

void NasController::DecayExploration() {
  epsilon_ = std::max(params_.epsilon_min, epsilon_ * params_.epsilon_decay);
}

}  // namespace nasdqn
