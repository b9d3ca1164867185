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

#include "nasdqn/optimal_return.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "nasdqn/rng.h"

namespace nasdqn {
namespace {

class ValueGrid {
 public:
  ValueGrid(int nt, int nw, double omega_max)
      : nt_(nt), nw_(nw), omega_max_(omega_max), v_(static_cast<std::size_t>(nt * nw), 0.0) {}

  double& at(int i, int j) { return v_[static_cast<std::size_t>(i * nw_ + j)]; }
  double at(int i, int j) const { return v_[static_cast<std::size_t>(i * nw_ + j)]; }

  double theta(int i) const { return -std::numbers::pi + i * ThetaStep(); }
  double omega(int j) const { return -omega_max_ + j * OmegaStep(); }

  double Interpolate(double theta, double omega) const {
    double x = (theta + std::numbers::pi) / ThetaStep();
    x -= nt_ * std::floor(x / nt_);
    const int i0 = std::min(static_cast<int>(x), nt_ - 1);
    const int i1 = (i0 + 1) % nt_;
    const double fx = x - i0;
    const double y = std::clamp((omega + omega_max_) / OmegaStep(), 0.0, nw_ - 1.0);
    const int j0 = std::min(static_cast<int>(y), nw_ - 2);
    const double fy = y - j0;
    return (1 - fx) * ((1 - fy) * at(i0, j0) + fy * at(i0, j0 + 1)) +
           fx * ((1 - fy) * at(i1, j0) + fy * at(i1, j0 + 1));
  }

  int nt() const { return nt_; }
  int nw() const { return nw_; }

 private:
  double ThetaStep() const { return 2.0 * std::numbers::pi / nt_; }
  double OmegaStep() const { return 2.0 * omega_max_ / (nw_ - 1); }

  int nt_, nw_;
  double omega_max_;
  std::vector<double> v_;
};

}  // namespace

OptimalReturnEstimate EstimateOptimalReturn(const PhysicsParams& physics,
                                            const ResetDistribution& reset,
                                            const ValueGridOptions& options) {
  physics.Validate();
  reset.Validate();
  if (options.theta_points < 4 || options.omega_points < 3 || options.reset_samples < 1) {
    throw std::invalid_argument("EstimateOptimalReturn: grid too small");
  }
  ValueGrid value(options.theta_points, options.omega_points, physics.omega_max);
  ValueGrid next = value;

  // Successor of every grid node under every action does not change between
  // sweeps, so it is computed once.
  struct Succ {
    double theta, omega, reward;
  };
  std::vector<Succ> succ;
  succ.reserve(static_cast<std::size_t>(value.nt() * value.nw() * kNumActions));
  for (int i = 0; i < value.nt(); ++i) {
    for (int j = 0; j < value.nw(); ++j) {
      for (int a = 0; a < kNumActions; ++a) {
        const StepResult r = Step({value.theta(i), value.omega(j), 0}, a, physics);
        succ.push_back({r.state.theta, r.state.omega, r.reward});
      }
    }
  }
  for (int t = 0; t < physics.horizon; ++t) {
    std::size_t k = 0;
    for (int i = 0; i < value.nt(); ++i) {
      for (int j = 0; j < value.nw(); ++j) {
        double best = -1e300;
        for (int a = 0; a < kNumActions; ++a, ++k) {
          best = std::max(best, succ[k].reward + value.Interpolate(succ[k].theta, succ[k].omega));
        }
        next.at(i, j) = best;
      }
    }
    std::swap(value, next);
  }

  OptimalReturnEstimate est;
  Rng rng(options.seed);
  double total = 0.0;
  for (int s = 0; s < options.reset_samples; ++s) {
    const PendulumState st = Reset(rng, reset);
    total += value.Interpolate(st.theta, st.omega);
  }
  est.expected_return = total / options.reset_samples;
  est.from_upright = value.Interpolate(0.0, 0.0);
  est.from_bottom = value.Interpolate(std::numbers::pi, 0.0);
  return est;
}

}  // namespace nasdqn
