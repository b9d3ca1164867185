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

#ifndef NASDQN_OPTIMAL_RETURN_H_
#define NASDQN_OPTIMAL_RETURN_H_

#include <cstdint>

#include "nasdqn/pendulum.h"

namespace nasdqn {

struct ValueGridOptions {
  int theta_points = 360;  // periodic grid over [-pi, pi)
  int omega_points = 241;  // [-omega_max, omega_max] inclusive
  int reset_samples = 20000;
  std::uint64_t seed = 12345;
};

struct OptimalReturnEstimate {
  // Expected undiscounted episode return of the optimal policy under the
  // reset distribution, and the optimal values of two reference states.
  double expected_return = 0.0;
  double from_upright = 0.0;  // theta = 0, omega = 0
  double from_bottom = 0.0;   // theta = pi, omega = 0
};

// Finite-horizon value iteration on a bilinear-interpolated (theta, omega)
// grid. Gives an approximate ceiling on what any policy can score, which is
// what the convergence threshold must be compared against.
OptimalReturnEstimate EstimateOptimalReturn(const PhysicsParams& physics,
                                            const ResetDistribution& reset,
                                            const ValueGridOptions& options = {});

}  // namespace nasdqn

#endif  // NASDQN_OPTIMAL_RETURN_H_
