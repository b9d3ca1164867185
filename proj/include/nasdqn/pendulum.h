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

#ifndef NASDQN_PENDULUM_H_
#define NASDQN_PENDULUM_H_

#include <array>
#include <numbers>

#include "nasdqn/rng.h"

namespace nasdqn {

inline constexpr int kNumActions = 3;
inline constexpr int kObservationDim = 3;

struct PhysicsParams {
  double mass = 1.0;
  double length = 1.0;
  double gravity = 9.8;
  double dt = 0.02;
  double omega_max = 8.0;
  double tau_max = 2.0;
  double control_penalty = 0.001;
  int horizon = 200;

  // Throws std::invalid_argument when a field is out of its domain.
  void Validate() const;
};

// Initial state distribution: theta ~ U(-theta_range, theta_range],
// omega ~ U(-omega_range, omega_range). theta_range = pi is the full
// swing-up task.
struct ResetDistribution {
  double theta_range = 0.2;
  double omega_range = 1.0;

  static ResetDistribution SwingUp() { return {std::numbers::pi, 1.0}; }
  void Validate() const;
};

struct PendulumState {
  double theta = 0.0;  // rad from upright, in (-pi, pi]
  double omega = 0.0;  // rad/s, |omega| <= omega_max
  int step_count = 0;
};

struct Observation {
  double cos_theta = 1.0;
  double sin_theta = 0.0;
  double omega = 0.0;

  std::array<double, kObservationDim> AsArray() const {
    return {cos_theta, sin_theta, omega};
  }
  friend bool operator==(const Observation&, const Observation&) = default;
};

struct StepResult {
  PendulumState state;
  Observation observation;
  double reward = 0.0;
  bool done = false;
};

// Maps an angle onto (-pi, pi].
double WrapAngle(double theta);

Observation Observe(const PendulumState& state);

// Torque for a discrete action in {0, 1, 2}: (a - 1) * tau_max.
double ActionToTorque(int action, const PhysicsParams& params);

PendulumState Reset(Rng& rng, const ResetDistribution& dist = {});

// Semi-implicit Euler: velocity is updated and clipped first, then the angle
// advances with the new velocity. The reward uses the pre-step angle.
StepResult Step(const PendulumState& state, int action,
                const PhysicsParams& params);

// Conserved quantity of the torque-free dynamics above:
// 0.5 m l^2 omega^2 + m g l cos(theta). With theta measured from upright,
// gravity accelerates away from theta = 0, so potential is maximal there.
double Energy(const PendulumState& state, const PhysicsParams& params);

// Thin stateful wrapper used by the training loop.
class PendulumEnv {
 public:
  PendulumEnv(PhysicsParams params, ResetDistribution reset_dist, Rng rng);

  Observation Reset();
  StepResult Step(int action);

  const PendulumState& state() const { return state_; }
  const PhysicsParams& params() const { return params_; }

 private:
  PhysicsParams params_;
  ResetDistribution reset_dist_;
  Rng rng_;
  PendulumState state_;
};

}  // namespace nasdqn

#endif  // NASDQN_PENDULUM_H_
