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

#include "nasdqn/pendulum.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace nasdqn {

void PhysicsParams::Validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(std::string("PhysicsParams: ") + what);
  };
  require(mass > 0, "mass must be > 0");
  require(length > 0, "length must be > 0");
  require(gravity > 0, "gravity must be > 0");
  require(dt > 0, "dt must be > 0");
  require(omega_max > 0, "omega_max must be > 0");
  require(tau_max > 0, "tau_max must be > 0");
  require(control_penalty >= 0, "control_penalty must be >= 0");
  require(horizon >= 1, "horizon must be >= 1");
}

void ResetDistribution::Validate() const {
  if (!(theta_range > 0 && theta_range <= std::numbers::pi)) {
    throw std::invalid_argument("ResetDistribution: theta_range must be in (0, pi]");
  }
  if (!(omega_range > 0)) {
    throw std::invalid_argument("ResetDistribution: omega_range must be > 0");
  }
}

double WrapAngle(double theta) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  return theta - kTwoPi * std::ceil((theta - std::numbers::pi) / kTwoPi);
}

Observation Observe(const PendulumState& state) {
  return {std::cos(state.theta), std::sin(state.theta), state.omega};
}

double ActionToTorque(int action, const PhysicsParams& params) {
  if (action < 0 || action >= kNumActions) {
    throw std::out_of_range("action must be in {0, 1, 2}, got " +
                            std::to_string(action));
  }
  return static_cast<double>(action - 1) * params.tau_max;
}

PendulumState Reset(Rng& rng, const ResetDistribution& dist) {
  PendulumState s;
  // hi - U[0, 2r) lies in (-r, r].
  s.theta = dist.theta_range - rng.Uniform(0.0, 2.0 * dist.theta_range);
  s.omega = rng.Uniform(-dist.omega_range, dist.omega_range);
  s.step_count = 0;
  return s;
}

StepResult Step(const PendulumState& state, int action,
                const PhysicsParams& params) {
  if (state.step_count >= params.horizon) {
    throw std::logic_error("Step called on a finished episode");
  }
  const double tau = ActionToTorque(action, params);
  const double accel = params.gravity / params.length * std::sin(state.theta) +
                       tau / (params.mass * params.length * params.length);

  StepResult out;
  out.state.omega = std::clamp(state.omega + accel * params.dt,
                               -params.omega_max, params.omega_max);
  out.state.theta = WrapAngle(state.theta + out.state.omega * params.dt);
  out.state.step_count = state.step_count + 1;
  out.observation = Observe(out.state);
  out.reward = std::cos(state.theta) - params.control_penalty * tau * tau;
  out.done = out.state.step_count >= params.horizon;
  return out;
}

double Energy(const PendulumState& state, const PhysicsParams& params) {
  const double ml2 = params.mass * params.length * params.length;
  return 0.5 * ml2 * state.omega * state.omega +
         params.mass * params.gravity * params.length * std::cos(state.theta);
}

PendulumEnv::PendulumEnv(PhysicsParams params, ResetDistribution reset_dist,
                         Rng rng)
    : params_(params), reset_dist_(reset_dist), rng_(std::move(rng)) {
  params_.Validate();
  reset_dist_.Validate();
}

Observation PendulumEnv::Reset() {
  state_ = nasdqn::Reset(rng_, reset_dist_);
  return Observe(state_);
}

StepResult PendulumEnv::Step(int action) {
  StepResult r = nasdqn::Step(state_, action, params_);
  state_ = r.state;
  return r;
}

}  // namespace nasdqn
