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

// Test-only reference computations. None of these call into the network
// module's Forward/Backward, so they can be used to check them.

#ifndef NASDQN_TESTS_ORACLES_H_
#define NASDQN_TESTS_ORACLES_H_

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "nasdqn/network.h"

namespace nasdqn::testing {

inline double RefActivate(Activation a, double z) {
  switch (a) {
    case Activation::kReLU:
      return z > 0 ? z : 0;
    case Activation::kTanh:
      return std::tanh(z);
    case Activation::kLeakyReLU:
      return z > 0 ? z : 0.01 * z;
  }
  return z;
}

// Plain triple-loop forward pass. Optionally records every hidden
// pre-activation.
inline std::array<double, 3> RefForward(const NetworkParams& net, std::array<double, 3> s,
                                        std::vector<double>* pre = nullptr) {
  std::vector<double> h(s.begin(), s.end());
  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    const auto& w = net.layers[l].weights;
    const auto& b = net.layers[l].bias;
    std::vector<double> z(static_cast<std::size_t>(w.cols()));
    for (Eigen::Index j = 0; j < w.cols(); ++j) {
      double acc = b[j];
      for (Eigen::Index i = 0; i < w.rows(); ++i) acc += w(i, j) * h[static_cast<std::size_t>(i)];
      z[static_cast<std::size_t>(j)] = acc;
    }
    if (l + 1 == net.layers.size()) return {z[0], z[1], z[2]};
    if (pre) pre->insert(pre->end(), z.begin(), z.end());
    for (double& v : z) v = RefActivate(net.config.activation, v);
    h = std::move(z);
  }
  return {0, 0, 0};
}

inline double RefHuber(double r) {
  return std::abs(r) <= 1.0 ? 0.5 * r * r : std::abs(r) - 0.5;
}

// Loss of one sample with a fixed target.
inline double RefLoss(const NetworkParams& net, std::array<double, 3> s, int action,
                      double target) {
  return RefHuber(target - RefForward(net, s)[static_cast<std::size_t>(action)]);
}

// Central difference of RefLoss with respect to one parameter.
inline double FiniteDifference(NetworkParams net, std::array<double, 3> s, int action,
                               double target, std::size_t layer, bool bias, Eigen::Index i,
                               Eigen::Index j, double step = 1e-6) {
  double& p = bias ? net.layers[layer].bias[i] : net.layers[layer].weights(i, j);
  const double orig = p;
  p = orig + step;
  const double up = RefLoss(net, s, action, target);
  p = orig - step;
  const double down = RefLoss(net, s, action, target);
  p = orig;
  return (up - down) / (2 * step);
}

// Relative error with an absolute floor for entries that are ~0 in both.
inline double RelativeError(double a, double b, double floor = 1e-4) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

inline double RefActivateDerivative(Activation a, double z) {
  switch (a) {
    case Activation::kReLU:
      return z > 0 ? 1.0 : 0.0;
    case Activation::kTanh:
      return 1.0 - std::tanh(z) * std::tanh(z);
    case Activation::kLeakyReLU:
      return z > 0 ? 1.0 : 0.01;
  }
  return 1.0;
}

// One Double DQN SGD step on a single transition, written out with loops:
// target from online-argmax / target-evaluate, Huber gradient at the taken
// action, backprop, element-wise clipped descent. Returns the updated
// online network.
inline NetworkParams RefSingleTransitionUpdate(const NetworkParams& online,
                                               const NetworkParams& target,
                                               std::array<double, 3> s, int action,
                                               double reward, std::array<double, 3> s_next,
                                               bool done, double gamma, double lr,
                                               double clip) {
  double y = reward;
  if (!done) {
    const auto qn = RefForward(online, s_next);
    int best = 0;
    for (int a = 1; a < 3; ++a)
      if (qn[a] > qn[best]) best = a;
    y += gamma * RefForward(target, s_next)[best];
  }

  // Forward with every layer's input and pre-activation kept.
  const std::size_t n = online.layers.size();
  std::vector<std::vector<double>> inputs(n), pre(n);
  std::vector<double> h(s.begin(), s.end());
  for (std::size_t l = 0; l < n; ++l) {
    inputs[l] = h;
    const auto& w = online.layers[l].weights;
    std::vector<double> z(static_cast<std::size_t>(w.cols()));
    for (Eigen::Index j = 0; j < w.cols(); ++j) {
      double acc = online.layers[l].bias[j];
      for (Eigen::Index i = 0; i < w.rows(); ++i) acc += w(i, j) * h[i];
      z[j] = acc;
    }
    pre[l] = z;
    if (l + 1 < n)
      for (double& v : z) v = RefActivate(online.config.activation, v);
    h = z;
  }
  const double td = y - pre[n - 1][action];

  NetworkParams out = online;
  std::vector<double> delta(3, 0.0);
  delta[action] = -std::max(-1.0, std::min(1.0, td));
  for (std::size_t l = n; l-- > 0;) {
    const auto& w = online.layers[l].weights;
    std::vector<double> prev(static_cast<std::size_t>(w.rows()), 0.0);
    for (Eigen::Index i = 0; i < w.rows(); ++i)
      for (Eigen::Index j = 0; j < w.cols(); ++j) prev[i] += w(i, j) * delta[j];
    for (Eigen::Index i = 0; i < w.rows(); ++i) {
      for (Eigen::Index j = 0; j < w.cols(); ++j) {
        const double g = inputs[l][i] * delta[j];
        out.layers[l].weights(i, j) -= lr * std::max(-clip, std::min(clip, g));
      }
    }
    for (Eigen::Index j = 0; j < w.cols(); ++j)
      out.layers[l].bias[j] -= lr * std::max(-clip, std::min(clip, delta[j]));
    if (l == 0) break;
    for (std::size_t i = 0; i < prev.size(); ++i)
      prev[i] *= RefActivateDerivative(online.config.activation, pre[l - 1][i]);
    delta = prev;
  }
  return out;
}

}  // namespace nasdqn::testing

#endif  // NASDQN_TESTS_ORACLES_H_
