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

#ifndef NASDQN_NETWORK_H_
#define NASDQN_NETWORK_H_

#include <array>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "nasdqn/pendulum.h"
#include "nasdqn/rng.h"

namespace nasdqn {

enum class Activation { kReLU, kTanh, kLeakyReLU };

inline constexpr double kLeakySlope = 0.01;

std::string_view ActivationName(Activation a);
Activation ParseActivation(std::string_view name);

double Activate(Activation a, double z);
// Subgradient choice at the kink: ReLU'(0) = 0, LeakyReLU'(0) = kLeakySlope.
double ActivateDerivative(Activation a, double z);

// (hidden layers, units per hidden layer, activation). The network code
// accepts any positive depth and width; the architecture search only ever
// proposes members of SearchSpace().
struct ArchitectureConfig {
  int layers = 2;
  int units = 32;
  Activation activation = Activation::kReLU;

  bool InSearchSpace() const;
  std::string ToString() const;  // e.g. "3x64-relu"

  friend bool operator==(const ArchitectureConfig&,
                         const ArchitectureConfig&) = default;
};

inline constexpr std::array<int, 3> kSearchLayers = {2, 3, 4};
inline constexpr std::array<int, 3> kSearchUnits = {32, 64, 128};
inline constexpr std::array<Activation, 3> kSearchActivations = {
    Activation::kReLU, Activation::kTanh, Activation::kLeakyReLU};

// All 27 configurations, layers-major then units then activation.
const std::vector<ArchitectureConfig>& SearchSpace();

// Raised when a forward pass or loss produces NaN/inf.
class NonFiniteError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Weights are stored fan_in x fan_out so that z = W^T h + b.
struct DenseLayer {
  Eigen::MatrixXd weights;
  Eigen::VectorXd bias;
};

struct NetworkParams {
  ArchitectureConfig config;
  // layers.size() == config.layers + 1; the last one is the linear head.
  std::vector<DenseLayer> layers;

  bool AllFinite() const;
  std::size_t NumParameters() const;
};

// Same shapes as the NetworkParams they were computed for.
struct Gradients {
  std::vector<DenseLayer> layers;
};

using QValues = Eigen::Vector3d;

struct ForwardCache {
  std::vector<Eigen::VectorXd> pre_activations;  // z(1..L+1)
  std::vector<Eigen::VectorXd> activations;      // h(0..L)
};

// Row-per-sample variant used for minibatch training.
struct BatchCache {
  std::vector<Eigen::MatrixXd> pre_activations;
  std::vector<Eigen::MatrixXd> activations;
};

// Zero biases; weights ~ N(0, 2/fan_in) for ReLU and LeakyReLU (He) and
// N(0, 2/(fan_in+fan_out)) for tanh (Glorot). Entries are drawn layer by
// layer in row-major order.
NetworkParams InitNetwork(const ArchitectureConfig& config, Rng& rng);

// Zero-initialized network of the given shape.
NetworkParams ZeroNetwork(const ArchitectureConfig& config);

QValues Forward(const NetworkParams& net, const Observation& s,
                ForwardCache* cache = nullptr);

// inputs: batch x 3. Returns batch x 3 Q-values.
Eigen::MatrixXd ForwardBatch(const NetworkParams& net,
                             const Eigen::MatrixXd& inputs,
                             BatchCache* cache = nullptr);

double HuberLoss(double residual, double delta = 1.0);

// Gradient of 0.5-Huber(y - Q(s, a)) for one sample. td_error = y - Q(s, a).
Gradients Backward(const NetworkParams& net, const ForwardCache& cache,
                   int action, double td_error);

// Mean gradient of the minibatch Huber loss.
Gradients BackwardBatch(const NetworkParams& net, const BatchCache& cache,
                        std::span<const int> actions,
                        std::span<const double> td_errors);

// p <- p - lr * clip(g, -clip, clip), element-wise.
void ApplyUpdate(NetworkParams& net, const Gradients& grads,
                 double learning_rate, double clip = 1.0);

// Fresh InitNetwork(new_config) with the overlapping blocks of every shared
// hidden layer copied from `old`. The output heads are always matched to
// each other, whatever the depth difference.
NetworkParams TransferWeights(const NetworkParams& old,
                              const ArchitectureConfig& new_config, Rng& rng);

// Versioned structured-text checkpoint:
//   nasdqn-network v1
//   config <layers> <units> <activation>
//   layer <index> <rows> <cols>
//   <rows lines of cols weights>
//   <1 line of cols biases>
// Values are written with 17 significant digits so a round trip is exact.
void SaveNetwork(const NetworkParams& net, std::ostream& out);
NetworkParams LoadNetwork(std::istream& in);

}  // namespace nasdqn

#endif  // NASDQN_NETWORK_H_
