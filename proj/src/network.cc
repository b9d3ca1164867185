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

#include "nasdqn/network.h"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

namespace nasdqn {
namespace {

void RequireValidShape(const ArchitectureConfig& c) {
  if (c.layers < 1 || c.units < 1) {
    throw std::invalid_argument("ArchitectureConfig needs layers >= 1 and units >= 1, got " +
                                c.ToString());
  }
}

std::vector<int> LayerWidths(const ArchitectureConfig& c) {
  std::vector<int> widths;
  widths.push_back(kObservationDim);
  for (int i = 0; i < c.layers; ++i) widths.push_back(c.units);
  widths.push_back(kNumActions);
  return widths;
}

double InitStddev(Activation a, int fan_in, int fan_out) {
  if (a == Activation::kTanh) return std::sqrt(2.0 / (fan_in + fan_out));
  return std::sqrt(2.0 / fan_in);
}

template <typename Derived>
void RequireFinite(const Eigen::MatrixBase<Derived>& m, const char* where) {
  if (!m.allFinite()) throw NonFiniteError(std::string("non-finite value in ") + where);
}

Eigen::MatrixXd Activated(Activation a, const Eigen::MatrixXd& z) {
  return z.unaryExpr([a](double v) { return Activate(a, v); });
}

Eigen::MatrixXd Derivative(Activation a, const Eigen::MatrixXd& z) {
  return z.unaryExpr([a](double v) { return ActivateDerivative(a, v); });
}

}  // namespace

std::string_view ActivationName(Activation a) {
  switch (a) {
    case Activation::kReLU:
      return "relu";
    case Activation::kTanh:
      return "tanh";
    case Activation::kLeakyReLU:
      return "leaky_relu";
  }
  return "unknown";
}

Activation ParseActivation(std::string_view name) {
  if (name == "relu") return Activation::kReLU;
  if (name == "tanh") return Activation::kTanh;
  if (name == "leaky_relu") return Activation::kLeakyReLU;
  throw std::invalid_argument("unknown activation '" + std::string(name) + "'");
}

double Activate(Activation a, double z) {
  switch (a) {
    case Activation::kReLU:
      return z > 0.0 ? z : 0.0;
    case Activation::kTanh:
      return std::tanh(z);
    case Activation::kLeakyReLU:
      return z > 0.0 ? z : kLeakySlope * z;
  }
  return z;
}

double ActivateDerivative(Activation a, double z) {
  switch (a) {
    case Activation::kReLU:
      return z > 0.0 ? 1.0 : 0.0;
    case Activation::kTanh: {
      const double t = std::tanh(z);
      return 1.0 - t * t;
    }
    case Activation::kLeakyReLU:
      return z > 0.0 ? 1.0 : kLeakySlope;
  }
  return 1.0;
}

bool ArchitectureConfig::InSearchSpace() const {
  return std::ranges::find(kSearchLayers, layers) != kSearchLayers.end() &&
         std::ranges::find(kSearchUnits, units) != kSearchUnits.end() &&
         std::ranges::find(kSearchActivations, activation) !=
             kSearchActivations.end();
}

std::string ArchitectureConfig::ToString() const {
  return std::to_string(layers) + "x" + std::to_string(units) + "-" +
         std::string(ActivationName(activation));
}

const std::vector<ArchitectureConfig>& SearchSpace() {
  static const std::vector<ArchitectureConfig> space = [] {
    std::vector<ArchitectureConfig> out;
    for (int l : kSearchLayers)
      for (int u : kSearchUnits)
        for (Activation a : kSearchActivations) out.push_back({l, u, a});
    return out;
  }();
  return space;
}

bool NetworkParams::AllFinite() const {
  return std::ranges::all_of(layers, [](const DenseLayer& l) {
    return l.weights.allFinite() && l.bias.allFinite();
  });
}

std::size_t NetworkParams::NumParameters() const {
  std::size_t n = 0;
  for (const auto& l : layers) n += l.weights.size() + l.bias.size();
  return n;
}

NetworkParams ZeroNetwork(const ArchitectureConfig& config) {
  RequireValidShape(config);
  const auto widths = LayerWidths(config);
  NetworkParams net;
  net.config = config;
  for (std::size_t l = 1; l < widths.size(); ++l) {
    net.layers.push_back({Eigen::MatrixXd::Zero(widths[l - 1], widths[l]),
                          Eigen::VectorXd::Zero(widths[l])});
  }
  return net;
}

NetworkParams InitNetwork(const ArchitectureConfig& config, Rng& rng) {
  NetworkParams net = ZeroNetwork(config);
  for (auto& layer : net.layers) {
    const auto rows = layer.weights.rows();
    const auto cols = layer.weights.cols();
    const double sd = InitStddev(config.activation, static_cast<int>(rows),
                                 static_cast<int>(cols));
    for (Eigen::Index i = 0; i < rows; ++i)
      for (Eigen::Index j = 0; j < cols; ++j) layer.weights(i, j) = rng.Normal(0.0, sd);
  }
  return net;
}

QValues Forward(const NetworkParams& net, const Observation& s,
                ForwardCache* cache) {
  const auto obs = s.AsArray();
  Eigen::VectorXd h = Eigen::Map<const Eigen::Vector3d>(obs.data());
  RequireFinite(h, "network input");
  if (cache) {
    cache->pre_activations.clear();
    cache->activations.assign(1, h);
  }
  const std::size_t hidden = net.layers.size() - 1;
  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    const auto& layer = net.layers[l];
    Eigen::VectorXd z = layer.weights.transpose() * h + layer.bias;
    RequireFinite(z, "forward pass");
    if (cache) cache->pre_activations.push_back(z);
    if (l == hidden) return z;
    h = Activated(net.config.activation, z);
    if (cache) cache->activations.push_back(h);
  }
  throw std::logic_error("network has no layers");
}

Eigen::MatrixXd ForwardBatch(const NetworkParams& net,
                             const Eigen::MatrixXd& inputs,
                             BatchCache* cache) {
  if (inputs.cols() != kObservationDim) {
    throw std::invalid_argument("ForwardBatch expects batch x 3 inputs");
  }
  RequireFinite(inputs, "network input");
  Eigen::MatrixXd h = inputs;
  if (cache) {
    cache->pre_activations.clear();
    cache->activations.assign(1, h);
  }
  const std::size_t hidden = net.layers.size() - 1;
  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    const auto& layer = net.layers[l];
    Eigen::MatrixXd z = h * layer.weights;
    z.rowwise() += layer.bias.transpose();
    RequireFinite(z, "forward pass");
    if (l == hidden) {
      if (cache) cache->pre_activations.push_back(z);
      return z;
    }
    h = Activated(net.config.activation, z);
    if (cache) {
      cache->pre_activations.push_back(std::move(z));
      cache->activations.push_back(h);
    }
  }
  throw std::logic_error("network has no layers");
}

double HuberLoss(double residual, double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("HuberLoss requires delta > 0");
  const double a = std::abs(residual);
  if (a <= delta) return 0.5 * residual * residual;
  return delta * (a - 0.5 * delta);
}

Gradients Backward(const NetworkParams& net, const ForwardCache& cache,
                   int action, double td_error) {
  const std::size_t n = net.layers.size();
  if (cache.pre_activations.size() != n || cache.activations.size() != n) {
    throw std::invalid_argument("Backward: cache does not match network depth");
  }
  if (action < 0 || action >= kNumActions) {
    throw std::out_of_range("Backward: action out of range");
  }
  Gradients grads;
  grads.layers.resize(n);
  Eigen::VectorXd err = Eigen::VectorXd::Zero(kNumActions);
  err[action] = -std::clamp(td_error, -1.0, 1.0);
  for (std::size_t l = n; l-- > 0;) {
    const auto& h_prev = cache.activations[l];
    if (h_prev.size() != net.layers[l].weights.rows()) {
      throw std::invalid_argument("Backward: cache shape mismatch");
    }
    grads.layers[l].weights = h_prev * err.transpose();
    grads.layers[l].bias = err;
    if (l == 0) break;
    err = (net.layers[l].weights * err).cwiseProduct(
        Derivative(net.config.activation, cache.pre_activations[l - 1]));
  }
  return grads;
}

Gradients BackwardBatch(const NetworkParams& net, const BatchCache& cache,
                        std::span<const int> actions,
                        std::span<const double> td_errors) {
  const std::size_t n = net.layers.size();
  const std::size_t batch = actions.size();
  if (cache.pre_activations.size() != n || cache.activations.size() != n ||
      td_errors.size() != batch || batch == 0 ||
      static_cast<std::size_t>(cache.activations[0].rows()) != batch) {
    throw std::invalid_argument("BackwardBatch: cache/batch shape mismatch");
  }
  Eigen::MatrixXd err = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(batch), kNumActions);
  const double inv_n = 1.0 / static_cast<double>(batch);
  for (std::size_t i = 0; i < batch; ++i) {
    if (actions[i] < 0 || actions[i] >= kNumActions) {
      throw std::out_of_range("BackwardBatch: action out of range");
    }
    err(static_cast<Eigen::Index>(i), actions[i]) =
        -std::clamp(td_errors[i], -1.0, 1.0) * inv_n;
  }
  Gradients grads;
  grads.layers.resize(n);
  for (std::size_t l = n; l-- > 0;) {
    grads.layers[l].weights = cache.activations[l].transpose() * err;
    grads.layers[l].bias = err.colwise().sum().transpose();
    if (l == 0) break;
    err = (err * net.layers[l].weights.transpose())
              .cwiseProduct(Derivative(net.config.activation, cache.pre_activations[l - 1]));
  }
  return grads;
}

void ApplyUpdate(NetworkParams& net, const Gradients& grads,
                 double learning_rate, double clip) {
  if (grads.layers.size() != net.layers.size()) {
    throw std::invalid_argument("ApplyUpdate: gradient depth mismatch");
  }
  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    auto& p = net.layers[l];
    const auto& g = grads.layers[l];
    if (g.weights.rows() != p.weights.rows() || g.weights.cols() != p.weights.cols() ||
        g.bias.size() != p.bias.size()) {
      throw std::invalid_argument("ApplyUpdate: gradient shape mismatch");
    }
    p.weights -= learning_rate * g.weights.cwiseMax(-clip).cwiseMin(clip);
    p.bias -= learning_rate * g.bias.cwiseMax(-clip).cwiseMin(clip);
  }
}

NetworkParams TransferWeights(const NetworkParams& old,
                              const ArchitectureConfig& new_config, Rng& rng) {
  NetworkParams fresh = InitNetwork(new_config, rng);
  auto copy_block = [](const DenseLayer& from, DenseLayer& to) {
    const auto rows = std::min(from.weights.rows(), to.weights.rows());
    const auto cols = std::min(from.weights.cols(), to.weights.cols());
    to.weights.topLeftCorner(rows, cols) = from.weights.topLeftCorner(rows, cols);
    const auto len = std::min(from.bias.size(), to.bias.size());
    to.bias.head(len) = from.bias.head(len);
  };
  const std::size_t shared_hidden =
      static_cast<std::size_t>(std::min(old.config.layers, new_config.layers));
  for (std::size_t l = 0; l < shared_hidden; ++l) copy_block(old.layers[l], fresh.layers[l]);
  copy_block(old.layers.back(), fresh.layers.back());
  return fresh;
}

void SaveNetwork(const NetworkParams& net, std::ostream& out) {
  const auto old_precision = out.precision(17);
  out << "nasdqn-network v1\n";
  out << "config " << net.config.layers << ' ' << net.config.units << ' '
      << ActivationName(net.config.activation) << '\n';
  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    const auto& w = net.layers[l].weights;
    out << "layer " << l << ' ' << w.rows() << ' ' << w.cols() << '\n';
    for (Eigen::Index i = 0; i < w.rows(); ++i) {
      for (Eigen::Index j = 0; j < w.cols(); ++j) out << (j ? " " : "") << w(i, j);
      out << '\n';
    }
    const auto& b = net.layers[l].bias;
    for (Eigen::Index j = 0; j < b.size(); ++j) out << (j ? " " : "") << b[j];
    out << '\n';
  }
  out.precision(old_precision);
}

NetworkParams LoadNetwork(std::istream& in) {
  auto fail = [](const std::string& why) -> NetworkParams {
    throw std::runtime_error("LoadNetwork: " + why);
  };
  std::string magic, version;
  if (!(in >> magic >> version) || magic != "nasdqn-network") return fail("bad header");
  if (version != "v1") return fail("unsupported version " + version);
  std::string tag, act;
  ArchitectureConfig config;
  if (!(in >> tag >> config.layers >> config.units >> act) || tag != "config") {
    return fail("bad config line");
  }
  config.activation = ParseActivation(act);
  NetworkParams net = ZeroNetwork(config);
  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    std::size_t index;
    Eigen::Index rows, cols;
    if (!(in >> tag >> index >> rows >> cols) || tag != "layer" || index != l) {
      return fail("bad layer header " + std::to_string(l));
    }
    auto& layer = net.layers[l];
    if (rows != layer.weights.rows() || cols != layer.weights.cols()) {
      return fail("layer " + std::to_string(l) + " shape does not match config");
    }
    for (Eigen::Index i = 0; i < rows; ++i)
      for (Eigen::Index j = 0; j < cols; ++j)
        if (!(in >> layer.weights(i, j))) return fail("truncated weights");
    for (Eigen::Index j = 0; j < cols; ++j)
      if (!(in >> layer.bias[j])) return fail("truncated biases");
  }
  return net;
}

}  // namespace nasdqn
