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

#include "nasdqn/dqn_agent.h"

#include <cmath>
#include <stdexcept>
#include <string>

namespace nasdqn {
namespace {

Eigen::MatrixXd StackObservations(std::span<const Transition> batch, bool next) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(batch.size()), kObservationDim);
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const auto o = (next ? batch[i].s_next : batch[i].s).AsArray();
    for (int j = 0; j < kObservationDim; ++j) m(static_cast<Eigen::Index>(i), j) = o[j];
  }
  return m;
}

}  // namespace

void AgentHyperparams::Validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(std::string("AgentHyperparams: ") + what);
  };
  require(gamma > 0.0 && gamma <= 1.0, "gamma must be in (0, 1]");
  require(learning_rate > 0.0, "learning_rate must be > 0");
  require(batch_size >= 1, "batch_size must be >= 1");
  require(target_sync_interval >= 1, "target_sync_interval must be >= 1");
  require(epsilon_min >= 0.0 && epsilon_min <= epsilon_start && epsilon_start <= 1.0,
          "need 0 <= epsilon_min <= epsilon_start <= 1");
  require(epsilon_decay > 0.0 && epsilon_decay <= 1.0, "epsilon_decay must be in (0, 1]");
  require(grad_clip > 0.0, "grad_clip must be > 0");
  require(prune_keep >= 0.0 && prune_keep <= 1.0, "prune_keep must be in [0, 1]");
}

int Argmax(const QValues& q) {
  int best = 0;
  for (int a = 1; a < kNumActions; ++a)
    if (q[a] > q[best]) best = a;
  return best;
}

DqnAgent::DqnAgent(const ArchitectureConfig& config, const AgentHyperparams& hp,
                   Rng& init_rng)
    : hp_(hp), online_(InitNetwork(config, init_rng)), target_(online_),
      epsilon_(hp.epsilon_start) {
  hp_.Validate();
}

int DqnAgent::SelectAction(const Observation& s, Rng& rng) const {
  // The exploration coin is always drawn so the policy stream advances by a
  // fixed pattern regardless of epsilon.
  const double coin = rng.Uniform(0.0, 1.0);
  if (coin < epsilon_) return static_cast<int>(rng.UniformIndex(kNumActions));
  return Argmax(Forward(online_, s));
}

std::vector<double> DqnAgent::ComputeTargets(std::span<const Transition> batch) const {
  if (batch.empty()) return {};
  const Eigen::MatrixXd next = StackObservations(batch, true);
  const Eigen::MatrixXd q_online = ForwardBatch(online_, next);
  const Eigen::MatrixXd q_target = ForwardBatch(target_, next);
  std::vector<double> y(batch.size());
  for (std::size_t i = 0; i < batch.size(); ++i) {
    if (batch[i].done) {
      y[i] = batch[i].reward;
      continue;
    }
    const auto row = static_cast<Eigen::Index>(i);
    const int a_star = Argmax(q_online.row(row).transpose());
    y[i] = batch[i].reward + hp_.gamma * q_target(row, a_star);
  }
  return y;
}

double DqnAgent::TrainOnBatch(std::span<const Transition> batch) {
  const std::vector<double> y = ComputeTargets(batch);
  BatchCache cache;
  const Eigen::MatrixXd q = ForwardBatch(online_, StackObservations(batch, false), &cache);
  std::vector<int> actions(batch.size());
  std::vector<double> td(batch.size());
  double loss = 0.0;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    actions[i] = batch[i].action;
    td[i] = y[i] - q(static_cast<Eigen::Index>(i), actions[i]);
    loss += HuberLoss(td[i]);
  }
  loss /= static_cast<double>(batch.size());
  if (!std::isfinite(loss)) throw NonFiniteError("non-finite training loss");
  ApplyUpdate(online_, BackwardBatch(online_, cache, actions, td), hp_.learning_rate,
              hp_.grad_clip);
  ++updates_;
  return loss;
}

std::optional<double> DqnAgent::TrainStep(const ReplayMemory& mem, Rng& rng) {
  if (mem.size() < hp_.warmup || mem.size() < hp_.batch_size) return std::nullopt;
  const std::vector<Transition> batch = mem.Sample(hp_.batch_size, rng);
  return TrainOnBatch(batch);
}

bool DqnAgent::OnEnvironmentStep() {
  ++env_steps_;
  if (env_steps_ % hp_.target_sync_interval != 0) return false;
  SyncTarget();
  return true;
}

void DqnAgent::OnEpisodeEnd() {
  epsilon_ = std::max(hp_.epsilon_min, epsilon_ * hp_.epsilon_decay);
}

void DqnAgent::SyncTarget() {
  if (!(target_.config == online_.config)) {
    throw std::logic_error("SyncTarget: online and target architectures differ");
  }
  target_ = online_;
  ++syncs_;
}

bool DqnAgent::RebuildWithArchitecture(const ArchitectureConfig& new_config,
                                       Rng& init_rng, ReplayMemory& mem) {
  if (!new_config.InSearchSpace()) {
    throw std::invalid_argument("RebuildWithArchitecture: " + new_config.ToString() +
                                " is outside the search space");
  }
  if (new_config == online_.config) return false;
  online_ = TransferWeights(online_, new_config, init_rng);
  target_ = online_;
  mem.PruneToFraction(hp_.prune_keep);
  return true;
}

}  // namespace nasdqn
