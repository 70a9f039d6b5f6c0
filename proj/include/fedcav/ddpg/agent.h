// Copyright 2026 The FedCAV Authors. All rights reserved.
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

#ifndef FEDCAV_DDPG_AGENT_H_
#define FEDCAV_DDPG_AGENT_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "fedcav/ddpg/ou_noise.h"
#include "fedcav/ddpg/replay_buffer.h"
#include "fedcav/eval/metrics.h"
#include "fedcav/nn/adam.h"
#include "fedcav/nn/checkpoint.h"
#include "fedcav/nn/mlp.h"
#include "fedcav/sim/world.h"

namespace fedcav::ddpg {

struct DdpgConfig {
  std::vector<std::size_t> hidden_sizes{400, 300};
  double gamma = 0.99;
  double tau = 0.005;
  double actor_lr = 5e-4;
  double critic_lr = 5e-4;
  std::size_t batch_size = 64;
  std::size_t buffer_capacity = 50000;
  double action_min = -4.5;
  double action_max = 2.6;
  // OU output is in units of half the action range.
  OuParams ou;
  // Observations are divided component-wise by these before entering a net.
  std::array<double, kStateSize> obs_scale{100.0, 100.0, 20.0, std::numbers::pi, 5.0,
                                           100.0};
  nn::AdamConfig adam;

  double action_mid() const { return 0.5 * (action_min + action_max); }
  double action_half() const { return 0.5 * (action_max - action_min); }

  // Throws ConfigError on out-of-range values.
  void Validate() const;

  std::map<std::string, std::string> ToMeta() const;
  // Reads the keys written by ToMeta; missing keys keep their defaults.
  static DdpgConfig FromMeta(const std::map<std::string, std::string>& meta);

  bool operator==(const DdpgConfig&) const = default;
};

// Actor: state -> hidden (relu) -> 1 (tanh). Critic: state + action -> hidden
// (relu) -> 1 (identity).
nn::MlpParams MakeActor(const DdpgConfig& config, std::uint64_t seed);
nn::MlpParams MakeCritic(const DdpgConfig& config, std::uint64_t seed);

// Noise-free action of `actor` for `obs`, in m/s^2. Throws NumericError on a
// non-finite network output.
double DeterministicAction(const nn::MlpParams& actor, const DdpgConfig& config,
                           const sim::EgoObservation& obs);

// target <- tau * source + (1 - tau) * target. Throws ShapeError on an
// architecture mismatch and InvalidArgumentError for tau outside [0, 1].
void SoftUpdate(nn::MlpParams& target, const nn::MlpParams& source, double tau);

// Q(state, action) with dQ/daction written to *dq_daction. `state` is the raw
// observation, `action` is in m/s^2.
using CriticGradientFn =
    std::function<double(std::span<const double> state, double action, double* dq_daction)>;

class DdpgAgent {
 public:
  DdpgAgent(DdpgConfig config, std::uint64_t seed);

  double SelectAction(const sim::EgoObservation& obs, bool explore, std::mt19937_64& rng);
  double SelectAction(const sim::EgoObservation& obs, bool explore) {
    return SelectAction(obs, explore, rng_);
  }

  // One Adam step on the critic towards r + gamma (1 - done) Q'(s', mu'(s')).
  // Returns the mean squared error before the step.
  double CriticUpdate(const std::vector<Transition>& batch);
  std::vector<double> CriticTargets(const std::vector<Transition>& batch) const;

  // One Adam ascent step of the actor along the deterministic policy
  // gradient. Returns the batch mean of Q before the step.
  double ActorUpdate(const std::vector<Transition>& batch);
  // Same, with an external critic in place of the agent's critic network.
  double ActorUpdate(const std::vector<Transition>& batch, const CriticGradientFn& critic);
  // Gradient of the batch mean of Q(s, mu(s)) w.r.t. the actor parameters.
  std::vector<double> PolicyGradient(const std::vector<Transition>& batch,
                                     double* mean_q = nullptr) const;
  double MeanQ(const std::vector<Transition>& batch) const;

  void SoftUpdateTargets();

  // Runs one exploring episode with per-step updates once the buffer holds a
  // batch. Increments episodes().
  eval::EpisodeMetrics TrainEpisode(sim::World& env, std::uint64_t episode_seed);

  // Overwrites the online networks, re-syncs both targets to them and
  // optionally zeroes the optimizer state. The replay buffer is kept.
  void LoadWeights(std::span<const double> actor, std::span<const double> critic,
                   bool reset_optimizers);

  nn::Checkpoint ToCheckpoint() const;
  // Restores networks, optimizer state and counters. The replay buffer is not
  // part of a checkpoint and starts empty.
  static DdpgAgent FromCheckpoint(const nn::Checkpoint& checkpoint, std::uint64_t seed);

  nn::Matrix NormalizeStates(const std::vector<Transition>& batch, bool next) const;

  const DdpgConfig& config() const { return config_; }
  const nn::MlpParams& actor() const { return actor_; }
  const nn::MlpParams& critic() const { return critic_; }
  const nn::MlpParams& target_actor() const { return target_actor_; }
  const nn::MlpParams& target_critic() const { return target_critic_; }
  nn::MlpParams& mutable_actor() { return actor_; }
  nn::MlpParams& mutable_critic() { return critic_; }
  nn::MlpParams& mutable_target_actor() { return target_actor_; }
  nn::MlpParams& mutable_target_critic() { return target_critic_; }
  const nn::AdamState& actor_adam() const { return actor_adam_; }
  const nn::AdamState& critic_adam() const { return critic_adam_; }
  const ReplayBuffer& buffer() const { return buffer_; }
  ReplayBuffer& mutable_buffer() { return buffer_; }
  OuNoise& noise() { return noise_; }
  std::mt19937_64& rng() { return rng_; }
  std::uint64_t episodes() const { return episodes_; }
  std::uint64_t updates() const { return updates_; }

 private:
  // Fills d(-mean Q)/d(actor params); returns mean Q.
  double ActorLossGradient(const std::vector<Transition>& batch,
                           const CriticGradientFn* critic, std::vector<double>* grad) const;

  DdpgConfig config_;
  nn::MlpParams actor_;
  nn::MlpParams critic_;
  nn::MlpParams target_actor_;
  nn::MlpParams target_critic_;
  nn::AdamState actor_adam_;
  nn::AdamState critic_adam_;
  ReplayBuffer buffer_;
  OuNoise noise_;
  std::mt19937_64 rng_;
  std::uint64_t episodes_ = 0;
  std::uint64_t updates_ = 0;
};

}  // namespace fedcav::ddpg

#endif  // FEDCAV_DDPG_AGENT_H_
