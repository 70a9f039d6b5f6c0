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

#include "fedcav/ddpg/agent.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "fedcav/base/error.h"
#include "fedcav/base/format.h"
#include "fedcav/base/hash.h"
#include "fedcav/base/kv_config.h"
#include "fedcav/simd/kernels.h"

namespace fedcav::ddpg {

namespace {

std::string JoinDoubles(std::span<const double> values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += FormatDouble(values[i]);
  }
  return out;
}

std::vector<std::size_t> Sizes(std::size_t in, const std::vector<std::size_t>& hidden) {
  std::vector<std::size_t> sizes{in};
  sizes.insert(sizes.end(), hidden.begin(), hidden.end());
  sizes.push_back(1);
  return sizes;
}

std::vector<nn::Activation> Acts(std::size_t hidden, nn::Activation head) {
  std::vector<nn::Activation> acts(hidden, nn::Activation::kRelu);
  acts.push_back(head);
  return acts;
}

}  // namespace

void DdpgConfig::Validate() const {
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw ConfigError("gamma must be in [0, 1]");
  if (!(tau >= 0.0 && tau <= 1.0)) throw ConfigError("tau must be in [0, 1]");
  if (!(actor_lr > 0.0) || !(critic_lr > 0.0)) {
    throw ConfigError("learning rates must be > 0");
  }
  if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
  if (buffer_capacity < batch_size) {
    throw ConfigError("buffer_capacity must be >= batch_size");
  }
  if (!(action_min < action_max)) throw ConfigError("action_min must be < action_max");
  for (std::size_t h : hidden_sizes) {
    if (h == 0) throw ConfigError("hidden layer widths must be >= 1");
  }
  for (double s : obs_scale) {
    if (!(s > 0.0) || !std::isfinite(s)) throw ConfigError("obs_scale entries must be > 0");
  }
  if (!(adam.beta1 >= 0.0 && adam.beta1 < 1.0 && adam.beta2 >= 0.0 && adam.beta2 < 1.0)) {
    throw ConfigError("Adam betas must be in [0, 1)");
  }
  if (!(adam.eps > 0.0)) throw ConfigError("Adam eps must be > 0");
  ou.Validate();
}

std::map<std::string, std::string> DdpgConfig::ToMeta() const {
  std::map<std::string, std::string> m;
  std::string hidden;
  for (std::size_t i = 0; i < hidden_sizes.size(); ++i) {
    if (i) hidden += ',';
    hidden += std::to_string(hidden_sizes[i]);
  }
  m["ddpg.hidden_sizes"] = hidden;
  m["ddpg.gamma"] = FormatDouble(gamma);
  m["ddpg.tau"] = FormatDouble(tau);
  m["ddpg.actor_lr"] = FormatDouble(actor_lr);
  m["ddpg.critic_lr"] = FormatDouble(critic_lr);
  m["ddpg.batch_size"] = std::to_string(batch_size);
  m["ddpg.buffer_capacity"] = std::to_string(buffer_capacity);
  m["ddpg.action_min"] = FormatDouble(action_min);
  m["ddpg.action_max"] = FormatDouble(action_max);
  m["ddpg.ou_mu"] = FormatDouble(ou.mu);
  m["ddpg.ou_theta"] = FormatDouble(ou.theta);
  m["ddpg.ou_sigma"] = FormatDouble(ou.sigma);
  m["ddpg.ou_dt"] = FormatDouble(ou.dt);
  m["ddpg.obs_scale"] = JoinDoubles(obs_scale);
  m["ddpg.adam_beta1"] = FormatDouble(adam.beta1);
  m["ddpg.adam_beta2"] = FormatDouble(adam.beta2);
  m["ddpg.adam_eps"] = FormatDouble(adam.eps);
  return m;
}

DdpgConfig DdpgConfig::FromMeta(const std::map<std::string, std::string>& meta) {
  DdpgConfig c;
  auto num = [&](const char* key, double& out) {
    if (auto it = meta.find(key); it != meta.end()) out = ParseDouble(it->second);
  };
  auto count = [&](const char* key, std::size_t& out) {
    if (auto it = meta.find(key); it != meta.end()) out = std::stoull(it->second);
  };
  if (auto it = meta.find("ddpg.hidden_sizes"); it != meta.end()) {
    c.hidden_sizes.clear();
    for (const auto& item : SplitList(it->second)) c.hidden_sizes.push_back(std::stoull(item));
  }
  num("ddpg.gamma", c.gamma);
  num("ddpg.tau", c.tau);
  num("ddpg.actor_lr", c.actor_lr);
  num("ddpg.critic_lr", c.critic_lr);
  count("ddpg.batch_size", c.batch_size);
  count("ddpg.buffer_capacity", c.buffer_capacity);
  num("ddpg.action_min", c.action_min);
  num("ddpg.action_max", c.action_max);
  num("ddpg.ou_mu", c.ou.mu);
  num("ddpg.ou_theta", c.ou.theta);
  num("ddpg.ou_sigma", c.ou.sigma);
  num("ddpg.ou_dt", c.ou.dt);
  if (auto it = meta.find("ddpg.obs_scale"); it != meta.end()) {
    const auto items = SplitList(it->second);
    if (items.size() != kStateSize) throw CheckpointError("obs_scale has wrong length");
    for (std::size_t i = 0; i < kStateSize; ++i) c.obs_scale[i] = ParseDouble(items[i]);
  }
  num("ddpg.adam_beta1", c.adam.beta1);
  num("ddpg.adam_beta2", c.adam.beta2);
  num("ddpg.adam_eps", c.adam.eps);
  return c;
}

nn::MlpParams MakeActor(const DdpgConfig& config, std::uint64_t seed) {
  return nn::MlpParams::Init(Sizes(kStateSize, config.hidden_sizes),
                             Acts(config.hidden_sizes.size(), nn::Activation::kTanh), seed);
}

nn::MlpParams MakeCritic(const DdpgConfig& config, std::uint64_t seed) {
  return nn::MlpParams::Init(Sizes(kStateSize + 1, config.hidden_sizes),
                             Acts(config.hidden_sizes.size(), nn::Activation::kIdentity),
                             seed);
}

double DeterministicAction(const nn::MlpParams& actor, const DdpgConfig& config,
                           const sim::EgoObservation& obs) {
  nn::Matrix input(1, kStateSize);
  const auto raw = obs.ToArray();
  for (std::size_t i = 0; i < kStateSize; ++i) input(0, i) = raw[i] / config.obs_scale[i];
  const nn::Matrix out = nn::Forward(actor, input);
  const double y = out(0, 0);
  if (!std::isfinite(y)) throw NumericError("actor produced a non-finite action");
  return config.action_mid() + config.action_half() * y;
}

void SoftUpdate(nn::MlpParams& target, const nn::MlpParams& source, double tau) {
  if (!target.SameArchitecture(source)) {
    throw ShapeError("soft update between different architectures");
  }
  if (!(tau >= 0.0 && tau <= 1.0)) throw InvalidArgumentError("tau must be in [0, 1]");
  simd::Active().blend(target.params().data(), source.params().data(), tau,
                       target.num_params());
}

DdpgAgent::DdpgAgent(DdpgConfig config, std::uint64_t seed)
    : config_(std::move(config)),
      buffer_(config_.buffer_capacity > 0 ? config_.buffer_capacity : 1),
      noise_(config_.ou) {
  config_.Validate();
  actor_ = MakeActor(config_, DeriveSeed(seed, 1, 0));
  critic_ = MakeCritic(config_, DeriveSeed(seed, 2, 0));
  target_actor_ = actor_;
  target_critic_ = critic_;
  actor_adam_ = nn::AdamState(actor_.num_params(), config_.adam);
  critic_adam_ = nn::AdamState(critic_.num_params(), config_.adam);
  rng_.seed(DeriveSeed(seed, 3, 0));
}

double DdpgAgent::SelectAction(const sim::EgoObservation& obs, bool explore,
                               std::mt19937_64& rng) {
  double a = DeterministicAction(actor_, config_, obs);
  if (explore) a += config_.action_half() * noise_.Sample(rng);
  return std::clamp(a, config_.action_min, config_.action_max);
}

nn::Matrix DdpgAgent::NormalizeStates(const std::vector<Transition>& batch,
                                      bool next) const {
  nn::Matrix m(batch.size(), kStateSize);
  for (std::size_t j = 0; j < batch.size(); ++j) {
    const auto& s = next ? batch[j].next_state : batch[j].state;
    for (std::size_t i = 0; i < kStateSize; ++i) m(j, i) = s[i] / config_.obs_scale[i];
  }
  return m;
}

namespace {

// [states | u] with u in the actor's [-1, 1] output units.
nn::Matrix CriticInput(const nn::Matrix& states, const nn::Matrix& u) {
  nn::Matrix in(states.rows(), kStateSize + 1);
  for (std::size_t j = 0; j < states.rows(); ++j) {
    for (std::size_t i = 0; i < kStateSize; ++i) in(j, i) = states(j, i);
    in(j, kStateSize) = u(j, 0);
  }
  return in;
}

}  // namespace

std::vector<double> DdpgAgent::CriticTargets(const std::vector<Transition>& batch) const {
  const nn::Matrix next = NormalizeStates(batch, true);
  const nn::Matrix next_u = nn::Forward(target_actor_, next);
  const nn::Matrix next_q = nn::Forward(target_critic_, CriticInput(next, next_u));
  std::vector<double> y(batch.size());
  for (std::size_t j = 0; j < batch.size(); ++j) {
    y[j] = batch[j].done ? batch[j].reward
                         : batch[j].reward + config_.gamma * next_q(j, 0);
  }
  return y;
}

double DdpgAgent::CriticUpdate(const std::vector<Transition>& batch) {
  if (batch.empty()) throw InvalidArgumentError("empty batch");
  const std::vector<double> y = CriticTargets(batch);
  const nn::Matrix states = NormalizeStates(batch, false);
  nn::Matrix u(batch.size(), 1);
  for (std::size_t j = 0; j < batch.size(); ++j) {
    u(j, 0) = (batch[j].action - config_.action_mid()) / config_.action_half();
  }
  nn::ForwardCache cache;
  const nn::Matrix q = nn::Forward(critic_, CriticInput(states, u), &cache);
  const double n = static_cast<double>(batch.size());
  double loss = 0.0;
  nn::Matrix grad(batch.size(), 1);
  for (std::size_t j = 0; j < batch.size(); ++j) {
    const double err = q(j, 0) - y[j];
    loss += err * err;
    grad(j, 0) = 2.0 * err / n;
  }
  loss /= n;
  if (!std::isfinite(loss)) throw NumericError("critic loss is not finite");
  const nn::Gradients g = nn::Backward(critic_, cache, grad, nn::GradMode::kParamsOnly);
  nn::AdamStep(critic_.params(), g.params, critic_adam_, config_.critic_lr);
  return loss;
}

double DdpgAgent::ActorLossGradient(const std::vector<Transition>& batch,
                                    const CriticGradientFn* critic,
                                    std::vector<double>* grad) const {
  if (batch.empty()) throw InvalidArgumentError("empty batch");
  const double n = static_cast<double>(batch.size());
  const nn::Matrix states = NormalizeStates(batch, false);
  nn::ForwardCache actor_cache;
  const nn::Matrix u = nn::Forward(actor_, states, &actor_cache);
  nn::Matrix du(batch.size(), 1);
  double mean_q = 0.0;
  if (critic != nullptr) {
    for (std::size_t j = 0; j < batch.size(); ++j) {
      const double action = config_.action_mid() + config_.action_half() * u(j, 0);
      double dq_da = 0.0;
      mean_q += (*critic)(batch[j].state, action, &dq_da);
      du(j, 0) = -dq_da * config_.action_half() / n;
    }
  } else {
    nn::ForwardCache critic_cache;
    const nn::Matrix q = nn::Forward(critic_, CriticInput(states, u), &critic_cache);
    for (std::size_t j = 0; j < batch.size(); ++j) mean_q += q(j, 0);
    const nn::Matrix seed(batch.size(), 1, -1.0 / n);
    const nn::Gradients g =
        nn::Backward(critic_, critic_cache, seed, nn::GradMode::kInputOnly);
    for (std::size_t j = 0; j < batch.size(); ++j) du(j, 0) = g.input(j, kStateSize);
  }
  mean_q /= n;
  if (!std::isfinite(mean_q)) throw NumericError("critic value is not finite");
  *grad = nn::Backward(actor_, actor_cache, du, nn::GradMode::kParamsOnly).params;
  return mean_q;
}

double DdpgAgent::ActorUpdate(const std::vector<Transition>& batch) {
  std::vector<double> grad;
  const double q = ActorLossGradient(batch, nullptr, &grad);
  nn::AdamStep(actor_.params(), grad, actor_adam_, config_.actor_lr);
  return q;
}

double DdpgAgent::ActorUpdate(const std::vector<Transition>& batch,
                              const CriticGradientFn& critic) {
  std::vector<double> grad;
  const double q = ActorLossGradient(batch, &critic, &grad);
  nn::AdamStep(actor_.params(), grad, actor_adam_, config_.actor_lr);
  return q;
}

std::vector<double> DdpgAgent::PolicyGradient(const std::vector<Transition>& batch,
                                              double* mean_q) const {
  std::vector<double> grad;
  const double q = ActorLossGradient(batch, nullptr, &grad);
  for (double& g : grad) g = -g;
  if (mean_q) *mean_q = q;
  return grad;
}

double DdpgAgent::MeanQ(const std::vector<Transition>& batch) const {
  const nn::Matrix states = NormalizeStates(batch, false);
  const nn::Matrix u = nn::Forward(actor_, states);
  const nn::Matrix q = nn::Forward(critic_, CriticInput(states, u));
  double sum = 0.0;
  for (std::size_t j = 0; j < batch.size(); ++j) sum += q(j, 0);
  return sum / static_cast<double>(batch.size());
}

void DdpgAgent::SoftUpdateTargets() {
  SoftUpdate(target_actor_, actor_, config_.tau);
  SoftUpdate(target_critic_, critic_, config_.tau);
}

eval::EpisodeMetrics DdpgAgent::TrainEpisode(sim::World& env, std::uint64_t episode_seed) {
  eval::RolloutTrace trace;
  trace.step_length_s = env.scenario().step_length_s;
  sim::EgoObservation obs = env.Reset(episode_seed);
  noise_.Reset();
  for (;;) {
    const double action = SelectAction(obs, true, rng_);
    const sim::StepOutcome out = env.Step(action);
    Transition t;
    t.state = obs.ToArray();
    t.action = action;
    t.reward = out.reward;
    t.next_state = out.observation.ToArray();
    t.done = out.done && out.cause != sim::TerminationCause::kMaxSteps;
    buffer_.Store(t);
    trace.Append(out);
    if (buffer_.size() >= config_.batch_size) {
      const auto batch = buffer_.Sample(config_.batch_size, rng_);
      CriticUpdate(batch);
      ActorUpdate(batch);
      SoftUpdateTargets();
      ++updates_;
    }
    obs = out.observation;
    if (out.done) break;
  }
  ++episodes_;
  return eval::Summarize(trace);
}

void DdpgAgent::LoadWeights(std::span<const double> actor, std::span<const double> critic,
                            bool reset_optimizers) {
  if (actor.size() != actor_.num_params() || critic.size() != critic_.num_params()) {
    throw ShapeError("broadcast weights do not match the agent architecture");
  }
  actor_.Unflatten(actor);
  critic_.Unflatten(critic);
  target_actor_ = actor_;
  target_critic_ = critic_;
  if (reset_optimizers) {
    actor_adam_.Reset();
    critic_adam_.Reset();
  }
}

nn::Checkpoint DdpgAgent::ToCheckpoint() const {
  nn::Checkpoint c;
  c.meta = config_.ToMeta();
  c.meta["kind"] = "agent";
  c.meta["episodes"] = std::to_string(episodes_);
  c.meta["updates"] = std::to_string(updates_);
  c.networks["actor"] = actor_;
  c.networks["critic"] = critic_;
  c.networks["target_actor"] = target_actor_;
  c.networks["target_critic"] = target_critic_;
  c.optimizers["actor"] = actor_adam_;
  c.optimizers["critic"] = critic_adam_;
  return c;
}

DdpgAgent DdpgAgent::FromCheckpoint(const nn::Checkpoint& c, std::uint64_t seed) {
  DdpgAgent agent(DdpgConfig::FromMeta(c.meta), seed);
  auto take = [&](const char* name, nn::MlpParams& dst) {
    const nn::MlpParams& src = c.network(name);
    if (!src.SameArchitecture(dst)) {
      throw ShapeError(std::string("checkpoint network '") + name +
                       "' does not match the configured architecture");
    }
    dst = src;
  };
  take("actor", agent.actor_);
  take("critic", agent.critic_);
  take("target_actor", agent.target_actor_);
  take("target_critic", agent.target_critic_);
  if (c.optimizers.count("actor")) agent.actor_adam_ = c.optimizer("actor");
  if (c.optimizers.count("critic")) agent.critic_adam_ = c.optimizer("critic");
  agent.episodes_ = std::stoull(c.meta_or("episodes", "0"));
  agent.updates_ = std::stoull(c.meta_or("updates", "0"));
  return agent;
}

}  // namespace fedcav::ddpg
