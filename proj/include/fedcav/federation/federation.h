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

#ifndef FEDCAV_FEDERATION_FEDERATION_H_
#define FEDCAV_FEDERATION_FEDERATION_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "fedcav/ddpg/agent.h"
#include "fedcav/eval/metrics.h"
#include "fedcav/federation/aggregate.h"
#include "fedcav/nn/checkpoint.h"
#include "fedcav/nn/mlp.h"
#include "fedcav/sim/scenario.h"

namespace fedcav::federation {

enum class OptimizerPolicy { kReset, kKeepLocal };

struct FederationConfig {
  int agents = 10;
  int rounds = 5;
  int episodes_per_round = 100;
  std::uint64_t master_seed = 0;
  // One scenario per agent, or a single scenario shared by all agents.
  std::vector<sim::ScenarioConfig> scenarios;
  // Optional per-agent seeds; derived from master_seed when empty.
  std::vector<std::uint64_t> agent_seeds;
  ddpg::DdpgConfig ddpg;
  OptimizerPolicy optimizer_policy = OptimizerPolicy::kReset;
  // Worker threads for local training; 1 runs agents one after another.
  int threads = 1;
  // Where round_<k>.ckpt files go; empty disables persistence.
  std::filesystem::path checkpoint_dir;
  // Recorded in round checkpoints.
  std::string config_hash;

  // Throws ConfigError.
  void Validate() const;
  const sim::ScenarioConfig& ScenarioFor(int agent) const;
  std::uint64_t AgentSeed(int agent) const;
};

// Seed of the world reset for an agent's episode_idx-th episode overall.
std::uint64_t EpisodeSeed(std::uint64_t master_seed, int agent, std::uint64_t episode_idx);

struct GlobalModel {
  nn::MlpParams actor;
  nn::MlpParams critic;
  nn::MlpParams target_actor;
  nn::MlpParams target_critic;
  int round = 0;

  bool operator==(const GlobalModel&) const = default;
};

struct AgentRoundStats {
  int agent_id = 0;
  std::uint64_t episodes = 0;
  double mean_reward = 0.0;
  int collisions = 0;
  int reached = 0;
  std::vector<eval::EpisodeMetrics> episode_metrics;
};

struct RoundReport {
  int round = 0;  // 1-based
  std::vector<AgentRoundStats> agents;
  double aggregation_seconds = 0.0;
  std::string checkpoint_path;
};

// Sees exactly what the aggregator receives, before aggregation.
using AggregationObserver = std::function<void(std::span<const AgentUpdate>)>;

// Synchronous rounds: local training, aggregation, global target update,
// broadcast. Agents never share replay data.
class Federation {
 public:
  explicit Federation(FederationConfig config);

  // Trains every agent for one round and aggregates. round_idx is 1-based.
  // Any agent failure aborts the round with that agent's id in the message.
  RoundReport RunRound(int round_idx);

  // Copies the global online weights into every agent.
  void Broadcast();

  void set_observer(AggregationObserver observer) { observer_ = std::move(observer); }

  const FederationConfig& config() const { return config_; }
  const GlobalModel& global() const { return global_; }
  std::vector<ddpg::DdpgAgent>& agents() { return agents_; }
  const std::vector<ddpg::DdpgAgent>& agents() const { return agents_; }
  // Episodes per agent over all completed rounds.
  const std::vector<std::uint64_t>& cumulative_episodes() const { return cumulative_; }

  nn::Checkpoint GlobalCheckpoint(const RoundReport& report) const;

 private:
  FederationConfig config_;
  GlobalModel global_;
  std::vector<ddpg::DdpgAgent> agents_;
  std::vector<sim::World> worlds_;
  std::vector<std::uint64_t> cumulative_;
  AggregationObserver observer_;
};

struct TrainingResult {
  GlobalModel global;
  std::vector<RoundReport> reports;
};

TrainingResult RunTraining(const FederationConfig& config,
                           AggregationObserver observer = nullptr);

}  // namespace fedcav::federation

#endif  // FEDCAV_FEDERATION_FEDERATION_H_
