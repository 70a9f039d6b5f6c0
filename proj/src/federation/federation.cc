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

#include "fedcav/federation/federation.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <limits>
#include <thread>

#include "fedcav/base/error.h"
#include "fedcav/base/hash.h"
#include "fedcav/base/log.h"
#include "fedcav/federation/reports.h"

namespace fedcav::federation {

namespace {

constexpr std::uint64_t kStream = std::numeric_limits<std::uint64_t>::max();

}  // namespace

void FederationConfig::Validate() const {
  if (agents < 1) throw ConfigError("agent count must be >= 1");
  if (rounds < 1) throw ConfigError("round count must be >= 1");
  if (episodes_per_round < 1) throw ConfigError("episodes per round must be >= 1");
  if (threads < 1) throw ConfigError("thread count must be >= 1");
  if (scenarios.empty()) throw ConfigError("no scenario configured");
  if (scenarios.size() != 1 && scenarios.size() != static_cast<std::size_t>(agents)) {
    throw ConfigError("need one scenario or one per agent, got " +
                      std::to_string(scenarios.size()) + " for " +
                      std::to_string(agents) + " agents");
  }
  if (!agent_seeds.empty() && agent_seeds.size() != static_cast<std::size_t>(agents)) {
    throw ConfigError("agent seed list length differs from the agent count");
  }
  for (const auto& s : scenarios) s.Validate();
  ddpg.Validate();
}

const sim::ScenarioConfig& FederationConfig::ScenarioFor(int agent) const {
  return scenarios.size() == 1 ? scenarios.front() : scenarios[agent];
}

std::uint64_t FederationConfig::AgentSeed(int agent) const {
  return agent_seeds.empty() ? DeriveSeed(master_seed, static_cast<std::uint64_t>(agent), kStream)
                             : agent_seeds[agent];
}

std::uint64_t EpisodeSeed(std::uint64_t master_seed, int agent, std::uint64_t episode_idx) {
  return DeriveSeed(master_seed, static_cast<std::uint64_t>(agent), episode_idx);
}

Federation::Federation(FederationConfig config) : config_(std::move(config)) {
  config_.Validate();
  const std::uint64_t global_seed = DeriveSeed(config_.master_seed, kStream, kStream);
  global_.actor = ddpg::MakeActor(config_.ddpg, global_seed);
  global_.critic = ddpg::MakeCritic(config_.ddpg, SplitMix64(global_seed));
  global_.target_actor = global_.actor;
  global_.target_critic = global_.critic;
  for (int i = 0; i < config_.agents; ++i) {
    agents_.emplace_back(config_.ddpg, config_.AgentSeed(i));
    worlds_.emplace_back(config_.ScenarioFor(i));
  }
  cumulative_.assign(config_.agents, 0);
  Broadcast();
}

void Federation::Broadcast() {
  const auto actor = global_.actor.params();
  const auto critic = global_.critic.params();
  for (auto& agent : agents_) {
    agent.LoadWeights(actor, critic, config_.optimizer_policy == OptimizerPolicy::kReset);
  }
}

RoundReport Federation::RunRound(int round_idx) {
  const int n = config_.agents;
  const int episodes = config_.episodes_per_round;
  std::vector<AgentRoundStats> stats(n);
  std::vector<std::exception_ptr> errors(n);

  auto train = [&](int i) {
    try {
      AgentRoundStats& s = stats[i];
      s.agent_id = i;
      double reward_sum = 0.0;
      for (int e = 0; e < episodes; ++e) {
        const std::uint64_t seed =
            EpisodeSeed(config_.master_seed, i, cumulative_[i] + static_cast<std::uint64_t>(e));
        const eval::EpisodeMetrics m = agents_[i].TrainEpisode(worlds_[i], seed);
        reward_sum += m.total_reward;
        s.collisions += m.collided ? 1 : 0;
        s.reached += m.reached ? 1 : 0;
        s.episode_metrics.push_back(m);
      }
      s.episodes = static_cast<std::uint64_t>(episodes);
      s.mean_reward = reward_sum / episodes;
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };

  const int workers = std::min(config_.threads, n);
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) train(i);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) train(i);
      });
    }
    for (auto& t : pool) t.join();
  }
  for (int i = 0; i < n; ++i) {
    if (!errors[i]) continue;
    try {
      std::rethrow_exception(errors[i]);
    } catch (const std::exception& e) {
      throw Error("round " + std::to_string(round_idx) + ": agent " + std::to_string(i) +
                  " failed: " + e.what());
    }
  }

  const auto start = std::chrono::steady_clock::now();
  std::vector<AgentUpdate> updates;
  updates.reserve(n);
  for (int i = 0; i < n; ++i) {
    updates.push_back({i, agents_[i].actor().Flatten(), agents_[i].critic().Flatten(),
                       stats[i].episodes});
  }
  if (observer_) observer_(updates);
  const AggregatedWeights avg = Aggregate(updates);
  global_.actor.Unflatten(avg.actor);
  global_.critic.Unflatten(avg.critic);
  ddpg::SoftUpdate(global_.target_actor, global_.actor, config_.ddpg.tau);
  ddpg::SoftUpdate(global_.target_critic, global_.critic, config_.ddpg.tau);
  global_.round = round_idx;
  Broadcast();
  const auto stop = std::chrono::steady_clock::now();

  for (int i = 0; i < n; ++i) cumulative_[i] += stats[i].episodes;

  RoundReport report;
  report.round = round_idx;
  report.agents = std::move(stats);
  report.aggregation_seconds = std::chrono::duration<double>(stop - start).count();
  if (!config_.checkpoint_dir.empty()) {
    std::filesystem::create_directories(config_.checkpoint_dir);
    const auto path = config_.checkpoint_dir / ("round_" + std::to_string(round_idx) + ".ckpt");
    report.checkpoint_path = path.string();
    const nn::Checkpoint ckpt = GlobalCheckpoint(report);
    ckpt.Save(path);
    WriteRoundManifest(config_.checkpoint_dir /
                           ("round_" + std::to_string(round_idx) + ".json"),
                       ckpt);
  }
  Log(LogLevel::kInfo, "round " + std::to_string(round_idx) + " done");
  return report;
}

nn::Checkpoint Federation::GlobalCheckpoint(const RoundReport& report) const {
  nn::Checkpoint c;
  c.meta = config_.ddpg.ToMeta();
  c.meta["kind"] = "global";
  c.meta["round"] = std::to_string(report.round);
  c.meta["agents"] = std::to_string(config_.agents);
  c.meta["config_hash"] = config_.config_hash;
  for (const auto& s : report.agents) {
    c.meta["n_i." + std::to_string(s.agent_id)] = std::to_string(s.episodes);
    c.meta["n_i_total." + std::to_string(s.agent_id)] = std::to_string(cumulative_[s.agent_id]);
  }
  c.networks["actor"] = global_.actor;
  c.networks["critic"] = global_.critic;
  c.networks["target_actor"] = global_.target_actor;
  c.networks["target_critic"] = global_.target_critic;
  return c;
}

TrainingResult RunTraining(const FederationConfig& config, AggregationObserver observer) {
  Federation fed(config);
  fed.set_observer(std::move(observer));
  TrainingResult result;
  for (int r = 1; r <= config.rounds; ++r) result.reports.push_back(fed.RunRound(r));
  result.global = fed.global();
  return result;
}

}  // namespace fedcav::federation
