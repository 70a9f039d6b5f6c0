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

#include "fedcav/eval/evaluate.h"

#include <cmath>
#include <limits>
#include <memory>

#include "fedcav/base/error.h"
#include "fedcav/base/hash.h"
#include "fedcav/ddpg/agent.h"

namespace fedcav::eval {

namespace {

constexpr std::uint64_t kEvalStream = 0xE7A1ull;

}  // namespace

void EvalProtocol::Validate() const {
  if (episodes < 1) throw ConfigError("evaluation episodes must be >= 1");
  if (distances_m.empty()) throw ConfigError("no evaluation distances");
  for (double d : distances_m) {
    if (!(d > 0.0) || !std::isfinite(d)) throw ConfigError("evaluation distances must be > 0");
  }
  if (!seeds.empty() && seeds.size() != static_cast<std::size_t>(episodes)) {
    throw ConfigError("evaluation seed list length differs from the episode count");
  }
}

std::uint64_t EvalProtocol::EpisodeSeed(int k) const {
  return seeds.empty() ? DeriveSeed(master_seed, kEvalStream, static_cast<std::uint64_t>(k))
                       : seeds[k];
}

EpisodeMetrics RunEpisode(sim::World& world, std::uint64_t seed, const PolicyFn& policy,
                          RolloutTrace* trace) {
  RolloutTrace local;
  RolloutTrace& t = trace ? *trace : local;
  t = RolloutTrace{};
  t.step_length_s = world.scenario().step_length_s;
  sim::EgoObservation obs = world.Reset(seed);
  for (;;) {
    const sim::StepOutcome out = world.Step(policy(obs));
    t.Append(out);
    obs = out.observation;
    if (out.done) break;
  }
  return Summarize(t);
}

EvalSummary Evaluate(const std::string& policy_id, const PolicyFn& policy,
                     const sim::ScenarioConfig& scenario, const EvalProtocol& protocol) {
  protocol.Validate();
  sim::World world(scenario);
  std::vector<sim::Vec2> targets;
  for (double d : protocol.distances_m) {
    targets.push_back(
        sim::PointAtStraightLineDistance(*scenario.network, scenario.ego_route, d));
  }
  EvalSummary summary;
  summary.policy_id = policy_id;
  for (std::size_t i = 0; i < protocol.distances_m.size(); ++i) {
    world.SetDestination(targets[i]);
    DistanceSummary row;
    row.distance_m = protocol.distances_m[i];
    double delay_sum = 0.0;
    double speed_sum = 0.0;
    for (int k = 0; k < protocol.episodes; ++k) {
      const EpisodeMetrics m = RunEpisode(world, protocol.EpisodeSeed(k), policy);
      ++row.episodes;
      row.collisions += m.collided ? 1 : 0;
      row.timeouts += m.timed_out ? 1 : 0;
      if (m.reached) {
        ++row.successes;
        delay_sum += m.travel_delay_s;
      }
      speed_sum += m.average_speed_mps;
      row.episode_metrics.push_back(m);
    }
    row.mean_travel_delay_s = row.successes > 0
                                  ? delay_sum / row.successes
                                  : std::numeric_limits<double>::quiet_NaN();
    row.mean_avg_speed_mps = speed_sum / row.episodes;
    row.success_rate = static_cast<double>(row.successes) / row.episodes;
    summary.rows.push_back(std::move(row));
  }
  return summary;
}

PolicyFn PolicyFromCheckpoint(const nn::Checkpoint& checkpoint) {
  const ddpg::DdpgConfig config = ddpg::DdpgConfig::FromMeta(checkpoint.meta);
  auto actor = std::make_shared<const nn::MlpParams>(checkpoint.network("actor"));
  if (actor->input_size() != ddpg::kStateSize || actor->output_size() != 1 ||
      actor->activations().back() != nn::Activation::kTanh) {
    throw ShapeError("checkpoint actor must map 6 inputs to 1 tanh output");
  }
  if (!ddpg::MakeActor(config, 0).SameArchitecture(*actor)) {
    throw ShapeError("checkpoint actor does not match its recorded hidden sizes");
  }
  return [actor, config](const sim::EgoObservation& obs) {
    return ddpg::DeterministicAction(*actor, config, obs);
  };
}

}  // namespace fedcav::eval
