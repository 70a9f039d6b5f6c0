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

#ifndef FEDCAV_EVAL_EVALUATE_H_
#define FEDCAV_EVAL_EVALUATE_H_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "fedcav/eval/metrics.h"
#include "fedcav/nn/checkpoint.h"
#include "fedcav/sim/scenario.h"
#include "fedcav/sim/world.h"

namespace fedcav::eval {

struct EvalProtocol {
  int episodes = 20;
  std::vector<double> distances_m{10.0, 20.0, 52.0, 107.0, 207.0};
  // Reset seed of episode k; derived from master_seed when empty. The same
  // seeds are used for every distance and every policy.
  std::vector<std::uint64_t> seeds;
  std::uint64_t master_seed = 0;

  // Throws ConfigError.
  void Validate() const;
  std::uint64_t EpisodeSeed(int k) const;
};

struct DistanceSummary {
  double distance_m = 0.0;
  int episodes = 0;
  int collisions = 0;
  int successes = 0;
  int timeouts = 0;
  // Over successful episodes only; NaN when there are none.
  double mean_travel_delay_s = 0.0;
  double mean_avg_speed_mps = 0.0;
  double success_rate = 0.0;
  std::vector<EpisodeMetrics> episode_metrics;
};

struct EvalSummary {
  std::string policy_id;
  std::vector<DistanceSummary> rows;
};

using PolicyFn = std::function<double(const sim::EgoObservation&)>;

// Runs one episode of `policy` from a reset with `seed`.
EpisodeMetrics RunEpisode(sim::World& world, std::uint64_t seed, const PolicyFn& policy,
                          RolloutTrace* trace = nullptr);

// Throws InfeasibleError when a distance cannot be placed on the ego route.
EvalSummary Evaluate(const std::string& policy_id, const PolicyFn& policy,
                     const sim::ScenarioConfig& scenario, const EvalProtocol& protocol);

// Noise-free actor from an agent or global checkpoint. Throws ShapeError
// unless the actor maps 6 inputs to 1 tanh output.
PolicyFn PolicyFromCheckpoint(const nn::Checkpoint& checkpoint);

}  // namespace fedcav::eval

#endif  // FEDCAV_EVAL_EVALUATE_H_
