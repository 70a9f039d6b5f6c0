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

#ifndef FEDCAV_CLI_RUN_CONFIG_H_
#define FEDCAV_CLI_RUN_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "fedcav/eval/evaluate.h"
#include "fedcav/federation/federation.h"
#include "fedcav/sim/scenario.h"

namespace fedcav::cli {

// Command-line values that take precedence over the config file.
struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<int> rounds;
  std::optional<int> agents;
  std::optional<int> episodes;
  bool serial = false;
};

// Effective configuration of a run.
//
//   [run]        scenario_file | scenario_files (one per agent), seed, threads
//   [federation] agents, rounds, episodes_per_round, optimizer_state
//                (reset | keep-local), agent_seeds
//   [ddpg]       hidden_sizes, gamma, tau, actor_lr, critic_lr, batch_size,
//                buffer_capacity, action_min_mps2, action_max_mps2, ou_mu,
//                ou_theta, ou_sigma, ou_dt, obs_scale, adam_beta1,
//                adam_beta2, adam_eps
//   [eval]       scenario_file, episodes, distances_m, seeds
//
// Relative paths resolve against the config file's directory.
struct RunConfig {
  std::filesystem::path config_path;
  std::uint64_t master_seed = 0;
  std::vector<std::string> scenario_paths;
  federation::FederationConfig federation;
  std::string eval_scenario_path;
  sim::ScenarioConfig eval_scenario;
  eval::EvalProtocol eval;
  // FNV-1a of the canonical config text, overrides and referenced files.
  std::string config_hash;
};

// Loads and validates everything the config references. Throws ConfigError
// (naming the offending path or key) or ParseError.
RunConfig LoadRunConfig(const std::filesystem::path& path, const Overrides& overrides);

std::string HashHex(std::uint64_t h);

}  // namespace fedcav::cli

#endif  // FEDCAV_CLI_RUN_CONFIG_H_
