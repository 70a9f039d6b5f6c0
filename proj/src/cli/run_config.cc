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

#include "fedcav/cli/run_config.h"

#include <cstdio>
#include <thread>

#include "fedcav/base/error.h"
#include "fedcav/base/format.h"
#include "fedcav/base/hash.h"
#include "fedcav/base/kv_config.h"

namespace fedcav::cli {

std::string HashHex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

std::string FileFingerprint(const std::filesystem::path& path) {
  return path.filename().string() + ":" + HashHex(Fnv1a64(ReadTextFile(path)));
}

std::vector<std::size_t> SizeList(const KvFile& f, const char* key,
                                  std::vector<std::size_t> fallback) {
  if (!f.Has("ddpg", key)) return fallback;
  std::vector<std::size_t> out;
  for (double d : f.GetDoubleList("ddpg", key, {})) {
    if (!(d >= 1.0) || d != static_cast<double>(static_cast<std::size_t>(d))) {
      throw ConfigError(std::string("[ddpg] ") + key + " entries must be positive integers");
    }
    out.push_back(static_cast<std::size_t>(d));
  }
  return out;
}

std::vector<std::uint64_t> SeedList(const KvFile& f, const char* section, const char* key) {
  std::vector<std::uint64_t> out;
  for (const auto& item : f.GetStringList(section, key)) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoull(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw ConfigError(std::string("[") + section + "] " + key + ": invalid seed '" + item +
                        "'");
    }
  }
  return out;
}

}  // namespace

RunConfig LoadRunConfig(const std::filesystem::path& path, const Overrides& ov) {
  const KvFile f = KvFile::Load(path);
  f.RequireKnownKeys("", {});
  f.RequireKnownKeys("run", {"scenario_file", "scenario_files", "seed", "threads"});
  f.RequireKnownKeys("federation",
                     {"agents", "rounds", "episodes_per_round", "optimizer_state", "agent_seeds"});
  f.RequireKnownKeys("ddpg", {"hidden_sizes", "gamma", "tau", "actor_lr", "critic_lr",
                              "batch_size", "buffer_capacity", "action_min_mps2",
                              "action_max_mps2", "ou_mu", "ou_theta", "ou_sigma", "ou_dt",
                              "obs_scale", "adam_beta1", "adam_beta2", "adam_eps"});
  f.RequireKnownKeys("eval", {"scenario_file", "episodes", "distances_m", "seeds"});
  for (const auto& e : f.entries()) {
    if (e.section != "" && e.section != "run" && e.section != "federation" &&
        e.section != "ddpg" && e.section != "eval") {
      throw ConfigError("unknown section [" + e.section + "] (line " + std::to_string(e.line) +
                        ")");
    }
  }

  RunConfig rc;
  rc.config_path = path;
  rc.master_seed = ov.seed ? *ov.seed : f.GetUint64("run", "seed", 0);

  std::vector<std::string> scenario_values = f.GetStringList("run", "scenario_files");
  if (scenario_values.empty()) {
    const auto one = f.Get("run", "scenario_file");
    if (!one) throw ConfigError(path.string() + ": [run] scenario_file is required");
    scenario_values.push_back(*one);
  }
  auto& fc = rc.federation;
  for (const auto& v : scenario_values) {
    const auto p = f.ResolvePath(v);
    rc.scenario_paths.push_back(p.string());
    fc.scenarios.push_back(sim::LoadScenario(p));
  }

  fc.master_seed = rc.master_seed;
  fc.agents = static_cast<int>(f.GetInt("federation", "agents", fc.agents));
  fc.rounds = static_cast<int>(f.GetInt("federation", "rounds", fc.rounds));
  fc.episodes_per_round =
      static_cast<int>(f.GetInt("federation", "episodes_per_round", fc.episodes_per_round));
  if (ov.agents) fc.agents = *ov.agents;
  if (ov.rounds) fc.rounds = *ov.rounds;
  if (ov.episodes) fc.episodes_per_round = *ov.episodes;
  const std::string opt = f.GetString("federation", "optimizer_state", "reset");
  if (opt == "reset") {
    fc.optimizer_policy = federation::OptimizerPolicy::kReset;
  } else if (opt == "keep-local") {
    fc.optimizer_policy = federation::OptimizerPolicy::kKeepLocal;
  } else {
    throw ConfigError("[federation] optimizer_state must be reset or keep-local, got '" + opt +
                      "'");
  }
  fc.agent_seeds = SeedList(f, "federation", "agent_seeds");
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  fc.threads = ov.serial ? 1 : static_cast<int>(f.GetInt("run", "threads", hw));

  auto& d = fc.ddpg;
  d.hidden_sizes = SizeList(f, "hidden_sizes", d.hidden_sizes);
  d.gamma = f.GetDouble("ddpg", "gamma", d.gamma);
  d.tau = f.GetDouble("ddpg", "tau", d.tau);
  d.actor_lr = f.GetDouble("ddpg", "actor_lr", d.actor_lr);
  d.critic_lr = f.GetDouble("ddpg", "critic_lr", d.critic_lr);
  const auto batch = f.GetInt("ddpg", "batch_size", static_cast<std::int64_t>(d.batch_size));
  const auto capacity =
      f.GetInt("ddpg", "buffer_capacity", static_cast<std::int64_t>(d.buffer_capacity));
  if (batch < 1 || capacity < 1) throw ConfigError("[ddpg] batch_size and buffer_capacity must be >= 1");
  d.batch_size = static_cast<std::size_t>(batch);
  d.buffer_capacity = static_cast<std::size_t>(capacity);
  d.action_min = f.GetDouble("ddpg", "action_min_mps2", d.action_min);
  d.action_max = f.GetDouble("ddpg", "action_max_mps2", d.action_max);
  d.ou.mu = f.GetDouble("ddpg", "ou_mu", d.ou.mu);
  d.ou.theta = f.GetDouble("ddpg", "ou_theta", d.ou.theta);
  d.ou.sigma = f.GetDouble("ddpg", "ou_sigma", d.ou.sigma);
  d.ou.dt = f.GetDouble("ddpg", "ou_dt", d.ou.dt);
  if (f.Has("ddpg", "obs_scale")) {
    const auto scale = f.GetDoubleList("ddpg", "obs_scale", {});
    if (scale.size() != d.obs_scale.size()) {
      throw ConfigError("[ddpg] obs_scale needs " + std::to_string(d.obs_scale.size()) +
                        " entries");
    }
    std::copy(scale.begin(), scale.end(), d.obs_scale.begin());
  }
  d.adam.beta1 = f.GetDouble("ddpg", "adam_beta1", d.adam.beta1);
  d.adam.beta2 = f.GetDouble("ddpg", "adam_beta2", d.adam.beta2);
  d.adam.eps = f.GetDouble("ddpg", "adam_eps", d.adam.eps);

  if (const auto es = f.Get("eval", "scenario_file")) {
    const auto p = f.ResolvePath(*es);
    rc.eval_scenario_path = p.string();
    rc.eval_scenario = sim::LoadScenario(p);
  } else {
    rc.eval_scenario_path = rc.scenario_paths.front();
    rc.eval_scenario = fc.scenarios.front();
  }
  rc.eval.episodes = static_cast<int>(f.GetInt("eval", "episodes", rc.eval.episodes));
  rc.eval.distances_m = f.GetDoubleList("eval", "distances_m", rc.eval.distances_m);
  rc.eval.seeds = SeedList(f, "eval", "seeds");
  rc.eval.master_seed = rc.master_seed;

  fc.Validate();
  rc.eval.Validate();

  std::string canonical = f.Canonical();
  canonical += "effective.seed=" + std::to_string(rc.master_seed) + "\n";
  canonical += "effective.agents=" + std::to_string(fc.agents) + "\n";
  canonical += "effective.rounds=" + std::to_string(fc.rounds) + "\n";
  canonical += "effective.episodes_per_round=" + std::to_string(fc.episodes_per_round) + "\n";
  for (std::size_t i = 0; i < rc.scenario_paths.size(); ++i) {
    canonical += "scenario=" + FileFingerprint(rc.scenario_paths[i]) + "\n";
    canonical += "network=" + FileFingerprint(fc.scenarios[i].network_path) + "\n";
  }
  canonical += "eval_scenario=" + FileFingerprint(rc.eval_scenario_path) + "\n";
  rc.config_hash = HashHex(Fnv1a64(canonical));
  fc.config_hash = rc.config_hash;
  return rc;
}

}  // namespace fedcav::cli
