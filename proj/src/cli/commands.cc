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

#include "fedcav/cli/commands.h"

#include <exception>
#include <filesystem>
#include <memory>

#include <json.hpp>

#include "fedcav/base/error.h"
#include "fedcav/base/format.h"
#include "fedcav/base/log.h"
#include "fedcav/ddpg/agent.h"
#include "fedcav/eval/evaluate.h"
#include "fedcav/eval/export.h"
#include "fedcav/federation/federation.h"
#include "fedcav/federation/reports.h"
#include "fedcav/nn/checkpoint.h"
#include "fedcav/sim/world.h"

#ifndef FEDCAV_VERSION
#define FEDCAV_VERSION "dev"
#endif

namespace fedcav::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

template <typename Fn>
int Guarded(std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

std::string Join(const std::vector<std::size_t>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + "]";
}

std::string JoinActs(const std::vector<nn::Activation>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    s += (i ? "," : "") + std::string(nn::ActivationName(v[i]));
  }
  return s + "]";
}

nn::Checkpoint LoadCheckpointOrThrow(const fs::path& path) {
  if (!fs::exists(path)) throw Error("checkpoint '" + path.string() + "' does not exist");
  try {
    return nn::Checkpoint::Load(path);
  } catch (const CheckpointError& e) {
    throw CheckpointError(path.string() + ": " + e.what());
  }
}

}  // namespace

std::string BuildId() {
  return std::string("fedcav ") + FEDCAV_VERSION + " (" + __VERSION__ + ")";
}

int CmdTrain(const CommandOptions& opts, std::ostream& out, std::ostream& err) {
  return Guarded(err, [&] {
    if (opts.config.empty()) throw ConfigError("--config is required");
    RunConfig rc = LoadRunConfig(opts.config, opts.overrides);
    rc.federation.checkpoint_dir = opts.out;
    federation::Federation fed(rc.federation);

    fs::create_directories(opts.out);
    std::vector<federation::RoundReport> reports;
    for (int r = 1; r <= rc.federation.rounds; ++r) {
      reports.push_back(fed.RunRound(r));
      const auto& rep = reports.back();
      double reward = 0.0;
      int collisions = 0, reached = 0;
      for (const auto& a : rep.agents) {
        reward += a.mean_reward;
        collisions += a.collisions;
        reached += a.reached;
      }
      out << "round " << r << ": mean reward " << FormatDouble(reward / rep.agents.size())
          << ", collisions " << collisions << ", reached " << reached << "\n";
    }
    federation::WriteRoundsCsv(opts.out / "rounds.csv", reports);
    for (std::size_t i = 0; i < fed.agents().size(); ++i) {
      fed.agents()[i].ToCheckpoint().Save(opts.out / ("agent_" + std::to_string(i) + ".ckpt"));
    }

    ordered_json m;
    m["config_hash"] = rc.config_hash;
    m["config_file"] = rc.config_path.filename().string();
    m["master_seed"] = rc.master_seed;
    m["agents"] = rc.federation.agents;
    m["rounds"] = rc.federation.rounds;
    m["episodes_per_round"] = rc.federation.episodes_per_round;
    ordered_json seeds = ordered_json::array();
    for (int i = 0; i < rc.federation.agents; ++i) seeds.push_back(rc.federation.AgentSeed(i));
    m["agent_seeds"] = seeds;
    m["episode_seed"] = "DeriveSeed(master_seed, agent_id, episode_idx)";
    ordered_json ckpts = ordered_json::array();
    for (const auto& rep : reports) ckpts.push_back(fs::path(rep.checkpoint_path).filename().string());
    m["checkpoints"] = ckpts;
    m["build"] = BuildId();
    WriteTextFile(opts.out / "manifest.json", m.dump(2) + "\n");
    out << "wrote " << reports.size() << " round checkpoints to " << opts.out.string() << "\n";
    return 0;
  });
}

int CmdEval(const CommandOptions& opts, std::ostream& out, std::ostream& err) {
  return Guarded(err, [&] {
    if (opts.checkpoints.empty()) throw ConfigError("--checkpoint is required");
    sim::ScenarioConfig scenario;
    eval::EvalProtocol protocol;
    if (!opts.config.empty()) {
      const RunConfig rc = LoadRunConfig(opts.config, opts.overrides);
      scenario = rc.eval_scenario;
      protocol = rc.eval;
    } else if (!opts.scenario.empty()) {
      scenario = sim::LoadScenario(opts.scenario);
      if (opts.overrides.seed) protocol.master_seed = *opts.overrides.seed;
    } else {
      throw ConfigError("eval needs --config or --scenario");
    }
    if (!opts.scenario.empty() && !opts.config.empty()) scenario = sim::LoadScenario(opts.scenario);
    if (opts.overrides.episodes) protocol.episodes = *opts.overrides.episodes;
    protocol.Validate();

    std::vector<std::pair<std::string, eval::PolicyFn>> policies;
    for (const auto& path : opts.checkpoints) {
      policies.emplace_back(path.stem().string(),
                            eval::PolicyFromCheckpoint(LoadCheckpointOrThrow(path)));
    }
    std::vector<eval::EvalSummary> summaries;
    for (const auto& [id, policy] : policies) {
      summaries.push_back(eval::Evaluate(id, policy, scenario, protocol));
    }
    fs::create_directories(opts.out);
    eval::ExportCsv(summaries, opts.out / "eval.csv");
    if (opts.json) eval::ExportJson(summaries, opts.out / "eval.json");
    for (const auto& s : summaries) {
      for (const auto& r : s.rows) {
        out << s.policy_id << " d=" << FormatDouble(r.distance_m) << "m episodes=" << r.episodes
            << " collisions=" << r.collisions << " success=" << FormatDouble(r.success_rate)
            << " delay=" << FormatDouble(r.mean_travel_delay_s)
            << "s speed=" << FormatDouble(r.mean_avg_speed_mps) << "m/s\n";
      }
    }
    return 0;
  });
}

int CmdInspect(const CommandOptions& opts, std::ostream& out, std::ostream& err) {
  return Guarded(err, [&] {
    if (opts.checkpoints.empty()) throw ConfigError("--checkpoint is required");
    for (const auto& path : opts.checkpoints) {
      const nn::Checkpoint c = LoadCheckpointOrThrow(path);
      out << "checkpoint: " << path.string() << "\n";
      out << "format version: " << nn::Checkpoint::kVersion << "\n";
      out << "kind: " << c.meta_or("kind", "unknown") << "\n";
      if (c.meta.count("round")) out << "round: " << c.meta_value("round") << "\n";
      if (c.meta.count("episodes")) out << "episodes: " << c.meta_value("episodes") << "\n";
      out << "config_hash: " << c.meta_or("config_hash", "-") << "\n";
      for (const auto& [name, net] : c.networks) {
        out << "network " << name << ": sizes " << Join(net.layer_sizes()) << " activations "
            << JoinActs(net.activations()) << " params " << net.num_params() << "\n";
      }
      for (const auto& [name, adam] : c.optimizers) {
        out << "optimizer " << name << ": adam t=" << adam.t << " params " << adam.m.size()
            << "\n";
      }
      if (c.meta.count("agents")) {
        const int agents = std::stoi(c.meta_value("agents"));
        std::string round_n, total_n;
        std::uint64_t sum_round = 0, sum_total = 0;
        for (int i = 0; i < agents; ++i) {
          const auto a = c.meta_or("n_i." + std::to_string(i), "0");
          const auto t = c.meta_or("n_i_total." + std::to_string(i), "0");
          round_n += (i ? " " : "") + a;
          total_n += (i ? " " : "") + t;
          sum_round += std::stoull(a);
          sum_total += std::stoull(t);
        }
        out << "n_i (round): " << round_n << " (sum " << sum_round << ")\n";
        out << "n_i (total): " << total_n << " (sum " << sum_total << ")\n";
      }
    }
    return 0;
  });
}

int CmdSimRun(const CommandOptions& opts, std::ostream& out, std::ostream& err) {
  return Guarded(err, [&] {
    sim::ScenarioConfig scenario;
    if (!opts.scenario.empty()) {
      scenario = sim::LoadScenario(opts.scenario);
    } else if (!opts.config.empty()) {
      scenario = LoadRunConfig(opts.config, opts.overrides).federation.scenarios.front();
    } else {
      throw ConfigError("sim-run needs --scenario or --config");
    }
    eval::PolicyFn policy;
    if (!opts.policy.empty()) {
      policy = eval::PolicyFromCheckpoint(LoadCheckpointOrThrow(opts.policy));
    } else {
      const double a = opts.accel_mps2;
      policy = [a](const sim::EgoObservation&) { return a; };
    }
    const std::uint64_t seed = opts.overrides.seed.value_or(0);

    sim::World world(scenario);
    std::string csv =
        "step,time_s,x_m,y_m,speed_mps,accel_mps2,reward,collided,reached,braking,waiting,"
        "speed_nonzero,free_flow,cause\n";
    sim::EgoObservation obs = world.Reset(seed);
    int steps = 0;
    double total = 0.0;
    sim::TerminationCause cause = sim::TerminationCause::kNone;
    for (;;) {
      const sim::StepOutcome o = world.Step(policy(obs));
      ++steps;
      total += o.reward;
      const auto& f = o.flags;
      csv += std::to_string(steps) + "," + FormatDouble(world.time_s()) + "," +
             FormatDouble(o.observation.pos_x) + "," + FormatDouble(o.observation.pos_y) + "," +
             FormatDouble(o.observation.speed) + "," + FormatDouble(o.observation.accel) + "," +
             FormatDouble(o.reward) + "," + (f.collided ? "1" : "0") + "," +
             (f.reached_destination ? "1" : "0") + "," + (f.braking ? "1" : "0") + "," +
             (f.waiting_at_light ? "1" : "0") + "," + (f.speed_nonzero ? "1" : "0") + "," +
             (f.free_flow ? "1" : "0") + "," + std::string(sim::TerminationName(o.cause)) +
             "\n";
      obs = o.observation;
      cause = o.cause;
      if (o.done) break;
    }
    fs::create_directories(opts.out);
    WriteTextFile(opts.out / "trace.csv", csv);
    out << "steps " << steps << ", cause " << sim::TerminationName(cause) << ", total reward "
        << FormatDouble(total) << "\n";
    return 0;
  });
}

int CmdExport(const CommandOptions& opts, std::ostream& out, std::ostream& err) {
  return Guarded(err, [&] {
    if (opts.checkpoints.empty()) throw ConfigError("--checkpoint is required");
    std::vector<std::pair<fs::path, std::string>> outputs;
    for (const auto& path : opts.checkpoints) {
      const nn::Checkpoint c = LoadCheckpointOrThrow(path);
      ordered_json j;
      j["format_version"] = nn::Checkpoint::kVersion;
      j["meta"] = c.meta;
      ordered_json nets = ordered_json::object();
      for (const auto& [name, net] : c.networks) {
        ordered_json n;
        n["layer_sizes"] = net.layer_sizes();
        std::vector<std::string> acts;
        for (auto a : net.activations()) acts.emplace_back(nn::ActivationName(a));
        n["activations"] = acts;
        n["params"] = net.Flatten();
        nets[name] = n;
      }
      j["networks"] = nets;
      ordered_json opt = ordered_json::object();
      for (const auto& [name, adam] : c.optimizers) {
        ordered_json a;
        a["t"] = adam.t;
        a["beta1"] = adam.beta1;
        a["beta2"] = adam.beta2;
        a["eps"] = adam.eps;
        a["m"] = adam.m;
        a["v"] = adam.v;
        opt[name] = a;
      }
      j["optimizers"] = opt;
      outputs.emplace_back(opts.out / (path.stem().string() + ".json"), j.dump(1) + "\n");
    }
    for (const auto& [path, text] : outputs) {
      WriteTextFile(path, text);
      out << "wrote " << path.string() << "\n";
    }
    return 0;
  });
}

}  // namespace fedcav::cli
