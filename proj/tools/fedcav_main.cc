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

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "fedcav/cli/commands.h"

int main(int argc, char** argv) {
  using fedcav::cli::CommandOptions;
  CLI::App app{"Federated DDPG training and evaluation for vehicle control"};
  app.require_subcommand(1);
  app.set_version_flag("--version", fedcav::cli::BuildId());

  CommandOptions opts;
  std::string out = ".";
  std::uint64_t seed = 0;
  int rounds = 0, agents = 0, episodes = 0;

  auto common = [&](CLI::App* cmd) {
    cmd->add_option("--config", opts.config, "Run configuration file");
    cmd->add_option("--out", out, "Output directory");
    cmd->add_option("--seed", seed, "Master seed (overrides the config)");
  };

  auto* train = app.add_subcommand("train", "Run federated training");
  common(train);
  train->add_option("--rounds", rounds, "Number of rounds")->check(CLI::PositiveNumber);
  train->add_option("--agents", agents, "Number of agents")->check(CLI::PositiveNumber);
  train->add_option("--episodes", episodes, "Episodes per agent per round")
      ->check(CLI::PositiveNumber);
  train->add_flag("--serial", opts.overrides.serial, "Train agents one after another");

  auto* eval = app.add_subcommand("eval", "Evaluate policies at fixed destination distances");
  common(eval);
  eval->add_option("--checkpoint", opts.checkpoints, "Agent or round checkpoint (repeatable)")
      ->required();
  eval->add_option("--scenario", opts.scenario, "Evaluation scenario file");
  eval->add_option("--episodes", episodes, "Episodes per distance")->check(CLI::PositiveNumber);
  eval->add_flag("--json", opts.json, "Also write eval.json");

  auto* inspect = app.add_subcommand("inspect", "Summarize checkpoints");
  inspect->add_option("--checkpoint", opts.checkpoints, "Checkpoint file (repeatable)")
      ->required();

  auto* simrun = app.add_subcommand("sim-run", "Roll out one episode and write trace.csv");
  common(simrun);
  simrun->add_option("--scenario", opts.scenario, "Scenario file");
  simrun->add_option("--policy", opts.policy, "Checkpoint whose actor drives the ego");
  simrun->add_option("--accel", opts.accel_mps2, "Constant acceleration without a policy");

  auto* exp = app.add_subcommand("export", "Write checkpoints as JSON");
  exp->add_option("--checkpoint", opts.checkpoints, "Checkpoint file (repeatable)")->required();
  exp->add_option("--out", out, "Output directory");

  CLI11_PARSE(app, argc, argv);

  opts.out = out;
  for (auto* cmd : {train, eval, simrun}) {
    if (cmd->count("--seed")) opts.overrides.seed = seed;
  }
  if (train->count("--rounds")) opts.overrides.rounds = rounds;
  if (train->count("--agents")) opts.overrides.agents = agents;
  if (train->count("--episodes") || eval->count("--episodes")) opts.overrides.episodes = episodes;

  if (*train) return fedcav::cli::CmdTrain(opts, std::cout, std::cerr);
  if (*eval) return fedcav::cli::CmdEval(opts, std::cout, std::cerr);
  if (*inspect) return fedcav::cli::CmdInspect(opts, std::cout, std::cerr);
  if (*simrun) return fedcav::cli::CmdSimRun(opts, std::cout, std::cerr);
  return fedcav::cli::CmdExport(opts, std::cout, std::cerr);
}
