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

#ifndef FEDCAV_CLI_COMMANDS_H_
#define FEDCAV_CLI_COMMANDS_H_

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "fedcav/cli/run_config.h"

namespace fedcav::cli {

struct CommandOptions {
  std::filesystem::path config;
  std::filesystem::path out = ".";
  std::vector<std::filesystem::path> checkpoints;
  std::filesystem::path scenario;
  std::filesystem::path policy;
  double accel_mps2 = 0.0;  // sim-run without a policy
  bool json = false;        // eval: also write eval.json
  Overrides overrides;
};

// Each command validates its inputs before writing anything, prints a
// diagnostic to `err` on failure and returns the process exit status.
//
// train   -> <out>/round_<k>.ckpt, round_<k>.json, rounds.csv,
//            agent_<i>.ckpt, manifest.json
// eval    -> <out>/eval.csv (and eval.json)
// inspect -> summary on `out`
// sim-run -> <out>/trace.csv
// export  -> <out>/<checkpoint stem>.json
int CmdTrain(const CommandOptions& opts, std::ostream& out, std::ostream& err);
int CmdEval(const CommandOptions& opts, std::ostream& out, std::ostream& err);
int CmdInspect(const CommandOptions& opts, std::ostream& out, std::ostream& err);
int CmdSimRun(const CommandOptions& opts, std::ostream& out, std::ostream& err);
int CmdExport(const CommandOptions& opts, std::ostream& out, std::ostream& err);

// Identifies the build in manifests.
std::string BuildId();

}  // namespace fedcav::cli

#endif  // FEDCAV_CLI_COMMANDS_H_
