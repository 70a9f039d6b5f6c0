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

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "doctest.h"
#include "fedcav/base/error.h"
#include "fedcav/base/format.h"
#include "fedcav/cli/commands.h"
#include "fedcav/cli/run_config.h"
#include "fedcav/nn/checkpoint.h"
#include "test_support.h"

using namespace fedcav;
using namespace fedcav::cli;
using fedcav::testing::DataPath;
using fedcav::testing::ScratchDir;
namespace fs = std::filesystem;

namespace {

struct Run {
  int status;
  std::string out;
  std::string err;
};

template <typename Cmd>
Run Invoke(Cmd cmd, const CommandOptions& opts) {
  std::ostringstream out, err;
  const int status = cmd(opts, out, err);
  return {status, out.str(), err.str()};
}

CommandOptions SmokeTrain(const fs::path& out) {
  CommandOptions o;
  o.config = DataPath("configs/smoke.cfg");
  o.out = out;
  o.overrides.serial = true;
  return o;
}

int LineCount(const std::string& text) {
  return static_cast<int>(std::count(text.begin(), text.end(), '\n'));
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("run config resolves paths, overrides and defaults") {
  Overrides ov;
  ov.rounds = 2;
  ov.seed = 5;
  ov.serial = true;
  const RunConfig rc = LoadRunConfig(DataPath("configs/protocol.cfg"), ov);
  CHECK(rc.federation.agents == 10);
  CHECK(rc.federation.rounds == 2);
  CHECK(rc.federation.episodes_per_round == 100);
  CHECK(rc.master_seed == 5);
  CHECK(rc.federation.master_seed == 5);
  CHECK(rc.federation.threads == 1);
  CHECK(rc.federation.ddpg.hidden_sizes == std::vector<std::size_t>{8, 8});
  CHECK(rc.eval.distances_m == std::vector<double>{10, 20, 52, 107, 207});
  CHECK(rc.eval.episodes == 20);
  CHECK(rc.config_hash.size() == 16);

  const RunConfig same = LoadRunConfig(DataPath("configs/protocol.cfg"), ov);
  CHECK(same.config_hash == rc.config_hash);
  ov.seed = 6;
  CHECK(LoadRunConfig(DataPath("configs/protocol.cfg"), ov).config_hash != rc.config_hash);
}

TEST_CASE("run config rejects unknown keys and missing files") {
  const auto dir = ScratchDir("cli_config");
  WriteTextFile(dir / "bad_key.cfg",
                "[run]\nscenario_file = " + DataPath("scenarios/quick.scn").string() +
                    "\n[federation]\nagnets = 3\n");
  CHECK_THROWS_AS(LoadRunConfig(dir / "bad_key.cfg", {}), ConfigError);
  WriteTextFile(dir / "bad_section.cfg",
                "[run]\nscenario_file = " + DataPath("scenarios/quick.scn").string() +
                    "\n[fed]\nagents = 3\n");
  CHECK_THROWS_AS(LoadRunConfig(dir / "bad_section.cfg", {}), ConfigError);
  CHECK_THROWS_AS(LoadRunConfig(dir / "absent.cfg", {}), ConfigError);
}

TEST_CASE("train: a missing network file is reported with its path") {
  const auto dir = ScratchDir("cli_missing_net");
  WriteTextFile(dir / "s.scn", "[scenario]\nnetwork_file = nowhere.net\nego_route = main\n");
  WriteTextFile(dir / "c.cfg", "[run]\nscenario_file = s.scn\n");
  CommandOptions o;
  o.config = dir / "c.cfg";
  o.out = dir / "out";
  const Run r = Invoke(CmdTrain, o);
  CHECK(r.status == 1);
  CHECK(r.err.find("nowhere.net") != std::string::npos);
  CHECK_FALSE(fs::exists(dir / "out"));
}

TEST_CASE("train: smoke run writes every artifact") {
  const auto dir = ScratchDir("cli_smoke");
  const Run r = Invoke(CmdTrain, SmokeTrain(dir));
  REQUIRE_MESSAGE(r.status == 0, r.err);
  CHECK(r.out.find("round 1: mean reward") != std::string::npos);
  for (const char* f : {"round_1.ckpt", "round_1.json", "rounds.csv", "agent_0.ckpt",
                        "manifest.json"}) {
    CHECK_MESSAGE(fs::exists(dir / f), f);
  }
  const auto manifest = nlohmann::json::parse(ReadTextFile(dir / "manifest.json"));
  CHECK(manifest["master_seed"] == 7);
  CHECK(manifest["checkpoints"][0] == "round_1.ckpt");
  CHECK(manifest["build"] == BuildId());
  const auto round = nlohmann::json::parse(ReadTextFile(dir / "round_1.json"));
  CHECK(round["round"] == 1);
  CHECK(round["config_hash"] == manifest["config_hash"]);
  CHECK(LineCount(ReadTextFile(dir / "rounds.csv")) == 2);
}

TEST_CASE("train: same config and seed give identical checkpoints") {
  const auto a = ScratchDir("cli_det_a");
  const auto b = ScratchDir("cli_det_b");
  REQUIRE(Invoke(CmdTrain, SmokeTrain(a)).status == 0);
  REQUIRE(Invoke(CmdTrain, SmokeTrain(b)).status == 0);
  CHECK(ReadTextFile(a / "round_1.ckpt") == ReadTextFile(b / "round_1.ckpt"));
  CHECK(ReadTextFile(a / "rounds.csv") == ReadTextFile(b / "rounds.csv"));
  auto other = SmokeTrain(ScratchDir("cli_det_c"));
  other.overrides.seed = 8;
  REQUIRE(Invoke(CmdTrain, other).status == 0);
  CHECK(ReadTextFile(a / "round_1.ckpt") != ReadTextFile(other.out / "round_1.ckpt"));
}

TEST_CASE("inspect, eval and export on a trained checkpoint") {
  const auto dir = ScratchDir("cli_post");
  REQUIRE(Invoke(CmdTrain, SmokeTrain(dir)).status == 0);

  CommandOptions o;
  o.checkpoints = {dir / "round_1.ckpt"};
  const Run ins = Invoke(CmdInspect, o);
  REQUIRE(ins.status == 0);
  CHECK(ins.out.find("kind: global") != std::string::npos);
  CHECK(ins.out.find("round: 1") != std::string::npos);
  CHECK(ins.out.find("network actor: sizes [6,400,300,1] activations [relu,relu,tanh] params "
                     "123401") != std::string::npos);
  CHECK(ins.out.find("n_i (round): 2 (sum 2)") != std::string::npos);

  o.config = DataPath("configs/smoke.cfg");
  o.out = dir / "eval";
  o.json = true;
  const Run ev = Invoke(CmdEval, o);
  REQUIRE_MESSAGE(ev.status == 0, ev.err);
  const auto rows = ParseCsv(ReadTextFile(dir / "eval" / "eval.csv"));
  REQUIRE(rows.size() == 6);
  CHECK(rows[1][0] == "round_1");
  CHECK(rows[1][1] == "10");
  CHECK(rows[5][1] == "207");
  CHECK(rows[5][2] == "2");
  CHECK(fs::exists(dir / "eval" / "eval.json"));

  CommandOptions x;
  x.checkpoints = {dir / "agent_0.ckpt"};
  x.out = dir / "export";
  REQUIRE(Invoke(CmdExport, x).status == 0);
  const auto j = nlohmann::json::parse(ReadTextFile(dir / "export" / "agent_0.json"));
  CHECK(j["meta"]["kind"] == "agent");
  CHECK(j["networks"]["actor"]["params"].size() == 123401);
}

TEST_CASE("inspect: truncated checkpoint is a clean error") {
  const auto dir = ScratchDir("cli_truncated");
  REQUIRE(Invoke(CmdTrain, SmokeTrain(dir)).status == 0);
  const std::string bytes = ReadTextFile(dir / "round_1.ckpt");
  WriteTextFile(dir / "cut.ckpt", bytes.substr(0, bytes.size() - 100));
  CommandOptions o;
  o.checkpoints = {dir / "cut.ckpt"};
  const Run r = Invoke(CmdInspect, o);
  CHECK(r.status == 1);
  CHECK(r.err.find("cut.ckpt") != std::string::npos);
  o.checkpoints = {dir / "none.ckpt"};
  CHECK(Invoke(CmdInspect, o).status == 1);
}

TEST_CASE("sim-run: constant action trace") {
  const auto dir = ScratchDir("cli_sim");
  CommandOptions o;
  o.scenario = DataPath("scenarios/empty_road.scn");
  o.out = dir;
  o.accel_mps2 = 0.0;
  const Run r = Invoke(CmdSimRun, o);
  REQUIRE(r.status == 0);
  CHECK(r.out.rfind("steps 900, cause max-steps, total reward ", 0) == 0);
  const auto rows = ParseCsv(ReadTextFile(dir / "trace.csv"));
  CHECK(rows.size() == 901);
  CHECK(rows.back().back() == "max-steps");

  o.scenario = DataPath("scenarios/crossing_collision.scn");
  const Run c = Invoke(CmdSimRun, o);
  CHECK(c.out.find("cause collision") != std::string::npos);

  o.scenario = dir / "missing.scn";
  CHECK(Invoke(CmdSimRun, o).status == 1);
}

}  // TEST_SUITE
