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

#include "fedcav/federation/reports.h"

#include <json.hpp>

#include "fedcav/base/error.h"
#include "fedcav/base/format.h"

namespace fedcav::federation {

std::string RoundsCsv(const std::vector<RoundReport>& reports) {
  std::string out = "round,agent_id,episodes,mean_reward,collisions,reached\n";
  for (const auto& r : reports) {
    for (const auto& a : r.agents) {
      out += std::to_string(r.round) + "," + std::to_string(a.agent_id) + "," +
             std::to_string(a.episodes) + "," + FormatDouble(a.mean_reward) + "," +
             std::to_string(a.collisions) + "," + std::to_string(a.reached) + "\n";
    }
  }
  return out;
}

void WriteRoundsCsv(const std::filesystem::path& path, const std::vector<RoundReport>& reports) {
  WriteTextFile(path, RoundsCsv(reports));
}

std::string RoundManifestJson(const nn::Checkpoint& c, const std::string& checkpoint_file) {
  nlohmann::ordered_json j;
  j["checkpoint"] = checkpoint_file;
  j["round"] = std::stoi(c.meta_value("round"));
  const int agents = std::stoi(c.meta_value("agents"));
  j["agents"] = agents;
  j["config_hash"] = c.meta_or("config_hash", "");
  nlohmann::ordered_json round_n = nlohmann::ordered_json::array();
  nlohmann::ordered_json total_n = nlohmann::ordered_json::array();
  for (int i = 0; i < agents; ++i) {
    round_n.push_back(std::stoull(c.meta_value("n_i." + std::to_string(i))));
    total_n.push_back(std::stoull(c.meta_value("n_i_total." + std::to_string(i))));
  }
  j["n_i"] = round_n;
  j["n_i_total"] = total_n;
  return j.dump(2) + "\n";
}

void WriteRoundManifest(const std::filesystem::path& path, const nn::Checkpoint& c) {
  auto ckpt = path;
  ckpt.replace_extension(".ckpt");
  WriteTextFile(path, RoundManifestJson(c, ckpt.filename().string()));
}

}  // namespace fedcav::federation
