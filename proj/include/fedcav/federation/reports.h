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

#ifndef FEDCAV_FEDERATION_REPORTS_H_
#define FEDCAV_FEDERATION_REPORTS_H_

#include <filesystem>
#include <string>
#include <vector>

#include "fedcav/federation/federation.h"
#include "fedcav/nn/checkpoint.h"

namespace fedcav::federation {

// Header: round,agent_id,episodes,mean_reward,collisions,reached
std::string RoundsCsv(const std::vector<RoundReport>& reports);
void WriteRoundsCsv(const std::filesystem::path& path, const std::vector<RoundReport>& reports);

// JSON beside a round checkpoint: round, agents, per-agent n_i for the round
// and in total, config hash and the checkpoint file name.
std::string RoundManifestJson(const nn::Checkpoint& checkpoint,
                              const std::string& checkpoint_file);
void WriteRoundManifest(const std::filesystem::path& path, const nn::Checkpoint& checkpoint);

}  // namespace fedcav::federation

#endif  // FEDCAV_FEDERATION_REPORTS_H_
