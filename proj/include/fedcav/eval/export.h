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

#ifndef FEDCAV_EVAL_EXPORT_H_
#define FEDCAV_EVAL_EXPORT_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "fedcav/eval/evaluate.h"

namespace fedcav::eval {

// Header: policy_id,distance_m,episodes,collisions,mean_travel_delay_s,
// mean_avg_speed_mps,success_rate. One row per (policy, distance). Numbers
// use shortest round-trip formatting, "nan" for a missing mean.
std::string SummariesCsv(const std::vector<EvalSummary>& summaries);
void ExportCsv(const std::vector<EvalSummary>& summaries, const std::filesystem::path& path);

// Reads the rows back; per-episode metrics, successes and timeouts are not
// part of the file and stay empty or derived from success_rate.
std::vector<EvalSummary> ParseSummariesCsv(std::string_view text);

// Same fields as the CSV, as {"rows": [...]}.
std::string SummariesJson(const std::vector<EvalSummary>& summaries);
void ExportJson(const std::vector<EvalSummary>& summaries, const std::filesystem::path& path);

}  // namespace fedcav::eval

#endif  // FEDCAV_EVAL_EXPORT_H_
