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

#include "fedcav/eval/export.h"

#include <cmath>

#include <json.hpp>

#include "fedcav/base/error.h"
#include "fedcav/base/format.h"

namespace fedcav::eval {

namespace {

constexpr std::string_view kHeader =
    "policy_id,distance_m,episodes,collisions,mean_travel_delay_s,mean_avg_speed_mps,"
    "success_rate";

}  // namespace

std::string SummariesCsv(const std::vector<EvalSummary>& summaries) {
  std::string out(kHeader);
  out += '\n';
  for (const auto& s : summaries) {
    for (const auto& r : s.rows) {
      out += CsvField(s.policy_id) + "," + FormatDouble(r.distance_m) + "," +
             std::to_string(r.episodes) + "," + std::to_string(r.collisions) + "," +
             FormatDouble(r.mean_travel_delay_s) + "," + FormatDouble(r.mean_avg_speed_mps) +
             "," + FormatDouble(r.success_rate) + "\n";
    }
  }
  return out;
}

void ExportCsv(const std::vector<EvalSummary>& summaries, const std::filesystem::path& path) {
  WriteTextFile(path, SummariesCsv(summaries));
}

std::vector<EvalSummary> ParseSummariesCsv(std::string_view text) {
  const auto rows = ParseCsv(text);
  if (rows.empty()) throw ParseError("missing CSV header", 1);
  std::string header;
  for (std::size_t i = 0; i < rows[0].size(); ++i) header += (i ? "," : "") + rows[0][i];
  if (header != kHeader) throw ParseError("unexpected CSV header", 1);
  std::vector<EvalSummary> out;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& f = rows[i];
    const int line = static_cast<int>(i + 1);
    if (f.size() != 7) throw ParseError("expected 7 fields", line);
    if (out.empty() || out.back().policy_id != f[0]) out.push_back({f[0], {}});
    DistanceSummary r;
    try {
      r.distance_m = ParseDouble(f[1]);
      r.episodes = std::stoi(f[2]);
      r.collisions = std::stoi(f[3]);
      r.mean_travel_delay_s = ParseDouble(f[4]);
      r.mean_avg_speed_mps = ParseDouble(f[5]);
      r.success_rate = ParseDouble(f[6]);
    } catch (const std::logic_error&) {
      throw ParseError("invalid integer field", line);
    } catch (const ParseError& e) {
      throw ParseError(e.what(), line);
    }
    r.successes = static_cast<int>(std::lround(r.success_rate * r.episodes));
    out.back().rows.push_back(r);
  }
  return out;
}

std::string SummariesJson(const std::vector<EvalSummary>& summaries) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  auto num = [](double v) -> nlohmann::ordered_json {
    if (std::isfinite(v)) return v;
    return nullptr;
  };
  for (const auto& s : summaries) {
    for (const auto& r : s.rows) {
      nlohmann::ordered_json j;
      j["policy_id"] = s.policy_id;
      j["distance_m"] = r.distance_m;
      j["episodes"] = r.episodes;
      j["collisions"] = r.collisions;
      j["mean_travel_delay_s"] = num(r.mean_travel_delay_s);
      j["mean_avg_speed_mps"] = num(r.mean_avg_speed_mps);
      j["success_rate"] = r.success_rate;
      rows.push_back(j);
    }
  }
  nlohmann::ordered_json doc;
  doc["rows"] = rows;
  return doc.dump(2) + "\n";
}

void ExportJson(const std::vector<EvalSummary>& summaries, const std::filesystem::path& path) {
  WriteTextFile(path, SummariesJson(summaries));
}

}  // namespace fedcav::eval
