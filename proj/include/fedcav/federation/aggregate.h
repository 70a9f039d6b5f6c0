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

#ifndef FEDCAV_FEDERATION_AGGREGATE_H_
#define FEDCAV_FEDERATION_AGGREGATE_H_

#include <cstdint>
#include <span>
#include <vector>

namespace fedcav::federation {

// Everything an agent sends to the aggregator: flattened weights and the
// number of episodes behind them. Nothing else crosses this boundary.
struct AgentUpdate {
  int agent_id = 0;
  std::vector<double> actor;
  std::vector<double> critic;
  std::uint64_t episodes = 0;
};

struct AggregatedWeights {
  std::vector<double> actor;
  std::vector<double> critic;
};

// sum_i n_i w_i / sum_i n_i for one weight vector per update, accumulated in
// ascending agent id and clamped to the element-wise [min_i, max_i] hull.
// Throws InvalidArgumentError for an empty list, duplicate ids or n_i = 0,
// ShapeError for unequal lengths.
std::vector<double> WeightedAverage(std::span<const std::span<const double>> weights,
                                    std::span<const std::uint64_t> counts,
                                    std::span<const int> ids);

AggregatedWeights Aggregate(std::span<const AgentUpdate> updates);

}  // namespace fedcav::federation

#endif  // FEDCAV_FEDERATION_AGGREGATE_H_
