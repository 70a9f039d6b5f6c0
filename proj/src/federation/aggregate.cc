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

#include "fedcav/federation/aggregate.h"

#include <algorithm>
#include <numeric>

#include "fedcav/base/error.h"
#include "fedcav/simd/kernels.h"

namespace fedcav::federation {

std::vector<double> WeightedAverage(std::span<const std::span<const double>> weights,
                                    std::span<const std::uint64_t> counts,
                                    std::span<const int> ids) {
  if (weights.empty()) throw InvalidArgumentError("aggregation over an empty update list");
  if (counts.size() != weights.size() || ids.size() != weights.size()) {
    throw InvalidArgumentError("weights, counts and ids differ in length");
  }
  const std::size_t n = weights.front().size();
  std::vector<std::size_t> order(weights.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return ids[a] < ids[b]; });
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (k > 0 && ids[order[k]] == ids[order[k - 1]]) {
      throw InvalidArgumentError("duplicate agent id " + std::to_string(ids[order[k]]));
    }
    if (counts[order[k]] == 0) {
      throw InvalidArgumentError("agent " + std::to_string(ids[order[k]]) +
                                 " reports zero episodes");
    }
    if (weights[order[k]].size() != n) {
      throw ShapeError("agent " + std::to_string(ids[order[k]]) + " sent " +
                       std::to_string(weights[order[k]].size()) + " weights, expected " +
                       std::to_string(n));
    }
  }

  const auto& k = simd::Active();
  // Compensated accumulation: near-zero averages of large opposite-signed
  // weights keep their relative accuracy.
  std::vector<double> sum(n, 0.0), err(n, 0.0);
  std::vector<double> lo(weights[order.front()].begin(), weights[order.front()].end());
  std::vector<double> hi = lo;
  double total = 0.0;
  for (std::size_t idx : order) {
    const double w = static_cast<double>(counts[idx]);
    k.axpy_compensated(w, weights[idx].data(), sum.data(), err.data(), n);
    k.min_max(weights[idx].data(), lo.data(), hi.data(), n);
    total += w;
  }
  for (std::size_t i = 0; i < n; ++i) sum[i] = (sum[i] + err[i]) / total;
  k.clamp(sum.data(), lo.data(), hi.data(), n);
  return sum;
}

AggregatedWeights Aggregate(std::span<const AgentUpdate> updates) {
  std::vector<std::span<const double>> actors, critics;
  std::vector<std::uint64_t> counts;
  std::vector<int> ids;
  for (const auto& u : updates) {
    actors.emplace_back(u.actor);
    critics.emplace_back(u.critic);
    counts.push_back(u.episodes);
    ids.push_back(u.agent_id);
  }
  return {WeightedAverage(actors, counts, ids), WeightedAverage(critics, counts, ids)};
}

}  // namespace fedcav::federation
