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

#include "fedcav/eval/metrics.h"

#include "fedcav/base/error.h"

namespace fedcav::eval {

void RolloutTrace::Append(const sim::StepOutcome& o) {
  steps.push_back({o.observation.speed, o.reward, o.displacement_m, o.free_flow_time_s});
  cause = o.cause;
}

double TravelDelay(const RolloutTrace& trace) {
  double free_time = 0.0;
  for (const auto& s : trace.steps) free_time += s.free_flow_time_s;
  return static_cast<double>(trace.steps.size()) * trace.step_length_s - free_time;
}

double AverageSpeed(const RolloutTrace& trace) {
  if (trace.steps.empty()) throw StateError("average speed of an empty trace");
  double sum = 0.0;
  for (const auto& s : trace.steps) sum += s.speed_mps;
  return sum / static_cast<double>(trace.steps.size());
}

EpisodeMetrics Summarize(const RolloutTrace& trace) {
  EpisodeMetrics m;
  for (const auto& s : trace.steps) m.total_reward += s.reward;
  m.steps = static_cast<int>(trace.steps.size());
  m.collided = trace.cause == sim::TerminationCause::kCollision;
  m.reached = trace.cause == sim::TerminationCause::kDestination;
  m.timed_out = trace.cause == sim::TerminationCause::kMaxSteps;
  m.travel_delay_s = TravelDelay(trace);
  m.average_speed_mps = AverageSpeed(trace);
  return m;
}

}  // namespace fedcav::eval
