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

#ifndef FEDCAV_EVAL_METRICS_H_
#define FEDCAV_EVAL_METRICS_H_

#include <vector>

#include "fedcav/sim/world.h"

namespace fedcav::eval {

struct StepRecord {
  double speed_mps = 0.0;
  double reward = 0.0;
  double displacement_m = 0.0;
  double free_flow_time_s = 0.0;
};

// Per-step ego record of one episode.
struct RolloutTrace {
  double step_length_s = 1.0;
  std::vector<StepRecord> steps;
  sim::TerminationCause cause = sim::TerminationCause::kNone;

  void Append(const sim::StepOutcome& outcome);
};

struct EpisodeMetrics {
  double total_reward = 0.0;
  int steps = 0;
  bool collided = false;
  bool reached = false;
  bool timed_out = false;
  // Over the distance actually driven; see the flags for failed episodes.
  double travel_delay_s = 0.0;
  double average_speed_mps = 0.0;

  bool operator==(const EpisodeMetrics&) const = default;
};

// Elapsed time minus the time the driven distance takes at the speed limits.
double TravelDelay(const RolloutTrace& trace);
// Sum of per-step speeds divided by the step count. Throws StateError on an
// empty trace.
double AverageSpeed(const RolloutTrace& trace);
EpisodeMetrics Summarize(const RolloutTrace& trace);

}  // namespace fedcav::eval

#endif  // FEDCAV_EVAL_METRICS_H_
