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

#ifndef FEDCAV_SIM_REWARD_H_
#define FEDCAV_SIM_REWARD_H_

namespace fedcav::sim {

// Per-step event flags of the ego vehicle.
struct EventFlags {
  bool collided = false;
  bool reached_destination = false;
  bool braking = false;
  bool waiting_at_light = false;
  bool speed_nonzero = false;
  // Speed at or above a configured fraction of the current speed limit.
  bool free_flow = false;

  bool operator==(const EventFlags&) const = default;
};

namespace reward {
inline constexpr double kCollision = -10.0;
inline constexpr double kDestination = 10.0;
inline constexpr double kBrakingAndWaiting = -0.05;
inline constexpr double kBrakingOrWaiting = 0.025;
inline constexpr double kFreeFlow = 0.05;
inline constexpr double kMoving = 0.04;
inline constexpr double kIdle = -0.02;
}  // namespace reward

// False when the flags cannot come from one step: a collision together with
// arrival, or free flow at zero speed.
bool FlagsConsistent(const EventFlags& flags);

// First matching case wins: collision, arrival, braking and waiting, braking
// or waiting, free flow, nonzero speed, otherwise idle.
// Throws InvalidArgumentError for inconsistent flags.
double ComputeReward(const EventFlags& flags);

}  // namespace fedcav::sim

#endif  // FEDCAV_SIM_REWARD_H_
