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

#include "fedcav/sim/reward.h"

#include "fedcav/base/error.h"

namespace fedcav::sim {

bool FlagsConsistent(const EventFlags& f) {
  if (f.collided && f.reached_destination) return false;
  if (f.free_flow && !f.speed_nonzero) return false;
  return true;
}

double ComputeReward(const EventFlags& f) {
  if (!FlagsConsistent(f)) throw InvalidArgumentError("inconsistent event flags");
  if (f.collided) return reward::kCollision;
  if (f.reached_destination) return reward::kDestination;
  if (f.braking && f.waiting_at_light) return reward::kBrakingAndWaiting;
  if (f.braking != f.waiting_at_light) return reward::kBrakingOrWaiting;
  if (f.free_flow) return reward::kFreeFlow;
  if (f.speed_nonzero) return reward::kMoving;
  return reward::kIdle;
}

}  // namespace fedcav::sim
