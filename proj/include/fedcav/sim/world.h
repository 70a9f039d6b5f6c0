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

#ifndef FEDCAV_SIM_WORLD_H_
#define FEDCAV_SIM_WORLD_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>
#include <utility>
#include <vector>

#include "fedcav/sim/reward.h"
#include "fedcav/sim/road_network.h"
#include "fedcav/sim/scenario.h"

namespace fedcav::sim {

enum class VehicleRole { kEgo, kBackground };

struct VehicleState {
  int id = 0;
  int edge = -1;
  double pos_m = 0.0;  // front bumper, measured from the edge's from-node
  int lane = 0;
  double speed_mps = 0.0;
  double accel_mps2 = 0.0;
  double length_m = 5.0;
  int route = -1;
  std::size_t route_index = 0;
  VehicleRole role = VehicleRole::kBackground;
  double max_speed_mps = 0.0;  // desired speed for background traffic, 0 = limit

  bool operator==(const VehicleState&) const = default;
};

struct EgoObservation {
  static constexpr std::size_t kSize = 6;

  double pos_x = 0.0;
  double pos_y = 0.0;
  double speed = 0.0;
  double heading = 0.0;
  double accel = 0.0;
  double dest_distance = 0.0;

  std::array<double, kSize> ToArray() const {
    return {pos_x, pos_y, speed, heading, accel, dest_distance};
  }
  bool operator==(const EgoObservation&) const = default;
};

enum class TerminationCause { kNone, kCollision, kDestination, kMaxSteps };

std::string_view TerminationName(TerminationCause cause);

struct StepOutcome {
  EgoObservation observation;
  double reward = 0.0;
  bool done = false;
  TerminationCause cause = TerminationCause::kNone;
  EventFlags flags;
  double displacement_m = 0.0;   // distance the ego travelled this step
  double free_flow_time_s = 0.0;  // displacement_m driven at the edge limits

  bool operator==(const StepOutcome&) const = default;
};

double DistanceToDestination(Vec2 pos, Vec2 dest);

// Discrete-time single-lane-per-vehicle traffic world with one controlled ego
// vehicle. Not thread-safe; separate instances are independent.
class World {
 public:
  // Throws ConfigError / InfeasibleError when the scenario is invalid.
  explicit World(ScenarioConfig scenario);

  EgoObservation Reset(std::uint64_t episode_seed);

  // Applies an ego acceleration (clamped to the scenario bounds), advances
  // background traffic and time by one step. Throws StateError before Reset or
  // after the episode ended, NumericError for a non-finite action.
  StepOutcome Step(double accel_mps2);

  // Advances background vehicles one step at the current time. Step() calls
  // this; it is public for tests.
  void BackgroundStep();

  bool CollisionCheck() const;

  // True when no two background vehicles overlap on any edge and lane.
  bool BackgroundOverlapFree() const;

  EgoObservation Observe() const;
  Vec2 PositionOf(const VehicleState& v) const;

  // Moves the destination for subsequent episodes. Throws InfeasibleError when
  // the ego route does not pass within tolerance of `dest`.
  void SetDestination(Vec2 dest);
  Vec2 destination() const { return destination_; }

  // Test fixtures: place vehicles directly. The vehicle is validated against
  // the network; ids are assigned by the world.
  void AddBackgroundVehicle(VehicleState v);
  VehicleState& mutable_ego() { return ego_; }

  const ScenarioConfig& scenario() const { return scenario_; }
  const RoadNetwork& network() const { return *scenario_.network; }
  const VehicleState& ego() const { return ego_; }
  const std::vector<VehicleState>& background() const { return background_; }
  double time_s() const { return time_s_; }
  int steps() const { return steps_; }
  bool done() const { return done_; }

  // Red light at the end of `edge` for traffic on that edge at `time_s`.
  bool RedAtEdgeEnd(int edge, double time_s) const;
  // Background traffic halts this far before a red edge end so that it stays
  // out of the intersection box.
  double StopLine(int edge) const;

 private:
  struct Segment {
    int edge;
    int lane;
    double lo;  // exclusive
    double hi;  // inclusive
  };

  int Segments(const VehicleState& v, Segment out[2]) const;
  static int LaneOn(const VehicleState& v, const Edge& e);
  bool SegmentsOverlap(const VehicleState& a, const VehicleState& b) const;
  bool IntersectionConflict(const VehicleState& a, const VehicleState& b) const;
  double SafeSpeed(double gap_m, double leader_speed_mps) const;
  // Gap from v's front to the nearest body ahead (same or next route edge)
  // and that body's speed.
  std::pair<double, double> Leader(const VehicleState& v) const;
  void SpawnDue();
  bool SpawnSpotFree(const VehicleState& candidate) const;
  int NextEdge(const VehicleState& v) const;
  // Moves the ego `distance_m` along its route, appending node crossings and
  // the end point to `path`. Returns the distance actually covered.
  double AdvanceEgo(double distance_m, std::vector<Vec2>* path,
                    double* free_flow_time_s);
  bool EgoWaitingAtLight() const;

  ScenarioConfig scenario_;
  Vec2 destination_;
  std::mt19937_64 rng_;
  VehicleState ego_;
  std::vector<VehicleState> background_;
  std::vector<SpawnSpec> pending_;
  int next_id_ = 1;
  double time_s_ = 0.0;
  int steps_ = 0;
  bool started_ = false;
  bool done_ = false;
};

}  // namespace fedcav::sim

#endif  // FEDCAV_SIM_WORLD_H_
