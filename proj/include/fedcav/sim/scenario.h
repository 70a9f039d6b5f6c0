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

#ifndef FEDCAV_SIM_SCENARIO_H_
#define FEDCAV_SIM_SCENARIO_H_

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fedcav/base/kv_config.h"
#include "fedcav/sim/road_network.h"

namespace fedcav::sim {

// One scheduled background departure.
struct SpawnSpec {
  double time_s = 0.0;
  int route = -1;
  int lane = 0;
  double pos_m = 0.0;  // front bumper position on the route's first edge
  double speed_mps = 0.0;
  double max_speed_mps = 0.0;  // desired speed; 0 means the edge limit
};

struct ScenarioConfig {
  std::shared_ptr<const RoadNetwork> network;
  std::string network_path;

  int ego_route = -1;
  std::optional<int> dest_node;
  std::optional<Vec2> dest_point;  // overrides dest_node when set
  double dest_tolerance_m = 5.0;
  double step_length_s = 1.0;
  int max_steps = 900;
  std::uint64_t seed = 0;

  double ego_length_m = 5.0;
  double accel_min_mps2 = -4.5;
  double accel_max_mps2 = 2.6;

  int background_count = 0;  // extra random departures per episode
  double spawn_horizon_s = 60.0;
  std::vector<SpawnSpec> spawns;
  double background_length_m = 5.0;
  double background_accel_max_mps2 = 2.6;
  double background_decel_mps2 = 4.5;
  double min_gap_m = 2.5;

  double braking_threshold_mps2 = -0.5;
  double waiting_speed_mps = 0.1;
  double waiting_distance_m = 15.0;
  double free_flow_fraction = 0.5;
  double intersection_radius_m = 3.0;
  double crossing_angle_deg = 15.0;

  Vec2 Destination() const;
  // Throws ConfigError (or InfeasibleError for an unreachable destination).
  void Validate() const;
};

// Reads a scenario file:
//
//   [scenario]  network_file, ego_route, dest_node | dest_x_m + dest_y_m,
//               dest_tolerance_m, step_length_s, max_steps, seed
//   [ego]       length_m, accel_min_mps2, accel_max_mps2
//   [background] count, spawn_horizon_s, length_m, accel_max_mps2,
//               decel_mps2, min_gap_m,
//               spawn = <time_s> <route> <lane> <pos_m> <speed_mps> [<max_speed_mps>]
//   [events]    braking_threshold_mps2, waiting_speed_mps, waiting_distance_m,
//               free_flow_fraction, intersection_radius_m, crossing_angle_deg
//
// network_file is resolved relative to the scenario file.
ScenarioConfig ParseScenario(const KvFile& file);
ScenarioConfig LoadScenario(const std::filesystem::path& path);

// Smallest distance from `point` to the polyline of `route`.
double DistanceToRoute(const RoadNetwork& net, int route, Vec2 point);

// First point along `route` whose straight-line distance from the route start
// equals `distance_m`. Throws InfeasibleError listing the feasible range.
Vec2 PointAtStraightLineDistance(const RoadNetwork& net, int route,
                                 double distance_m);

}  // namespace fedcav::sim

#endif  // FEDCAV_SIM_SCENARIO_H_
