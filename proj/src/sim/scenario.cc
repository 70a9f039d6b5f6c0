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

#include "fedcav/sim/scenario.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

#include "fedcav/base/error.h"

namespace fedcav::sim {

namespace {

double SegmentDistance(Vec2 p, Vec2 a, Vec2 b) {
  const double dx = b.x - a.x, dy = b.y - a.y;
  const double len2 = dx * dx + dy * dy;
  double t = len2 > 0.0 ? ((p.x - a.x) * dx + (p.y - a.y) * dy) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return Distance(p, {a.x + t * dx, a.y + t * dy});
}

std::string Num(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

template <typename T>
T Field(std::string_view tok, const char* what) {
  T v{};
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw ConfigError(std::string("[background] spawn: invalid ") + what + " '" +
                      std::string(tok) + "'");
  }
  return v;
}

int RouteIndex(const RoadNetwork& net, std::string_view name) {
  auto r = net.FindRoute(name);
  if (!r) throw ConfigError("unknown route '" + std::string(name) + "'");
  return *r;
}

}  // namespace

double DistanceToRoute(const RoadNetwork& net, int route, Vec2 point) {
  double best = std::numeric_limits<double>::infinity();
  for (int e : net.routes()[route].edges) {
    const Edge& edge = net.edges()[e];
    best = std::min(best, SegmentDistance(point, net.nodes()[edge.from].pos,
                                          net.nodes()[edge.to].pos));
  }
  return best;
}

Vec2 PointAtStraightLineDistance(const RoadNetwork& net, int route,
                                 double distance_m) {
  const auto& edges = net.routes()[route].edges;
  const Vec2 start = net.nodes()[net.edges()[edges.front()].from].pos;
  double max_reach = 0.0;
  for (int e : edges) {
    const Edge& edge = net.edges()[e];
    const Vec2 a = net.nodes()[edge.from].pos;
    const Vec2 b = net.nodes()[edge.to].pos;
    const double da = Distance(start, a);
    const double db = Distance(start, b);
    max_reach = std::max(max_reach, db);
    if (distance_m >= std::min(da, db) - 1e-9 && distance_m <= std::max(da, db) + 1e-9) {
      // Solve |a + t (b - a) - start| = distance for the smallest t in [0, 1].
      const double dx = b.x - a.x, dy = b.y - a.y;
      const double ox = a.x - start.x, oy = a.y - start.y;
      const double qa = dx * dx + dy * dy;
      const double qb = 2.0 * (ox * dx + oy * dy);
      const double qc = ox * ox + oy * oy - distance_m * distance_m;
      const double disc = std::max(0.0, qb * qb - 4.0 * qa * qc);
      const double root = std::sqrt(disc);
      double best = 2.0;
      for (double t : {(-qb - root) / (2.0 * qa), (-qb + root) / (2.0 * qa)}) {
        if (t >= -1e-12 && t <= 1.0 + 1e-12) best = std::min(best, t);
      }
      if (best <= 1.0) {
        best = std::clamp(best, 0.0, 1.0);
        return {a.x + best * dx, a.y + best * dy};
      }
    }
  }
  throw InfeasibleError("distance " + Num(distance_m) + " m is not reachable on route '" +
                        net.routes()[route].name + "'; feasible range is [0, " +
                        Num(max_reach) + "] m");
}

Vec2 ScenarioConfig::Destination() const {
  if (dest_point) return *dest_point;
  return network->nodes()[*dest_node].pos;
}

void ScenarioConfig::Validate() const {
  if (!network) throw ConfigError("scenario has no road network");
  const auto& net = *network;
  if (ego_route < 0 || ego_route >= static_cast<int>(net.routes().size())) {
    throw ConfigError("scenario ego_route is not set");
  }
  if (!dest_point && !dest_node) throw ConfigError("scenario has no destination");
  if (dest_node && (*dest_node < 0 || *dest_node >= static_cast<int>(net.nodes().size()))) {
    throw ConfigError("scenario dest_node out of range");
  }
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw ConfigError(std::string(name) + " must be > 0");
    }
  };
  positive(dest_tolerance_m, "dest_tolerance_m");
  positive(step_length_s, "step_length_s");
  positive(ego_length_m, "ego length_m");
  positive(background_length_m, "background length_m");
  positive(background_accel_max_mps2, "background accel_max_mps2");
  positive(background_decel_mps2, "background decel_mps2");
  positive(intersection_radius_m, "intersection_radius_m");
  if (max_steps < 1) throw ConfigError("max_steps must be >= 1");
  if (!(accel_min_mps2 < 0.0 && accel_max_mps2 > 0.0)) {
    throw ConfigError("ego acceleration bounds must satisfy min < 0 < max");
  }
  if (background_count < 0) throw ConfigError("background count must be >= 0");
  if (background_count > 0 && net.routes().empty()) {
    throw ConfigError("random background traffic needs at least one route");
  }
  if (!(spawn_horizon_s >= 0.0)) throw ConfigError("spawn_horizon_s must be >= 0");
  if (!(min_gap_m >= 0.0)) throw ConfigError("min_gap_m must be >= 0");
  if (!(free_flow_fraction > 0.0 && free_flow_fraction <= 1.0)) {
    throw ConfigError("free_flow_fraction must be in (0, 1]");
  }
  if (!(crossing_angle_deg >= 0.0 && crossing_angle_deg < 90.0)) {
    throw ConfigError("crossing_angle_deg must be in [0, 90)");
  }
  for (const auto& s : spawns) {
    if (s.route < 0 || s.route >= static_cast<int>(net.routes().size())) {
      throw ConfigError("spawn route out of range");
    }
    const Edge& first = net.edges()[net.routes()[s.route].edges.front()];
    if (s.lane < 0 || s.lane >= first.lanes) throw ConfigError("spawn lane out of range");
    if (s.pos_m < 0.0 || s.pos_m > first.length_m) {
      throw ConfigError("spawn position outside the first route edge");
    }
    if (s.speed_mps < 0.0 || s.max_speed_mps < 0.0 || s.time_s < 0.0) {
      throw ConfigError("spawn time and speeds must be >= 0");
    }
  }
  const double gap = DistanceToRoute(net, ego_route, Destination());
  if (gap > dest_tolerance_m) {
    throw InfeasibleError("destination is " + Num(gap) + " m from ego route '" +
                          net.routes()[ego_route].name + "' (tolerance " +
                          Num(dest_tolerance_m) + " m)");
  }
}

ScenarioConfig ParseScenario(const KvFile& file) {
  file.RequireKnownKeys("", {});
  file.RequireKnownKeys("scenario", {"network_file", "ego_route", "dest_node", "dest_x_m",
                                     "dest_y_m", "dest_tolerance_m", "step_length_s",
                                     "max_steps", "seed"});
  file.RequireKnownKeys("ego", {"length_m", "accel_min_mps2", "accel_max_mps2"});
  file.RequireKnownKeys("background", {"count", "spawn_horizon_s", "length_m",
                                       "accel_max_mps2", "decel_mps2", "min_gap_m",
                                       "spawn"});
  file.RequireKnownKeys("events", {"braking_threshold_mps2", "waiting_speed_mps",
                                   "waiting_distance_m", "free_flow_fraction",
                                   "intersection_radius_m", "crossing_angle_deg"});

  ScenarioConfig s;
  const auto net_file = file.Get("scenario", "network_file");
  if (!net_file) throw ConfigError("[scenario] network_file is required");
  const auto net_path = file.ResolvePath(*net_file);
  s.network_path = net_path.string();
  s.network = std::make_shared<RoadNetwork>(RoadNetwork::Load(net_path));
  const auto& net = *s.network;

  const auto route = file.Get("scenario", "ego_route");
  if (!route) throw ConfigError("[scenario] ego_route is required");
  s.ego_route = RouteIndex(net, *route);

  if (file.Has("scenario", "dest_x_m") || file.Has("scenario", "dest_y_m")) {
    if (!file.Has("scenario", "dest_x_m") || !file.Has("scenario", "dest_y_m")) {
      throw ConfigError("[scenario] dest_x_m and dest_y_m must be given together");
    }
    s.dest_point = Vec2{file.GetDouble("scenario", "dest_x_m", 0.0),
                        file.GetDouble("scenario", "dest_y_m", 0.0)};
  } else if (const auto dest = file.Get("scenario", "dest_node")) {
    const auto node = net.FindNode(*dest);
    if (!node) throw ConfigError("unknown dest_node '" + *dest + "'");
    s.dest_node = *node;
  } else {
    // Default: the end of the ego route.
    s.dest_node = net.edges()[net.routes()[s.ego_route].edges.back()].to;
  }
  s.dest_tolerance_m = file.GetDouble("scenario", "dest_tolerance_m", s.dest_tolerance_m);
  s.step_length_s = file.GetDouble("scenario", "step_length_s", s.step_length_s);
  s.max_steps = static_cast<int>(file.GetInt("scenario", "max_steps", s.max_steps));
  s.seed = file.GetUint64("scenario", "seed", s.seed);

  s.ego_length_m = file.GetDouble("ego", "length_m", s.ego_length_m);
  s.accel_min_mps2 = file.GetDouble("ego", "accel_min_mps2", s.accel_min_mps2);
  s.accel_max_mps2 = file.GetDouble("ego", "accel_max_mps2", s.accel_max_mps2);

  s.background_count = static_cast<int>(file.GetInt("background", "count", 0));
  s.spawn_horizon_s = file.GetDouble("background", "spawn_horizon_s", s.spawn_horizon_s);
  s.background_length_m = file.GetDouble("background", "length_m", s.background_length_m);
  s.background_accel_max_mps2 =
      file.GetDouble("background", "accel_max_mps2", s.background_accel_max_mps2);
  s.background_decel_mps2 =
      file.GetDouble("background", "decel_mps2", s.background_decel_mps2);
  s.min_gap_m = file.GetDouble("background", "min_gap_m", s.min_gap_m);
  for (const auto& line : file.GetAll("background", "spawn")) {
    std::vector<std::string_view> tok;
    std::string_view rest = line;
    while (!rest.empty()) {
      rest = Trim(rest);
      const auto sp = rest.find_first_of(" \t");
      tok.push_back(rest.substr(0, sp));
      rest = sp == std::string_view::npos ? std::string_view{} : rest.substr(sp);
    }
    if (tok.size() != 5 && tok.size() != 6) {
      throw ConfigError(
          "[background] spawn expects '<time_s> <route> <lane> <pos_m> <speed_mps> "
          "[<max_speed_mps>]', got '" + line + "'");
    }
    SpawnSpec spawn;
    spawn.time_s = Field<double>(tok[0], "time");
    spawn.route = RouteIndex(net, tok[1]);
    spawn.lane = Field<int>(tok[2], "lane");
    spawn.pos_m = Field<double>(tok[3], "position");
    spawn.speed_mps = Field<double>(tok[4], "speed");
    if (tok.size() == 6) spawn.max_speed_mps = Field<double>(tok[5], "max speed");
    s.spawns.push_back(spawn);
  }

  s.braking_threshold_mps2 =
      file.GetDouble("events", "braking_threshold_mps2", s.braking_threshold_mps2);
  s.waiting_speed_mps = file.GetDouble("events", "waiting_speed_mps", s.waiting_speed_mps);
  s.waiting_distance_m = file.GetDouble("events", "waiting_distance_m", s.waiting_distance_m);
  s.free_flow_fraction = file.GetDouble("events", "free_flow_fraction", s.free_flow_fraction);
  s.intersection_radius_m =
      file.GetDouble("events", "intersection_radius_m", s.intersection_radius_m);
  s.crossing_angle_deg = file.GetDouble("events", "crossing_angle_deg", s.crossing_angle_deg);

  s.Validate();
  return s;
}

ScenarioConfig LoadScenario(const std::filesystem::path& path) {
  const KvFile file = KvFile::Load(path);
  try {
    return ParseScenario(file);
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

}  // namespace fedcav::sim
