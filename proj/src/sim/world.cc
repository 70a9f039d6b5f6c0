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

#include "fedcav/sim/world.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "fedcav/base/error.h"
#include "fedcav/base/hash.h"

namespace fedcav::sim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double SegmentDistance(Vec2 p, Vec2 a, Vec2 b) {
  const double dx = b.x - a.x, dy = b.y - a.y;
  const double len2 = dx * dx + dy * dy;
  double t = len2 > 0.0 ? ((p.x - a.x) * dx + (p.y - a.y) * dy) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return Distance(p, {a.x + t * dx, a.y + t * dy});
}

}  // namespace

std::string_view TerminationName(TerminationCause cause) {
  switch (cause) {
    case TerminationCause::kNone:
      return "none";
    case TerminationCause::kCollision:
      return "collision";
    case TerminationCause::kDestination:
      return "destination";
    case TerminationCause::kMaxSteps:
      return "max-steps";
  }
  return "unknown";
}

double DistanceToDestination(Vec2 pos, Vec2 dest) { return Distance(pos, dest); }

World::World(ScenarioConfig scenario) : scenario_(std::move(scenario)) {
  scenario_.Validate();
  destination_ = scenario_.Destination();
}

void World::SetDestination(Vec2 dest) {
  const double gap = DistanceToRoute(network(), scenario_.ego_route, dest);
  if (gap > scenario_.dest_tolerance_m) {
    throw InfeasibleError("destination is " + std::to_string(gap) +
                          " m away from the ego route");
  }
  destination_ = dest;
}

EgoObservation World::Reset(std::uint64_t episode_seed) {
  const auto& net = network();
  rng_.seed(DeriveSeed(scenario_.seed, 0, episode_seed));

  const Route& route = net.routes()[scenario_.ego_route];
  ego_ = VehicleState{};
  ego_.id = 0;
  ego_.edge = route.edges.front();
  ego_.length_m = scenario_.ego_length_m;
  ego_.route = scenario_.ego_route;
  ego_.role = VehicleRole::kEgo;

  background_.clear();
  pending_ = scenario_.spawns;
  if (scenario_.background_count > 0) {
    std::uniform_int_distribution<int> pick_route(
        0, static_cast<int>(net.routes().size()) - 1);
    std::uniform_real_distribution<double> pick_time(0.0, scenario_.spawn_horizon_s);
    for (int k = 0; k < scenario_.background_count; ++k) {
      SpawnSpec s;
      s.route = pick_route(rng_);
      s.time_s = pick_time(rng_);
      const Edge& first = net.edges()[net.routes()[s.route].edges.front()];
      s.lane = std::uniform_int_distribution<int>(0, first.lanes - 1)(rng_);
      s.pos_m = std::min(scenario_.background_length_m, first.length_m);
      pending_.push_back(s);
    }
  }
  std::stable_sort(pending_.begin(), pending_.end(),
                   [](const SpawnSpec& a, const SpawnSpec& b) { return a.time_s < b.time_s; });

  next_id_ = 1;
  time_s_ = 0.0;
  steps_ = 0;
  started_ = true;
  done_ = false;
  SpawnDue();
  return Observe();
}

Vec2 World::PositionOf(const VehicleState& v) const {
  return network().PointOnEdge(v.edge, v.pos_m);
}

EgoObservation World::Observe() const {
  const Vec2 p = PositionOf(ego_);
  EgoObservation o;
  o.pos_x = p.x;
  o.pos_y = p.y;
  o.speed = ego_.speed_mps;
  o.heading = network().edges()[ego_.edge].heading_rad;
  o.accel = ego_.accel_mps2;
  o.dest_distance = DistanceToDestination(p, destination_);
  return o;
}

bool World::RedAtEdgeEnd(int edge, double time_s) const {
  const Edge& e = network().edges()[edge];
  const TrafficLight* light = network().LightAt(e.to);
  return light != nullptr && !light->IsGreenFor(e, time_s);
}

double World::StopLine(int edge) const {
  return std::max(0.0, network().edges()[edge].length_m - scenario_.intersection_radius_m);
}

int World::LaneOn(const VehicleState& v, const Edge& e) {
  return std::min(v.lane, e.lanes - 1);
}

int World::NextEdge(const VehicleState& v) const {
  const auto& edges = network().routes()[v.route].edges;
  return v.route_index + 1 < edges.size() ? edges[v.route_index + 1] : -1;
}

int World::Segments(const VehicleState& v, Segment out[2]) const {
  const auto& net = network();
  out[0] = {v.edge, LaneOn(v, net.edges()[v.edge]), v.pos_m - v.length_m, v.pos_m};
  int count = 1;
  const double tail = v.pos_m - v.length_m;
  if (tail < 0.0 && v.route_index > 0) {
    const int prev = net.routes()[v.route].edges[v.route_index - 1];
    const Edge& pe = net.edges()[prev];
    out[1] = {prev, LaneOn(v, pe), pe.length_m + tail, pe.length_m};
    count = 2;
  }
  return count;
}

bool World::SegmentsOverlap(const VehicleState& a, const VehicleState& b) const {
  Segment sa[2], sb[2];
  const int na = Segments(a, sa);
  const int nb = Segments(b, sb);
  for (int i = 0; i < na; ++i) {
    for (int j = 0; j < nb; ++j) {
      if (sa[i].edge == sb[j].edge && sa[i].lane == sb[j].lane &&
          sa[i].lo < sb[j].hi && sb[j].lo < sa[i].hi) {
        return true;
      }
    }
  }
  return false;
}

bool World::IntersectionConflict(const VehicleState& a, const VehicleState& b) const {
  const auto& net = network();
  const double r = scenario_.intersection_radius_m;
  auto boxes = [&](const VehicleState& v, int out[2]) {
    const Edge& e = net.edges()[v.edge];
    int n = 0;
    if (v.pos_m > e.length_m - r) out[n++] = e.to;
    if (v.pos_m - v.length_m < r) out[n++] = e.from;
    return n;
  };
  int ba[2], bb[2];
  const int na = boxes(a, ba);
  const int nb = boxes(b, bb);
  const double ha = net.edges()[a.edge].heading_rad;
  const double hb = net.edges()[b.edge].heading_rad;
  const double min_sin = std::sin(scenario_.crossing_angle_deg * std::numbers::pi / 180.0);
  if (!(std::abs(std::sin(ha - hb)) > min_sin)) return false;
  for (int i = 0; i < na; ++i) {
    for (int j = 0; j < nb; ++j) {
      if (ba[i] == bb[j]) return true;
    }
  }
  return false;
}

bool World::CollisionCheck() const {
  for (const auto& b : background_) {
    if (SegmentsOverlap(ego_, b) || IntersectionConflict(ego_, b)) return true;
  }
  return false;
}

bool World::BackgroundOverlapFree() const {
  for (std::size_t i = 0; i < background_.size(); ++i) {
    for (std::size_t j = i + 1; j < background_.size(); ++j) {
      if (SegmentsOverlap(background_[i], background_[j])) return false;
    }
  }
  return true;
}

double World::SafeSpeed(double gap_m, double leader_speed_mps) const {
  const double g = std::max(gap_m, 0.0);
  const double dt = scenario_.step_length_s;
  const double bt = scenario_.background_decel_mps2 * dt;
  const double krauss =
      -bt + std::sqrt(bt * bt + leader_speed_mps * leader_speed_mps +
                      2.0 * scenario_.background_decel_mps2 * g);
  return std::min(krauss, g / dt);
}

std::pair<double, double> World::Leader(const VehicleState& v) const {
  const auto& net = network();
  const Edge& e = net.edges()[v.edge];
  const int lane = LaneOn(v, e);
  const int next = NextEdge(v);
  const int next_lane = next >= 0 ? LaneOn(v, net.edges()[next]) : -1;
  double best = kInf;
  double leader_speed = 0.0;
  auto consider = [&](const VehicleState& u) {
    if (u.id == v.id) return;
    Segment s[2];
    const int n = Segments(u, s);
    for (int i = 0; i < n; ++i) {
      double gap;
      if (s[i].edge == v.edge && s[i].lane == lane && s[i].hi > v.pos_m) {
        gap = s[i].lo - v.pos_m;
      } else if (next >= 0 && s[i].edge == next && s[i].lane == next_lane) {
        gap = (e.length_m - v.pos_m) + s[i].lo;
      } else {
        continue;
      }
      if (gap < best) {
        best = gap;
        leader_speed = u.speed_mps;
      }
    }
  };
  consider(ego_);
  for (const auto& u : background_) consider(u);
  return {best, leader_speed};
}

bool World::SpawnSpotFree(const VehicleState& c) const {
  Segment sc[2];
  const int nc = Segments(c, sc);
  auto clear_of = [&](const VehicleState& u) {
    Segment su[2];
    const int nu = Segments(u, su);
    for (int i = 0; i < nc; ++i) {
      for (int j = 0; j < nu; ++j) {
        if (sc[i].edge != su[j].edge || sc[i].lane != su[j].lane) continue;
        const bool behind = sc[i].lo - su[j].hi >= scenario_.min_gap_m;
        const bool ahead = su[j].lo - sc[i].hi >= scenario_.min_gap_m;
        if (!behind && !ahead) return false;
      }
    }
    return true;
  };
  if (!clear_of(ego_) || IntersectionConflict(ego_, c)) return false;
  for (const auto& u : background_) {
    if (!clear_of(u)) return false;
  }
  return true;
}

void World::SpawnDue() {
  const auto& net = network();
  std::vector<SpawnSpec> waiting;
  for (const auto& s : pending_) {
    if (s.time_s > time_s_) {
      waiting.push_back(s);
      continue;
    }
    VehicleState v;
    v.id = next_id_;
    v.route = s.route;
    v.route_index = 0;
    v.edge = net.routes()[s.route].edges.front();
    v.pos_m = s.pos_m;
    v.lane = s.lane;
    v.length_m = scenario_.background_length_m;
    v.max_speed_mps = s.max_speed_mps;
    v.speed_mps = std::min(s.speed_mps, net.edges()[v.edge].speed_limit_mps);
    if (v.max_speed_mps > 0.0) v.speed_mps = std::min(v.speed_mps, v.max_speed_mps);
    v.role = VehicleRole::kBackground;
    if (SpawnSpotFree(v)) {
      ++next_id_;
      background_.push_back(v);
    } else {
      waiting.push_back(s);
    }
  }
  pending_ = std::move(waiting);
}

void World::AddBackgroundVehicle(VehicleState v) {
  if (!started_) throw StateError("AddBackgroundVehicle called before Reset");
  const auto& net = network();
  if (v.route < 0 || v.route >= static_cast<int>(net.routes().size())) {
    throw InvalidArgumentError("background vehicle route out of range");
  }
  const auto& edges = net.routes()[v.route].edges;
  if (v.route_index >= edges.size()) {
    throw InvalidArgumentError("background vehicle route index out of range");
  }
  v.edge = edges[v.route_index];
  const Edge& e = net.edges()[v.edge];
  if (v.pos_m < 0.0 || v.pos_m > e.length_m) {
    throw InvalidArgumentError("background vehicle position outside its edge");
  }
  if (v.speed_mps < 0.0 || v.lane < 0) {
    throw InvalidArgumentError("background vehicle speed and lane must be >= 0");
  }
  if (v.length_m <= 0.0) v.length_m = scenario_.background_length_m;
  v.role = VehicleRole::kBackground;
  v.id = next_id_++;
  background_.push_back(v);
}

void World::BackgroundStep() {
  if (!started_) throw StateError("BackgroundStep called before Reset");
  SpawnDue();
  const auto& net = network();
  const double dt = scenario_.step_length_s;
  for (std::size_t i = 0; i < background_.size();) {
    VehicleState& v = background_[i];
    const Edge& e = net.edges()[v.edge];
    auto limit_of = [&](const Edge& edge) {
      return v.max_speed_mps > 0.0 ? std::min(edge.speed_limit_mps, v.max_speed_mps)
                                   : edge.speed_limit_mps;
    };
    double cand = std::min(v.speed_mps + scenario_.background_accel_max_mps2 * dt,
                           limit_of(e));
    const auto [gap, leader_speed] = Leader(v);
    if (gap < kInf) cand = std::min(cand, SafeSpeed(gap - scenario_.min_gap_m, leader_speed));
    const double stop = StopLine(v.edge);
    if (v.pos_m <= stop && RedAtEdgeEnd(v.edge, time_s_)) {
      cand = std::min(cand, SafeSpeed(stop - v.pos_m, 0.0));
    }
    const int next = NextEdge(v);
    if (next >= 0) {
      const Edge& ne = net.edges()[next];
      if (v.pos_m + cand * dt > e.length_m) cand = std::min(cand, limit_of(ne));
      cand = std::min(cand, (e.length_m - v.pos_m + ne.length_m) / dt);
    }
    const double v1 = std::max(0.0, cand);
    v.accel_mps2 = (v1 - v.speed_mps) / dt;
    v.speed_mps = v1;
    v.pos_m += v1 * dt;
    if (v.pos_m > e.length_m) {
      if (next < 0) {
        background_.erase(background_.begin() + static_cast<std::ptrdiff_t>(i));
        continue;
      }
      v.pos_m = std::min(v.pos_m - e.length_m, net.edges()[next].length_m);
      v.edge = next;
      ++v.route_index;
    }
    ++i;
  }
}

double World::AdvanceEgo(double distance_m, std::vector<Vec2>* path,
                         double* free_flow_time_s) {
  const auto& net = network();
  const auto& edges = net.routes()[ego_.route].edges;
  double remaining = distance_m;
  double covered = 0.0;
  double free_time = 0.0;
  bool cut = false;
  for (;;) {
    const Edge& e = net.edges()[ego_.edge];
    const double room = e.length_m - ego_.pos_m;
    if (remaining <= room) {
      ego_.pos_m += remaining;
      covered += remaining;
      free_time += remaining / e.speed_limit_mps;
      break;
    }
    covered += room;
    free_time += room / e.speed_limit_mps;
    remaining -= room;
    if (ego_.route_index + 1 < edges.size()) {
      ++ego_.route_index;
      ego_.edge = edges[ego_.route_index];
      ego_.pos_m = 0.0;
      path->push_back(net.nodes()[e.to].pos);
    } else {
      ego_.pos_m = e.length_m;
      cut = true;
      break;
    }
  }
  path->push_back(PositionOf(ego_));
  *free_flow_time_s = free_time;
  return cut ? covered : distance_m;
}

bool World::EgoWaitingAtLight() const {
  const Edge& e = network().edges()[ego_.edge];
  return ego_.speed_mps < scenario_.waiting_speed_mps &&
         e.length_m - ego_.pos_m <= scenario_.waiting_distance_m &&
         RedAtEdgeEnd(ego_.edge, time_s_);
}

StepOutcome World::Step(double accel_mps2) {
  if (!started_) throw StateError("Step called before Reset");
  if (done_) throw StateError("Step called after the episode finished");
  if (!std::isfinite(accel_mps2)) throw NumericError("non-finite ego action");
  const double dt = scenario_.step_length_s;
  const double a =
      std::clamp(accel_mps2, scenario_.accel_min_mps2, scenario_.accel_max_mps2);
  const double v0 = ego_.speed_mps;
  const double v1 = std::max(0.0, v0 + a * dt);
  ego_.speed_mps = v1;
  ego_.accel_mps2 = (v1 - v0) / dt;

  StepOutcome out;
  std::vector<Vec2> path{PositionOf(ego_)};
  out.displacement_m = AdvanceEgo(v1 * dt, &path, &out.free_flow_time_s);

  BackgroundStep();
  time_s_ += dt;
  ++steps_;

  EventFlags& f = out.flags;
  f.collided = CollisionCheck();
  if (!f.collided) {
    double closest = kInf;
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
      closest = std::min(closest, SegmentDistance(destination_, path[i], path[i + 1]));
    }
    if (path.size() == 1) closest = Distance(destination_, path[0]);
    f.reached_destination = closest <= scenario_.dest_tolerance_m;
  }
  f.braking = ego_.accel_mps2 < scenario_.braking_threshold_mps2;
  f.waiting_at_light = EgoWaitingAtLight();
  f.speed_nonzero = v1 != 0.0;
  f.free_flow = v1 >= scenario_.free_flow_fraction *
                          network().edges()[ego_.edge].speed_limit_mps;
  out.reward = ComputeReward(f);

  if (f.collided) {
    out.cause = TerminationCause::kCollision;
  } else if (f.reached_destination) {
    out.cause = TerminationCause::kDestination;
  } else if (steps_ >= scenario_.max_steps) {
    out.cause = TerminationCause::kMaxSteps;
  }
  out.done = out.cause != TerminationCause::kNone;
  done_ = out.done;
  out.observation = Observe();
  return out;
}

}  // namespace fedcav::sim
