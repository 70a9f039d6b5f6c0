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

#ifndef FEDCAV_SIM_ROAD_NETWORK_H_
#define FEDCAV_SIM_ROAD_NETWORK_H_

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fedcav::sim {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const Vec2&) const = default;
};

struct Node {
  std::string id;
  Vec2 pos;
};

struct Edge {
  std::string id;
  int from = -1;  // node index
  int to = -1;
  double length_m = 0.0;
  double speed_limit_mps = 0.0;
  int lanes = 1;
  double heading_rad = 0.0;  // atan2 of (to - from)
};

// Fixed-cycle signal at a node. The cycle has length green_s + red_s and is
// shifted by offset_s. Approaches whose direction is closer to the x axis
// follow the cycle; approaches closer to the y axis get the complementary
// phase, so crossing streams never see green together.
struct TrafficLight {
  int node = -1;
  double green_s = 0.0;
  double red_s = 0.0;
  double offset_s = 0.0;

  bool IsGreenFor(const Edge& approach, double time_s) const;
};

struct Route {
  std::string name;
  std::vector<int> edges;  // edge indices, consecutive edges share a node
};

// Directed road graph with signals and named routes.
//
// Text format (one record per line, '#' starts a comment):
//   node  <id> <x_m> <y_m>
//   edge  <id> <from> <to> <length_m> <vmax_mps> <lanes>
//   light <node> <green_s> <red_s> <offset_s>
//   route <name> <edge> [<edge> ...]
// Records may reference only ids declared on earlier lines.
class RoadNetwork {
 public:
  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<TrafficLight>& lights() const { return lights_; }
  const std::vector<Route>& routes() const { return routes_; }

  std::optional<int> FindNode(std::string_view id) const;
  std::optional<int> FindEdge(std::string_view id) const;
  std::optional<int> FindRoute(std::string_view name) const;
  const TrafficLight* LightAt(int node) const;

  // Point at `pos_m` along edge `e`, interpolated between its end nodes.
  Vec2 PointOnEdge(int e, double pos_m) const;
  double RouteLength(int route) const;

  // Throws ParseError (with line number) on malformed lines, dangling
  // references, non-positive lengths/limits/lane counts/cycle durations,
  // duplicate ids, or a route whose edges do not chain.
  static RoadNetwork Parse(std::string_view text);
  static RoadNetwork Load(const std::filesystem::path& path);

 private:
  std::vector<Node> nodes_;
  std::vector<Edge> edges_;
  std::vector<TrafficLight> lights_;
  std::vector<Route> routes_;
};

double Distance(Vec2 a, Vec2 b);

}  // namespace fedcav::sim

#endif  // FEDCAV_SIM_ROAD_NETWORK_H_
