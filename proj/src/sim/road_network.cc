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

#include "fedcav/sim/road_network.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "fedcav/base/error.h"

namespace fedcav::sim {

double Distance(Vec2 a, Vec2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

bool TrafficLight::IsGreenFor(const Edge& approach, double time_s) const {
  const double cycle = green_s + red_s;
  double phase = std::fmod(time_s + offset_s, cycle);
  if (phase < 0.0) phase += cycle;
  const bool primary_green = phase < green_s;
  const double c = std::abs(std::cos(approach.heading_rad));
  const double s = std::abs(std::sin(approach.heading_rad));
  return c >= s ? primary_green : !primary_green;
}

std::optional<int> RoadNetwork::FindNode(std::string_view id) const {
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].id == id) return static_cast<int>(i);
  }
  return std::nullopt;
}

std::optional<int> RoadNetwork::FindEdge(std::string_view id) const {
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    if (edges_[i].id == id) return static_cast<int>(i);
  }
  return std::nullopt;
}

std::optional<int> RoadNetwork::FindRoute(std::string_view name) const {
  for (std::size_t i = 0; i < routes_.size(); ++i) {
    if (routes_[i].name == name) return static_cast<int>(i);
  }
  return std::nullopt;
}

const TrafficLight* RoadNetwork::LightAt(int node) const {
  for (const auto& l : lights_) {
    if (l.node == node) return &l;
  }
  return nullptr;
}

Vec2 RoadNetwork::PointOnEdge(int e, double pos_m) const {
  const Edge& edge = edges_[e];
  const Vec2 a = nodes_[edge.from].pos;
  const Vec2 b = nodes_[edge.to].pos;
  const double f = pos_m / edge.length_m;
  return {a.x + f * (b.x - a.x), a.y + f * (b.y - a.y)};
}

double RoadNetwork::RouteLength(int route) const {
  double total = 0.0;
  for (int e : routes_[route].edges) total += edges_[e].length_m;
  return total;
}

namespace {

std::vector<std::string_view> Tokens(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

template <typename T>
T Number(std::string_view tok, std::string_view field, int line) {
  T v{};
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw ParseError("invalid " + std::string(field) + " '" + std::string(tok) + "'",
                     line);
  }
  return v;
}

}  // namespace

RoadNetwork RoadNetwork::Parse(std::string_view text) {
  RoadNetwork net;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(
        pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    const auto tok = Tokens(line);
    if (tok.empty()) continue;
    const std::string_view kind = tok[0];
    auto expect = [&](std::size_t n, const char* usage) {
      if (tok.size() != n) {
        throw ParseError(std::string("expected '") + usage + "'", line_no);
      }
    };
    auto node_ref = [&](std::string_view id) {
      auto n = net.FindNode(id);
      if (!n) throw ParseError("undefined node '" + std::string(id) + "'", line_no);
      return *n;
    };

    if (kind == "node") {
      expect(4, "node <id> <x> <y>");
      if (net.FindNode(tok[1])) {
        throw ParseError("duplicate node '" + std::string(tok[1]) + "'", line_no);
      }
      net.nodes_.push_back({std::string(tok[1]),
                            {Number<double>(tok[2], "x", line_no),
                             Number<double>(tok[3], "y", line_no)}});
    } else if (kind == "edge") {
      expect(7, "edge <id> <from> <to> <length> <vmax> <lanes>");
      if (net.FindEdge(tok[1])) {
        throw ParseError("duplicate edge '" + std::string(tok[1]) + "'", line_no);
      }
      Edge e;
      e.id = std::string(tok[1]);
      e.from = node_ref(tok[2]);
      e.to = node_ref(tok[3]);
      if (e.from == e.to) throw ParseError("edge '" + e.id + "' is a self-loop", line_no);
      e.length_m = Number<double>(tok[4], "length", line_no);
      e.speed_limit_mps = Number<double>(tok[5], "vmax", line_no);
      e.lanes = Number<int>(tok[6], "lanes", line_no);
      if (!(e.length_m > 0.0)) throw ParseError("edge length must be > 0", line_no);
      if (!(e.speed_limit_mps > 0.0)) throw ParseError("speed limit must be > 0", line_no);
      if (e.lanes < 1) throw ParseError("lane count must be >= 1", line_no);
      const Vec2 a = net.nodes_[e.from].pos, b = net.nodes_[e.to].pos;
      e.heading_rad = std::atan2(b.y - a.y, b.x - a.x);
      net.edges_.push_back(std::move(e));
    } else if (kind == "light") {
      expect(5, "light <node> <green_s> <red_s> <offset_s>");
      TrafficLight l;
      l.node = node_ref(tok[1]);
      l.green_s = Number<double>(tok[2], "green_s", line_no);
      l.red_s = Number<double>(tok[3], "red_s", line_no);
      l.offset_s = Number<double>(tok[4], "offset_s", line_no);
      if (!(l.green_s > 0.0) || !(l.red_s > 0.0)) {
        throw ParseError("light cycle durations must be > 0", line_no);
      }
      if (net.LightAt(l.node)) throw ParseError("duplicate light at node", line_no);
      net.lights_.push_back(l);
    } else if (kind == "route") {
      if (tok.size() < 3) throw ParseError("expected 'route <name> <edge...>'", line_no);
      if (net.FindRoute(tok[1])) {
        throw ParseError("duplicate route '" + std::string(tok[1]) + "'", line_no);
      }
      Route r;
      r.name = std::string(tok[1]);
      for (std::size_t i = 2; i < tok.size(); ++i) {
        auto e = net.FindEdge(tok[i]);
        if (!e) throw ParseError("undefined edge '" + std::string(tok[i]) + "'", line_no);
        if (!r.edges.empty() && net.edges_[r.edges.back()].to != net.edges_[*e].from) {
          throw ParseError("route '" + r.name + "' is not connected at edge '" +
                               std::string(tok[i]) + "'",
                           line_no);
        }
        r.edges.push_back(*e);
      }
      net.routes_.push_back(std::move(r));
    } else {
      throw ParseError("unknown record '" + std::string(kind) + "'", line_no);
    }
  }
  return net;
}

RoadNetwork RoadNetwork::Load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open network file '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return Parse(buffer.str());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": ", e);
  }
}

}  // namespace fedcav::sim
