// Copyright 2026 Splitmatch Contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SPLITMATCH_DECODING_GRAPH_H
#define SPLITMATCH_DECODING_GRAPH_H

#include <cmath>
#include <cstdint>
#include <limits>
#include <queue>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "splitmatch/fault_model.h"

namespace splitmatch {

constexpr uint32_t kNoVertex = 0xffffffffu;
constexpr uint32_t kNoEdge = 0xffffffffu;

/// Edge weight for a fault of probability p. Natural log; any other base
/// rescales every weight uniformly and cannot change a minimizer. p <= 0.5
/// keeps this non-negative.
inline double fault_weight(double p) { return -std::log(p / (1.0 - p)); }

struct GraphEdge {
  uint32_t u = 0;
  uint32_t v = 0;
  double weight = 0.0;
  uint32_t fault_id = 0;  // equal to the edge id; edges and faults correspond 1:1
};

/// Component labels for the check-adjacency graph (checks connected when some
/// fault triggers both). Labels are assigned in order of each component's
/// lowest check index. Boundary vertices are not included here.
inline std::vector<uint32_t> connected_components(const FaultModel& model,
                                                  uint32_t* component_count) {
  const uint32_t n = model.check_count();
  std::vector<std::vector<uint32_t>> adj(n);
  for (const Fault& f : model.faults()) {
    const auto& checks = f.syndrome.items();
    if (checks.size() == 2) {
      adj[checks[0]].push_back(checks[1]);
      adj[checks[1]].push_back(checks[0]);
    }
  }
  std::vector<uint32_t> label(n, kNoVertex);
  uint32_t next = 0;
  std::vector<uint32_t> stack;
  for (uint32_t c = 0; c < n; ++c) {
    if (label[c] != kNoVertex) continue;
    label[c] = next;
    stack.assign(1, c);
    while (!stack.empty()) {
      uint32_t x = stack.back();
      stack.pop_back();
      for (uint32_t y : adj[x]) {
        if (label[y] == kNoVertex) {
          label[y] = next;
          stack.push_back(y);
        }
      }
    }
    ++next;
  }
  if (component_count) *component_count = next;
  return label;
}

/// Weighted multigraph over check vertices plus one boundary vertex per
/// connected component. Edge i corresponds to fault i of the source model;
/// parallel edges are kept distinct. Immutable after construction.
class DecodingGraph {
 public:
  static DecodingGraph build(const FaultModel& model) {
    DecodingGraph g;
    g.check_count_ = model.check_count();

    for (const Fault& f : model.faults()) {
      if (f.syndrome.size() > 2) {
        throw std::invalid_argument(
            "fault " + std::to_string(f.id) + " triggers " +
            std::to_string(f.syndrome.size()) +
            " checks; the model is not graph-like");
      }
    }

    g.component_of_check_ = connected_components(model, &g.component_count_);
    g.vertex_count_ = g.check_count_ + g.component_count_;

    g.edges_.reserve(model.fault_count());
    for (const Fault& f : model.faults()) {
      const auto& checks = f.syndrome.items();
      GraphEdge e;
      e.fault_id = f.id;
      e.weight = fault_weight(f.probability);
      e.u = checks[0];
      e.v = (checks.size() == 2)
                ? checks[1]
                : g.boundary_vertex(g.component_of_check_[checks[0]]);
      g.edges_.push_back(e);
    }

    g.incident_.assign(g.vertex_count_, {});
    for (uint32_t e = 0; e < g.edges_.size(); ++e) {
      g.incident_[g.edges_[e].u].push_back(e);
      g.incident_[g.edges_[e].v].push_back(e);
    }
    return g;
  }

  uint32_t check_count() const { return check_count_; }
  uint32_t vertex_count() const { return vertex_count_; }
  uint32_t component_count() const { return component_count_; }
  const std::vector<GraphEdge>& edges() const { return edges_; }
  const std::vector<uint32_t>& incident(uint32_t v) const { return incident_[v]; }

  bool is_boundary(uint32_t v) const { return v >= check_count_; }

  uint32_t boundary_vertex(uint32_t component) const {
    return check_count_ + component;
  }

  uint32_t component_of(uint32_t v) const {
    return is_boundary(v) ? v - check_count_ : component_of_check_[v];
  }

  uint32_t other_end(uint32_t edge, uint32_t v) const {
    const GraphEdge& e = edges_[edge];
    return e.u == v ? e.v : e.u;
  }

  /// True when a path between u and v exists. A boundary vertex with no
  /// 1-fault edges shares its component's label but is unreachable.
  bool connected_in_graph(uint32_t u, uint32_t v) const {
    if (u == v) return true;
    if (incident_[u].empty() || incident_[v].empty()) return false;
    return component_of(u) == component_of(v);
  }

 private:
  uint32_t check_count_ = 0;
  uint32_t vertex_count_ = 0;
  uint32_t component_count_ = 0;
  std::vector<GraphEdge> edges_;
  std::vector<std::vector<uint32_t>> incident_;
  std::vector<uint32_t> component_of_check_;
};

/// Single-source shortest-path tree. Ties between equal-length paths are
/// broken toward the smaller incoming edge id, which (vertex labels being
/// unique) selects the path whose edge-id sequence read from the far end is
/// lexicographically smallest.
struct ShortestPathTree {
  std::vector<double> dist;
  std::vector<uint32_t> parent_edge;
};

inline ShortestPathTree dijkstra(const DecodingGraph& g, uint32_t source) {
  ShortestPathTree t;
  t.dist.assign(g.vertex_count(), std::numeric_limits<double>::infinity());
  t.parent_edge.assign(g.vertex_count(), kNoEdge);
  std::vector<char> settled(g.vertex_count(), 0);

  using Item = std::pair<double, uint32_t>;  // (dist, vertex)
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
  t.dist[source] = 0.0;
  heap.emplace(0.0, source);

  while (!heap.empty()) {
    auto [d, v] = heap.top();
    heap.pop();
    if (settled[v] || d > t.dist[v]) continue;
    settled[v] = 1;
    for (uint32_t e : g.incident(v)) {
      uint32_t w = g.other_end(e, v);
      if (settled[w]) continue;
      double nd = d + g.edges()[e].weight;
      if (nd < t.dist[w]) {
        t.dist[w] = nd;
        t.parent_edge[w] = e;
        heap.emplace(nd, w);
      } else if (nd == t.dist[w] && t.parent_edge[w] != kNoEdge &&
                 e < t.parent_edge[w]) {
        t.parent_edge[w] = e;
      }
    }
  }
  return t;
}

/// Per-source memo of shortest-path trees. Confine one oracle to one thread;
/// the underlying graph is immutable and may be shared freely.
class DistanceOracle {
 public:
  explicit DistanceOracle(const DecodingGraph& graph) : graph_(&graph) {}

  const ShortestPathTree& tree_from(uint32_t source) {
    auto it = memo_.find(source);
    if (it != memo_.end()) return it->second;
    return memo_.emplace(source, dijkstra(*graph_, source)).first->second;
  }

  double distance(uint32_t u, uint32_t v) { return tree_from(u).dist[v]; }

  /// Edge ids of the representative shortest path from u to v.
  /// Throws when u and v are in different components.
  std::vector<uint32_t> path(uint32_t u, uint32_t v) {
    if (!graph_->connected_in_graph(u, v)) {
      throw std::invalid_argument("no path: vertices " + std::to_string(u) +
                                  " and " + std::to_string(v) +
                                  " lie in different components");
    }
    const ShortestPathTree& t = tree_from(u);
    std::vector<uint32_t> edges;
    uint32_t x = v;
    while (x != u) {
      uint32_t e = t.parent_edge[x];
      if (e == kNoEdge) {
        throw std::logic_error("shortest-path tree is incomplete");
      }
      edges.push_back(e);
      x = graph_->other_end(e, x);
    }
    std::reverse(edges.begin(), edges.end());
    return edges;
  }

  const DecodingGraph& graph() const { return *graph_; }

 private:
  const DecodingGraph* graph_;
  std::unordered_map<uint32_t, ShortestPathTree> memo_;
};

/// Weighted shortest-path distance with a stored representative path, for
/// every same-component pair of the requested vertices.
struct DistanceGraph {
  std::vector<uint32_t> vertices;  // sorted
  struct Entry {
    uint32_t u = 0;
    uint32_t v = 0;
    double weight = 0.0;
    std::vector<uint32_t> path;  // edge ids, from u to v
  };
  std::vector<Entry> edges;
};

inline DistanceGraph build_distance_graph(const DecodingGraph& g,
                                          std::vector<uint32_t> vertices,
                                          DistanceOracle& oracle) {
  std::sort(vertices.begin(), vertices.end());
  DistanceGraph dg;
  dg.vertices = std::move(vertices);
  for (size_t a = 0; a < dg.vertices.size(); ++a) {
    for (size_t b = a + 1; b < dg.vertices.size(); ++b) {
      uint32_t u = dg.vertices[a], v = dg.vertices[b];
      if (!g.connected_in_graph(u, v)) continue;
      DistanceGraph::Entry entry;
      entry.u = u;
      entry.v = v;
      entry.weight = oracle.distance(u, v);
      entry.path = oracle.path(u, v);
      dg.edges.push_back(std::move(entry));
    }
  }
  return dg;
}

/// Shortest path as (weight, edge ids). u == v yields (0, empty).
inline std::pair<double, std::vector<uint32_t>> shortest_path(
    const DecodingGraph& g, uint32_t u, uint32_t v) {
  DistanceOracle oracle(g);
  if (u == v) return {0.0, {}};
  return {oracle.distance(u, v), oracle.path(u, v)};
}

}  // namespace splitmatch

#endif  // SPLITMATCH_DECODING_GRAPH_H
