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

#ifndef SPLITMATCH_DECODERS_H
#define SPLITMATCH_DECODERS_H

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "splitmatch/decoding_graph.h"
#include "splitmatch/fault_model.h"
#include "splitmatch/matching.h"

namespace splitmatch {

enum class DecoderKind { kMwpm, kUnionFind };

inline const char* decoder_kind_name(DecoderKind k) {
  return k == DecoderKind::kMwpm ? "mwpm" : "uf";
}

struct DecodeResult {
  FaultConfiguration correction;        // fault ids of the decoded model
  SparseSet predicted_observables;
  std::vector<uint32_t> augmented_syndrome;  // vertex ids, sorted
  // MWPM diagnostics: the matched vertex pairs and, for each, the edge ids
  // of the recovered shortest path.
  std::vector<std::pair<uint32_t, uint32_t>> matched_pairs;
  std::vector<std::vector<uint32_t>> matched_paths;
  // Union-Find diagnostics.
  uint32_t cluster_count = 0;
};

namespace detail {

inline void check_syndrome_in_range(const DecodingGraph& g, const Syndrome& s) {
  if (!s.empty() && s.items().back() >= g.check_count()) {
    throw std::out_of_range("syndrome references unknown check " +
                            std::to_string(s.items().back()));
  }
}

/// Adds the boundary vertex of every component holding an odd number of
/// syndrome vertices. A component whose boundary vertex has no edges cannot
/// absorb odd parity; that is a property of the ingested model, so it gets a
/// dedicated error.
inline std::vector<uint32_t> augment_syndrome(const DecodingGraph& g,
                                              const Syndrome& s) {
  std::vector<uint32_t> parity(g.component_count(), 0);
  std::vector<uint32_t> augmented = s.items();
  for (uint32_t c : s.items()) parity[g.component_of(c)] ^= 1;
  for (uint32_t comp = 0; comp < g.component_count(); ++comp) {
    if (!parity[comp]) continue;
    uint32_t b = g.boundary_vertex(comp);
    if (g.incident(b).empty()) {
      throw std::runtime_error(
          "odd undecodable component: component " + std::to_string(comp) +
          " has odd syndrome parity but no boundary edges");
    }
    augmented.push_back(b);
  }
  std::sort(augmented.begin(), augmented.end());
  return augmented;
}

}  // namespace detail

/// Matching decoder: augment the syndrome with boundary vertices for parity,
/// build the distance graph, find a minimum-weight perfect matching, and XOR
/// the faults of each matched pair's shortest path into the correction.
/// Returns a most likely fault configuration with the given syndrome.
/// One decoder instance serves one call at a time; distance computations are
/// memoized across calls on the same immutable graph.
class MwpmDecoder {
 public:
  MwpmDecoder(const FaultModel& model, const DecodingGraph& graph)
      : model_(&model), graph_(&graph), oracle_(graph) {}

  DecodeResult decode(const Syndrome& syndrome) {
    detail::check_syndrome_in_range(*graph_, syndrome);

    DecodeResult result;
    result.augmented_syndrome = detail::augment_syndrome(*graph_, syndrome);
    const auto& verts = result.augmented_syndrome;
    if (verts.empty()) {
      return finish(std::move(result));
    }

    DistanceGraph dg = build_distance_graph(*graph_, verts, oracle_);

    MatchingInstance inst(static_cast<uint32_t>(verts.size()));
    std::vector<const DistanceGraph::Entry*> entry_of(
        verts.size() * verts.size(), nullptr);
    for (const auto& e : dg.edges) {
      uint32_t a = index_of(verts, e.u);
      uint32_t b = index_of(verts, e.v);
      inst.set_weight(a, b, e.weight);
      entry_of[a * verts.size() + b] = &e;
      entry_of[b * verts.size() + a] = &e;
    }

    Matching matching;
    try {
      matching = min_weight_perfect_matching(inst);
    } catch (const std::runtime_error&) {
      // Cannot happen for syndromes realizable in the decoded model: the
      // boundary augmentation makes every component even.
      throw std::logic_error(
          "infeasible matching for a parity-consistent syndrome");
    }

    for (const auto& [a, b] : matching.pairs) {
      const DistanceGraph::Entry* entry = entry_of[a * verts.size() + b];
      result.matched_pairs.emplace_back(verts[a], verts[b]);
      result.matched_paths.push_back(entry->path);
      for (uint32_t edge : entry->path) {
        result.correction ^= FaultConfiguration{graph_->edges()[edge].fault_id};
      }
    }
    return finish(std::move(result));
  }

 private:
  static uint32_t index_of(const std::vector<uint32_t>& sorted, uint32_t v) {
    return static_cast<uint32_t>(
        std::lower_bound(sorted.begin(), sorted.end(), v) - sorted.begin());
  }

  DecodeResult finish(DecodeResult result) {
    result.predicted_observables = model_->observables_of(result.correction);
    return result;
  }

  const FaultModel* model_;
  const DecodingGraph* graph_;
  DistanceOracle oracle_;
};

/// Union-Find decoder: grow odd clusters by half edges, merge via weighted
/// union with path compression, treat clusters containing a boundary vertex
/// as neutral, then peel each cluster's spanning forest to extract a valid
/// correction. Guarantees syndrome validity, not optimality.
class UnionFindDecoder {
 public:
  UnionFindDecoder(const FaultModel& model, const DecodingGraph& graph)
      : model_(&model), graph_(&graph) {}

  DecodeResult decode(const Syndrome& syndrome) {
    detail::check_syndrome_in_range(*graph_, syndrome);

    const DecodingGraph& g = *graph_;
    DecodeResult result;
    result.augmented_syndrome = detail::augment_syndrome(g, syndrome);
    if (syndrome.empty()) {
      result.predicted_observables = SparseSet{};
      return result;
    }

    const uint32_t n = g.vertex_count();
    parent_.resize(n);
    std::iota(parent_.begin(), parent_.end(), 0);
    size_.assign(n, 1);
    odd_.assign(n, 0);
    has_boundary_.assign(n, 0);
    frontier_.assign(n, {});
    in_cluster_.assign(n, 0);

    std::vector<uint8_t> support(g.edges().size(), 0);

    std::vector<uint32_t> roots;
    for (uint32_t c : syndrome.items()) {
      odd_[c] = 1;
      in_cluster_[c] = 1;
      frontier_[c].push_back(c);
      roots.push_back(c);
    }

    // Growth rounds: every odd cluster advances all frontier edges by half.
    for (;;) {
      std::vector<uint32_t> odd_roots;
      for (uint32_t r : roots) {
        if (find(r) == r && odd_[r] && !has_boundary_[r]) odd_roots.push_back(r);
      }
      if (odd_roots.empty()) break;
      std::sort(odd_roots.begin(), odd_roots.end());

      std::vector<uint32_t> grown;
      bool any_growth = false;
      for (uint32_t r : odd_roots) {
        for (uint32_t v : frontier_[r]) {
          for (uint32_t e : g.incident(v)) {
            if (support[e] >= 2) continue;
            uint32_t w = g.other_end(e, v);
            if (in_cluster_[w] && find(w) == r) continue;  // internal edge
            ++support[e];
            any_growth = true;
            if (support[e] >= 2) grown.push_back(e);
          }
        }
      }
      if (!any_growth) {
        throw std::runtime_error(
            "odd undecodable component: odd cluster cannot grow further");
      }

      std::sort(grown.begin(), grown.end());
      grown.erase(std::unique(grown.begin(), grown.end()), grown.end());
      for (uint32_t e : grown) {
        uint32_t u = g.edges()[e].u, v = g.edges()[e].v;
        absorb(u, roots);
        absorb(v, roots);
        unite(u, v);
      }
      refresh_frontiers();
    }

    result.cluster_count = 0;
    for (uint32_t r : roots) {
      if (find(r) == r) ++result.cluster_count;
    }

    result.correction = peel(support, syndrome);
    result.predicted_observables = model_->observables_of(result.correction);
    return result;
  }

 private:
  uint32_t find(uint32_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void absorb(uint32_t v, std::vector<uint32_t>& roots) {
    if (in_cluster_[v]) return;
    in_cluster_[v] = 1;
    frontier_[v].assign(1, v);
    if (graph_->is_boundary(v)) has_boundary_[v] = 1;
    roots.push_back(v);
  }

  void unite(uint32_t a, uint32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    odd_[a] ^= odd_[b];
    has_boundary_[a] |= has_boundary_[b];
    frontier_[a].insert(frontier_[a].end(), frontier_[b].begin(),
                        frontier_[b].end());
    frontier_[b].clear();
  }

  void refresh_frontiers() {
    // Drop frontier vertices whose incident edges are all fully grown.
    for (uint32_t v = 0; v < parent_.size(); ++v) {
      if (parent_[v] != v || frontier_[v].empty()) continue;
      std::sort(frontier_[v].begin(), frontier_[v].end());
      frontier_[v].erase(std::unique(frontier_[v].begin(), frontier_[v].end()),
                         frontier_[v].end());
    }
  }

  /// Builds the spanning forest of fully grown edges and peels it from the
  /// leaves: a leaf carrying an unresolved syndrome bit contributes its tree
  /// edge and hands the bit to its parent. Roots sit at the boundary vertex
  /// when the cluster has one (it may absorb leftover parity), otherwise at
  /// the cluster's smallest vertex.
  FaultConfiguration peel(const std::vector<uint8_t>& support,
                          const Syndrome& syndrome) {
    const DecodingGraph& g = *graph_;
    const uint32_t n = g.vertex_count();

    std::vector<std::vector<uint32_t>> grown_adj(n);
    for (uint32_t e = 0; e < support.size(); ++e) {
      if (support[e] == 2) {
        grown_adj[g.edges()[e].u].push_back(e);
        grown_adj[g.edges()[e].v].push_back(e);
      }
    }

    std::vector<char> mark(n, 0);
    for (uint32_t c : syndrome.items()) mark[c] = 1;

    std::vector<char> visited(n, 0);
    std::vector<uint32_t> bfs_order, parent_edge(n, kNoEdge);
    FaultConfiguration correction;

    // Deterministic component sweep: boundary roots first within each
    // component are found by scanning vertices ascending but preferring the
    // boundary vertex of the component when it was reached.
    for (uint32_t start = 0; start < n; ++start) {
      if (visited[start] || grown_adj[start].empty()) continue;

      // Collect the component, then re-root.
      std::vector<uint32_t> comp;
      std::vector<uint32_t> stack{start};
      visited[start] = 1;
      while (!stack.empty()) {
        uint32_t v = stack.back();
        stack.pop_back();
        comp.push_back(v);
        for (uint32_t e : grown_adj[v]) {
          uint32_t w = g.other_end(e, v);
          if (!visited[w]) {
            visited[w] = 1;
            stack.push_back(w);
          }
        }
      }
      uint32_t root = comp[0];
      for (uint32_t v : comp) {
        if (g.is_boundary(v)) {
          root = v;
          break;
        }
        root = std::min(root, v);
      }

      // BFS spanning tree from the root, neighbors in ascending edge order.
      bfs_order.clear();
      std::vector<uint32_t> queue{root};
      std::vector<char> in_tree(n, 0);
      in_tree[root] = 1;
      size_t head = 0;
      while (head < queue.size()) {
        uint32_t v = queue[head++];
        bfs_order.push_back(v);
        std::vector<uint32_t> inc = grown_adj[v];
        std::sort(inc.begin(), inc.end());
        for (uint32_t e : inc) {
          uint32_t w = g.other_end(e, v);
          if (!in_tree[w]) {
            in_tree[w] = 1;
            parent_edge[w] = e;
            queue.push_back(w);
          }
        }
      }

      for (size_t i = bfs_order.size(); i-- > 1;) {
        uint32_t v = bfs_order[i];
        if (!mark[v]) continue;
        uint32_t e = parent_edge[v];
        correction ^= FaultConfiguration{g.edges()[e].fault_id};
        mark[v] = 0;
        mark[g.other_end(e, v)] ^= 1;
      }
      if (mark[root] && !g.is_boundary(root)) {
        throw std::logic_error("peeling left unresolved syndrome at root " +
                               std::to_string(root));
      }
      mark[root] = 0;
    }

    for (uint32_t v = 0; v < n; ++v) {
      if (mark[v]) {
        throw std::logic_error("peeling left unresolved syndrome bits");
      }
    }
    return correction;
  }

  const FaultModel* model_;
  const DecodingGraph* graph_;
  std::vector<uint32_t> parent_, size_;
  std::vector<uint8_t> odd_, has_boundary_, in_cluster_;
  std::vector<std::vector<uint32_t>> frontier_;
};

}  // namespace splitmatch

#endif  // SPLITMATCH_DECODERS_H
