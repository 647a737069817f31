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

#ifndef SPLITMATCH_SPLITTING_H
#define SPLITMATCH_SPLITTING_H

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "splitmatch/decoders.h"
#include "splitmatch/decoding_graph.h"
#include "splitmatch/fault_model.h"

namespace splitmatch {

struct UnsplittableFault {
  uint32_t fault_id = 0;
  std::string reason;
};

struct SplitWarning {
  uint32_t fault_id = 0;
  std::string message;
};

/// Result of turning a hypergraph model into a graph-like one. For every
/// original fault, `decomposition` lists the split-model faults whose
/// syndromes (and observable sets) XOR back to the original's; faults that
/// could not be decomposed are excluded from the split model and listed in
/// `unsplittable` instead.
struct SplitReport {
  FaultModel split_model;
  std::vector<std::vector<uint32_t>> decomposition;
  std::vector<UnsplittableFault> unsplittable;
  std::vector<SplitWarning> warnings;
};

/// A fault is primitive when it is a 1-fault, or a 2-fault whose syndrome is
/// not the sum of two 1-fault syndromes of the same model. Primitive faults
/// are the edges of the base decoding graph; a 2-fault that decomposes into
/// two 1-faults is left out because its edge would shortcut the graph.
inline std::vector<uint32_t> primitive_faults(const FaultModel& model) {
  std::vector<char> is_one_fault_check(model.check_count(), 0);
  for (const Fault& f : model.faults()) {
    if (f.syndrome.size() == 1) is_one_fault_check[f.syndrome.items()[0]] = 1;
  }
  std::vector<uint32_t> out;
  for (const Fault& f : model.faults()) {
    if (f.syndrome.size() == 1) {
      out.push_back(f.id);
    } else if (f.syndrome.size() == 2) {
      const auto& checks = f.syndrome.items();
      if (!(is_one_fault_check[checks[0]] && is_one_fault_check[checks[1]])) {
        out.push_back(f.id);
      }
    }
  }
  return out;
}

enum class CombineOrder { kRecursiveThenDecoder, kDecoderThenRecursive };

namespace detail {

struct SplitBuild {
  std::vector<Fault> faults;                         // F'' under construction
  std::vector<std::vector<uint32_t>> decomposition;  // normalized id -> F'' ids
  std::vector<UnsplittableFault> unsplittable;
  std::vector<SplitWarning> warnings;
};

/// Partitions a cycle-free correction (a set of edge ids) into edge-disjoint
/// paths whose endpoints are exactly the odd-degree vertices. Deterministic:
/// each walk starts at the smallest odd vertex and follows the smallest
/// unused edge id.
inline std::vector<std::vector<uint32_t>> partition_into_paths(
    const DecodingGraph& g, const std::vector<uint32_t>& edge_ids) {
  std::map<uint32_t, std::vector<uint32_t>> incident;
  for (uint32_t e : edge_ids) {
    incident[g.edges()[e].u].push_back(e);
    incident[g.edges()[e].v].push_back(e);
  }
  for (auto& [v, list] : incident) std::sort(list.begin(), list.end());

  std::vector<char> used(g.edges().size(), 0);
  auto degree = [&](uint32_t v) {
    uint32_t d = 0;
    for (uint32_t e : incident[v]) {
      if (!used[e]) ++d;
    }
    return d;
  };

  std::vector<std::vector<uint32_t>> paths;
  size_t remaining = edge_ids.size();
  while (remaining > 0) {
    uint32_t start = kNoVertex;
    for (const auto& [v, list] : incident) {
      if (degree(v) % 2 == 1) {
        start = v;
        break;
      }
    }
    if (start == kNoVertex) {
      throw std::logic_error("correction has no odd-degree vertex but edges remain");
    }
    std::vector<uint32_t> path;
    uint32_t v = start;
    for (;;) {
      uint32_t next_edge = kNoEdge;
      for (uint32_t e : incident[v]) {
        if (!used[e]) {
          next_edge = e;
          break;
        }
      }
      if (next_edge == kNoEdge) break;
      used[next_edge] = 1;
      --remaining;
      path.push_back(next_edge);
      v = g.other_end(next_edge, v);
    }
    if (path.empty()) {
      throw std::logic_error("stuck extracting a path from a correction");
    }
    paths.push_back(std::move(path));
  }
  return paths;
}

/// One decoder-based decomposition (the per-fault splitting step): decode the
/// fault's syndrome against the base graph, cut the correction into paths
/// between augmented-syndrome vertices, and emit one derived fault per path.
/// Returns std::nullopt with `reason` set when the fault cannot be split.
///
/// Each derived fault inherits the full probability of the original. Its
/// observables are the XOR of its constituents'; when the constituents'
/// total disagrees with the original fault (the base decoder found a
/// logically inequivalent configuration with the same syndrome), the
/// residual is folded into the first derived fault and a warning is issued.
/// A 2-fault whose decomposition would misstate its observables this way is
/// kept whole instead: it is already graph-like, and an edge with the right
/// logical action beats two parity-equivalent halves with the wrong one.
template <typename Decoder>
inline std::optional<std::vector<Fault>> decoder_split_one(
    const Fault& original, const FaultModel& base_model,
    const DecodingGraph& base_graph, Decoder& decoder, std::string* reason,
    bool* residual_adjusted) {
  *residual_adjusted = false;

  std::vector<uint32_t> uncovered;
  for (uint32_t c : original.syndrome.items()) {
    if (base_graph.incident(c).empty()) uncovered.push_back(c);
  }
  if (!uncovered.empty()) {
    std::ostringstream msg;
    msg << "checks";
    for (uint32_t c : uncovered) msg << " D" << c;
    msg << " are not triggered by any fault of the base graph";
    *reason = msg.str();
    return std::nullopt;
  }

  DecodeResult res;
  try {
    res = decoder.decode(original.syndrome);
  } catch (const std::runtime_error& e) {
    *reason = e.what();
    return std::nullopt;
  }

  std::vector<std::vector<uint32_t>> parts;
  if (!res.matched_paths.empty()) {
    parts = res.matched_paths;
  } else {
    parts = partition_into_paths(base_graph, res.correction.items());
  }

  std::vector<Fault> derived;
  SparseSet total_obs;
  for (size_t k = 0; k < parts.size(); ++k) {
    Fault df;
    df.probability = original.probability;
    for (uint32_t e : parts[k]) {
      uint32_t fid = base_graph.edges()[e].fault_id;
      df.syndrome ^= base_model.fault(fid).syndrome;
      df.observables ^= base_model.fault(fid).observables;
    }
    if (df.syndrome.empty() || df.syndrome.size() > 2) {
      throw std::logic_error("derived fault is not a 1-fault or a 2-fault");
    }
    total_obs ^= df.observables;
    df.label = original.label.empty()
                   ? ("part " + std::to_string(k))
                   : (original.label + "/" + std::to_string(k));
    derived.push_back(std::move(df));
  }

  if (original.syndrome.size() == 2 && total_obs != original.observables) {
    Fault whole;
    whole.probability = original.probability;
    whole.syndrome = original.syndrome;
    whole.observables = original.observables;
    whole.label = original.label;
    return std::vector<Fault>{std::move(whole)};
  }

  SparseSet residual = total_obs ^ original.observables;
  if (!residual.empty()) {
    derived.front().observables ^= residual;
    *residual_adjusted = true;
  }
  return derived;
}

inline SplitReport finalize(const FaultModel& normalized, SplitBuild build,
                            const std::vector<uint32_t>& input_remap) {
  FaultModel premerge(normalized.check_count(), normalized.observable_count(),
                      std::move(build.faults));
  MergeResult merged = merge_duplicates(premerge);

  SplitReport report;
  report.split_model = std::move(merged.model);
  report.unsplittable = std::move(build.unsplittable);
  report.warnings = std::move(build.warnings);

  // Compose: input fault id -> normalized id -> merged split-model ids.
  report.decomposition.resize(input_remap.size());
  for (size_t orig = 0; orig < input_remap.size(); ++orig) {
    const auto& pre = build.decomposition[input_remap[orig]];
    auto& out = report.decomposition[orig];
    out.reserve(pre.size());
    for (uint32_t id : pre) out.push_back(merged.remap[id]);
  }
  // Unsplittable and warning entries are tracked on normalized ids; map them
  // back to the first input fault in each merged group.
  std::vector<uint32_t> first_input(build.decomposition.size(), 0);
  for (size_t orig = input_remap.size(); orig-- > 0;) {
    first_input[input_remap[orig]] = static_cast<uint32_t>(orig);
  }
  for (auto& u : report.unsplittable) u.fault_id = first_input[u.fault_id];
  for (auto& w : report.warnings) w.fault_id = first_input[w.fault_id];
  return report;
}

template <typename Decoder>
inline SplitBuild decoder_split_pass(const FaultModel& normalized,
                                     const FaultModel& base_model,
                                     const DecodingGraph& base_graph,
                                     Decoder& decoder,
                                     const std::vector<char>& already_split,
                                     SplitBuild build) {
  for (const Fault& f : normalized.faults()) {
    if (already_split[f.id]) continue;
    std::string reason;
    bool adjusted = false;
    auto derived = decoder_split_one(f, base_model, base_graph, decoder,
                                     &reason, &adjusted);
    if (!derived) {
      build.unsplittable.push_back(UnsplittableFault{f.id, reason});
      continue;
    }
    if (adjusted) {
      build.warnings.push_back(SplitWarning{
          f.id,
          "constituent observables disagreed with the original fault; "
          "residual folded into the first derived fault"});
    }
    std::vector<uint32_t> ids;
    for (Fault& df : *derived) {
      ids.push_back(static_cast<uint32_t>(build.faults.size()));
      build.faults.push_back(std::move(df));
    }
    build.decomposition[f.id] = std::move(ids);
  }
  return build;
}

}  // namespace detail

/// Decoder-based splitting: start the split model from the primitive faults,
/// then decompose every non-primitive fault by decoding its syndrome against
/// the primitive graph and cutting the correction into matched-pair paths.
/// Duplicates in the result are merged once at the end.
inline SplitReport split_decoder_based(const FaultModel& input,
                                       DecoderKind decoder_kind) {
  MergeResult norm = merge_duplicates(input);
  const FaultModel& model = norm.model;

  std::vector<uint32_t> prim = primitive_faults(model);
  std::vector<Fault> prim_faults;
  for (uint32_t id : prim) prim_faults.push_back(model.fault(id));
  FaultModel base(model.check_count(), model.observable_count(),
                  std::move(prim_faults));
  DecodingGraph graph = DecodingGraph::build(base);

  detail::SplitBuild build;
  build.decomposition.resize(model.fault_count());
  std::vector<char> already(model.fault_count(), 0);
  for (size_t i = 0; i < prim.size(); ++i) {
    build.faults.push_back(base.fault(static_cast<uint32_t>(i)));
    build.decomposition[prim[i]] = {static_cast<uint32_t>(i)};
    already[prim[i]] = 1;
  }

  if (decoder_kind == DecoderKind::kMwpm) {
    MwpmDecoder decoder(base, graph);
    build = detail::decoder_split_pass(model, base, graph, decoder, already,
                                       std::move(build));
  } else {
    UnionFindDecoder decoder(base, graph);
    build = detail::decoder_split_pass(model, base, graph, decoder, already,
                                       std::move(build));
  }
  return detail::finalize(model, std::move(build), norm.remap);
}

namespace detail {

/// Shared engine for the recursive splitting sweep. Runs synchronized
/// passes: within a pass, faults are visited by ascending syndrome weight
/// and, within a weight, ascending id of the fault they descend from. A
/// 1-fault moves to the split set; a 2-fault moves unless its syndrome is
/// the sum of two 1-fault syndromes already in the split set; otherwise the
/// smallest split-set fault whose syndrome is a proper subset is peeled off
/// and the remainder goes back to the work set. The sweep stops when a full
/// pass changes nothing.
///
/// `use_index` switches between the production implementation (check-indexed
/// candidate lookup, a weight-bucketed queue) and the plain reference
/// implementation (linear scans). Both follow the identical visit order and
/// produce identical results; the reference exists to pin the semantics.
class RecursiveEngine {
 public:
  RecursiveEngine(const FaultModel& model, bool use_index)
      : model_(&model), use_index_(use_index) {}

  struct Item {
    uint32_t origin = 0;  // normalized fault id this item descends from
    Syndrome syndrome;
    SparseSet observables;
    double probability = 0.0;
    std::string label;
    std::vector<uint32_t> chain;  // split-set ids already peeled off
  };

  // `seed` pre-populates the split set (used when another method ran first).
  SplitBuild run(std::vector<Fault> seed, std::vector<uint32_t> work_ids,
                 uint32_t* passes_out = nullptr) {
    SplitBuild build;
    build.decomposition.resize(model_->fault_count());
    one_fault_checks_.assign(model_->check_count(), 0);
    check_index_.assign(model_->check_count(), {});

    for (Fault& f : seed) add_to_split(build, std::move(f));

    std::vector<Item> work;
    for (uint32_t id : work_ids) {
      const Fault& f = model_->fault(id);
      work.push_back(Item{id, f.syndrome, f.observables, f.probability,
                          f.label, {}});
    }

    uint32_t passes = 0;
    bool changed = true;
    while (!work.empty() && changed) {
      changed = false;
      ++passes;

      size_t max_w = 0;
      for (const Item& it : work) max_w = std::max(max_w, it.syndrome.size());
      for (size_t w = 1; w <= max_w; ++w) {
        // Snapshot this weight class; items replaced mid-pass re-enter at a
        // strictly smaller weight and wait for the next pass.
        std::vector<size_t> klass;
        for (size_t i = 0; i < work.size(); ++i) {
          if (work[i].syndrome.size() == w) klass.push_back(i);
        }
        std::sort(klass.begin(), klass.end(), [&](size_t a, size_t b) {
          return work[a].origin < work[b].origin;
        });

        for (size_t idx : klass) {
          Item& it = work[idx];
          if (it.syndrome.size() != w) continue;  // replaced earlier this pass

          if (w == 1) {
            move_to_split(build, it);
            changed = true;
            continue;
          }
          if (w == 2) {
            const auto& checks = it.syndrome.items();
            if (!(one_fault_checks_[checks[0]] && one_fault_checks_[checks[1]])) {
              move_to_split(build, it);
              changed = true;
              continue;
            }
          }
          uint32_t g = find_subset_fault(build, it.syndrome);
          if (g != kNoEdge) {
            it.syndrome ^= build.faults[g].syndrome;
            it.observables ^= build.faults[g].observables;
            it.chain.push_back(g);
            changed = true;
          }
        }
      }
      // Drop items consumed into the split set this pass.
      std::vector<Item> next;
      for (Item& it : work) {
        if (!it.syndrome.empty()) next.push_back(std::move(it));
      }
      work = std::move(next);
    }

    for (Item& it : work) {
      build.unsplittable.push_back(UnsplittableFault{
          it.origin,
          "recursive sweep stalled: no split-set fault divides its syndrome"});
    }
    if (passes_out) *passes_out = passes;
    return build;
  }

 private:
  void add_to_split(SplitBuild& build, Fault f) {
    uint32_t id = static_cast<uint32_t>(build.faults.size());
    if (f.syndrome.size() == 1) one_fault_checks_[f.syndrome.items()[0]] = 1;
    for (uint32_t c : f.syndrome.items()) check_index_[c].push_back(id);
    build.faults.push_back(std::move(f));
  }

  void move_to_split(SplitBuild& build, Item& it) {
    Fault f;
    f.probability = it.probability;
    f.syndrome = it.syndrome;
    f.observables = it.observables;
    f.label = it.label;
    uint32_t id = static_cast<uint32_t>(build.faults.size());
    add_to_split(build, std::move(f));
    it.chain.push_back(id);
    build.decomposition[it.origin] = it.chain;
    it.syndrome = Syndrome{};  // consumed; compacted at the end of the pass
  }

  // Smallest (by weight, then syndrome, then observables, then id) split-set
  // fault whose syndrome is a proper, non-empty subset of `syndrome`.
  // Content-first ordering keeps the indexed and reference variants aligned.
  uint32_t find_subset_fault(const SplitBuild& build, const Syndrome& syndrome) {
    uint32_t best = kNoEdge;
    auto better = [&](uint32_t a, uint32_t b) {
      const Fault& fa = build.faults[a];
      const Fault& fb = build.faults[b];
      if (fa.syndrome.size() != fb.syndrome.size()) {
        return fa.syndrome.size() < fb.syndrome.size();
      }
      if (fa.syndrome != fb.syndrome) return fa.syndrome < fb.syndrome;
      if (fa.observables != fb.observables) return fa.observables < fb.observables;
      return a < b;
    };
    auto consider = [&](uint32_t id) {
      const Fault& g = build.faults[id];
      if (g.syndrome.size() >= syndrome.size()) return;
      for (uint32_t c : g.syndrome.items()) {
        if (!syndrome.contains(c)) return;
      }
      if (best == kNoEdge || better(id, best)) best = id;
    };
    if (use_index_) {
      for (uint32_t c : syndrome.items()) {
        for (uint32_t id : check_index_[c]) consider(id);
      }
    } else {
      for (uint32_t id = 0; id < build.faults.size(); ++id) consider(id);
    }
    return best;
  }

  const FaultModel* model_;
  bool use_index_;
  std::vector<char> one_fault_checks_;
  std::vector<std::vector<uint32_t>> check_index_;
};

inline SplitReport split_recursive_impl(const FaultModel& input, bool use_index,
                                        uint32_t* passes_out) {
  MergeResult norm = merge_duplicates(input);
  const FaultModel& model = norm.model;
  detail::RecursiveEngine engine(model, use_index);
  std::vector<uint32_t> all(model.fault_count());
  for (uint32_t i = 0; i < all.size(); ++i) all[i] = i;
  SplitBuild build = engine.run({}, std::move(all), passes_out);
  return finalize(model, std::move(build), norm.remap);
}

}  // namespace detail

/// Recursive splitting sweep (production path: check-indexed subset tests).
inline SplitReport split_recursive(const FaultModel& input,
                                   uint32_t* passes_out = nullptr) {
  return detail::split_recursive_impl(input, /*use_index=*/true, passes_out);
}

/// Reference form of the recursive sweep with plain linear scans. Kept to
/// pin the semantics; must produce the same result as split_recursive.
inline SplitReport split_recursive_reference(const FaultModel& input,
                                             uint32_t* passes_out = nullptr) {
  return detail::split_recursive_impl(input, /*use_index=*/false, passes_out);
}

/// Runs one splitting method, then feeds its unsplittable faults to the
/// other method built over the union of all graph-like faults produced so
/// far. Reports are merged.
inline SplitReport split_combined(const FaultModel& input,
                                  DecoderKind decoder_kind, CombineOrder order) {
  MergeResult norm = merge_duplicates(input);
  const FaultModel& model = norm.model;

  detail::SplitBuild build;
  if (order == CombineOrder::kRecursiveThenDecoder) {
    detail::RecursiveEngine engine(model, /*use_index=*/true);
    std::vector<uint32_t> all(model.fault_count());
    for (uint32_t i = 0; i < all.size(); ++i) all[i] = i;
    build = engine.run({}, std::move(all));

    if (!build.unsplittable.empty()) {
      FaultModel base(model.check_count(), model.observable_count(),
                      build.faults);
      DecodingGraph graph = DecodingGraph::build(base);
      std::vector<UnsplittableFault> still;
      auto run_stage2 = [&](auto& decoder) {
        for (const UnsplittableFault& u : build.unsplittable) {
          const Fault& f = model.fault(u.fault_id);
          std::string reason;
          bool adjusted = false;
          auto derived = detail::decoder_split_one(f, base, graph, decoder,
                                                   &reason, &adjusted);
          if (!derived) {
            still.push_back(UnsplittableFault{
                u.fault_id, u.reason + "; decoder stage: " + reason});
            continue;
          }
          if (adjusted) {
            build.warnings.push_back(SplitWarning{
                f.id,
                "constituent observables disagreed with the original fault; "
                "residual folded into the first derived fault"});
          }
          std::vector<uint32_t> ids;
          for (Fault& df : *derived) {
            ids.push_back(static_cast<uint32_t>(build.faults.size()));
            build.faults.push_back(std::move(df));
          }
          build.decomposition[u.fault_id] = std::move(ids);
        }
      };
      if (decoder_kind == DecoderKind::kMwpm) {
        MwpmDecoder decoder(base, graph);
        run_stage2(decoder);
      } else {
        UnionFindDecoder decoder(base, graph);
        run_stage2(decoder);
      }
      build.unsplittable = std::move(still);
    }
  } else {
    // Decoder-based first.
    std::vector<uint32_t> prim = primitive_faults(model);
    std::vector<Fault> prim_faults;
    for (uint32_t id : prim) prim_faults.push_back(model.fault(id));
    FaultModel base(model.check_count(), model.observable_count(),
                    std::move(prim_faults));
    DecodingGraph graph = DecodingGraph::build(base);

    build.decomposition.resize(model.fault_count());
    std::vector<char> already(model.fault_count(), 0);
    for (size_t i = 0; i < prim.size(); ++i) {
      build.faults.push_back(base.fault(static_cast<uint32_t>(i)));
      build.decomposition[prim[i]] = {static_cast<uint32_t>(i)};
      already[prim[i]] = 1;
    }
    if (decoder_kind == DecoderKind::kMwpm) {
      MwpmDecoder decoder(base, graph);
      build = detail::decoder_split_pass(model, base, graph, decoder, already,
                                         std::move(build));
    } else {
      UnionFindDecoder decoder(base, graph);
      build = detail::decoder_split_pass(model, base, graph, decoder, already,
                                         std::move(build));
    }

    if (!build.unsplittable.empty()) {
      detail::RecursiveEngine engine(model, /*use_index=*/true);
      std::vector<uint32_t> work;
      for (const UnsplittableFault& u : build.unsplittable) {
        work.push_back(u.fault_id);
      }
      detail::SplitBuild stage2 =
          engine.run(build.faults, std::move(work), nullptr);
      // stage2.faults starts with the seed faults, so earlier ids agree.
      build.faults = std::move(stage2.faults);
      for (uint32_t id = 0; id < model.fault_count(); ++id) {
        if (!stage2.decomposition[id].empty()) {
          build.decomposition[id] = stage2.decomposition[id];
        }
      }
      std::vector<UnsplittableFault> still;
      for (const UnsplittableFault& u : stage2.unsplittable) {
        still.push_back(UnsplittableFault{
            u.fault_id, "decoder stage failed; " + u.reason});
      }
      build.unsplittable = std::move(still);
      build.warnings.insert(build.warnings.end(), stage2.warnings.begin(),
                            stage2.warnings.end());
    }
  }

  return detail::finalize(model, std::move(build), norm.remap);
}

}  // namespace splitmatch

#endif  // SPLITMATCH_SPLITTING_H
