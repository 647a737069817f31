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

#ifndef SPLITMATCH_HARNESS_H
#define SPLITMATCH_HARNESS_H

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "splitmatch/decoders.h"
#include "splitmatch/decoding_graph.h"
#include "splitmatch/fault_model.h"
#include "splitmatch/rng.h"
#include "splitmatch/splitting.h"

namespace splitmatch {

struct WilsonInterval {
  double low = 0.0;
  double high = 1.0;
};

/// Wilson 95% score interval for a binomial proportion.
inline WilsonInterval wilson95(uint64_t failures, uint64_t shots) {
  if (shots == 0) return {0.0, 1.0};
  const double z = 1.959963984540054;
  const double n = static_cast<double>(shots);
  const double p = static_cast<double>(failures) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half =
      (z / denom) * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

/// Default worker count: the SPLITMATCH_THREADS environment variable when it
/// is set and positive, otherwise the hardware concurrency. An explicit
/// non-zero request wins over both.
inline unsigned resolve_worker_count(unsigned requested) {
  if (requested != 0) return requested;
  if (const char* env = std::getenv("SPLITMATCH_THREADS")) {
    long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

struct SampleStats {
  uint64_t shots = 0;
  uint64_t seed = 0;
  uint64_t failures = 0;
  std::vector<uint64_t> failures_per_observable;
  // Shots whose syndrome hits a check with no edge in the split graph (or an
  // odd component without boundary edges); counted as failures above and
  // tallied here separately.
  uint64_t unsplittable_leaks = 0;
  double failure_rate = 0.0;
  WilsonInterval interval;
  double wall_seconds = 0.0;  // informational; excluded from canonical JSON
  unsigned workers = 1;
};

/// Monte-Carlo estimate of the logical failure rate: per shot, draw each
/// fault of `original` independently (counter RNG keyed by seed, shot and
/// fault id), decode the true syndrome on the split model's graph and count
/// a failure when the predicted observables differ from the truth. Results
/// are bit-identical for any worker count.
inline SampleStats sample(const FaultModel& original,
                          const FaultModel& split_model, DecoderKind kind,
                          uint64_t shots, uint64_t seed, unsigned workers = 0) {
  if (shots < 1) throw std::invalid_argument("sample needs shots >= 1");
  if (split_model.check_count() != original.check_count()) {
    throw std::invalid_argument("split model has a different check universe");
  }

  const auto start_time = std::chrono::steady_clock::now();
  DecodingGraph graph = DecodingGraph::build(split_model);

  std::vector<char> covered(graph.check_count(), 0);
  for (const GraphEdge& e : graph.edges()) {
    if (!graph.is_boundary(e.u)) covered[e.u] = 1;
    if (!graph.is_boundary(e.v)) covered[e.v] = 1;
  }

  const unsigned n_workers =
      static_cast<unsigned>(std::min<uint64_t>(resolve_worker_count(workers), shots));

  struct Tally {
    uint64_t failures = 0;
    uint64_t leaks = 0;
    std::vector<uint64_t> per_observable;
  };
  std::vector<Tally> tallies(n_workers);

  auto run_range = [&](uint64_t begin, uint64_t end, Tally& tally) {
    tally.per_observable.assign(original.observable_count(), 0);
    MwpmDecoder mwpm(split_model, graph);
    UnionFindDecoder uf(split_model, graph);

    for (uint64_t shot = begin; shot < end; ++shot) {
      Syndrome syndrome;
      SparseSet truth;
      for (const Fault& f : original.faults()) {
        if (counter_uniform(seed, shot, f.id) < f.probability) {
          syndrome ^= f.syndrome;
          truth ^= f.observables;
        }
      }

      SparseSet predicted;
      bool leaked = false;
      for (uint32_t c : syndrome.items()) {
        if (!covered[c]) {
          leaked = true;
          break;
        }
      }
      if (!leaked && !syndrome.empty()) {
        try {
          predicted = (kind == DecoderKind::kMwpm)
                          ? mwpm.decode(syndrome).predicted_observables
                          : uf.decode(syndrome).predicted_observables;
        } catch (const std::runtime_error&) {
          leaked = true;  // odd component without boundary edges
        }
      }

      if (leaked) {
        ++tally.leaks;
        predicted = SparseSet{};
      }
      if (leaked || predicted != truth) ++tally.failures;
      for (uint32_t k = 0; k < original.observable_count(); ++k) {
        if (predicted.contains(k) != truth.contains(k)) {
          ++tally.per_observable[k];
        }
      }
    }
  };

  if (n_workers <= 1) {
    run_range(0, shots, tallies[0]);
  } else {
    std::vector<std::thread> threads;
    const uint64_t chunk = (shots + n_workers - 1) / n_workers;
    for (unsigned w = 0; w < n_workers; ++w) {
      uint64_t begin = w * chunk;
      uint64_t end = std::min(shots, begin + chunk);
      if (begin >= end) {
        tallies[w].per_observable.assign(original.observable_count(), 0);
        continue;
      }
      threads.emplace_back(run_range, begin, end, std::ref(tallies[w]));
    }
    for (auto& t : threads) t.join();
  }

  SampleStats stats;
  stats.shots = shots;
  stats.seed = seed;
  stats.workers = n_workers;
  stats.failures_per_observable.assign(original.observable_count(), 0);
  for (const Tally& t : tallies) {
    stats.failures += t.failures;
    stats.unsplittable_leaks += t.leaks;
    for (size_t k = 0; k < t.per_observable.size(); ++k) {
      stats.failures_per_observable[k] += t.per_observable[k];
    }
  }
  stats.failure_rate =
      static_cast<double>(stats.failures) / static_cast<double>(shots);
  stats.interval = wilson95(stats.failures, shots);
  stats.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start_time)
          .count();
  return stats;
}

// ---------------------------------------------------------------------------
// Exhaustive distance searches
// ---------------------------------------------------------------------------

struct DistanceSearch {
  // Empty when no qualifying configuration exists within the weight bound.
  std::optional<uint32_t> distance;
  std::vector<uint32_t> witness;  // fault ids, ascending
};

namespace detail {

inline void check_enumeration_guard(uint64_t m, uint32_t max_weight) {
  long double total = 0.0L, binom = 1.0L;
  for (uint32_t w = 1; w <= max_weight && w <= m; ++w) {
    binom *= static_cast<long double>(m - w + 1) / w;
    total += binom;
    if (total > 1e8L) {
      throw std::runtime_error(
          "enumeration guard exceeded: more than 1e8 configurations up to "
          "weight " + std::to_string(max_weight));
    }
  }
}

/// Enumerates configurations of exactly `weight` faults in ascending
/// lexicographic id order, maintaining the partial syndrome and observables;
/// prunes branches whose syndrome can no longer cancel. Returns true when
/// `visit` accepts a configuration (search stops).
template <typename Visit>
inline bool enumerate_configs(const FaultModel& model, uint32_t weight,
                              bool prune_for_empty_syndrome, Visit&& visit) {
  const auto& faults = model.faults();
  size_t max_single = 0;
  for (const Fault& f : faults) max_single = std::max(max_single, f.syndrome.size());

  std::vector<uint32_t> chosen;
  Syndrome syndrome;
  SparseSet obs;

  auto rec = [&](auto&& self, uint32_t start, uint32_t remaining) -> bool {
    if (remaining == 0) {
      return visit(chosen, syndrome, obs);
    }
    if (prune_for_empty_syndrome && syndrome.size() > remaining * max_single) {
      return false;
    }
    for (uint32_t id = start;
         id + remaining <= static_cast<uint32_t>(faults.size()); ++id) {
      chosen.push_back(id);
      Syndrome saved_syn = syndrome;
      SparseSet saved_obs = obs;
      syndrome ^= faults[id].syndrome;
      obs ^= faults[id].observables;
      if (self(self, id + 1, remaining - 1)) return true;
      syndrome = std::move(saved_syn);
      obs = std::move(saved_obs);
      chosen.pop_back();
    }
    return false;
  };
  return rec(rec, 0, weight);
}

}  // namespace detail

/// Minimum weight of a configuration with empty syndrome and non-empty
/// observables, by exhaustive enumeration in ascending weight. The witness
/// is the lexicographically first such configuration at that weight.
inline DistanceSearch model_distance(const FaultModel& model,
                                     uint32_t max_weight) {
  detail::check_enumeration_guard(model.fault_count(), max_weight);
  DistanceSearch out;
  for (uint32_t w = 1; w <= max_weight; ++w) {
    bool found = detail::enumerate_configs(
        model, w, /*prune_for_empty_syndrome=*/true,
        [&](const std::vector<uint32_t>& chosen, const Syndrome& syn,
            const SparseSet& obs) {
          if (syn.empty() && !obs.empty()) {
            out.distance = w;
            out.witness = chosen;
            return true;
          }
          return false;
        });
    if (found) break;
  }
  return out;
}

/// Minimum weight of an original-model configuration on which the decoder
/// (running on the split model's graph) predicts the wrong observables.
/// Syndromes touching checks absent from the split graph count as failures.
inline DistanceSearch effective_distance(const FaultModel& original,
                                         const FaultModel& split_model,
                                         DecoderKind kind, uint32_t max_weight) {
  detail::check_enumeration_guard(original.fault_count(), max_weight);
  if (split_model.check_count() != original.check_count()) {
    throw std::invalid_argument("split model has a different check universe");
  }

  DecodingGraph graph = DecodingGraph::build(split_model);
  std::vector<char> covered(graph.check_count(), 0);
  for (const GraphEdge& e : graph.edges()) {
    if (!graph.is_boundary(e.u)) covered[e.u] = 1;
    if (!graph.is_boundary(e.v)) covered[e.v] = 1;
  }
  MwpmDecoder mwpm(split_model, graph);
  UnionFindDecoder uf(split_model, graph);

  // Distinct syndromes repeat heavily across configurations; cache verdicts.
  struct Verdict {
    SparseSet predicted;
    bool leaked = false;
  };
  std::map<std::vector<uint32_t>, Verdict> cache;

  auto predict = [&](const Syndrome& syndrome) -> const Verdict& {
    auto it = cache.find(syndrome.items());
    if (it != cache.end()) return it->second;
    Verdict v;
    for (uint32_t c : syndrome.items()) {
      if (!covered[c]) {
        v.leaked = true;
        break;
      }
    }
    if (!v.leaked && !syndrome.empty()) {
      try {
        v.predicted = (kind == DecoderKind::kMwpm)
                          ? mwpm.decode(syndrome).predicted_observables
                          : uf.decode(syndrome).predicted_observables;
      } catch (const std::runtime_error&) {
        v.leaked = true;
        v.predicted = SparseSet{};
      }
    }
    return cache.emplace(syndrome.items(), std::move(v)).first->second;
  };

  DistanceSearch out;
  for (uint32_t w = 1; w <= max_weight; ++w) {
    bool found = detail::enumerate_configs(
        original, w, /*prune_for_empty_syndrome=*/false,
        [&](const std::vector<uint32_t>& chosen, const Syndrome& syn,
            const SparseSet& obs) {
          const Verdict& v = predict(syn);
          if (v.leaked || v.predicted != obs) {
            out.distance = w;
            out.witness = chosen;
            return true;
          }
          return false;
        });
    if (found) break;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Canonical JSON emission (deterministic byte-for-byte; no timing fields)
// ---------------------------------------------------------------------------

namespace detail {

inline std::string json_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <typename T>
inline std::string json_array(const std::vector<T>& xs) {
  std::ostringstream out;
  out << "[";
  for (size_t i = 0; i < xs.size(); ++i) {
    if (i) out << ",";
    out << xs[i];
  }
  out << "]";
  return out.str();
}

inline std::string json_escape(const std::string& s) {
  std::ostringstream out;
  for (char c : s) {
    switch (c) {
      case '"': out << "\\\""; break;
      case '\\': out << "\\\\"; break;
      case '\n': out << "\\n"; break;
      case '\t': out << "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out << buf;
        } else {
          out << c;
        }
    }
  }
  return out.str();
}

}  // namespace detail

inline std::string sample_stats_to_json(const SampleStats& stats,
                                        DecoderKind kind) {
  std::ostringstream out;
  out << "{\"command\":\"sample\",\"decoder\":\"" << decoder_kind_name(kind)
      << "\",\"shots\":" << stats.shots << ",\"seed\":" << stats.seed
      << ",\"failures\":" << stats.failures << ",\"failures_per_observable\":"
      << detail::json_array(stats.failures_per_observable)
      << ",\"unsplittable_leaks\":" << stats.unsplittable_leaks
      << ",\"failure_rate\":" << detail::json_double(stats.failure_rate)
      << ",\"wilson_95\":[" << detail::json_double(stats.interval.low) << ","
      << detail::json_double(stats.interval.high) << "]}";
  return out.str();
}

inline std::string distance_to_json(const DistanceSearch& search,
                                    uint32_t max_weight) {
  std::ostringstream out;
  out << "{\"command\":\"distance\",\"max_weight\":" << max_weight
      << ",\"model_distance\":";
  if (search.distance) {
    out << *search.distance;
  } else {
    out << "null";
  }
  out << ",\"exceeds_search_bound\":" << (search.distance ? "false" : "true")
      << ",\"witness\":" << detail::json_array(search.witness) << "}";
  return out.str();
}

inline std::string effective_distance_to_json(const DistanceSearch& model_d,
                                              const DistanceSearch& effective_d,
                                              DecoderKind kind,
                                              uint32_t max_weight) {
  std::ostringstream out;
  out << "{\"command\":\"effective-distance\",\"decoder\":\""
      << decoder_kind_name(kind) << "\",\"max_weight\":" << max_weight;
  out << ",\"model_distance\":";
  if (model_d.distance) {
    out << *model_d.distance;
  } else {
    out << "null";
  }
  out << ",\"model_distance_exceeds_bound\":"
      << (model_d.distance ? "false" : "true")
      << ",\"model_distance_witness\":" << detail::json_array(model_d.witness);
  out << ",\"effective_distance\":";
  if (effective_d.distance) {
    out << *effective_d.distance;
  } else {
    out << "null";
  }
  out << ",\"effective_distance_exceeds_bound\":"
      << (effective_d.distance ? "false" : "true")
      << ",\"effective_distance_witness\":"
      << detail::json_array(effective_d.witness);
  out << ",\"achieves_full_distance\":";
  if (model_d.distance && effective_d.distance) {
    uint32_t needed = (*model_d.distance + 1) / 2;
    out << (*effective_d.distance >= needed ? "true" : "false");
  } else {
    out << "null";
  }
  out << "}";
  return out.str();
}

/// Split report document. The split model itself lives in a separate file in
/// the fault-model text format; the report references it by path.
/// `decomposition` is an array indexed by the source model's fault ids.
inline std::string split_report_to_json(const SplitReport& report,
                                        const std::string& source_model_path,
                                        const std::string& split_model_path,
                                        const std::string& method,
                                        const std::string& decoder) {
  std::ostringstream out;
  out << "{\"source_model\":\"" << detail::json_escape(source_model_path)
      << "\",\"split_model\":\"" << detail::json_escape(split_model_path)
      << "\",\"method\":\"" << detail::json_escape(method) << "\",\"decoder\":";
  if (decoder.empty()) {
    out << "null";
  } else {
    out << "\"" << detail::json_escape(decoder) << "\"";
  }
  out << ",\"decomposition\":[";
  for (size_t i = 0; i < report.decomposition.size(); ++i) {
    if (i) out << ",";
    out << detail::json_array(report.decomposition[i]);
  }
  out << "],\"unsplittable\":[";
  for (size_t i = 0; i < report.unsplittable.size(); ++i) {
    if (i) out << ",";
    out << "{\"fault\":" << report.unsplittable[i].fault_id << ",\"reason\":\""
        << detail::json_escape(report.unsplittable[i].reason) << "\"}";
  }
  out << "],\"warnings\":[";
  for (size_t i = 0; i < report.warnings.size(); ++i) {
    if (i) out << ",";
    out << "{\"fault\":" << report.warnings[i].fault_id << ",\"message\":\""
        << detail::json_escape(report.warnings[i].message) << "\"}";
  }
  out << "]}";
  return out.str();
}

}  // namespace splitmatch

#endif  // SPLITMATCH_HARNESS_H
