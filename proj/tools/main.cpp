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

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "splitmatch/fault_model.h"
#include "splitmatch/harness.h"
#include "splitmatch/model_generators.h"
#include "splitmatch/splitting.h"

namespace {

using namespace splitmatch;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << content;
}

FaultModel load_model(const std::string& path) {
  return read_model(read_file(path));
}

DecoderKind parse_decoder(const std::string& name) {
  if (name == "mwpm") return DecoderKind::kMwpm;
  if (name == "uf") return DecoderKind::kUnionFind;
  throw std::runtime_error("unknown decoder '" + name + "'");
}

Syndrome parse_syndrome_tokens(const std::string& text) {
  std::istringstream in(text);
  std::string tok;
  std::vector<uint32_t> checks;
  while (in >> tok) {
    if (tok.size() < 2 || tok[0] != 'D') {
      throw std::runtime_error("bad syndrome token '" + tok +
                               "' (expected D<index>)");
    }
    checks.push_back(static_cast<uint32_t>(std::stoul(tok.substr(1))));
  }
  return Syndrome(std::move(checks));
}

// Loads the split model referenced by a split-report JSON document.
// Relative paths are resolved against the report's directory.
FaultModel load_split_model_from_report(const std::string& report_path) {
  nlohmann::json doc = nlohmann::json::parse(read_file(report_path));
  std::string split_path = doc.at("split_model").get<std::string>();
  if (!split_path.empty() && split_path[0] != '/') {
    size_t slash = report_path.find_last_of('/');
    if (slash != std::string::npos) {
      split_path = report_path.substr(0, slash + 1) + split_path;
    }
  }
  return load_model(split_path);
}

struct GenOptions {
  std::string family;
  std::string out;
  uint32_t n = 5;
  uint32_t d = 3;
  uint32_t rounds = 0;  // 0 = family default
  uint32_t lx = 3, ly = 3;
  uint32_t m = 5;
  double p = 0.01, px = 0.01, py = 0.01, pz = 0.01, pmeas = 0.01;
};

FaultModel run_generator(const GenOptions& o) {
  if (o.family == "repetition") return gen_repetition(o.n, o.p);
  if (o.family == "surface_perfect") {
    return gen_surface_perfect(o.d, o.px, o.py, o.pz);
  }
  if (o.family == "surface_phenom") {
    return gen_surface_phenom(o.d, o.rounds ? o.rounds : 3, o.px, o.pmeas);
  }
  if (o.family == "honeycomb") {
    return gen_honeycomb(o.lx, o.ly, o.rounds ? o.rounds : 6, o.px, o.py,
                         o.pz, o.pmeas);
  }
  if (o.family == "three_check") return gen_three_check(o.m, o.p);
  if (o.family == "expander_petersen") return gen_expander_petersen(o.p);
  throw std::runtime_error(
      "unknown family '" + o.family +
      "' (expected repetition, surface_perfect, surface_phenom, honeycomb, "
      "three_check or expander_petersen)");
}

SplitReport run_split(const FaultModel& model, const std::string& method,
                      DecoderKind kind) {
  if (method == "decoder") return split_decoder_based(model, kind);
  if (method == "recursive") return split_recursive(model);
  if (method == "combined-rd") {
    return split_combined(model, kind, CombineOrder::kRecursiveThenDecoder);
  }
  if (method == "combined-dr") {
    return split_combined(model, kind, CombineOrder::kDecoderThenRecursive);
  }
  throw std::runtime_error("unknown method '" + method +
                           "' (expected decoder, recursive, combined-rd or "
                           "combined-dr)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "splitmatch: split hypergraph fault models into graph-like ones and "
      "decode them with matching decoders"};
  app.require_subcommand(1);

  GenOptions gen_opts;
  auto* gen = app.add_subcommand("gen", "Generate a built-in fault model");
  gen->add_option("family", gen_opts.family,
                  "repetition | surface_perfect | surface_phenom | honeycomb "
                  "| three_check | expander_petersen")
      ->required();
  gen->add_option("-o,--output", gen_opts.out, "Output model file")->required();
  gen->add_option("--n", gen_opts.n, "Repetition length");
  gen->add_option("--d", gen_opts.d, "Surface code distance (odd)");
  gen->add_option("--T", gen_opts.rounds, "Measurement rounds");
  gen->add_option("--lx", gen_opts.lx, "Honeycomb torus width (multiple of 3)");
  gen->add_option("--ly", gen_opts.ly, "Honeycomb torus height (multiple of 3)");
  gen->add_option("--m", gen_opts.m, "Fault count for three_check");
  gen->add_option("--p", gen_opts.p, "Fault probability");
  gen->add_option("--px", gen_opts.px, "X fault probability");
  gen->add_option("--py", gen_opts.py, "Y fault probability");
  gen->add_option("--pz", gen_opts.pz, "Z fault probability");
  gen->add_option("--pmeas", gen_opts.pmeas, "Measurement flip probability");

  std::string split_in, split_out, split_report_path, split_method = "decoder";
  std::string split_decoder = "mwpm";
  bool split_strict = false;
  auto* split = app.add_subcommand("split", "Split a model into a graph-like one");
  split->add_option("-i,--input", split_in, "Input model file")->required();
  split->add_option("-o,--output", split_out, "Output split-model file")
      ->required();
  split->add_option("--method", split_method,
                    "decoder | recursive | combined-rd | combined-dr");
  split->add_option("--decoder", split_decoder, "mwpm | uf");
  split->add_option("--report", split_report_path, "Report JSON output path");
  split->add_flag("--strict", split_strict,
                  "Exit with status 3 when any fault is unsplittable");

  std::string decode_in, decode_split, decode_syndrome, decode_decoder = "mwpm";
  bool decode_json = false;
  auto* decode = app.add_subcommand("decode", "Decode one syndrome");
  decode->add_option("-i,--input", decode_in, "Original model file")->required();
  decode->add_option("--split", decode_split, "Split model file")->required();
  decode->add_option("--syndrome", decode_syndrome,
                     "Triggered checks, e.g. \"D1 D4\"")
      ->required();
  decode->add_option("--decoder", decode_decoder, "mwpm | uf");
  decode->add_flag("--json", decode_json, "Emit JSON on stdout");

  std::string sample_in, sample_report, sample_decoder = "mwpm";
  uint64_t sample_shots = 10000, sample_seed = 0;
  bool sample_json = false;
  auto* sample_cmd = app.add_subcommand("sample", "Monte-Carlo failure rate");
  sample_cmd->add_option("-i,--input", sample_in, "Original model file")
      ->required();
  sample_cmd->add_option("--report", sample_report,
                         "Split report JSON (omit for graph-like models)");
  sample_cmd->add_option("--decoder", sample_decoder, "mwpm | uf");
  sample_cmd->add_option("--shots", sample_shots, "Number of shots");
  sample_cmd->add_option("--seed", sample_seed, "RNG seed");
  sample_cmd->add_flag("--json", sample_json, "Emit JSON on stdout");

  std::string dist_in;
  uint32_t dist_max_weight = 4;
  bool dist_json = false;
  auto* dist = app.add_subcommand("distance", "Brute-force model distance");
  dist->add_option("-i,--input", dist_in, "Model file")->required();
  dist->add_option("--max-weight", dist_max_weight, "Search bound");
  dist->add_flag("--json", dist_json, "Emit JSON on stdout");

  std::string eff_in, eff_report, eff_decoder = "mwpm";
  uint32_t eff_max_weight = 4;
  bool eff_json = false;
  auto* eff = app.add_subcommand("effective-distance",
                                 "Minimum weight at which decoding fails");
  eff->add_option("-i,--input", eff_in, "Original model file")->required();
  eff->add_option("--report", eff_report,
                  "Split report JSON (omit for graph-like models)");
  eff->add_option("--decoder", eff_decoder, "mwpm | uf");
  eff->add_option("--max-weight", eff_max_weight, "Search bound");
  eff->add_flag("--json", eff_json, "Emit JSON on stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (gen->parsed()) {
      FaultModel model = run_generator(gen_opts);
      write_file(gen_opts.out, write_model(model));
      std::cerr << "wrote " << model.fault_count() << " faults over "
                << model.check_count() << " checks to " << gen_opts.out << "\n";
      return 0;
    }

    if (split->parsed()) {
      FaultModel model = load_model(split_in);
      DecoderKind kind = parse_decoder(split_decoder);
      SplitReport report = run_split(model, split_method, kind);
      write_file(split_out, write_model(report.split_model));
      if (!split_report_path.empty()) {
        write_file(split_report_path,
                   split_report_to_json(
                       report, split_in, split_out, split_method,
                       split_method == "recursive" ? "" : split_decoder) +
                       "\n");
      }
      std::cerr << "split " << model.fault_count() << " faults into "
                << report.split_model.fault_count() << " graph-like faults; "
                << report.unsplittable.size() << " unsplittable, "
                << report.warnings.size() << " warnings\n";
      for (const UnsplittableFault& u : report.unsplittable) {
        std::cerr << "  unsplittable fault " << u.fault_id << ": " << u.reason
                  << "\n";
      }
      if (split_strict && !report.unsplittable.empty()) return 3;
      return 0;
    }

    if (decode->parsed()) {
      FaultModel original = load_model(decode_in);
      FaultModel split_model = load_model(decode_split);
      Syndrome syndrome = parse_syndrome_tokens(decode_syndrome);
      DecodingGraph graph = DecodingGraph::build(split_model);
      DecoderKind kind = parse_decoder(decode_decoder);
      DecodeResult result;
      if (kind == DecoderKind::kMwpm) {
        MwpmDecoder dec(split_model, graph);
        result = dec.decode(syndrome);
      } else {
        UnionFindDecoder dec(split_model, graph);
        result = dec.decode(syndrome);
      }
      if (decode_json) {
        std::ostringstream out;
        out << "{\"command\":\"decode\",\"decoder\":\"" << decode_decoder
            << "\",\"correction\":";
        out << "[";
        for (size_t i = 0; i < result.correction.items().size(); ++i) {
          if (i) out << ",";
          out << result.correction.items()[i];
        }
        out << "],\"predicted_observables\":[";
        for (size_t i = 0; i < result.predicted_observables.items().size(); ++i) {
          if (i) out << ",";
          out << result.predicted_observables.items()[i];
        }
        out << "]}";
        std::cout << out.str() << "\n";
      } else {
        std::cout << "correction (" << result.correction.size()
                  << " split-model faults):\n";
        for (uint32_t id : result.correction.items()) {
          const Fault& f = split_model.fault(id);
          std::cout << "  fault " << id << ":";
          for (uint32_t c : f.syndrome.items()) std::cout << " D" << c;
          for (uint32_t l : f.observables.items()) std::cout << " L" << l;
          std::cout << "\n";
        }
        std::cout << "predicted observables:";
        if (result.predicted_observables.empty()) std::cout << " (none)";
        for (uint32_t l : result.predicted_observables.items()) {
          std::cout << " L" << l;
        }
        std::cout << "\n";
      }
      return 0;
    }

    if (sample_cmd->parsed()) {
      FaultModel original = load_model(sample_in);
      FaultModel split_model = sample_report.empty()
                                   ? original
                                   : load_split_model_from_report(sample_report);
      DecoderKind kind = parse_decoder(sample_decoder);
      SampleStats stats =
          sample(original, split_model, kind, sample_shots, sample_seed);
      if (sample_json) {
        std::cout << sample_stats_to_json(stats, kind) << "\n";
      } else {
        std::cout << "shots:            " << stats.shots << "\n"
                  << "failures:         " << stats.failures << "\n"
                  << "failure rate:     " << stats.failure_rate << "\n"
                  << "wilson 95%:       [" << stats.interval.low << ", "
                  << stats.interval.high << "]\n"
                  << "leaked shots:     " << stats.unsplittable_leaks << "\n"
                  << "workers:          " << stats.workers << "\n"
                  << "wall time (s):    " << stats.wall_seconds << "\n";
      }
      return 0;
    }

    if (dist->parsed()) {
      FaultModel model = load_model(dist_in);
      DistanceSearch d = model_distance(model, dist_max_weight);
      if (dist_json) {
        std::cout << distance_to_json(d, dist_max_weight) << "\n";
      } else if (d.distance) {
        std::cout << "model distance: " << *d.distance << "\nwitness:";
        for (uint32_t id : d.witness) std::cout << " " << id;
        std::cout << "\n";
      } else {
        std::cout << "model distance exceeds search bound " << dist_max_weight
                  << "\n";
      }
      return 0;
    }

    if (eff->parsed()) {
      FaultModel original = load_model(eff_in);
      FaultModel split_model = eff_report.empty()
                                   ? original
                                   : load_split_model_from_report(eff_report);
      DecoderKind kind = parse_decoder(eff_decoder);
      DistanceSearch model_d = model_distance(original, eff_max_weight);
      DistanceSearch eff_d =
          effective_distance(original, split_model, kind, eff_max_weight);
      if (eff_json) {
        std::cout << effective_distance_to_json(model_d, eff_d, kind,
                                                eff_max_weight)
                  << "\n";
      } else {
        std::cout << "model distance:     ";
        if (model_d.distance) {
          std::cout << *model_d.distance;
        } else {
          std::cout << "> " << eff_max_weight;
        }
        std::cout << "\neffective distance: ";
        if (eff_d.distance) {
          std::cout << *eff_d.distance;
        } else {
          std::cout << "> " << eff_max_weight;
        }
        std::cout << "\n";
        if (model_d.distance && eff_d.distance) {
          bool full = *eff_d.distance >= (*model_d.distance + 1) / 2;
          std::cout << "achieves full distance: " << (full ? "yes" : "no")
                    << "\n";
        }
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
