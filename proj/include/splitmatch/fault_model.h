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

#ifndef SPLITMATCH_FAULT_MODEL_H
#define SPLITMATCH_FAULT_MODEL_H

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <initializer_list>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace splitmatch {

/// Sorted set of indices with symmetric-difference addition. Plays three
/// roles: a syndrome (set of triggered checks), an observable set, and a
/// fault configuration (set of fault ids). Addition mod 2 means an element
/// appearing twice cancels.
class SparseSet {
 public:
  SparseSet() = default;

  SparseSet(std::initializer_list<uint32_t> items) : items_(items) {
    normalize_or_throw();
  }

  explicit SparseSet(std::vector<uint32_t> items) : items_(std::move(items)) {
    normalize_or_throw();
  }

  static SparseSet from_sorted_unique(std::vector<uint32_t> items) {
    SparseSet s;
    s.items_ = std::move(items);
    return s;
  }

  size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }

  bool contains(uint32_t x) const {
    return std::binary_search(items_.begin(), items_.end(), x);
  }

  const std::vector<uint32_t>& items() const { return items_; }

  SparseSet& operator^=(const SparseSet& other) {
    std::vector<uint32_t> out;
    out.reserve(items_.size() + other.items_.size());
    std::set_symmetric_difference(items_.begin(), items_.end(),
                                  other.items_.begin(), other.items_.end(),
                                  std::back_inserter(out));
    items_ = std::move(out);
    return *this;
  }

  SparseSet operator^(const SparseSet& other) const {
    SparseSet out = *this;
    out ^= other;
    return out;
  }

  bool operator==(const SparseSet& other) const { return items_ == other.items_; }
  bool operator!=(const SparseSet& other) const { return items_ != other.items_; }
  bool operator<(const SparseSet& other) const { return items_ < other.items_; }

 private:
  void normalize_or_throw() {
    std::sort(items_.begin(), items_.end());
    if (std::adjacent_find(items_.begin(), items_.end()) != items_.end()) {
      throw std::invalid_argument("duplicate element in sparse set");
    }
  }

  std::vector<uint32_t> items_;
};

using Syndrome = SparseSet;
using FaultConfiguration = SparseSet;

/// A single independent error mechanism: it occurs with `probability`,
/// triggers the checks in `syndrome` and flips the observables in
/// `observables`. The label is free-form diagnostic text and is not part of
/// the model's identity.
struct Fault {
  uint32_t id = 0;
  double probability = 0.0;
  Syndrome syndrome;
  SparseSet observables;
  std::string label;
};

namespace detail {

inline void check_probability(double p) {
  if (!(p > 0.0) || !(p <= 0.5)) {
    throw std::range_error("fault probability must lie in (0, 0.5], got " +
                           std::to_string(p));
  }
}

}  // namespace detail

/// A finite set of independent faults over a fixed universe of checks and
/// observables. Fault ids are dense and assigned in input order, so every
/// downstream algorithm is reproducible. Immutable after construction.
class FaultModel {
 public:
  FaultModel() = default;

  FaultModel(uint32_t check_count, uint32_t observable_count,
             std::vector<Fault> faults)
      : check_count_(check_count),
        observable_count_(observable_count),
        faults_(std::move(faults)) {
    for (size_t i = 0; i < faults_.size(); ++i) {
      Fault& f = faults_[i];
      f.id = static_cast<uint32_t>(i);
      detail::check_probability(f.probability);
      if (f.syndrome.empty()) {
        throw std::invalid_argument("fault " + std::to_string(i) +
                                    " triggers no checks (0-faults are rejected)");
      }
      if (!f.syndrome.empty() && f.syndrome.items().back() >= check_count_) {
        throw std::out_of_range("fault " + std::to_string(i) +
                                " references check " +
                                std::to_string(f.syndrome.items().back()) +
                                " outside [0, " + std::to_string(check_count_) + ")");
      }
      if (!f.observables.empty() &&
          f.observables.items().back() >= observable_count_) {
        throw std::out_of_range("fault " + std::to_string(i) +
                                " references observable " +
                                std::to_string(f.observables.items().back()) +
                                " outside [0, " + std::to_string(observable_count_) + ")");
      }
    }
  }

  uint32_t check_count() const { return check_count_; }
  uint32_t observable_count() const { return observable_count_; }
  const std::vector<Fault>& faults() const { return faults_; }
  size_t fault_count() const { return faults_.size(); }

  const Fault& fault(uint32_t id) const {
    if (id >= faults_.size()) {
      throw std::out_of_range("unknown fault id " + std::to_string(id));
    }
    return faults_[id];
  }

  Syndrome syndrome_of(const FaultConfiguration& config) const {
    Syndrome out;
    for (uint32_t id : config.items()) out ^= fault(id).syndrome;
    return out;
  }

  SparseSet observables_of(const FaultConfiguration& config) const {
    SparseSet out;
    for (uint32_t id : config.items()) out ^= fault(id).observables;
    return out;
  }

 private:
  uint32_t check_count_ = 0;
  uint32_t observable_count_ = 0;
  std::vector<Fault> faults_;
};

/// Two faults with the same syndrome but different observable sets cannot be
/// told apart by the checks; they are kept distinct and flagged.
struct MergeWarning {
  uint32_t fault_a = 0;
  uint32_t fault_b = 0;
  std::string message;
};

struct MergeResult {
  FaultModel model;
  // Maps each input fault id to the id of the fault representing it in the
  // merged model.
  std::vector<uint32_t> remap;
  std::vector<MergeWarning> warnings;
};

/// Combines faults with identical (syndrome, observables) into a single fault
/// with probability 1 - prod(1 - p_i), folded left-to-right in id order.
/// Faults that share a syndrome but disagree on observables stay distinct and
/// produce a warning. Idempotent.
inline MergeResult merge_duplicates(const FaultModel& model) {
  struct Group {
    uint32_t first_id;
    double probability;
    std::vector<uint32_t> members;
  };
  std::map<std::pair<std::vector<uint32_t>, std::vector<uint32_t>>, size_t> index;
  std::vector<Group> groups;

  for (const Fault& f : model.faults()) {
    auto key = std::make_pair(f.syndrome.items(), f.observables.items());
    auto it = index.find(key);
    if (it == index.end()) {
      index.emplace(std::move(key), groups.size());
      groups.push_back(Group{f.id, f.probability, {f.id}});
    } else {
      Group& g = groups[it->second];
      g.probability = g.probability + f.probability - g.probability * f.probability;
      g.members.push_back(f.id);
    }
  }

  MergeResult result;
  result.remap.resize(model.fault_count());
  std::vector<Fault> merged;
  merged.reserve(groups.size());
  for (size_t out_id = 0; out_id < groups.size(); ++out_id) {
    const Group& g = groups[out_id];
    if (g.probability >= 0.5) {
      throw std::range_error("merged probability " + std::to_string(g.probability) +
                             " for duplicate faults reaches 0.5");
    }
    const Fault& first = model.fault(g.first_id);
    Fault f;
    f.probability = g.probability;
    f.syndrome = first.syndrome;
    f.observables = first.observables;
    f.label = first.label;
    merged.push_back(std::move(f));
    for (uint32_t m : g.members) result.remap[m] = static_cast<uint32_t>(out_id);
  }

  // Flag same-syndrome groups whose observable sets disagree.
  std::map<std::vector<uint32_t>, uint32_t> by_syndrome;
  for (const Group& g : groups) {
    const Fault& f = model.fault(g.first_id);
    auto it = by_syndrome.find(f.syndrome.items());
    if (it == by_syndrome.end()) {
      by_syndrome.emplace(f.syndrome.items(), g.first_id);
    } else {
      std::ostringstream msg;
      msg << "faults " << it->second << " and " << g.first_id
          << " share a syndrome but flip different observables; kept distinct";
      result.warnings.push_back(MergeWarning{it->second, g.first_id, msg.str()});
    }
  }

  result.model = FaultModel(model.check_count(), model.observable_count(),
                            std::move(merged));
  return result;
}

/// Parse failure in the fault-model text format; `line` is 1-based.
class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ": " + message),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

namespace detail {

inline bool parse_index_token(const std::string& tok, char prefix, uint32_t* out) {
  if (tok.size() < 2 || tok[0] != prefix) return false;
  uint64_t value = 0;
  for (size_t i = 1; i < tok.size(); ++i) {
    if (tok[i] < '0' || tok[i] > '9') return false;
    value = value * 10 + static_cast<uint64_t>(tok[i] - '0');
    if (value > 0xffffffffull) return false;
  }
  *out = static_cast<uint32_t>(value);
  return true;
}

}  // namespace detail

/// Reads a fault model from the line-oriented text format:
///
///   # comment
///   checks 8
///   observables 2
///   error(0.01) D0 D3 L0
///
/// Header lines appear exactly once, before any error line. Fault lines list
/// a probability, one or more D tokens and zero or more L tokens in any
/// order; duplicates within a line are a syntax error.
inline FaultModel read_model(const std::string& text) {
  bool have_checks = false, have_observables = false;
  uint64_t check_count = 0, observable_count = 0;
  std::vector<Fault> faults;

  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;       // blank line
    if (tok[0] == '#') continue;      // comment line

    if (tok == "checks" || tok == "observables") {
      bool& seen = (tok == "checks") ? have_checks : have_observables;
      uint64_t& slot = (tok == "checks") ? check_count : observable_count;
      if (seen) throw ParseError(line_no, "duplicate '" + tok + "' header");
      if (!faults.empty()) {
        throw ParseError(line_no, "'" + tok + "' header after error lines");
      }
      std::string num;
      if (!(ls >> num)) throw ParseError(line_no, "missing count after '" + tok + "'");
      try {
        size_t pos = 0;
        long long v = std::stoll(num, &pos);
        if (pos != num.size() || v < 0) throw std::invalid_argument("");
        slot = static_cast<uint64_t>(v);
      } catch (const std::exception&) {
        throw ParseError(line_no, "invalid count '" + num + "'");
      }
      std::string extra;
      if (ls >> extra) throw ParseError(line_no, "unexpected token '" + extra + "'");
      seen = true;
      continue;
    }

    if (tok.rfind("error(", 0) == 0) {
      if (!have_checks || !have_observables) {
        throw ParseError(line_no, "error line before 'checks'/'observables' headers");
      }
      if (tok.back() != ')') {
        throw ParseError(line_no, "malformed probability in '" + tok + "'");
      }
      std::string num = tok.substr(6, tok.size() - 7);
      double p = 0.0;
      try {
        size_t pos = 0;
        p = std::stod(num, &pos);
        if (pos != num.size()) throw std::invalid_argument("");
      } catch (const std::exception&) {
        throw ParseError(line_no, "invalid probability '" + num + "'");
      }
      if (!(p > 0.0) || !(p <= 0.5)) {
        throw ParseError(line_no, "probability " + num + " outside (0, 0.5]");
      }

      std::vector<uint32_t> checks, observables;
      while (ls >> tok) {
        uint32_t idx = 0;
        if (detail::parse_index_token(tok, 'D', &idx)) {
          if (idx >= check_count) {
            throw ParseError(line_no, "check index " + std::to_string(idx) +
                                          " out of range");
          }
          if (std::find(checks.begin(), checks.end(), idx) != checks.end()) {
            throw ParseError(line_no, "duplicate token '" + tok + "'");
          }
          checks.push_back(idx);
        } else if (detail::parse_index_token(tok, 'L', &idx)) {
          if (idx >= observable_count) {
            throw ParseError(line_no, "observable index " + std::to_string(idx) +
                                          " out of range");
          }
          if (std::find(observables.begin(), observables.end(), idx) !=
              observables.end()) {
            throw ParseError(line_no, "duplicate token '" + tok + "'");
          }
          observables.push_back(idx);
        } else {
          throw ParseError(line_no, "unrecognized token '" + tok + "'");
        }
      }
      if (checks.empty()) {
        throw ParseError(line_no, "error line triggers no checks");
      }
      Fault f;
      f.probability = p;
      f.syndrome = Syndrome(std::move(checks));
      f.observables = SparseSet(std::move(observables));
      faults.push_back(std::move(f));
      continue;
    }

    throw ParseError(line_no, "unrecognized line starting with '" + tok + "'");
  }

  if (!have_checks) throw ParseError(line_no, "missing 'checks' header");
  if (!have_observables) throw ParseError(line_no, "missing 'observables' header");
  if (check_count > 0xffffffffull || observable_count > 0xffffffffull) {
    throw ParseError(1, "count too large");
  }
  return FaultModel(static_cast<uint32_t>(check_count),
                    static_cast<uint32_t>(observable_count), std::move(faults));
}

/// Serializes a model in the text format. Probabilities are written with 17
/// significant digits so read(write(m)) reproduces them exactly; D tokens
/// come first in ascending order, then L tokens. Labels are diagnostic only
/// and are not serialized.
inline std::string write_model(const FaultModel& model) {
  std::ostringstream out;
  out << "checks " << model.check_count() << "\n";
  out << "observables " << model.observable_count() << "\n";
  char buf[64];
  for (const Fault& f : model.faults()) {
    std::snprintf(buf, sizeof buf, "%.17g", f.probability);
    out << "error(" << buf << ")";
    for (uint32_t c : f.syndrome.items()) out << " D" << c;
    for (uint32_t l : f.observables.items()) out << " L" << l;
    out << "\n";
  }
  return out.str();
}

}  // namespace splitmatch

#endif  // SPLITMATCH_FAULT_MODEL_H
