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

#ifndef SPLITMATCH_MODEL_GENERATORS_H
#define SPLITMATCH_MODEL_GENERATORS_H

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "splitmatch/fault_model.h"

namespace splitmatch {

// ---------------------------------------------------------------------------
// Repetition code
// ---------------------------------------------------------------------------

/// n bits, n-1 parity checks on consecutive bits, one total-parity
/// observable flipped by every bit flip. Bits 0 and n-1 are 1-faults.
inline FaultModel gen_repetition(uint32_t n, double p) {
  if (n < 2) throw std::invalid_argument("repetition code needs n >= 2");
  std::vector<Fault> faults;
  for (uint32_t j = 0; j < n; ++j) {
    Fault f;
    f.probability = p;
    std::vector<uint32_t> checks;
    if (j > 0) checks.push_back(j - 1);
    if (j + 1 < n) checks.push_back(j);
    f.syndrome = Syndrome(std::move(checks));
    f.observables = SparseSet{0};
    f.label = "bit " + std::to_string(j);
    faults.push_back(std::move(f));
  }
  return FaultModel(n - 1, 1, std::move(faults));
}

// ---------------------------------------------------------------------------
// Rotated surface code
// ---------------------------------------------------------------------------

namespace detail {

struct RotatedSurfaceLayout {
  uint32_t d = 0;
  struct Stab {
    bool x_type = false;
    std::vector<uint32_t> qubits;
  };
  std::vector<Stab> stabs;

  uint32_t qubit(uint32_t r, uint32_t c) const { return r * d + c; }

  explicit RotatedSurfaceLayout(uint32_t d_) : d(d_) {
    if (d < 3 || d % 2 == 0) {
      throw std::invalid_argument("surface code needs odd d >= 3");
    }
    // Bulk plaquettes on the checkerboard; Z-type boundaries top/bottom,
    // X-type boundaries left/right. The Z logical runs down column 0, the X
    // logical along row 0.
    for (uint32_t i = 0; i + 1 < d; ++i) {
      for (uint32_t j = 0; j + 1 < d; ++j) {
        Stab s;
        s.x_type = (i + j) % 2 != 0;
        s.qubits = {qubit(i, j), qubit(i, j + 1), qubit(i + 1, j),
                    qubit(i + 1, j + 1)};
        stabs.push_back(std::move(s));
      }
    }
    for (uint32_t j = 1; j + 1 < d; j += 2) {
      stabs.push_back(Stab{false, {qubit(0, j), qubit(0, j + 1)}});
    }
    for (uint32_t j = 0; j + 1 < d; j += 2) {
      stabs.push_back(Stab{false, {qubit(d - 1, j), qubit(d - 1, j + 1)}});
    }
    for (uint32_t i = 0; i + 1 < d; i += 2) {
      stabs.push_back(Stab{true, {qubit(i, 0), qubit(i + 1, 0)}});
    }
    for (uint32_t i = 1; i + 1 < d; i += 2) {
      stabs.push_back(Stab{true, {qubit(i, d - 1), qubit(i + 1, d - 1)}});
    }
  }

  std::vector<uint32_t> checks_containing(uint32_t q, bool x_type) const {
    std::vector<uint32_t> out;
    for (uint32_t s = 0; s < stabs.size(); ++s) {
      if (stabs[s].x_type != x_type) continue;
      for (uint32_t sq : stabs[s].qubits) {
        if (sq == q) {
          out.push_back(s);
          break;
        }
      }
    }
    return out;
  }
};

}  // namespace detail

/// Rotated surface code with perfect measurements and independent X, Y, Z
/// faults per qubit. X and Z faults trigger 1-2 checks, Y faults up to 4
/// (the X part XOR the Z part). Observable 0 is the Z logical (column 0),
/// observable 1 the X logical (row 0). The output is deliberately not
/// deduplicated: a Y fault is an independent mechanism even where its
/// syndrome coincides with an X-Z pair, and splitting is in charge of it.
inline FaultModel gen_surface_perfect(uint32_t d, double p_x, double p_y,
                                      double p_z) {
  detail::RotatedSurfaceLayout layout(d);
  std::vector<Fault> faults;
  for (uint32_t r = 0; r < d; ++r) {
    for (uint32_t c = 0; c < d; ++c) {
      uint32_t q = layout.qubit(r, c);
      Syndrome x_syn{layout.checks_containing(q, false)};  // X triggers Z checks
      Syndrome z_syn{layout.checks_containing(q, true)};
      SparseSet x_obs = (c == 0) ? SparseSet{0} : SparseSet{};
      SparseSet z_obs = (r == 0) ? SparseSet{1} : SparseSet{};
      std::string at = " q" + std::to_string(q);

      Fault fx;
      fx.probability = p_x;
      fx.syndrome = x_syn;
      fx.observables = x_obs;
      fx.label = "X" + at;
      faults.push_back(std::move(fx));

      Fault fy;
      fy.probability = p_y;
      fy.syndrome = x_syn ^ z_syn;
      fy.observables = x_obs ^ z_obs;
      fy.label = "Y" + at;
      faults.push_back(std::move(fy));

      Fault fz;
      fz.probability = p_z;
      fz.syndrome = z_syn;
      fz.observables = z_obs;
      fz.label = "Z" + at;
      faults.push_back(std::move(fz));
    }
  }
  return FaultModel(static_cast<uint32_t>(layout.stabs.size()), 2,
                    std::move(faults));
}

/// Phenomenological measurement noise for the X sector of the rotated
/// surface code: T rounds of plaquette measurements, each round except the
/// last followed by independent X faults. Check (i, t) compares the outcome
/// of plaquette i between steps t-1 and t, with all step -1 outcomes fixed
/// to 0. An X fault after step t triggers its incident plaquettes at t+1; an
/// outcome flip at step t triggers (i, t) and (i, t+1), only (i, t) at the
/// final step. Observable 0 is the Z logical (column 0).
inline FaultModel gen_surface_phenom(uint32_t d, uint32_t rounds, double p_x,
                                     double p_meas) {
  if (rounds < 1) throw std::invalid_argument("phenomenological model needs T >= 1");
  detail::RotatedSurfaceLayout layout(d);

  std::vector<uint32_t> z_stabs;
  for (uint32_t s = 0; s < layout.stabs.size(); ++s) {
    if (!layout.stabs[s].x_type) z_stabs.push_back(s);
  }
  std::vector<uint32_t> plaq_index(layout.stabs.size(), 0xffffffffu);
  for (uint32_t i = 0; i < z_stabs.size(); ++i) plaq_index[z_stabs[i]] = i;
  const uint32_t num_plaq = static_cast<uint32_t>(z_stabs.size());
  auto check_id = [&](uint32_t plaq, uint32_t t) { return t * num_plaq + plaq; };

  std::vector<Fault> faults;
  for (uint32_t t = 0; t + 1 < rounds; ++t) {
    for (uint32_t r = 0; r < d; ++r) {
      for (uint32_t c = 0; c < d; ++c) {
        uint32_t q = layout.qubit(r, c);
        std::vector<uint32_t> checks;
        for (uint32_t s : layout.checks_containing(q, false)) {
          checks.push_back(check_id(plaq_index[s], t + 1));
        }
        Fault f;
        f.probability = p_x;
        f.syndrome = Syndrome(std::move(checks));
        f.observables = (c == 0) ? SparseSet{0} : SparseSet{};
        f.label = "X q" + std::to_string(q) + " t" + std::to_string(t);
        faults.push_back(std::move(f));
      }
    }
  }
  for (uint32_t t = 0; t < rounds; ++t) {
    for (uint32_t p = 0; p < num_plaq; ++p) {
      std::vector<uint32_t> checks{check_id(p, t)};
      if (t + 1 < rounds) checks.push_back(check_id(p, t + 1));
      Fault f;
      f.probability = p_meas;
      f.syndrome = Syndrome(std::move(checks));
      f.label = "meas p" + std::to_string(p) + " t" + std::to_string(t);
      faults.push_back(std::move(f));
    }
  }
  FaultModel model(num_plaq * rounds, 1, std::move(faults));
  return merge_duplicates(model).model;
}

// ---------------------------------------------------------------------------
// Honeycomb Floquet code on a torus
// ---------------------------------------------------------------------------

namespace detail {

inline int imod(int x, int m) { return ((x % m) + m) % m; }

/// Honeycomb lattice on a torus of Lx x Ly unit cells. Each cell (a, b)
/// carries two vertices u, w and three edges; hexagonal faces are 3-colored
/// by (a - b) mod 3, and each edge takes the color missing from its two
/// adjacent faces. The check measured on a color-c edge acts as the same
/// Pauli (X, Y or Z for c = 0, 1, 2) on both endpoints.
struct HoneycombLattice {
  int lx = 0, ly = 0;

  HoneycombLattice(int lx_, int ly_) : lx(lx_), ly(ly_) {
    if (lx < 3 || ly < 3 || lx % 3 != 0 || ly % 3 != 0) {
      throw std::invalid_argument(
          "honeycomb torus needs Lx, Ly >= 3 and divisible by 3 for a "
          "consistent 3-coloring");
    }
  }

  int cells() const { return lx * ly; }
  int vertex_count() const { return 2 * cells(); }
  int edge_count() const { return 3 * cells(); }

  int cell(int a, int b) const { return imod(b, ly) * lx + imod(a, lx); }
  int vertex(int a, int b, int s) const { return 2 * cell(a, b) + s; }
  int edge(int a, int b, int t) const { return 3 * cell(a, b) + t; }

  // Edge t of cell (a, b): t=0 joins u(a,b)-w(a,b); t=1 joins w(a,b)-u(a+1,b);
  // t=2 joins w(a,b)-u(a,b+1).
  std::array<int, 2> edge_ends(int e) const {
    int c = e / 3, t = e % 3;
    int a = c % lx, b = c / lx;
    switch (t) {
      case 0: return {vertex(a, b, 0), vertex(a, b, 1)};
      case 1: return {vertex(a, b, 1), vertex(a + 1, b, 0)};
      default: return {vertex(a, b, 1), vertex(a, b + 1, 0)};
    }
  }

  int edge_color(int e) const {
    int c = e / 3, t = e % 3;
    int a = c % lx, b = c / lx;
    return imod(a - b + 2 - t, 3);
  }

  std::array<int, 3> vertex_edges(int v) const {
    int c = v / 2, s = v % 2;
    int a = c % lx, b = c / lx;
    if (s == 0) {
      return {edge(a, b, 0), edge(a - 1, b, 1), edge(a, b - 1, 2)};
    }
    return {edge(a, b, 0), edge(a, b, 1), edge(a, b, 2)};
  }

  int face_color(int f) const {
    int a = f % lx, b = f / lx;
    return imod(a - b, 3);
  }

  std::array<int, 6> face_edges(int f) const {
    int a = f % lx, b = f / lx;
    return {edge(a, b, 0),         edge(a, b, 1),     edge(a + 1, b - 1, 2),
            edge(a + 1, b - 1, 0), edge(a, b - 1, 1), edge(a, b - 1, 2)};
  }
};

inline bool pauli_anticommutes(int p, int q) { return p != q; }

}  // namespace detail

/// Honeycomb Floquet code on an Lx x Ly torus measured for T rounds, round r
/// measuring all edges of color r mod 3. The value of a color-c plaquette is
/// inferred from its boundary outcomes in consecutive rounds (c+1, c+2);
/// checks compare successive inferred values, plus one initial check per
/// plaquette under the convention that all pre-window inferred values are 0.
/// The window is truncated at the end, so late faults trigger fewer checks.
///
/// Fault mechanisms: measurement outcome flips for every measured edge, and
/// single-qubit X/Y/Z faults in each gap between rounds (including before
/// round 0). In each gap the Pauli equal to a product of the just-measured
/// edge check with two retained single-qubit faults is omitted: keeping it
/// would double-count a mechanism the model already represents. For the same
/// reason a Pauli equal to the just-measured check type merges with its
/// partner-qubit twin.
///
/// Observables are two Wilson loops along non-contractible cycles (one
/// horizontal, one vertical); each applies, at every cycle vertex, the Pauli
/// of the vertex's off-cycle edge. These commute with every check, so their
/// tracked values are flipped by anticommuting Pauli faults and never by
/// outcome flips.
inline FaultModel gen_honeycomb(uint32_t lx, uint32_t ly, uint32_t rounds,
                                double p_x, double p_y, double p_z,
                                double p_meas) {
  if (rounds < 6 || rounds % 3 != 0) {
    throw std::invalid_argument("honeycomb window needs T >= 6, multiple of 3");
  }
  const int T = static_cast<int>(rounds);
  detail::HoneycombLattice lat(static_cast<int>(lx), static_cast<int>(ly));

  // Detector layout: for each face, completion rounds tau in [1, T) with
  // tau = face_color + 2 (mod 3); detector 0 is the first inferred value,
  // detector j compares inferred values j-1 and j.
  const int F = lat.cells();
  std::vector<std::vector<int>> completions(F);
  std::vector<uint32_t> first_check(F + 1, 0);
  for (int f = 0; f < F; ++f) {
    int residue = detail::imod(lat.face_color(f) + 2, 3);
    for (int tau = 1; tau < T; ++tau) {
      if (tau % 3 == residue) completions[f].push_back(tau);
    }
    first_check[f + 1] = first_check[f] + static_cast<uint32_t>(completions[f].size());
  }
  const uint32_t check_count = first_check[F];

  // outcome (edge e, round r) -> checks whose window contains it.
  const int E = lat.edge_count();
  std::vector<std::vector<uint32_t>> checks_of_outcome(
      static_cast<size_t>(E) * T);
  auto outcome_id = [&](int e, int r) { return static_cast<size_t>(r) * E + e; };
  for (int f = 0; f < F; ++f) {
    int c = lat.face_color(f);
    for (size_t j = 0; j < completions[f].size(); ++j) {
      uint32_t check = first_check[f] + static_cast<uint32_t>(j);
      // Inferred value j feeds detectors j and j+1.
      int tau = completions[f][j];
      for (int e : lat.face_edges(f)) {
        int col = lat.edge_color(e);
        int r = -1;
        if (col == detail::imod(c + 1, 3)) r = tau - 1;
        if (col == detail::imod(c + 2, 3)) r = tau;
        if (r < 0) continue;
        checks_of_outcome[outcome_id(e, r)].push_back(check);
        if (j + 1 < completions[f].size()) {
          checks_of_outcome[outcome_id(e, r)].push_back(check + 1);
        }
      }
    }
  }

  // Wilson-loop observables: a horizontal cycle through row b = 0 and a
  // vertical cycle through column a = 0.
  const int V = lat.vertex_count();
  std::vector<std::array<int8_t, 2>> wilson(V, {-1, -1});
  {
    std::vector<char> on_path(E, 0);
    std::vector<int> path_vertices;
    auto assign = [&](int which) {
      for (int v : path_vertices) {
        int off = -1;
        for (int e : lat.vertex_edges(v)) {
          if (!on_path[e]) {
            if (off != -1) throw std::logic_error("cycle must use 2 of 3 edges");
            off = e;
          }
        }
        wilson[v][which] = static_cast<int8_t>(lat.edge_color(off));
      }
    };
    for (int a = 0; a < lat.lx; ++a) {
      on_path[lat.edge(a, 0, 0)] = 1;
      on_path[lat.edge(a, 0, 1)] = 1;
      path_vertices.push_back(lat.vertex(a, 0, 0));
      path_vertices.push_back(lat.vertex(a, 0, 1));
    }
    assign(0);
    std::fill(on_path.begin(), on_path.end(), 0);
    path_vertices.clear();
    for (int b = 0; b < lat.ly; ++b) {
      on_path[lat.edge(0, b, 0)] = 1;
      on_path[lat.edge(0, b, 2)] = 1;
      path_vertices.push_back(lat.vertex(0, b, 0));
      path_vertices.push_back(lat.vertex(0, b, 1));
    }
    assign(1);
  }
  // The loops must commute with every edge check.
  for (int e = 0; e < E; ++e) {
    auto ends = lat.edge_ends(e);
    int t = lat.edge_color(e);
    for (int k = 0; k < 2; ++k) {
      int anti = 0;
      for (int v : ends) {
        if (wilson[v][k] >= 0 && detail::pauli_anticommutes(wilson[v][k], t)) {
          anti ^= 1;
        }
      }
      if (anti) throw std::logic_error("observable loop fails to commute with a check");
    }
  }

  auto syndrome_of_outcomes = [&](const std::vector<std::pair<int, int>>& flips) {
    Syndrome syn;
    for (auto [e, r] : flips) {
      std::vector<uint32_t> checks = checks_of_outcome[outcome_id(e, r)];
      std::sort(checks.begin(), checks.end());
      syn ^= Syndrome(std::move(checks));
    }
    return syn;
  };

  const char pauli_name[3] = {'X', 'Y', 'Z'};
  const double pauli_prob[3] = {p_x, p_y, p_z};
  std::vector<Fault> faults;

  // Single-qubit Pauli faults in the gap after round t (t = -1 is the gap
  // before the first round). The Pauli flips every later outcome of the
  // anticommuting edges at its vertex.
  for (int t = -1; t <= T - 2; ++t) {
    for (int v = 0; v < V; ++v) {
      for (int p = 0; p < 3; ++p) {
        if (t >= 0 && (p + 1) % 3 == t % 3) continue;  // redundant combo
        std::vector<std::pair<int, int>> flips;
        for (int e : lat.vertex_edges(v)) {
          int col = lat.edge_color(e);
          if (!detail::pauli_anticommutes(p, col)) continue;
          for (int r = t + 1; r < T; ++r) {
            if (r % 3 == col) flips.emplace_back(e, r);
          }
        }
        Syndrome syn = syndrome_of_outcomes(flips);
        if (syn.empty()) continue;  // undetectable in this window
        Fault f;
        f.probability = pauli_prob[p];
        f.syndrome = std::move(syn);
        std::vector<uint32_t> obs;
        for (int k = 0; k < 2; ++k) {
          if (wilson[v][k] >= 0 && detail::pauli_anticommutes(wilson[v][k], p)) {
            obs.push_back(static_cast<uint32_t>(k));
          }
        }
        f.observables = SparseSet(std::move(obs));
        f.label = std::string(1, pauli_name[p]) + " q" + std::to_string(v) +
                  " t" + std::to_string(t);
        faults.push_back(std::move(f));
      }
    }
  }

  // Measurement outcome flips.
  for (int r = 0; r < T; ++r) {
    for (int e = 0; e < E; ++e) {
      if (lat.edge_color(e) != r % 3) continue;
      Syndrome syn = syndrome_of_outcomes({{e, r}});
      if (syn.empty()) continue;
      Fault f;
      f.probability = p_meas;
      f.syndrome = std::move(syn);
      f.label = "meas e" + std::to_string(e) + " r" + std::to_string(r);
      faults.push_back(std::move(f));
    }
  }

  FaultModel model(check_count, 2, std::move(faults));
  return merge_duplicates(model).model;
}

// ---------------------------------------------------------------------------
// Negative controls
// ---------------------------------------------------------------------------

/// Synthetic 3-uniform model: fault i triggers checks {i, i+1, i+2} on a path
/// of m+2 checks, so every fault is a 3-fault and nothing is primitive.
inline FaultModel gen_three_check(uint32_t m, double p = 0.1) {
  if (m < 1) throw std::invalid_argument("three_check model needs m >= 1");
  std::vector<Fault> faults;
  for (uint32_t i = 0; i < m; ++i) {
    Fault f;
    f.probability = p;
    f.syndrome = Syndrome{i, i + 1, i + 2};
    f.observables = SparseSet{0};
    f.label = "f" + std::to_string(i);
    faults.push_back(std::move(f));
  }
  return FaultModel(m + 2, 1, std::move(faults));
}

/// Petersen-graph code: bits on the 10 vertices, checks on the 15 edges,
/// one total-parity observable. The graph is 3-regular with girth 5, so
/// every fault is a 3-fault and no small vertex set has a small boundary.
inline FaultModel gen_expander_petersen(double p) {
  std::vector<std::pair<uint32_t, uint32_t>> graph_edges;
  for (uint32_t i = 0; i < 5; ++i) graph_edges.emplace_back(i, (i + 1) % 5);
  for (uint32_t i = 0; i < 5; ++i) graph_edges.emplace_back(i, i + 5);
  for (uint32_t i = 0; i < 5; ++i) graph_edges.emplace_back(5 + i, 5 + (i + 2) % 5);

  std::vector<Fault> faults;
  for (uint32_t v = 0; v < 10; ++v) {
    std::vector<uint32_t> checks;
    for (uint32_t e = 0; e < graph_edges.size(); ++e) {
      if (graph_edges[e].first == v || graph_edges[e].second == v) {
        checks.push_back(e);
      }
    }
    Fault f;
    f.probability = p;
    f.syndrome = Syndrome(std::move(checks));
    f.observables = SparseSet{0};
    f.label = "bit " + std::to_string(v);
    faults.push_back(std::move(f));
  }
  return FaultModel(15, 1, std::move(faults));
}

}  // namespace splitmatch

#endif  // SPLITMATCH_MODEL_GENERATORS_H
