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

#ifndef SPLITMATCH_MATCHING_H
#define SPLITMATCH_MATCHING_H

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace splitmatch {

/// Complete(-per-block) weighted instance. Absent edges (pairs in different
/// blocks) are marked with NaN; they are structurally forbidden, not merely
/// expensive.
struct MatchingInstance {
  explicit MatchingInstance(uint32_t n_)
      : n(n_), w(static_cast<size_t>(n_) * n_,
                 std::numeric_limits<double>::quiet_NaN()) {}

  void set_weight(uint32_t i, uint32_t j, double weight) {
    if (i == j || i >= n || j >= n) {
      throw std::invalid_argument("bad matching edge (" + std::to_string(i) +
                                  ", " + std::to_string(j) + ")");
    }
    if (std::isnan(weight)) {
      throw std::invalid_argument("NaN weight is reserved for absent edges");
    }
    w[static_cast<size_t>(i) * n + j] = weight;
    w[static_cast<size_t>(j) * n + i] = weight;
  }

  bool has_edge(uint32_t i, uint32_t j) const {
    return i != j && !std::isnan(w[static_cast<size_t>(i) * n + j]);
  }

  double weight(uint32_t i, uint32_t j) const {
    return w[static_cast<size_t>(i) * n + j];
  }

  uint32_t n;
  std::vector<double> w;
};

struct Matching {
  // Pairs are stored as (min, max), sorted ascending.
  std::vector<std::pair<uint32_t, uint32_t>> pairs;
  double total_weight = 0.0;
};

namespace detail {

#define SM_MATCHING_ASSERT(cond)                                        \
  do {                                                                  \
    if (!(cond))                                                        \
      throw std::logic_error("matching invariant violated: " #cond);   \
  } while (0)

/// Maximum weight matching in a general graph (Edmonds' blossom method,
/// primal-dual formulation, O(n^3)). Integer weights, exact arithmetic.
/// With max_cardinality=true the result is a maximum-cardinality matching of
/// maximum weight among those, which is what reduces minimum-weight perfect
/// matching (negate the weights) to this solver.
class MaxWeightMatcher {
 public:
  MaxWeightMatcher(int n, std::vector<std::array<int64_t, 3>> edge_list,
                   bool max_cardinality)
      : nvertex_(n), maxcard_(max_cardinality) {
    for (auto& e : edge_list) {
      SM_MATCHING_ASSERT(e[0] >= 0 && e[0] < n && e[1] >= 0 && e[1] < n &&
                         e[0] != e[1]);
      edge_i_.push_back(static_cast<int>(e[0]));
      edge_j_.push_back(static_cast<int>(e[1]));
      edge_w_.push_back(e[2]);
    }
    nedge_ = static_cast<int>(edge_w_.size());
  }

  // Returns mate[v] = matched partner vertex or -1.
  std::vector<int> solve() {
    std::vector<int> result(nvertex_, -1);
    if (nvertex_ == 0 || nedge_ == 0) return result;

    maxweight_ = 0;
    for (int64_t w : edge_w_) maxweight_ = std::max(maxweight_, w);

    endpoint_.resize(2 * nedge_);
    for (int k = 0; k < nedge_; ++k) {
      endpoint_[2 * k] = edge_i_[k];
      endpoint_[2 * k + 1] = edge_j_[k];
    }
    neighbend_.assign(nvertex_, {});
    for (int k = 0; k < nedge_; ++k) {
      neighbend_[edge_i_[k]].push_back(2 * k + 1);
      neighbend_[edge_j_[k]].push_back(2 * k);
    }

    mate_.assign(nvertex_, -1);
    label_.assign(2 * nvertex_, 0);
    labelend_.assign(2 * nvertex_, -1);
    inblossom_.resize(nvertex_);
    for (int v = 0; v < nvertex_; ++v) inblossom_[v] = v;
    blossomparent_.assign(2 * nvertex_, -1);
    blossomchilds_.assign(2 * nvertex_, {});
    blossombase_.resize(2 * nvertex_);
    for (int v = 0; v < nvertex_; ++v) blossombase_[v] = v;
    for (int b = nvertex_; b < 2 * nvertex_; ++b) blossombase_[b] = -1;
    blossomendps_.assign(2 * nvertex_, {});
    bestedge_.assign(2 * nvertex_, -1);
    blossombestedges_.assign(2 * nvertex_, {});
    unusedblossoms_.clear();
    for (int b = nvertex_; b < 2 * nvertex_; ++b) unusedblossoms_.push_back(b);
    dualvar_.assign(2 * nvertex_, 0);
    for (int v = 0; v < nvertex_; ++v) dualvar_[v] = maxweight_;
    allowedge_.assign(nedge_, false);
    queue_.clear();

    for (int stage = 0; stage < nvertex_; ++stage) {
      std::fill(label_.begin(), label_.end(), 0);
      std::fill(bestedge_.begin(), bestedge_.end(), -1);
      for (int b = nvertex_; b < 2 * nvertex_; ++b) blossombestedges_[b].clear();
      std::fill(allowedge_.begin(), allowedge_.end(), false);
      queue_.clear();

      for (int v = 0; v < nvertex_; ++v) {
        if (mate_[v] == -1 && label_[inblossom_[v]] == 0) assign_label(v, 1, -1);
      }

      bool augmented = false;
      for (;;) {
        while (!queue_.empty() && !augmented) {
          int v = queue_.back();
          queue_.pop_back();
          SM_MATCHING_ASSERT(label_[inblossom_[v]] == 1);

          for (int p : neighbend_[v]) {
            int k = p / 2;
            int w = endpoint_[p];
            if (inblossom_[v] == inblossom_[w]) continue;
            int64_t kslack = 0;
            if (!allowedge_[k]) {
              kslack = slack(k);
              if (kslack <= 0) allowedge_[k] = true;
            }
            if (allowedge_[k]) {
              if (label_[inblossom_[w]] == 0) {
                assign_label(w, 2, p ^ 1);
              } else if (label_[inblossom_[w]] == 1) {
                int base = scan_blossom(v, w);
                if (base >= 0) {
                  add_blossom(base, k);
                } else {
                  augment_matching(k);
                  augmented = true;
                  break;
                }
              } else if (label_[w] == 0) {
                SM_MATCHING_ASSERT(label_[inblossom_[w]] == 2);
                label_[w] = 2;
                labelend_[w] = p ^ 1;
              }
            } else if (label_[inblossom_[w]] == 1) {
              int b = inblossom_[v];
              if (bestedge_[b] == -1 || kslack < slack(bestedge_[b])) {
                bestedge_[b] = k;
              }
            } else if (label_[w] == 0) {
              if (bestedge_[w] == -1 || kslack < slack(bestedge_[w])) {
                bestedge_[w] = k;
              }
            }
          }
        }
        if (augmented) break;

        int deltatype = -1;
        int64_t delta = 0;
        int deltaedge = -1, deltablossom = -1;

        if (!maxcard_) {
          deltatype = 1;
          int64_t dmin = std::numeric_limits<int64_t>::max();
          for (int v = 0; v < nvertex_; ++v) dmin = std::min(dmin, dualvar_[v]);
          delta = std::max<int64_t>(0, dmin);
        }

        for (int v = 0; v < nvertex_; ++v) {
          if (label_[inblossom_[v]] == 0 && bestedge_[v] != -1) {
            int64_t d = slack(bestedge_[v]);
            if (deltatype == -1 || d < delta) {
              delta = d;
              deltatype = 2;
              deltaedge = bestedge_[v];
            }
          }
        }
        for (int b = 0; b < 2 * nvertex_; ++b) {
          if (blossomparent_[b] == -1 && label_[b] == 1 && bestedge_[b] != -1) {
            int64_t kslack = slack(bestedge_[b]);
            SM_MATCHING_ASSERT(kslack % 2 == 0);
            int64_t d = kslack / 2;
            if (deltatype == -1 || d < delta) {
              delta = d;
              deltatype = 3;
              deltaedge = bestedge_[b];
            }
          }
        }
        for (int b = nvertex_; b < 2 * nvertex_; ++b) {
          if (blossombase_[b] >= 0 && blossomparent_[b] == -1 &&
              label_[b] == 2 && (deltatype == -1 || dualvar_[b] < delta)) {
            delta = dualvar_[b];
            deltatype = 4;
            deltablossom = b;
          }
        }

        if (deltatype == -1) {
          // No further progress possible; the matching already has maximum
          // cardinality.
          deltatype = 1;
          int64_t dmin = std::numeric_limits<int64_t>::max();
          for (int v = 0; v < nvertex_; ++v) dmin = std::min(dmin, dualvar_[v]);
          delta = std::max<int64_t>(0, dmin);
        }

        for (int v = 0; v < nvertex_; ++v) {
          int lb = label_[inblossom_[v]];
          if (lb == 1) {
            dualvar_[v] -= delta;
          } else if (lb == 2) {
            dualvar_[v] += delta;
          }
        }
        for (int b = nvertex_; b < 2 * nvertex_; ++b) {
          if (blossombase_[b] >= 0 && blossomparent_[b] == -1) {
            if (label_[b] == 1) {
              dualvar_[b] += delta;
            } else if (label_[b] == 2) {
              dualvar_[b] -= delta;
            }
          }
        }

        if (deltatype == 1) break;
        if (deltatype == 2) {
          allowedge_[deltaedge] = true;
          int i = edge_i_[deltaedge];
          if (label_[inblossom_[i]] == 0) i = edge_j_[deltaedge];
          SM_MATCHING_ASSERT(label_[inblossom_[i]] == 1);
          queue_.push_back(i);
        } else if (deltatype == 3) {
          allowedge_[deltaedge] = true;
          int i = edge_i_[deltaedge];
          SM_MATCHING_ASSERT(label_[inblossom_[i]] == 1);
          queue_.push_back(i);
        } else {
          expand_blossom(deltablossom, false);
        }
      }

      if (!augmented) break;

      for (int b = nvertex_; b < 2 * nvertex_; ++b) {
        if (blossomparent_[b] == -1 && blossombase_[b] >= 0 &&
            label_[b] == 2 && dualvar_[b] == 0) {
          expand_blossom(b, true);
        }
      }
    }

    for (int v = 0; v < nvertex_; ++v) {
      if (mate_[v] >= 0) result[v] = endpoint_[mate_[v]];
    }
    for (int v = 0; v < nvertex_; ++v) {
      SM_MATCHING_ASSERT(result[v] == -1 || result[result[v]] == v);
    }
    return result;
  }

 private:
  int64_t slack(int k) const {
    return dualvar_[edge_i_[k]] + dualvar_[edge_j_[k]] - 2 * edge_w_[k];
  }

  template <typename F>
  void for_each_leaf(int b, F&& f) const {
    if (b < nvertex_) {
      f(b);
      return;
    }
    for (int t : blossomchilds_[b]) {
      if (t < nvertex_) {
        f(t);
      } else {
        for_each_leaf(t, f);
      }
    }
  }

  static size_t wrap(int j, size_t len) {
    int m = j % static_cast<int>(len);
    if (m < 0) m += static_cast<int>(len);
    return static_cast<size_t>(m);
  }

  void assign_label(int w, int t, int p) {
    int b = inblossom_[w];
    SM_MATCHING_ASSERT(label_[w] == 0 && label_[b] == 0);
    label_[w] = label_[b] = t;
    labelend_[w] = labelend_[b] = p;
    bestedge_[w] = bestedge_[b] = -1;
    if (t == 1) {
      for_each_leaf(b, [&](int leaf) { queue_.push_back(leaf); });
    } else {
      int base = blossombase_[b];
      SM_MATCHING_ASSERT(mate_[base] >= 0);
      assign_label(endpoint_[mate_[base]], 1, mate_[base] ^ 1);
    }
  }

  // Traces back from both ends of a tight edge between two S-blossoms and
  // returns the base of their lowest common ancestor, or -1 if the paths
  // reach different tree roots (then the edge closes an augmenting path).
  int scan_blossom(int v, int w) {
    std::vector<int> path;
    int base = -1;
    while (v != -1 || w != -1) {
      int b = inblossom_[v];
      if (label_[b] & 4) {
        base = blossombase_[b];
        break;
      }
      SM_MATCHING_ASSERT(label_[b] == 1);
      path.push_back(b);
      label_[b] |= 4;
      SM_MATCHING_ASSERT(labelend_[b] == mate_[blossombase_[b]]);
      if (labelend_[b] == -1) {
        v = -1;
      } else {
        v = endpoint_[labelend_[b]];
        b = inblossom_[v];
        SM_MATCHING_ASSERT(label_[b] == 2);
        SM_MATCHING_ASSERT(labelend_[b] >= 0);
        v = endpoint_[labelend_[b]];
      }
      if (w != -1) std::swap(v, w);
    }
    for (int b : path) label_[b] &= ~4;
    return base;
  }

  void add_blossom(int base, int k) {
    int v = edge_i_[k];
    int w = edge_j_[k];
    int bb = inblossom_[base];
    int bv = inblossom_[v];
    int bw = inblossom_[w];

    SM_MATCHING_ASSERT(!unusedblossoms_.empty());
    int b = unusedblossoms_.back();
    unusedblossoms_.pop_back();

    blossombase_[b] = base;
    blossomparent_[b] = -1;
    blossomparent_[bb] = b;

    std::vector<int> path;
    std::vector<int> endps;
    while (bv != bb) {
      blossomparent_[bv] = b;
      path.push_back(bv);
      endps.push_back(labelend_[bv]);
      SM_MATCHING_ASSERT(label_[bv] == 2 ||
                         (label_[bv] == 1 &&
                          labelend_[bv] == mate_[blossombase_[bv]]));
      SM_MATCHING_ASSERT(labelend_[bv] >= 0);
      v = endpoint_[labelend_[bv]];
      bv = inblossom_[v];
    }
    path.push_back(bb);
    std::reverse(path.begin(), path.end());
    std::reverse(endps.begin(), endps.end());
    endps.push_back(2 * k);
    while (bw != bb) {
      blossomparent_[bw] = b;
      path.push_back(bw);
      endps.push_back(labelend_[bw] ^ 1);
      SM_MATCHING_ASSERT(label_[bw] == 2 ||
                         (label_[bw] == 1 &&
                          labelend_[bw] == mate_[blossombase_[bw]]));
      SM_MATCHING_ASSERT(labelend_[bw] >= 0);
      w = endpoint_[labelend_[bw]];
      bw = inblossom_[w];
    }

    SM_MATCHING_ASSERT(label_[bb] == 1);
    label_[b] = 1;
    labelend_[b] = labelend_[bb];
    dualvar_[b] = 0;
    blossomchilds_[b] = std::move(path);
    blossomendps_[b] = std::move(endps);

    for_each_leaf(b, [&](int leaf) {
      if (label_[inblossom_[leaf]] == 2) queue_.push_back(leaf);
      inblossom_[leaf] = b;
    });

    std::vector<int> bestedgeto(2 * nvertex_, -1);
    for (int child : blossomchilds_[b]) {
      std::vector<int> klist;
      if (child >= nvertex_ && !blossombestedges_[child].empty()) {
        klist = blossombestedges_[child];
      } else {
        for_each_leaf(child, [&](int leaf) {
          for (int p : neighbend_[leaf]) klist.push_back(p / 2);
        });
      }
      for (int ek : klist) {
        int j = (inblossom_[edge_j_[ek]] == b) ? edge_i_[ek] : edge_j_[ek];
        int bj = inblossom_[j];
        if (bj != b && label_[bj] == 1 &&
            (bestedgeto[bj] == -1 || slack(ek) < slack(bestedgeto[bj]))) {
          bestedgeto[bj] = ek;
        }
      }
      if (child >= nvertex_) blossombestedges_[child].clear();
      bestedge_[child] = -1;
    }
    blossombestedges_[b].clear();
    for (int ek : bestedgeto) {
      if (ek != -1) blossombestedges_[b].push_back(ek);
    }
    bestedge_[b] = -1;
    for (int ek : blossombestedges_[b]) {
      if (bestedge_[b] == -1 || slack(ek) < slack(bestedge_[b])) {
        bestedge_[b] = ek;
      }
    }
  }

  void expand_blossom(int b, bool endstage) {
    for (int s : blossomchilds_[b]) {
      blossomparent_[s] = -1;
      if (s < nvertex_) {
        inblossom_[s] = s;
      } else if (endstage && dualvar_[s] == 0) {
        expand_blossom(s, endstage);
      } else {
        for_each_leaf(s, [&](int leaf) { inblossom_[leaf] = s; });
      }
    }

    if (!endstage && label_[b] == 2) {
      SM_MATCHING_ASSERT(labelend_[b] >= 0);
      int entrychild = inblossom_[endpoint_[labelend_[b] ^ 1]];
      const size_t len = blossomchilds_[b].size();
      int j = 0;
      for (size_t idx = 0; idx < len; ++idx) {
        if (blossomchilds_[b][idx] == entrychild) {
          j = static_cast<int>(idx);
          break;
        }
      }
      int jstep, endptrick;
      if (j & 1) {
        j -= static_cast<int>(len);
        jstep = 1;
        endptrick = 0;
      } else {
        jstep = -1;
        endptrick = 1;
      }
      int p = labelend_[b];
      while (j != 0) {
        label_[endpoint_[p ^ 1]] = 0;
        label_[endpoint_[blossomendps_[b][wrap(j - endptrick, len)] ^ endptrick ^ 1]] = 0;
        assign_label(endpoint_[p ^ 1], 2, p);
        allowedge_[blossomendps_[b][wrap(j - endptrick, len)] / 2] = true;
        j += jstep;
        p = blossomendps_[b][wrap(j - endptrick, len)] ^ endptrick;
        allowedge_[p / 2] = true;
        j += jstep;
      }
      int bv = blossomchilds_[b][wrap(j, len)];
      label_[endpoint_[p ^ 1]] = label_[bv] = 2;
      labelend_[endpoint_[p ^ 1]] = labelend_[bv] = p;
      bestedge_[bv] = -1;
      j += jstep;
      while (blossomchilds_[b][wrap(j, len)] != entrychild) {
        bv = blossomchilds_[b][wrap(j, len)];
        if (label_[bv] == 1) {
          j += jstep;
          continue;
        }
        int labeled_leaf = -1;
        for_each_leaf(bv, [&](int leaf) {
          if (labeled_leaf == -1 && label_[leaf] != 0) labeled_leaf = leaf;
        });
        if (labeled_leaf != -1) {
          SM_MATCHING_ASSERT(label_[labeled_leaf] == 2);
          SM_MATCHING_ASSERT(inblossom_[labeled_leaf] == bv);
          label_[labeled_leaf] = 0;
          label_[endpoint_[mate_[blossombase_[bv]]]] = 0;
          assign_label(labeled_leaf, 2, labelend_[labeled_leaf]);
        }
        j += jstep;
      }
    }

    label_[b] = -1;
    labelend_[b] = -1;
    blossomchilds_[b].clear();
    blossomendps_[b].clear();
    blossombase_[b] = -1;
    blossombestedges_[b].clear();
    bestedge_[b] = -1;
    unusedblossoms_.push_back(b);
  }

  // Swaps matched and unmatched edges along the path within blossom b from
  // vertex v to the blossom base, then rotates the child list so v becomes
  // the new base.
  void augment_blossom(int b, int v) {
    int t = v;
    while (blossomparent_[t] != b) t = blossomparent_[t];
    if (t >= nvertex_) augment_blossom(t, v);

    const size_t len = blossomchilds_[b].size();
    int i = 0;
    for (size_t idx = 0; idx < len; ++idx) {
      if (blossomchilds_[b][idx] == t) {
        i = static_cast<int>(idx);
        break;
      }
    }
    int j = i;
    int jstep, endptrick;
    if (i & 1) {
      j -= static_cast<int>(len);
      jstep = 1;
      endptrick = 0;
    } else {
      jstep = -1;
      endptrick = 1;
    }
    while (j != 0) {
      j += jstep;
      t = blossomchilds_[b][wrap(j, len)];
      int p = blossomendps_[b][wrap(j - endptrick, len)] ^ endptrick;
      if (t >= nvertex_) augment_blossom(t, endpoint_[p]);
      j += jstep;
      t = blossomchilds_[b][wrap(j, len)];
      if (t >= nvertex_) augment_blossom(t, endpoint_[p ^ 1]);
      mate_[endpoint_[p]] = p ^ 1;
      mate_[endpoint_[p ^ 1]] = p;
    }
    std::rotate(blossomchilds_[b].begin(), blossomchilds_[b].begin() + i,
                blossomchilds_[b].end());
    std::rotate(blossomendps_[b].begin(), blossomendps_[b].begin() + i,
                blossomendps_[b].end());
    blossombase_[b] = blossombase_[blossomchilds_[b][0]];
    SM_MATCHING_ASSERT(blossombase_[b] == v);
  }

  void augment_matching(int k) {
    int v = edge_i_[k];
    int w = edge_j_[k];
    const std::pair<int, int> sides[2] = {{v, 2 * k + 1}, {w, 2 * k}};
    for (auto [s, p] : sides) {
      for (;;) {
        int bs = inblossom_[s];
        SM_MATCHING_ASSERT(label_[bs] == 1);
        SM_MATCHING_ASSERT(labelend_[bs] == mate_[blossombase_[bs]]);
        if (bs >= nvertex_) augment_blossom(bs, s);
        mate_[s] = p;
        if (labelend_[bs] == -1) break;
        int t = endpoint_[labelend_[bs]];
        int bt = inblossom_[t];
        SM_MATCHING_ASSERT(label_[bt] == 2);
        SM_MATCHING_ASSERT(labelend_[bt] >= 0);
        s = endpoint_[labelend_[bt]];
        int j = endpoint_[labelend_[bt] ^ 1];
        SM_MATCHING_ASSERT(blossombase_[bt] == t);
        if (bt >= nvertex_) augment_blossom(bt, j);
        mate_[j] = labelend_[bt];
        p = labelend_[bt] ^ 1;
      }
    }
  }

  int nvertex_ = 0;
  int nedge_ = 0;
  bool maxcard_ = false;
  int64_t maxweight_ = 0;
  std::vector<int> edge_i_, edge_j_;
  std::vector<int64_t> edge_w_;
  std::vector<int> endpoint_;
  std::vector<std::vector<int>> neighbend_;
  std::vector<int> mate_;
  std::vector<int> label_;
  std::vector<int> labelend_;
  std::vector<int> inblossom_;
  std::vector<int> blossomparent_;
  std::vector<std::vector<int>> blossomchilds_;
  std::vector<int> blossombase_;
  std::vector<std::vector<int>> blossomendps_;
  std::vector<int> bestedge_;
  std::vector<std::vector<int>> blossombestedges_;
  std::vector<int> unusedblossoms_;
  std::vector<int64_t> dualvar_;
  std::vector<char> allowedge_;
  std::vector<int> queue_;
};

#undef SM_MATCHING_ASSERT

/// Picks a power-of-two scale turning the weights into int64 values. Integer
/// inputs keep scale 1 so all arithmetic is exact; float inputs are quantized
/// with relative error around 2^-47, far below the documented 1e-9 tolerance.
inline double matching_weight_scale(const MatchingInstance& inst) {
  double maxabs = 1.0;
  bool all_integral = true;
  for (uint32_t i = 0; i < inst.n; ++i) {
    for (uint32_t j = i + 1; j < inst.n; ++j) {
      if (!inst.has_edge(i, j)) continue;
      double w = inst.weight(i, j);
      maxabs = std::max(maxabs, std::fabs(w));
      if (std::nearbyint(w) != w) all_integral = false;
    }
  }
  if (all_integral && maxabs <= 0x1p46) return 1.0;
  int exp = 0;
  std::frexp(0x1p46 / maxabs, &exp);
  return std::ldexp(1.0, std::max(0, exp - 1));
}

inline int64_t quantize_weight(double w, double scale) {
  return static_cast<int64_t>(std::llround(w * scale));
}

struct QuantizedInstance {
  uint32_t n = 0;
  double scale = 1.0;
  // -1 sentinel in `edge_index` marks absent pairs.
  std::vector<int32_t> edge_index;
  std::vector<std::pair<uint32_t, uint32_t>> edge_ends;
  std::vector<int64_t> edge_weight;

  explicit QuantizedInstance(const MatchingInstance& inst)
      : n(inst.n), edge_index(static_cast<size_t>(inst.n) * inst.n, -1) {
    scale = matching_weight_scale(inst);
    for (uint32_t i = 0; i < n; ++i) {
      for (uint32_t j = i + 1; j < n; ++j) {
        if (!inst.has_edge(i, j)) continue;
        int32_t id = static_cast<int32_t>(edge_ends.size());
        edge_ends.emplace_back(i, j);
        edge_weight.push_back(quantize_weight(inst.weight(i, j), scale));
        edge_index[static_cast<size_t>(i) * n + j] = id;
        edge_index[static_cast<size_t>(j) * n + i] = id;
      }
    }
  }

  bool has(uint32_t i, uint32_t j) const {
    return edge_index[static_cast<size_t>(i) * n + j] >= 0;
  }
  int64_t w(uint32_t i, uint32_t j) const {
    return edge_weight[edge_index[static_cast<size_t>(i) * n + j]];
  }
};

/// Minimum-weight perfect matching restricted to `subset` (sorted vertex
/// ids). Returns quantized total + pairs, or nullopt when no perfect
/// matching exists.
struct SubSolution {
  int64_t total = 0;
  std::vector<std::pair<uint32_t, uint32_t>> pairs;
};

inline std::optional<SubSolution> solve_min_perfect(
    const QuantizedInstance& q, const std::vector<uint32_t>& subset) {
  if (subset.empty()) return SubSolution{};
  if (subset.size() % 2 != 0) return std::nullopt;

  std::vector<int32_t> local_of(q.n, -1);
  for (size_t i = 0; i < subset.size(); ++i) {
    local_of[subset[i]] = static_cast<int32_t>(i);
  }
  std::vector<std::array<int64_t, 3>> edges;
  for (size_t e = 0; e < q.edge_ends.size(); ++e) {
    auto [a, b] = q.edge_ends[e];
    if (local_of[a] >= 0 && local_of[b] >= 0) {
      // Negate: maximum-weight, maximum-cardinality matching on -w is a
      // minimum-weight perfect matching when one exists.
      edges.push_back({local_of[a], local_of[b], -q.edge_weight[e]});
    }
  }
  MaxWeightMatcher matcher(static_cast<int>(subset.size()), std::move(edges),
                           /*max_cardinality=*/true);
  std::vector<int> mate = matcher.solve();

  SubSolution sol;
  for (size_t i = 0; i < subset.size(); ++i) {
    if (mate[i] == -1) return std::nullopt;
    if (static_cast<size_t>(mate[i]) > i) {
      uint32_t a = subset[i], b = subset[mate[i]];
      sol.pairs.emplace_back(a, b);
      sol.total += q.w(a, b);
    }
  }
  return sol;
}

inline double recompute_pair_weight(
    const MatchingInstance& inst,
    const std::vector<std::pair<uint32_t, uint32_t>>& pairs) {
  double total = 0.0;
  for (const auto& [a, b] : pairs) total += inst.weight(a, b);
  return total;
}

}  // namespace detail

/// Exact minimum-weight perfect matching. Deterministic under ties: among
/// all optima it returns the lexicographically smallest pair set (pairs as
/// (min,max), sorted ascending, compared as a sequence). Throws
/// std::runtime_error when no perfect matching exists (odd block, or a
/// vertex with no usable edge).
inline Matching min_weight_perfect_matching(const MatchingInstance& inst) {
  detail::QuantizedInstance q(inst);

  std::vector<uint32_t> remaining(inst.n);
  for (uint32_t v = 0; v < inst.n; ++v) remaining[v] = v;

  auto full = detail::solve_min_perfect(q, remaining);
  if (!full) {
    throw std::runtime_error(
        "no perfect matching exists (odd block or vertex without edges)");
  }

  // Greedy lexicographic canonicalization: repeatedly fix the smallest
  // remaining vertex to its smallest partner that preserves optimality.
  Matching result;
  int64_t budget = full->total;
  std::vector<int32_t> mate(inst.n, -1);
  for (auto& [a, b] : full->pairs) {
    mate[a] = static_cast<int32_t>(b);
    mate[b] = static_cast<int32_t>(a);
  }

  while (!remaining.empty()) {
    uint32_t u = remaining.front();
    uint32_t current = static_cast<uint32_t>(mate[u]);
    uint32_t chosen = current;
    std::optional<detail::SubSolution> chosen_rest;

    for (size_t vi = 1; vi < remaining.size(); ++vi) {
      uint32_t v = remaining[vi];
      if (v >= current) break;
      if (!q.has(u, v)) continue;
      std::vector<uint32_t> rest;
      rest.reserve(remaining.size() - 2);
      for (uint32_t x : remaining) {
        if (x != u && x != v) rest.push_back(x);
      }
      auto sub = detail::solve_min_perfect(q, rest);
      if (sub && q.w(u, v) + sub->total == budget) {
        chosen = v;
        chosen_rest = std::move(sub);
        break;
      }
    }

    result.pairs.emplace_back(u, chosen);
    budget -= q.w(u, chosen);
    std::vector<uint32_t> rest;
    rest.reserve(remaining.size() - 2);
    for (uint32_t x : remaining) {
      if (x != u && x != chosen) rest.push_back(x);
    }
    remaining = std::move(rest);

    if (chosen_rest) {
      std::fill(mate.begin(), mate.end(), -1);
      for (auto& [a, b] : chosen_rest->pairs) {
        mate[a] = static_cast<int32_t>(b);
        mate[b] = static_cast<int32_t>(a);
      }
    }
  }

  std::sort(result.pairs.begin(), result.pairs.end());
  result.total_weight = detail::recompute_pair_weight(inst, result.pairs);
  return result;
}

/// Exhaustive perfect-matching search for testing; same tie-break rule as
/// min_weight_perfect_matching. Limited to n <= 14.
inline Matching brute_force_matching(const MatchingInstance& inst) {
  if (inst.n > 14) {
    throw std::invalid_argument("brute_force_matching supports n <= 14");
  }
  detail::QuantizedInstance q(inst);

  std::vector<uint32_t> remaining(inst.n);
  for (uint32_t v = 0; v < inst.n; ++v) remaining[v] = v;

  std::vector<std::pair<uint32_t, uint32_t>> acc, best_pairs;
  int64_t best = 0;
  bool found = false;

  // Enumeration pairs the smallest unmatched vertex first, so matchings are
  // visited in lexicographic order and the first optimum found is the
  // canonical one.
  auto rec = [&](auto&& self, std::vector<uint32_t>& rem, int64_t weight) -> void {
    if (rem.empty()) {
      if (!found || weight < best) {
        found = true;
        best = weight;
        best_pairs = acc;
      }
      return;
    }
    uint32_t u = rem.front();
    for (size_t vi = 1; vi < rem.size(); ++vi) {
      uint32_t v = rem[vi];
      if (!q.has(u, v)) continue;
      std::vector<uint32_t> next;
      next.reserve(rem.size() - 2);
      for (uint32_t x : rem) {
        if (x != u && x != v) next.push_back(x);
      }
      acc.emplace_back(u, v);
      self(self, next, weight + q.w(u, v));
      acc.pop_back();
    }
  };
  rec(rec, remaining, 0);

  if (!found) {
    throw std::runtime_error(
        "no perfect matching exists (odd block or vertex without edges)");
  }
  Matching result;
  result.pairs = std::move(best_pairs);
  std::sort(result.pairs.begin(), result.pairs.end());
  result.total_weight = detail::recompute_pair_weight(inst, result.pairs);
  return result;
}

}  // namespace splitmatch

#endif  // SPLITMATCH_MATCHING_H
