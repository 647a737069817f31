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

#include "splitmatch/matching.h"

#include <cmath>
#include <random>

#include "gtest/gtest.h"

namespace splitmatch {
namespace {

TEST(Matching, SinglePair) {
  MatchingInstance inst(2);
  inst.set_weight(0, 1, 3.5);
  Matching m = min_weight_perfect_matching(inst);
  ASSERT_EQ(m.pairs.size(), 1u);
  EXPECT_EQ(m.pairs[0], (std::pair<uint32_t, uint32_t>(0, 1)));
  EXPECT_DOUBLE_EQ(m.total_weight, 3.5);
}

TEST(Matching, K4Example) {
  MatchingInstance inst(4);
  inst.set_weight(0, 1, 1.0);
  inst.set_weight(2, 3, 1.0);
  inst.set_weight(0, 2, 10.0);
  inst.set_weight(0, 3, 10.0);
  inst.set_weight(1, 2, 10.0);
  inst.set_weight(1, 3, 10.0);
  Matching m = min_weight_perfect_matching(inst);
  ASSERT_EQ(m.pairs.size(), 2u);
  EXPECT_EQ(m.pairs[0], (std::pair<uint32_t, uint32_t>(0, 1)));
  EXPECT_EQ(m.pairs[1], (std::pair<uint32_t, uint32_t>(2, 3)));
  EXPECT_DOUBLE_EQ(m.total_weight, 2.0);

  Matching bf = brute_force_matching(inst);
  EXPECT_EQ(bf.pairs, m.pairs);
  EXPECT_DOUBLE_EQ(bf.total_weight, 2.0);
}

TEST(Matching, EmptyInstance) {
  MatchingInstance inst(0);
  Matching m = min_weight_perfect_matching(inst);
  EXPECT_TRUE(m.pairs.empty());
  EXPECT_DOUBLE_EQ(m.total_weight, 0.0);
  Matching bf = brute_force_matching(inst);
  EXPECT_TRUE(bf.pairs.empty());
}

TEST(Matching, InfeasibleOddBlock) {
  MatchingInstance inst(3);
  inst.set_weight(0, 1, 1.0);
  inst.set_weight(1, 2, 1.0);
  inst.set_weight(0, 2, 1.0);
  EXPECT_THROW(min_weight_perfect_matching(inst), std::runtime_error);
  EXPECT_THROW(brute_force_matching(inst), std::runtime_error);
}

TEST(Matching, InfeasibleIsolatedVertex) {
  MatchingInstance inst(4);
  inst.set_weight(0, 1, 1.0);
  // Vertices 2 and 3 have no edges at all.
  EXPECT_THROW(min_weight_perfect_matching(inst), std::runtime_error);
}

TEST(Matching, CrossBlockEdgesAbsent) {
  // Two blocks of size 2; the matching must stay within blocks.
  MatchingInstance inst(4);
  inst.set_weight(0, 2, 5.0);
  inst.set_weight(1, 3, 7.0);
  Matching m = min_weight_perfect_matching(inst);
  ASSERT_EQ(m.pairs.size(), 2u);
  EXPECT_EQ(m.pairs[0], (std::pair<uint32_t, uint32_t>(0, 2)));
  EXPECT_EQ(m.pairs[1], (std::pair<uint32_t, uint32_t>(1, 3)));
}

TEST(Matching, NegativeWeights) {
  MatchingInstance inst(4);
  inst.set_weight(0, 1, -3.0);
  inst.set_weight(2, 3, -4.0);
  inst.set_weight(0, 2, -10.0);
  inst.set_weight(1, 3, -1.0);
  inst.set_weight(0, 3, 2.0);
  inst.set_weight(1, 2, 2.0);
  Matching m = min_weight_perfect_matching(inst);
  Matching bf = brute_force_matching(inst);
  EXPECT_DOUBLE_EQ(m.total_weight, bf.total_weight);
  EXPECT_EQ(m.pairs, bf.pairs);
  EXPECT_DOUBLE_EQ(m.total_weight, -11.0);
}

TEST(Matching, LexicographicTieBreak) {
  // Every perfect matching of this K4 ties; the canonical answer pairs 0
  // with 1.
  MatchingInstance inst(4);
  for (uint32_t i = 0; i < 4; ++i) {
    for (uint32_t j = i + 1; j < 4; ++j) inst.set_weight(i, j, 2.0);
  }
  Matching m = min_weight_perfect_matching(inst);
  Matching bf = brute_force_matching(inst);
  ASSERT_EQ(m.pairs.size(), 2u);
  EXPECT_EQ(m.pairs[0], (std::pair<uint32_t, uint32_t>(0, 1)));
  EXPECT_EQ(m.pairs[1], (std::pair<uint32_t, uint32_t>(2, 3)));
  EXPECT_EQ(bf.pairs, m.pairs);
}

TEST(Matching, TieBreakAgreesWithBruteForceOnTiedGrids) {
  // Small integer grids make ties common; the canonicalized result must
  // equal the brute-force pair set exactly, not just in weight.
  std::mt19937 rng(2024);
  for (int trial = 0; trial < 120; ++trial) {
    uint32_t n = 4 + 2 * (rng() % 4);  // 4..10
    std::uniform_int_distribution<int> grid(1, 3);
    MatchingInstance inst(n);
    for (uint32_t i = 0; i < n; ++i) {
      for (uint32_t j = i + 1; j < n; ++j) {
        inst.set_weight(i, j, grid(rng));
      }
    }
    Matching m = min_weight_perfect_matching(inst);
    Matching bf = brute_force_matching(inst);
    EXPECT_DOUBLE_EQ(m.total_weight, bf.total_weight);
    EXPECT_EQ(m.pairs, bf.pairs) << "trial " << trial << " n=" << n;
  }
}

TEST(Matching, OracleEquivalenceIntegerWeights) {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    uint32_t n = 4 + 2 * (rng() % 5);  // 4..12
    std::uniform_int_distribution<int> weight(0, 40);
    MatchingInstance inst(n);
    for (uint32_t i = 0; i < n; ++i) {
      for (uint32_t j = i + 1; j < n; ++j) {
        inst.set_weight(i, j, weight(rng));
      }
    }
    Matching m = min_weight_perfect_matching(inst);
    Matching bf = brute_force_matching(inst);
    EXPECT_EQ(m.total_weight, bf.total_weight) << "trial " << trial;
    EXPECT_EQ(m.pairs, bf.pairs) << "trial " << trial;
  }
}

TEST(Matching, OracleEquivalenceFloatWeights) {
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> weight(0.0, 25.0);
  for (int trial = 0; trial < 100; ++trial) {
    uint32_t n = 4 + 2 * (rng() % 5);
    MatchingInstance inst(n);
    for (uint32_t i = 0; i < n; ++i) {
      for (uint32_t j = i + 1; j < n; ++j) {
        inst.set_weight(i, j, weight(rng));
      }
    }
    Matching m = min_weight_perfect_matching(inst);
    Matching bf = brute_force_matching(inst);
    EXPECT_NEAR(m.total_weight, bf.total_weight, 1e-9) << "trial " << trial;
  }
}

TEST(Matching, BeatsRandomMatchings) {
  // Weaker optimality certificate: the result is no heavier than many random
  // perfect matchings of the same instance.
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> weight(0.0, 9.0);
  MatchingInstance inst(12);
  for (uint32_t i = 0; i < 12; ++i) {
    for (uint32_t j = i + 1; j < 12; ++j) inst.set_weight(i, j, weight(rng));
  }
  Matching m = min_weight_perfect_matching(inst);
  std::vector<uint32_t> perm(12);
  for (uint32_t i = 0; i < 12; ++i) perm[i] = i;
  for (int trial = 0; trial < 1000; ++trial) {
    std::shuffle(perm.begin(), perm.end(), rng);
    double total = 0.0;
    for (int k = 0; k < 12; k += 2) total += inst.weight(perm[k], perm[k + 1]);
    EXPECT_LE(m.total_weight, total + 1e-9);
  }
}

TEST(Matching, BruteForceSizeGuard) {
  MatchingInstance inst(16);
  EXPECT_THROW(brute_force_matching(inst), std::invalid_argument);
}

TEST(Matching, LargerDenseInstances) {
  // Sanity beyond the brute-force range: validity plus a pair-swap local
  // optimality check.
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> weight(0.0, 1.0);
  MatchingInstance inst(40);
  for (uint32_t i = 0; i < 40; ++i) {
    for (uint32_t j = i + 1; j < 40; ++j) inst.set_weight(i, j, weight(rng));
  }
  Matching m = min_weight_perfect_matching(inst);
  ASSERT_EQ(m.pairs.size(), 20u);
  std::vector<char> used(40, 0);
  for (auto [a, b] : m.pairs) {
    EXPECT_LT(a, b);
    EXPECT_FALSE(used[a] || used[b]);
    used[a] = used[b] = 1;
  }
  for (size_t x = 0; x < m.pairs.size(); ++x) {
    for (size_t y = x + 1; y < m.pairs.size(); ++y) {
      auto [a, b] = m.pairs[x];
      auto [c, d] = m.pairs[y];
      double now = inst.weight(a, b) + inst.weight(c, d);
      EXPECT_LE(now, inst.weight(a, c) + inst.weight(b, d) + 1e-9);
      EXPECT_LE(now, inst.weight(a, d) + inst.weight(b, c) + 1e-9);
    }
  }
}

}  // namespace
}  // namespace splitmatch
