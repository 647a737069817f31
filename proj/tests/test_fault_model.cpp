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

#include "splitmatch/fault_model.h"

#include <cmath>
#include <random>

#include "gtest/gtest.h"
#include "splitmatch/model_generators.h"

namespace splitmatch {
namespace {

Fault make_fault(double p, std::vector<uint32_t> checks,
                 std::vector<uint32_t> obs = {}) {
  Fault f;
  f.probability = p;
  f.syndrome = Syndrome(std::move(checks));
  f.observables = SparseSet(std::move(obs));
  return f;
}

TEST(SparseSet, SymmetricDifference) {
  SparseSet a{1, 3, 5};
  SparseSet b{3, 4};
  EXPECT_EQ(a ^ b, (SparseSet{1, 4, 5}));
  EXPECT_EQ(a ^ a, SparseSet{});
  EXPECT_TRUE((a ^ SparseSet{}) == a);
  EXPECT_THROW(SparseSet({2, 2}), std::invalid_argument);
}

TEST(FaultModel, RejectsBadFaults) {
  EXPECT_THROW(FaultModel(2, 0, {make_fault(0.6, {0})}), std::range_error);
  EXPECT_THROW(FaultModel(2, 0, {make_fault(0.0, {0})}), std::range_error);
  EXPECT_THROW(FaultModel(2, 0, {make_fault(0.1, {})}), std::invalid_argument);
  EXPECT_THROW(FaultModel(2, 0, {make_fault(0.1, {2})}), std::out_of_range);
  EXPECT_THROW(FaultModel(2, 1, {make_fault(0.1, {0}, {1})}), std::out_of_range);
  // p = 0.5 exactly is allowed.
  EXPECT_NO_THROW(FaultModel(2, 0, {make_fault(0.5, {0})}));
}

TEST(FaultModel, SyndromeOfConfigurations) {
  FaultModel rep = gen_repetition(4, 0.1);
  // Empty configuration.
  EXPECT_TRUE(rep.syndrome_of(FaultConfiguration{}).empty());
  // {f} + {f} cancels.
  FaultConfiguration one{1};
  EXPECT_EQ(rep.syndrome_of(one ^ one), Syndrome{});
  // Bits 1 and 2 of the n=4 repetition code: {c0,c1} xor {c1,c2} = {c0,c2}.
  EXPECT_EQ(rep.syndrome_of(FaultConfiguration{1, 2}), (Syndrome{0, 2}));
  // Unknown fault id.
  EXPECT_THROW(rep.syndrome_of(FaultConfiguration{9}), std::out_of_range);
}

TEST(FaultModel, ObservablesOfConfigurations) {
  FaultModel m(2, 2,
               {make_fault(0.1, {0}, {0}), make_fault(0.1, {1}, {0}),
                make_fault(0.1, {0, 1}, {1})});
  EXPECT_TRUE(m.observables_of(FaultConfiguration{}).empty());
  EXPECT_EQ(m.observables_of(FaultConfiguration{0}), SparseSet{0});
  EXPECT_EQ(m.observables_of(FaultConfiguration{0, 1}), SparseSet{});
  EXPECT_EQ(m.observables_of(FaultConfiguration{0, 2}), (SparseSet{0, 1}));
}

TEST(FaultModel, LinearityProperty) {
  std::mt19937 rng(7);
  FaultModel model = gen_repetition(8, 0.2);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<uint32_t> a, b;
    for (uint32_t id = 0; id < model.fault_count(); ++id) {
      if (rng() & 1) a.push_back(id);
      if (rng() & 1) b.push_back(id);
    }
    FaultConfiguration ca(a), cb(b);
    EXPECT_EQ(model.syndrome_of(ca ^ cb),
              model.syndrome_of(ca) ^ model.syndrome_of(cb));
    EXPECT_EQ(model.observables_of(ca ^ cb),
              model.observables_of(ca) ^ model.observables_of(cb));
  }
}

TEST(MergeDuplicates, CombinesProbabilities) {
  FaultModel m(2, 1,
               {make_fault(0.1, {0, 1}, {0}), make_fault(0.2, {0, 1}, {0})});
  MergeResult r = merge_duplicates(m);
  ASSERT_EQ(r.model.fault_count(), 1u);
  EXPECT_NEAR(r.model.fault(0).probability, 0.28, 1e-15);
  EXPECT_EQ(r.remap, (std::vector<uint32_t>{0, 0}));
  EXPECT_TRUE(r.warnings.empty());
}

TEST(MergeDuplicates, ThreeCopiesFold) {
  FaultModel m(1, 0,
               {make_fault(0.1, {0}), make_fault(0.1, {0}), make_fault(0.1, {0})});
  MergeResult r = merge_duplicates(m);
  ASSERT_EQ(r.model.fault_count(), 1u);
  EXPECT_NEAR(r.model.fault(0).probability, 1.0 - std::pow(0.9, 3), 1e-15);
}

TEST(MergeDuplicates, SingletonUnchanged) {
  FaultModel m(1, 0, {make_fault(0.1, {0})});
  MergeResult r = merge_duplicates(m);
  ASSERT_EQ(r.model.fault_count(), 1u);
  EXPECT_DOUBLE_EQ(r.model.fault(0).probability, 0.1);
}

TEST(MergeDuplicates, KeepsObservableDisagreementsDistinct) {
  FaultModel m(2, 1,
               {make_fault(0.1, {0, 1}, {0}), make_fault(0.2, {0, 1}, {})});
  MergeResult r = merge_duplicates(m);
  EXPECT_EQ(r.model.fault_count(), 2u);
  ASSERT_EQ(r.warnings.size(), 1u);
  EXPECT_EQ(r.warnings[0].fault_a, 0u);
  EXPECT_EQ(r.warnings[0].fault_b, 1u);
}

TEST(MergeDuplicates, RejectsMergedProbabilityAboveHalf) {
  FaultModel m(1, 0, {make_fault(0.4, {0}), make_fault(0.4, {0})});
  EXPECT_THROW(merge_duplicates(m), std::range_error);
}

TEST(MergeDuplicates, Idempotent) {
  FaultModel m(3, 1,
               {make_fault(0.1, {0, 1}, {0}), make_fault(0.2, {0, 1}, {0}),
                make_fault(0.3, {2}), make_fault(0.05, {0, 1}, {})});
  MergeResult once = merge_duplicates(m);
  MergeResult twice = merge_duplicates(once.model);
  ASSERT_EQ(once.model.fault_count(), twice.model.fault_count());
  for (uint32_t i = 0; i < once.model.fault_count(); ++i) {
    EXPECT_EQ(once.model.fault(i).syndrome, twice.model.fault(i).syndrome);
    EXPECT_DOUBLE_EQ(once.model.fault(i).probability,
                     twice.model.fault(i).probability);
  }
}

TEST(MergeDuplicates, FoldOrderIrrelevant) {
  // Probability merge is commutative and associative up to float tolerance.
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> dist(0.01, 0.2);
  std::vector<double> ps;
  for (int i = 0; i < 6; ++i) ps.push_back(dist(rng));

  auto merged_prob = [&](const std::vector<double>& order) {
    std::vector<Fault> faults;
    for (double p : order) faults.push_back(make_fault(p, {0, 1}));
    FaultModel m(2, 0, std::move(faults));
    return merge_duplicates(m).model.fault(0).probability;
  };
  double base = merged_prob(ps);
  for (int trial = 0; trial < 20; ++trial) {
    std::shuffle(ps.begin(), ps.end(), rng);
    EXPECT_NEAR(merged_prob(ps), base, 1e-12 * base);
  }
}

TEST(MergeDuplicates, PreservesSemantics) {
  FaultModel m(3, 2,
               {make_fault(0.1, {0, 1}, {0}), make_fault(0.2, {0, 1}, {0}),
                make_fault(0.3, {1, 2}, {1}), make_fault(0.05, {2}, {})});
  MergeResult r = merge_duplicates(m);
  // Any configuration expressible in both models (via the remap) has the
  // same syndrome and observables.
  std::mt19937 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<uint32_t> cfg;
    for (uint32_t id = 0; id < m.fault_count(); ++id) {
      if (rng() & 1) cfg.push_back(id);
    }
    Syndrome direct;
    SparseSet direct_obs;
    SparseSet mapped_cfg_set;
    for (uint32_t id : cfg) {
      direct ^= m.fault(id).syndrome;
      direct_obs ^= m.fault(id).observables;
      mapped_cfg_set ^= SparseSet{r.remap[id]};
    }
    EXPECT_EQ(direct, r.model.syndrome_of(mapped_cfg_set));
    EXPECT_EQ(direct_obs, r.model.observables_of(mapped_cfg_set));
  }
}

TEST(TextFormat, SmallestValidFile) {
  FaultModel m = read_model("checks 2\nobservables 1\nerror(0.01) D0 D1 L0\n");
  EXPECT_EQ(m.check_count(), 2u);
  EXPECT_EQ(m.observable_count(), 1u);
  ASSERT_EQ(m.fault_count(), 1u);
  EXPECT_DOUBLE_EQ(m.fault(0).probability, 0.01);
  EXPECT_EQ(m.fault(0).syndrome, (Syndrome{0, 1}));
  EXPECT_EQ(m.fault(0).observables, SparseSet{0});
}

TEST(TextFormat, CommentsAndBlankLines) {
  FaultModel m = read_model(
      "# a comment\n\nchecks 1\n# another\nobservables 0\n\nerror(0.25) D0\n");
  EXPECT_EQ(m.fault_count(), 1u);
}

TEST(TextFormat, TokenOrderIsFree) {
  FaultModel m = read_model("checks 3\nobservables 1\nerror(0.1) L0 D2 D0\n");
  EXPECT_EQ(m.fault(0).syndrome, (Syndrome{0, 2}));
}

TEST(TextFormat, Errors) {
  // Probability out of range.
  try {
    read_model("checks 1\nobservables 0\nerror(0.6) D0\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3);
  }
  // Out-of-range index.
  EXPECT_THROW(read_model("checks 1\nobservables 0\nerror(0.1) D1\n"),
               ParseError);
  // Duplicate token within a line.
  EXPECT_THROW(read_model("checks 2\nobservables 0\nerror(0.1) D0 D0\n"),
               ParseError);
  // Missing headers.
  EXPECT_THROW(read_model("observables 0\nerror(0.1) D0\n"), ParseError);
  EXPECT_THROW(read_model("checks 1\nerror(0.1) D0\n"), ParseError);
  // Header after an error line.
  EXPECT_THROW(read_model("checks 1\nobservables 0\nerror(0.1) D0\nchecks 1\n"),
               ParseError);
  // Garbage.
  EXPECT_THROW(read_model("checks 1\nobservables 0\nerrand(0.1) D0\n"),
               ParseError);
  EXPECT_THROW(read_model("checks 1\nobservables 0\nerror(0.1) D0 X3\n"),
               ParseError);
}

TEST(TextFormat, RoundTrip) {
  FaultModel rep = gen_repetition(4, 0.1);
  FaultModel back = read_model(write_model(rep));
  ASSERT_EQ(back.fault_count(), rep.fault_count());
  EXPECT_EQ(back.check_count(), rep.check_count());
  EXPECT_EQ(back.observable_count(), rep.observable_count());
  for (uint32_t i = 0; i < rep.fault_count(); ++i) {
    EXPECT_EQ(back.fault(i).syndrome, rep.fault(i).syndrome);
    EXPECT_EQ(back.fault(i).observables, rep.fault(i).observables);
    EXPECT_EQ(back.fault(i).probability, rep.fault(i).probability);
  }
}

TEST(TextFormat, RoundTripExactProbabilities) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> dist(1e-9, 0.5);
  std::vector<Fault> faults;
  for (int i = 0; i < 50; ++i) faults.push_back(make_fault(dist(rng), {0}));
  FaultModel m(1, 0, std::move(faults));
  FaultModel back = read_model(write_model(m));
  for (uint32_t i = 0; i < m.fault_count(); ++i) {
    EXPECT_EQ(back.fault(i).probability, m.fault(i).probability)
        << "probability " << i << " did not survive the round trip";
  }
}

}  // namespace
}  // namespace splitmatch
