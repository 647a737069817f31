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

#include "splitmatch/harness.h"

#include <cmath>

#include "gtest/gtest.h"
#include "splitmatch/model_generators.h"
#include "splitmatch/splitting.h"

namespace splitmatch {
namespace {

// Closed-form majority-vote failure probability of the length-n repetition
// code under independent bit flips.
double majority_vote_failure(uint32_t n, double p) {
  double total = 0.0;
  for (uint32_t k = n / 2 + 1; k <= n; ++k) {
    double binom = 1.0;
    for (uint32_t i = 0; i < k; ++i) {
      binom = binom * static_cast<double>(n - i) / static_cast<double>(i + 1);
    }
    total += binom * std::pow(p, k) * std::pow(1.0 - p, n - k);
  }
  return total;
}

TEST(Wilson, BasicProperties) {
  WilsonInterval iv = wilson95(0, 1000);
  EXPECT_GE(iv.low, 0.0);
  EXPECT_GT(iv.high, 0.0);
  EXPECT_LT(iv.high, 0.01);
  iv = wilson95(500, 1000);
  EXPECT_LT(iv.low, 0.5);
  EXPECT_GT(iv.high, 0.5);
  iv = wilson95(1000, 1000);
  EXPECT_GT(iv.low, 0.99);
  EXPECT_DOUBLE_EQ(iv.high, 1.0);
}

TEST(Sample, NearNoiselessLimit) {
  FaultModel rep = gen_repetition(5, 1e-9);
  SampleStats stats = sample(rep, rep, DecoderKind::kMwpm, 10000, 7, 1);
  EXPECT_LE(stats.failures, 1u);
  EXPECT_EQ(stats.unsplittable_leaks, 0u);
}

TEST(Sample, SameSeedSameStats) {
  FaultModel rep = gen_repetition(5, 0.08);
  SampleStats a = sample(rep, rep, DecoderKind::kMwpm, 5000, 42, 1);
  SampleStats b = sample(rep, rep, DecoderKind::kMwpm, 5000, 42, 3);
  EXPECT_EQ(a.failures, b.failures);
  EXPECT_EQ(a.failures_per_observable, b.failures_per_observable);
  EXPECT_EQ(a.unsplittable_leaks, b.unsplittable_leaks);
  SampleStats c = sample(rep, rep, DecoderKind::kMwpm, 5000, 43, 1);
  EXPECT_NE(a.failures, c.failures);  // different seed, different draw
}

TEST(Sample, ByteIdenticalJsonAcrossWorkerCounts) {
  FaultModel rep = gen_repetition(5, 0.05);
  SampleStats w1 = sample(rep, rep, DecoderKind::kMwpm, 20000, 11, 1);
  SampleStats w8 = sample(rep, rep, DecoderKind::kMwpm, 20000, 11, 8);
  EXPECT_EQ(sample_stats_to_json(w1, DecoderKind::kMwpm),
            sample_stats_to_json(w8, DecoderKind::kMwpm));
}

TEST(Sample, RepetitionMatchesAnalyticRate) {
  const double p = 0.05;
  FaultModel rep = gen_repetition(5, p);
  SampleStats stats = sample(rep, rep, DecoderKind::kMwpm, 30000, 2026, 0);
  double analytic = majority_vote_failure(5, p);
  EXPECT_GE(analytic, stats.interval.low);
  EXPECT_LE(analytic, stats.interval.high);
}

TEST(Sample, MonotoneInPhysicalRate) {
  // Failure rate is non-decreasing in p over a 3-point grid, within 3
  // combined standard errors.
  std::vector<double> ps = {0.02, 0.05, 0.08};
  std::vector<SampleStats> stats;
  for (double p : ps) {
    FaultModel rep = gen_repetition(5, p);
    stats.push_back(sample(rep, rep, DecoderKind::kMwpm, 30000, 5, 0));
  }
  for (size_t i = 0; i + 1 < stats.size(); ++i) {
    double r1 = stats[i].failure_rate, r2 = stats[i + 1].failure_rate;
    double n = static_cast<double>(stats[i].shots);
    double se = std::sqrt(r1 * (1 - r1) / n + r2 * (1 - r2) / n);
    EXPECT_LE(r1, r2 + 3 * se);
  }
}

TEST(Sample, UnsplittableLeakage) {
  // The three-check model splits to an empty model; every triggered shot
  // leaks and counts as a failure.
  FaultModel m = gen_three_check(5, 0.2);
  SplitReport split = split_combined(m, DecoderKind::kMwpm,
                                     CombineOrder::kRecursiveThenDecoder);
  SampleStats stats = sample(m, split.split_model, DecoderKind::kMwpm, 5000, 3, 1);
  EXPECT_GT(stats.unsplittable_leaks, 0u);
  EXPECT_GE(stats.failures, stats.unsplittable_leaks);
}

TEST(Sample, SplitSurfaceHasNoLeaks) {
  FaultModel surf = gen_surface_perfect(3, 0.01, 0.01, 0.01);
  SplitReport split = split_decoder_based(surf, DecoderKind::kMwpm);
  SampleStats stats =
      sample(surf, split.split_model, DecoderKind::kMwpm, 3000, 17, 0);
  EXPECT_EQ(stats.unsplittable_leaks, 0u);
  EXPECT_EQ(stats.failures_per_observable.size(), 2u);
}

TEST(Sample, UnionFindDecoderRuns) {
  FaultModel surf = gen_surface_perfect(3, 0.01, 0.01, 0.01);
  SplitReport split = split_decoder_based(surf, DecoderKind::kMwpm);
  SampleStats stats =
      sample(surf, split.split_model, DecoderKind::kUnionFind, 3000, 17, 2);
  EXPECT_EQ(stats.unsplittable_leaks, 0u);
  EXPECT_LT(stats.failure_rate, 0.05);
}

TEST(ModelDistance, RepetitionFive) {
  FaultModel rep = gen_repetition(5, 0.05);
  DistanceSearch d = model_distance(rep, 6);
  ASSERT_TRUE(d.distance.has_value());
  EXPECT_EQ(*d.distance, 5u);
  EXPECT_EQ(d.witness, (std::vector<uint32_t>{0, 1, 2, 3, 4}));
  // Witness re-verifies through the model operations.
  FaultConfiguration cfg(d.witness);
  EXPECT_TRUE(rep.syndrome_of(cfg).empty());
  EXPECT_FALSE(rep.observables_of(cfg).empty());
}

TEST(ModelDistance, SurfaceD3BothLogicals) {
  FaultModel surf = gen_surface_perfect(3, 0.01, 0.01, 0.01);
  DistanceSearch d = model_distance(surf, 4);
  ASSERT_TRUE(d.distance.has_value());
  EXPECT_EQ(*d.distance, 3u);

  // Restricting to a single observable still gives distance 3 for each type.
  for (uint32_t keep = 0; keep < 2; ++keep) {
    std::vector<Fault> faults;
    for (const Fault& f : surf.faults()) {
      Fault g = f;
      g.observables = f.observables.contains(keep) ? SparseSet{0} : SparseSet{};
      faults.push_back(std::move(g));
    }
    FaultModel restricted(surf.check_count(), 1, std::move(faults));
    DistanceSearch dk = model_distance(restricted, 4);
    ASSERT_TRUE(dk.distance.has_value());
    EXPECT_EQ(*dk.distance, 3u) << "observable " << keep;
  }
}

TEST(ModelDistance, ExceedsSearchBound) {
  // The three-check model's faults are linearly independent: no nonzero
  // configuration has an empty syndrome.
  FaultModel m = gen_three_check(5);
  DistanceSearch d = model_distance(m, 5);
  EXPECT_FALSE(d.distance.has_value());
  EXPECT_TRUE(d.witness.empty());
  // Petersen: the only zero-boundary sets are {} and all ten bits, and the
  // latter has even parity, so nothing qualifies either.
  DistanceSearch dp = model_distance(gen_expander_petersen(0.05), 10);
  EXPECT_FALSE(dp.distance.has_value());
}

TEST(ModelDistance, EnumerationGuard) {
  FaultModel big = gen_repetition(120, 0.01);
  EXPECT_THROW(model_distance(big, 40), std::runtime_error);
}

TEST(EffectiveDistance, RepetitionFiveAchievesFullDistance) {
  FaultModel rep = gen_repetition(5, 0.05);
  DistanceSearch eff = effective_distance(rep, rep, DecoderKind::kMwpm, 5);
  ASSERT_TRUE(eff.distance.has_value());
  EXPECT_EQ(*eff.distance, 3u);  // all weight <= 2 corrected, some 3 fails
  // Witness re-verifies: decoding its syndrome predicts the wrong logical.
  DecodingGraph g = DecodingGraph::build(rep);
  MwpmDecoder dec(rep, g);
  FaultConfiguration cfg(eff.witness);
  DecodeResult r = dec.decode(rep.syndrome_of(cfg));
  EXPECT_NE(r.predicted_observables, rep.observables_of(cfg));
}

TEST(EffectiveDistance, SurfaceD3SplitPipeline) {
  FaultModel surf = gen_surface_perfect(3, 0.01, 0.01, 0.01);
  SplitReport split = split_decoder_based(surf, DecoderKind::kMwpm);
  ASSERT_TRUE(split.unsplittable.empty());

  DistanceSearch model_d = model_distance(surf, 4);
  ASSERT_TRUE(model_d.distance.has_value());
  EXPECT_EQ(*model_d.distance, 3u);

  DistanceSearch eff =
      effective_distance(surf, split.split_model, DecoderKind::kMwpm, 3);
  ASSERT_TRUE(eff.distance.has_value());
  EXPECT_EQ(*eff.distance, 2u);  // every weight-1 corrected, some pair fails
  // Verdict: 2 >= ceil(3/2), the decoder achieves full distance.
  EXPECT_GE(*eff.distance, (*model_d.distance + 1) / 2);
}

TEST(EffectiveDistance, ThreeCheckFailsAtWeightOne) {
  FaultModel m = gen_three_check(5);
  SplitReport split = split_combined(m, DecoderKind::kMwpm,
                                     CombineOrder::kRecursiveThenDecoder);
  DistanceSearch eff =
      effective_distance(m, split.split_model, DecoderKind::kMwpm, 2);
  ASSERT_TRUE(eff.distance.has_value());
  EXPECT_EQ(*eff.distance, 1u);
}

TEST(JsonOutput, DistanceShapes) {
  FaultModel rep = gen_repetition(5, 0.05);
  DistanceSearch d = model_distance(rep, 6);
  std::string json = distance_to_json(d, 6);
  EXPECT_NE(json.find("\"model_distance\":5"), std::string::npos);
  EXPECT_NE(json.find("\"exceeds_search_bound\":false"), std::string::npos);
  EXPECT_NE(json.find("\"witness\":[0,1,2,3,4]"), std::string::npos);

  DistanceSearch none = model_distance(gen_three_check(3), 4);
  std::string none_json = distance_to_json(none, 4);
  EXPECT_NE(none_json.find("\"model_distance\":null"), std::string::npos);
  EXPECT_NE(none_json.find("\"exceeds_search_bound\":true"), std::string::npos);
}

TEST(JsonOutput, EffectiveDistanceVerdict) {
  FaultModel surf = gen_surface_perfect(3, 0.01, 0.01, 0.01);
  SplitReport split = split_decoder_based(surf, DecoderKind::kMwpm);
  DistanceSearch model_d = model_distance(surf, 4);
  DistanceSearch eff =
      effective_distance(surf, split.split_model, DecoderKind::kMwpm, 3);
  std::string json =
      effective_distance_to_json(model_d, eff, DecoderKind::kMwpm, 3);
  EXPECT_NE(json.find("\"effective_distance\":2"), std::string::npos);
  EXPECT_NE(json.find("\"model_distance\":3"), std::string::npos);
  EXPECT_NE(json.find("\"achieves_full_distance\":true"), std::string::npos);
}

TEST(JsonOutput, SplitReportRoundsTripPaths) {
  FaultModel m = read_model(
      "checks 3\nobservables 1\n"
      "error(0.1) D0\nerror(0.1) D1\nerror(0.1) D0 D1 D2 L0\n");
  SplitReport r = split_recursive(m);
  std::string json =
      split_report_to_json(r, "in.fm", "out.fm", "recursive", "");
  EXPECT_NE(json.find("\"split_model\":\"out.fm\""), std::string::npos);
  EXPECT_NE(json.find("\"method\":\"recursive\""), std::string::npos);
  EXPECT_NE(json.find("\"decoder\":null"), std::string::npos);
}

}  // namespace
}  // namespace splitmatch
