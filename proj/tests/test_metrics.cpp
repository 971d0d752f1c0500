// Copyright 2026 The prefrepair Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <gtest/gtest.h>

#include <cmath>

#include "prefrepair/adversary.hpp"
#include "prefrepair/error.hpp"
#include "prefrepair/metrics.hpp"
#include "prefrepair/ranking.hpp"
#include "prefrepair/recovery.hpp"
#include "support.hpp"

namespace prefrepair {
namespace {

using testing::btl;

PreferenceMatrix two_by_two(double p01) {
  PreferenceMatrix p(2);
  p.set_pair(0, 1, p01);
  return p;
}

PreferenceMatrix scaled(const PreferenceMatrix& p, double c) {
  DenseMatrix v = p.values();
  for (std::size_t k = 0; k < v.size(); ++k) v.data()[k] *= c;
  return PreferenceMatrix(v, p.mask());
}

PreferenceMatrix reversed(const PreferenceMatrix& p) {
  PreferenceMatrix t(p.n());
  for (std::size_t i = 0; i < p.n(); ++i) {
    for (std::size_t j = i + 1; j < p.n(); ++j) t.set_pair(i, j, p(j, i));
  }
  return t;
}

TEST(Nfe, HandWorkedTwoByTwo) {
  const PreferenceMatrix p = two_by_two(0.7);
  const PreferenceMatrix q = two_by_two(0.8);
  EXPECT_NEAR(testing::frob_diff(p, q), std::sqrt(0.02), 1e-12);
  EXPECT_NEAR(testing::frob(p), std::sqrt(1.08), 1e-12);
  EXPECT_NEAR(nfe(p, q), 0.1361, 1e-4);
  EXPECT_NEAR(nfe(p, q), testing::frob_diff(p, q) / testing::frob(p), 1e-15);
}

TEST(Nfe, IdentityAndZero) {
  const PreferenceMatrix p = btl({0.1, 0.5, 0.9});
  EXPECT_EQ(nfe(p, p), 0.0);
  EXPECT_DOUBLE_EQ(nfe(p, scaled(p, 0.0)), 1.0);
  EXPECT_THROW(nfe(scaled(p, 0.0), p), ValidationError);
}

TEST(Nfe, ScaleConsistent) {
  const PreferenceMatrix p = btl({0.0, 0.3, 1.2, 0.4});
  const PreferenceMatrix q = btl({0.1, 0.2, 1.0, 0.7});
  EXPECT_NEAR(nfe(scaled(p, 3.5), scaled(q, 3.5)), nfe(p, q), 1e-14);
}

TEST(Nfe, RejectsMismatchedOrMasked) {
  EXPECT_THROW(nfe(PreferenceMatrix(3), PreferenceMatrix(4)), ValidationError);
  PreferenceMatrix p(3);
  p.hide_pair(0, 1);
  EXPECT_THROW(nfe(p, PreferenceMatrix(3)), ValidationError);
}

TEST(Correlation, SelfAndComplement) {
  const PreferenceMatrix p = btl({0.0, 0.3, 1.2, 0.4});
  EXPECT_NEAR(*correlation(p, p), 1.0, 1e-12);
  EXPECT_NEAR(*correlation(p, reversed(p)), -1.0, 1e-12);
}

TEST(Correlation, ConstantIsUndefined) {
  EXPECT_FALSE(correlation(PreferenceMatrix(4), btl({0, 1, 2, 3})).has_value());
}

TEST(Correlation, RecoveredMatrixAtTenTen) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    Rng wrng(seed);
    const PreferenceMatrix p = btl(testing::uniform_weights(15, wrng));
    Rng rng(42);
    const PreferenceMatrix d = delete_entries(p, 0.1, rng);
    const PreferenceMatrix c = probability_corruption(d, 0.1, {0.269, 0.731}, rng).first;
    EXPECT_GE(*correlation(p, curatron(c, PipelineOptions{}).recovered), 0.99) << "seed " << seed;
  }
}

TEST(RankingDistance, CopelandOnStrictOrderIsZero) {
  Rng rng(4);
  const PreferenceMatrix p = btl(testing::gaussian_weights(10, 1.0, rng));
  EXPECT_EQ(ranking_distance(copeland(p), p), 0.0);
}

TEST(RankingDistance, ReversalOnThreeIsOne) {
  const PreferenceMatrix p = btl({0.0, 1.0, 2.0});
  Ranking r;
  r.order = {2, 1, 0};
  r.scores = {0, 0, 0};
  EXPECT_DOUBLE_EQ(ranking_distance(r, p), 1.0);
}

TEST(RankingDistance, TiesContributeNothing) {
  Ranking r;
  r.order = {3, 1, 2, 0};
  r.scores = {0, 0, 0, 0};
  EXPECT_EQ(ranking_distance(r, PreferenceMatrix(4)), 0.0);
}

TEST(RankingDistance, MatchesPairEnumeration) {
  Rng rng(6);
  for (int t = 0; t < 10; ++t) {
    const PreferenceMatrix p = btl(testing::gaussian_weights(9, 1.0, rng));
    Ranking r = copeland(btl(testing::gaussian_weights(9, 1.0, rng)));
    EXPECT_NEAR(ranking_distance(r, p), testing::naive_dist(r.order, p), 1e-15);
  }
}

TEST(Disagreement, SelfTransposeAndFlipBound) {
  Rng rng(7);
  const PreferenceMatrix q = btl(testing::gaussian_weights(12, 1.0, rng));
  EXPECT_EQ(matrix_disagreement(q, q), 0.0);
  EXPECT_DOUBLE_EQ(matrix_disagreement(q, reversed(q)), 1.0);
  for (std::size_t d = 1; d <= 4; ++d) {
    const PreferenceMatrix flipped = flip_adversary(q, bounded_degree_pairs(12, d, rng));
    const double bound = static_cast<double>(d * (2 * 12 - 1 - d)) / (12.0 * 11.0);
    EXPECT_LE(matrix_disagreement(q, flipped), bound + 1e-15);
  }
}

TEST(SupportScores, SetArithmetic) {
  SparseCorruption truth;
  truth.n = 5;
  truth.entries = {{0, 1, 1.0}, {1, 3, 2.0}, {2, 4, -1.0}};
  EXPECT_EQ(support_scores(truth, truth).precision, 1.0);
  EXPECT_EQ(support_scores(truth, truth).recall, 1.0);
  SparseCorruption part = truth;
  part.entries.pop_back();
  const SupportScores sc = support_scores(part, truth);
  EXPECT_EQ(sc.precision, 1.0);
  EXPECT_NEAR(sc.recall, 2.0 / 3.0, 1e-15);
  SparseCorruption extra = truth;
  extra.entries.push_back({3, 4, 0.5});
  EXPECT_NEAR(support_scores(extra, truth).precision, 0.75, 1e-15);
}

TEST(SupportScores, EmptyTruthHasFullRecall) {
  SparseCorruption none;
  none.n = 4;
  EXPECT_EQ(support_scores(none, none).recall, 1.0);
}

TEST(SupportScores, SizeMismatchIsRejected) {
  SparseCorruption a;
  a.n = 4;
  SparseCorruption b;
  b.n = 5;
  EXPECT_THROW(support_scores(a, b), ValidationError);
}

TEST(SupportScores, IdentifiableInstanceHasFullPrecision) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    Rng rng(derive_seed(77, seed));
    const PreferenceMatrix p = btl(testing::gaussian_weights(60, 1.0, rng));
    const SparseCorruption truth = bounded_degree_logit_corruption(60, 2, {5, 10}, rng);
    const LogitMatrix m = apply_corruption(link_transform(p, LinkFunction::logit(), 1e-15), truth);
    EXPECT_EQ(support_scores(rpca(m, SolverParams{}).s_hat, truth).precision, 1.0) << "seed " << seed;
  }
}

TEST(MeanStderr, SmallSample) {
  const std::vector<double> v{1.0, 2.0, 3.0, 4.0};
  const MeanStderr m = mean_stderr(v);
  EXPECT_DOUBLE_EQ(m.mean, 2.5);
  EXPECT_NEAR(m.stderr_of_mean, std::sqrt(5.0 / 3.0) / 2.0, 1e-15);
  EXPECT_EQ(m.count, 4u);
  const std::vector<double> one{7.0};
  EXPECT_EQ(mean_stderr(one).stderr_of_mean, 0.0);
}

}  // namespace
}  // namespace prefrepair
