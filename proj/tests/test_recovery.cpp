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
#include "prefrepair/dataio.hpp"
#include "prefrepair/error.hpp"
#include "prefrepair/linalg.hpp"
#include "prefrepair/metrics.hpp"
#include "prefrepair/ranking.hpp"
#include "prefrepair/recovery.hpp"
#include "support.hpp"

namespace prefrepair {
namespace {

using testing::btl;

const LinkFunction kLogit = LinkFunction::logit();

LogitMatrix logits(const PreferenceMatrix& p) { return link_transform(p, kLogit, 1e-15); }

PreferenceMatrix seeded_btl(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  return btl(testing::uniform_weights(n, rng));
}

// Small instance: w ~ U(0,1) from Rng(seed), then deletion and
// probability-space corruption driven by Rng(42).
struct SmallInstance {
  PreferenceMatrix truth;
  PreferenceMatrix observed;
  SparseCorruption corruption;
};

SmallInstance small_instance(std::uint64_t seed, double dp, double ap) {
  SmallInstance out;
  out.truth = seeded_btl(15, seed);
  Rng adversary(42);
  const PreferenceMatrix thinned = delete_entries(out.truth, dp, adversary);
  auto [c, s] = probability_corruption(thinned, ap, {0.269, 0.731}, adversary);
  out.observed = c;
  out.corruption = s;
  return out;
}

TEST(SolverParams, Defaults) {
  const SolverParams p;
  EXPECT_EQ(p.target_rank, 2u);
  EXPECT_EQ(p.max_iters, 2500u);
  EXPECT_DOUBLE_EQ(p.tol, 1e-11);
  EXPECT_TRUE(p.optspace_trim);
  SolverParams bad;
  bad.target_rank = 0;
  EXPECT_THROW(bad.validate(), ValidationError);
  bad = SolverParams{};
  bad.tol = 0.0;
  EXPECT_THROW(bad.validate(), ValidationError);
}

TEST(Rpca, CleanRankTwoIsReturnedUnchanged) {
  const LogitMatrix m = logits(seeded_btl(12, 1));
  const RecoveryReport rep = rpca(m, SolverParams{});
  EXPECT_LE(testing::relative_error(rep.l_hat.values, m.values) * frobenius_norm(m.values), 1e-9);
  EXPECT_TRUE(rep.s_hat.entries.empty());
  EXPECT_TRUE(rep.converged);
  EXPECT_GE(rep.singular_values.size(), 2u);
}

TEST(Rpca, SingleCorruptedPairIsFound) {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const PreferenceMatrix p = seeded_btl(10, seed);
    SparseCorruption s;
    s.n = 10;
    s.entries = {{2, 7, 7.0}};
    const RecoveryReport rep = rpca(apply_corruption(logits(p), s), SolverParams{});
    ASSERT_EQ(rep.detected_pairs.size(), 1u) << "seed " << seed;
    EXPECT_EQ(rep.detected_pairs[0], std::make_pair(std::size_t{2}, std::size_t{7}));
    EXPECT_LE(nfe(p, inverse_link(rep.l_hat, kLogit)), 1e-6);
  }
}

TEST(Rpca, RejectsMaskedOrNonFiniteInput) {
  PreferenceMatrix p = seeded_btl(6, 2);
  p.hide_pair(0, 1);
  EXPECT_THROW(rpca(link_transform(p, kLogit, 1e-6), SolverParams{}), ValidationError);
  LogitMatrix m = logits(seeded_btl(6, 2));
  m.values(0, 1) = NAN;
  EXPECT_THROW(rpca(m, SolverParams{}), ValidationError);
}

TEST(Rpca, RankAndDegreeOfOutput) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    Rng rng(derive_seed(11, seed));
    const PreferenceMatrix p = btl(testing::gaussian_weights(40, 1.0, rng));
    const SparseCorruption truth = bounded_degree_logit_corruption(40, 2, {5, 10}, rng);
    const RecoveryReport rep = rpca(apply_corruption(logits(p), truth), SolverParams{});
    EXPECT_LE(rep.singular_values[2], 1e-8 * rep.singular_values[0]);
    EXPECT_LE(rep.s_hat.max_degree(), truth.max_degree());
    EXPECT_LE(testing::relative_error(rep.l_hat.values, logits(p).values), 1e-6);
    const SupportScores sc = support_scores(rep.s_hat, truth);
    EXPECT_DOUBLE_EQ(sc.precision, 1.0);
  }
}

TEST(Rpca, ResidualTracesDoNotIncrease) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const SmallInstance inst = small_instance(seed, 0.0, 0.1);
    const RecoveryReport rep = rpca(logits(inst.observed), SolverParams{});
    for (const auto* trace : {&rep.residual_trace, &rep.repair_trace}) {
      for (std::size_t t = 1; t < trace->size(); ++t) {
        EXPECT_LE((*trace)[t], (*trace)[t - 1] * (1 + 1e-12) + 1e-12) << "seed " << seed << " t " << t;
      }
    }
  }
}

TEST(Rpca, IsDeterministic) {
  const SmallInstance inst = small_instance(3, 0.0, 0.2);
  const RecoveryReport a = rpca(logits(inst.observed), SolverParams{});
  const RecoveryReport b = rpca(logits(inst.observed), SolverParams{});
  EXPECT_EQ(a.l_hat.values, b.l_hat.values);
  EXPECT_EQ(a.s_hat, b.s_hat);
}

TEST(Rpca, ExplicitBetaIsHonoured) {
  SolverParams p;
  p.beta = 0.3;
  EXPECT_DOUBLE_EQ(rpca(logits(seeded_btl(8, 4)), p).beta, 0.3);
}

TEST(Complete, FullyObservedIsIdentity) {
  const LogitMatrix m = logits(seeded_btl(10, 5));
  const CompletionResult c = complete(m, SolverParams{});
  EXPECT_TRUE(c.converged);
  for (std::size_t k = 0; k < m.values.size(); ++k) {
    EXPECT_NEAR(c.completed.values.data()[k], m.values.data()[k], 1e-10);
  }
}

TEST(Complete, FortyPercentMissingIsExact) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const PreferenceMatrix p = seeded_btl(15, seed);
    Rng rng(42);
    const PreferenceMatrix d = delete_entries(p, 0.4, rng);
    const CompletionResult c = complete(link_transform(d, kLogit, 1e-15), SolverParams{});
    EXPECT_TRUE(c.completed.mask.all());
    EXPECT_LE(testing::relative_error(c.completed.values, logits(p).values), 1e-6) << "seed " << seed;
  }
}

TEST(Complete, SeventyPercentMissingWithAugmentation) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const SmallInstance inst = small_instance(seed, 0.7, 0.0);
    PipelineOptions o;
    o.augment_k = 15;
    const PipelineResult r = coratron(inst.observed, o);
    EXPECT_LE(nfe(inst.truth, r.recovered), 1e-6) << "seed " << seed;
  }
}

TEST(Complete, NoComparisonsGivesTheUninformativeFit) {
  ComparisonDataset d;
  d.n = 4;
  const CompletionResult c = complete(link_transform(empirical_matrix(d), kLogit, 1e-6), SolverParams{});
  EXPECT_TRUE(c.converged);
  EXPECT_EQ(frobenius_norm(c.completed.values), 0.0);
}

TEST(Roratron, CleanInputSortsScoresAscending) {
  Rng rng(7);
  const auto w = testing::uniform_weights(12, rng);
  const PipelineResult r = roratron(btl(w), PipelineOptions{});
  EXPECT_EQ(r.ranking.order, testing::ascending_order(w));
  ASSERT_TRUE(r.report.has_value());
}

TEST(Roratron, BeatsCopelandOnFlipInstance) {
  std::vector<double> w;
  for (int i = 0; i < 20; ++i) w.push_back(0.35 * i);
  const PreferenceMatrix p = btl(w);
  Rng rng(5);
  const PreferenceMatrix attacked = flip_adversary(p, bounded_degree_pairs(20, 1, rng));
  PipelineOptions o;
  o.clamp = 1e-15;
  const double robust = ranking_distance(roratron(attacked, o).ranking, p);
  const double direct = ranking_distance(copeland(attacked), p);
  EXPECT_GT(direct, 0.0);
  EXPECT_LT(robust, direct);
}

TEST(Roratron, RejectsPartialInput) {
  PreferenceMatrix p = seeded_btl(6, 1);
  p.hide_pair(1, 2);
  EXPECT_THROW(roratron(p, PipelineOptions{}), ValidationError);
}

TEST(Roratron, DatasetOverloadUsesSampledMatrix) {
  const PreferenceMatrix p = seeded_btl(6, 2);
  Rng rng(3);
  const ComparisonDataset d = sample_comparisons(p, 200, rng);
  const PipelineResult a = roratron(d, PipelineOptions{});
  PipelineOptions o;
  o.clamp = default_clamp(200);
  const PipelineResult b = roratron(empirical_matrix(d), o);
  EXPECT_EQ(a.ranking, b.ranking);
}

TEST(Coratron, CleanFullInputMatchesCopeland) {
  const PreferenceMatrix p = seeded_btl(10, 8);
  EXPECT_EQ(coratron(p, PipelineOptions{}).ranking, copeland(p));
}

TEST(Coratron, FortyPercentMissingRanksPerfectly) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const SmallInstance inst = small_instance(seed, 0.4, 0.0);
    EXPECT_DOUBLE_EQ(ranking_distance(coratron(inst.observed, PipelineOptions{}).ranking, inst.truth), 0.0);
  }
}

TEST(Coratron, NinetyPercentMissingIsNotASilentSuccess) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const SmallInstance inst = small_instance(seed, 0.9, 0.0);
    const PipelineResult r = coratron(inst.observed, PipelineOptions{});
    ASSERT_TRUE(r.completion.has_value());
    EXPECT_TRUE(!r.completion->converged || nfe(inst.truth, r.recovered) > 1e-3) << "seed " << seed;
  }
}

TEST(Curatron, TenTenIsAroundOnePercent) {
  double total = 0.0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const SmallInstance inst = small_instance(seed, 0.1, 0.1);
    total += nfe(inst.truth, curatron(inst.observed, PipelineOptions{}).recovered);
  }
  EXPECT_LE(total / 5, 0.02);
}

TEST(Curatron, CleanInputIsIdentity) {
  const PreferenceMatrix p = seeded_btl(10, 9);
  const PipelineResult r = curatron(p, PipelineOptions{});
  EXPECT_EQ(r.ranking, copeland(p));
  EXPECT_LE(nfe(p, r.recovered), 1e-9);
}

TEST(Curatron, TwentyTwentyWithAugmentation) {
  double total = 0.0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const SmallInstance inst = small_instance(seed, 0.2, 0.2);
    PipelineOptions o;
    o.augment_k = 15;
    total += nfe(inst.truth, curatron(inst.observed, o).recovered);
  }
  EXPECT_LE(total / 5, 0.03);
}

TEST(Curatron, MatchesCoratronWithoutCorruption) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const SmallInstance inst = small_instance(seed, 0.3, 0.0);
    EXPECT_EQ(curatron(inst.observed, PipelineOptions{}).ranking, coratron(inst.observed, PipelineOptions{}).ranking);
  }
}

TEST(Curatron, DetectionsStayOnObservedPairs) {
  const SmallInstance inst = small_instance(0, 0.1, 0.1);
  const PipelineResult r = curatron(inst.observed, PipelineOptions{});
  for (const auto& [i, j] : r.report->detected_pairs) EXPECT_TRUE(inst.observed.observed(i, j));
}

TEST(Augment, ZeroIsIdentity) {
  const PreferenceMatrix p = seeded_btl(5, 1);
  EXPECT_EQ(augment(p, 0), p);
}

TEST(Augment, TwoPlusOnePattern) {
  const PreferenceMatrix a = augment(btl({0.0, 1.0}), 1);
  ASSERT_EQ(a.n(), 3u);
  EXPECT_DOUBLE_EQ(a(2, 0), 0.269);
  EXPECT_DOUBLE_EQ(a(2, 1), 0.269);
  EXPECT_DOUBLE_EQ(a(2, 2), 0.5);
  EXPECT_DOUBLE_EQ(a(0, 2), 0.731);
  EXPECT_DOUBLE_EQ(a(1, 2), 0.731);
  EXPECT_TRUE(a.fully_observed());
}

TEST(Augment, KeepsOriginalBlockAndMask) {
  Rng rng(3);
  const PreferenceMatrix p = delete_entries(seeded_btl(8, 3), 0.3, rng);
  const PreferenceMatrix a = augment(p, 4);
  EXPECT_EQ(crop(a, 8), p);
  for (std::size_t i = 8; i < 12; ++i) {
    for (std::size_t j = 8; j < 12; ++j) EXPECT_DOUBLE_EQ(a(i, j), 0.5);
  }
}

TEST(Augment, CroppedRecoveryIsComparedOnOriginalBlock) {
  const SmallInstance inst = small_instance(1, 0.0, 0.4);
  PipelineOptions o;
  o.augment_k = 15;
  const PipelineResult r = curatron(inst.observed, o);
  EXPECT_EQ(r.recovered.n(), 15u);
  EXPECT_EQ(r.ranking.n(), 15u);
  EXPECT_EQ(r.report->l_hat.n(), 30u);
  EXPECT_LE(nfe(inst.truth, r.recovered), 1e-6);
}

TEST(HealthCheck, CleanBtlIsRankTwo) {
  const HealthCheck h = health_check(seeded_btl(20, 4), SolverParams{});
  EXPECT_EQ(h.effective_rank, 2u);
  EXPECT_FALSE(h.flagged);
  EXPECT_EQ(h.spectrum.size(), 20u);
}

TEST(HealthCheck, InjectionIsFlagged) {
  Rng catalog_rng(derive_seed(2024, 0));
  const PreferenceMatrix clean = scores_to_matrix(synthetic_catalog(30, catalog_rng));
  Rng rng(1);
  const InjectionResult inj = inject_responses(clean, InjectionScenario{}, rng);
  EXPECT_TRUE(health_check(inj.matrix, SolverParams{}).flagged);
}

TEST(HealthCheck, SingleSpikeIsFlagged) {
  SparseCorruption s;
  s.n = 10;
  s.entries = {{1, 4, 7.0}};
  const PreferenceMatrix p = inverse_link(apply_corruption(logits(seeded_btl(10, 6)), s), kLogit);
  const HealthCheck h = health_check(p, SolverParams{}, 1e-3, LinkId::kLogit, 1e-15);
  EXPECT_TRUE(h.flagged);
  EXPECT_GT(h.effective_rank, 2u);
}

}  // namespace
}  // namespace prefrepair
