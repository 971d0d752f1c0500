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
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "prefrepair/adversary.hpp"
#include "prefrepair/dataio.hpp"
#include "prefrepair/error.hpp"
#include "prefrepair/ranking.hpp"
#include "prefrepair/recovery.hpp"
#include "support.hpp"

namespace prefrepair {
namespace {

namespace fs = std::filesystem;

class DataIo : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("prefrepair_dataio_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path path(const std::string& name) const { return dir_ / name; }

  static std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  }

  static void write(const fs::path& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

  fs::path dir_;
};

ResponseCatalog scored(std::initializer_list<double> scores) {
  ResponseCatalog c;
  c.prompt = "q";
  std::size_t k = 0;
  for (double s : scores) c.responses.push_back({"r" + std::to_string(k++), "text " + std::to_string(k), s});
  return c;
}

ResponseCatalog desk_catalog(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  return synthetic_catalog(n, rng);
}

TEST(ScoresToMatrix, ZeroAndOne) {
  const PreferenceMatrix p = scores_to_matrix(scored({0.0, 1.0}));
  EXPECT_NEAR(p(0, 1), 0.7311, 1e-4);
  EXPECT_NEAR(p(1, 0), 1.0 - p(0, 1), 1e-15);
}

TEST(ScoresToMatrix, EqualScoresAreTies) {
  const PreferenceMatrix p = scores_to_matrix(scored({0.4, 0.4, 0.4}));
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(p(i, j), 0.5);
  }
}

TEST(ScoresToMatrix, ThirtyFourResponses) {
  const PreferenceMatrix p = scores_to_matrix(desk_catalog(34, 1));
  EXPECT_EQ(p.n(), 34u);
  EXPECT_NO_THROW(p.validate());
  EXPECT_TRUE(p.fully_observed());
}

TEST(ScoresToMatrix, MissingScoresAreNamed) {
  ResponseCatalog c = with_injected(desk_catalog(3, 2), 2);
  try {
    scores_to_matrix(c);
    FAIL() << "expected a ValidationError";
  } catch (const ValidationError& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("injected-000"), std::string::npos);
    EXPECT_NE(what.find("injected-001"), std::string::npos);
  }
}

TEST(Catalog, ValidationRules) {
  ResponseCatalog c = scored({0.1, 0.2});
  c.responses[1].id = "r0";
  EXPECT_THROW(c.validate(), ValidationError);
  c = scored({0.1, 1.5});
  EXPECT_THROW(c.validate(), ValidationError);
}

TEST(Catalog, DeduplicateKeepsFirst) {
  ResponseCatalog c = scored({0.1, 0.2, 0.3, 0.4});
  c.responses[2].text = c.responses[0].text;
  const ResponseCatalog d = deduplicate(c);
  ASSERT_EQ(d.size(), 3u);
  EXPECT_EQ(d.responses[0].id, "r0");
  EXPECT_EQ(d.responses[1].id, "r1");
  EXPECT_EQ(d.responses[2].id, "r3");
}

TEST(SamplePairs, TopGroupsAtThirtyFour) {
  const ResponseCatalog c = desk_catalog(34, 3);
  const PreferenceMatrix p = scores_to_matrix(c);
  const Ranking r = copeland(p);
  Rng rng(4);
  const auto records = sample_pairs(p, r, c, ExportStrategy::kTopGroups, rng);
  ASSERT_EQ(records.size(), 21u);
  const auto pos = r.positions();
  std::set<std::string> chosen;
  for (const auto& rec : records) {
    chosen.insert(rec.chosen);
    EXPECT_NE(rec.chosen, rec.rejected);
    EXPECT_EQ(rec.prompt, c.prompt);
  }
  std::set<std::string> top;
  for (std::size_t k = 0; k < 3; ++k) top.insert(c.responses[r.order[k]].text);
  EXPECT_EQ(chosen, top);
  for (const auto& rec : records) {
    bool from_bottom = false;
    for (std::size_t k = 13; k < 34; ++k) from_bottom |= rec.rejected == c.responses[r.order[k]].text;
    EXPECT_TRUE(from_bottom) << rec.rejected;
  }
  (void)pos;
}

TEST(SamplePairs, BestOfN) {
  const ResponseCatalog c = desk_catalog(5, 5);
  const PreferenceMatrix p = scores_to_matrix(c);
  const Ranking r = copeland(p);
  Rng rng(6);
  const auto records = sample_pairs(p, r, c, ExportStrategy::kBestOfN, rng);
  ASSERT_EQ(records.size(), 4u);
  for (const auto& rec : records) EXPECT_EQ(rec.chosen, c.responses[r.order[0]].text);
}

TEST(SamplePairs, ChosenAlwaysRanksHigher) {
  const ResponseCatalog c = desk_catalog(12, 7);
  const PreferenceMatrix p = scores_to_matrix(c);
  const Ranking r = copeland(p);
  const auto pos = r.positions();
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < c.size(); ++i) index[c.responses[i].text] = i;
  for (auto s : {ExportStrategy::kTopGroups, ExportStrategy::kAllPairs, ExportStrategy::kBestOfN,
                 ExportStrategy::kWorstOfN}) {
    Rng rng(8);
    for (const auto& rec : sample_pairs(p, r, c, s, rng)) {
      EXPECT_LT(pos[index.at(rec.chosen)], pos[index.at(rec.rejected)]) << export_strategy_name(s);
    }
  }
  Rng rng(8);
  EXPECT_EQ(sample_pairs(p, r, c, ExportStrategy::kAllPairs, rng).size(), 66u);
}

TEST(SamplePairs, SameSeedSamePairs) {
  const ResponseCatalog c = desk_catalog(34, 9);
  const PreferenceMatrix p = scores_to_matrix(c);
  const Ranking r = copeland(p);
  Rng a(10);
  Rng b(10);
  EXPECT_EQ(sample_pairs(p, r, c, ExportStrategy::kTopGroups, a),
            sample_pairs(p, r, c, ExportStrategy::kTopGroups, b));
}

TEST(SamplePairs, SmallCatalogsShrinkTheGroups) {
  const ResponseCatalog c = desk_catalog(3, 11);
  const PreferenceMatrix p = scores_to_matrix(c);
  Rng rng(1);
  EXPECT_EQ(sample_pairs(p, copeland(p), c, ExportStrategy::kTopGroups, rng).size(), 2u);
  const ResponseCatalog one = desk_catalog(1, 11);
  Ranking first;
  first.order = {0};
  first.scores = {0.0};
  EXPECT_THROW(sample_pairs(PreferenceMatrix(1), first, one, ExportStrategy::kTopGroups, rng), ValidationError);
}

TEST(SamplePairs, StrategyNames) {
  for (auto s : {ExportStrategy::kTopGroups, ExportStrategy::kAllPairs, ExportStrategy::kBestOfN,
                 ExportStrategy::kWorstOfN}) {
    EXPECT_EQ(parse_export_strategy(export_strategy_name(s)), s);
  }
  EXPECT_THROW(parse_export_strategy("nope"), ValidationError);
}

TEST_F(DataIo, MatrixRoundTripIsBitwise) {
  Rng rng(12);
  PreferenceMatrix p = testing::btl(testing::gaussian_weights(7, 1.3, rng));
  p = delete_entries(p, 0.3, rng);
  save_matrix_csv(path("a.csv"), p);
  const PreferenceMatrix q = load_matrix_csv(path("a.csv"));
  EXPECT_EQ(p, q);
  save_matrix_csv(path("b.csv"), q);
  EXPECT_EQ(slurp(path("a.csv")), slurp(path("b.csv")));
}

TEST_F(DataIo, LogitRoundTrip) {
  const LogitMatrix m = link_transform(testing::btl({0.0, 0.7, 2.0}), LinkFunction::probit(), 1e-9);
  save_logit_csv(path("m.csv"), m);
  const LogitMatrix back = load_logit_csv(path("m.csv"));
  EXPECT_EQ(back.values, m.values);
  EXPECT_EQ(back.mask, m.mask);
  EXPECT_EQ(back.link, LinkId::kProbit);
}

TEST_F(DataIo, EmptyCellIsMasked) {
  write(path("m.csv"), "# prefrepair-matrix,1,2\n0.5,\n,0.5\n");
  const PreferenceMatrix p = load_matrix_csv(path("m.csv"));
  EXPECT_FALSE(p.observed(0, 1));
  EXPECT_FALSE(p.observed(1, 0));
  EXPECT_TRUE(p.observed(0, 0));
}

TEST_F(DataIo, BadCsvNamesLine) {
  write(path("m.csv"), "# prefrepair-matrix,1,2\n0.5,0.6\n0.4,x\n");
  try {
    load_matrix_csv(path("m.csv"));
    FAIL() << "expected a ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find(":3"), std::string::npos) << e.what();
  }
}

TEST_F(DataIo, DatasetRoundTrip) {
  Rng rng(13);
  const ComparisonDataset d = sample_comparisons(testing::btl({0.0, 0.5, 1.0, 1.5}), 9, rng);
  save_dataset(path("d.jsonl"), d);
  EXPECT_EQ(load_dataset(path("d.jsonl")), d);
}

TEST_F(DataIo, MalformedJsonNamesLine) {
  Rng rng(14);
  save_dataset(path("d.jsonl"), sample_comparisons(testing::btl({0.0, 0.5, 1.0}), 2, rng));
  std::string text = slurp(path("d.jsonl"));
  text += "{\"i\": 0, \"j\": \n";
  write(path("d.jsonl"), text);
  try {
    load_dataset(path("d.jsonl"));
    FAIL() << "expected a ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("d.jsonl:5"), std::string::npos) << e.what();
  }
}

TEST_F(DataIo, WrongHeaderIsRejected) {
  write(path("r.json"), "{\"format\": \"something-else\", \"version\": 1}");
  EXPECT_THROW(load_ranking(path("r.json")), ValidationError);
  EXPECT_THROW(load_matrix_csv(path("missing.csv")), ValidationError);
}

TEST_F(DataIo, CorruptionRoundTrip) {
  Rng rng(15);
  const SparseCorruption s = random_logit_corruption(20, 0.2, {5, 10}, rng);
  save_corruption(path("s.jsonl"), s);
  EXPECT_EQ(load_corruption(path("s.jsonl")), s);
}

TEST_F(DataIo, ExportRankingParamsCatalogRoundTrip) {
  const std::vector<PairwiseExportRecord> recs{{"q", "a", "b"}, {"q", "a\n\"c\"", "d"}};
  save_export(path("e.jsonl"), recs);
  EXPECT_EQ(load_export(path("e.jsonl")), recs);

  const Ranking r = copeland(testing::btl({0.3, 0.1, 0.2}));
  save_ranking(path("r.json"), r);
  EXPECT_EQ(load_ranking(path("r.json")), r);

  BTLParams w;
  w.w = {0.25, 1.0 / 3.0, 0.9};
  w.score_range = std::make_pair(0.0, 1.0);
  save_btl_params(path("w.json"), w);
  const BTLParams wb = load_btl_params(path("w.json"));
  EXPECT_EQ(wb.w, w.w);
  EXPECT_EQ(wb.score_range, w.score_range);

  const ResponseCatalog c = with_injected(desk_catalog(4, 16), 2);
  save_catalog(path("c.json"), c);
  EXPECT_EQ(load_catalog(path("c.json")), c);
}

TEST_F(DataIo, ReportRoundTrip) {
  Rng rng(17);
  const PreferenceMatrix p = testing::btl(testing::uniform_weights(10, rng));
  const PreferenceMatrix c = probability_corruption(p, 0.1, {0.269, 0.731}, rng).first;
  const RecoveryReport rep = rpca(link_transform(c, LinkFunction::logit()), SolverParams{});
  save_report(path("rep.json"), rep);
  const RecoveryReport back = load_report(path("rep.json"));
  EXPECT_EQ(back.l_hat.values, rep.l_hat.values);
  EXPECT_EQ(back.s_hat, rep.s_hat);
  EXPECT_EQ(back.singular_values, rep.singular_values);
  EXPECT_EQ(back.detected_pairs, rep.detected_pairs);
  EXPECT_EQ(back.residual_trace, rep.residual_trace);
  EXPECT_EQ(back.repair_trace, rep.repair_trace);
  EXPECT_EQ(back.converged, rep.converged);
  EXPECT_EQ(back.beta, rep.beta);
  save_report(path("rep2.json"), back);
  EXPECT_EQ(slurp(path("rep.json")), slurp(path("rep2.json")));
}

}  // namespace
}  // namespace prefrepair
