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

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "commands.hpp"
#include "config.hpp"
#include "prefrepair/dataio.hpp"
#include "prefrepair/metrics.hpp"

namespace prefrepair {
namespace {

namespace fs = std::filesystem;
using cli::run_cli;

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("prefrepair_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  int run(std::vector<std::string> args, const fs::path& out = {}) const {
    args.insert(args.begin(), {"prefrepair", "--out-dir", (out.empty() ? dir_ : out).string()});
    return run_cli(args);
  }

  fs::path path(const std::string& name) const { return dir_ / name; }

  static std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  }

  static std::vector<std::string> lines(const fs::path& p) {
    std::vector<std::string> out;
    std::istringstream in(slurp(p));
    for (std::string line; std::getline(in, line);) out.push_back(line);
    return out;
  }

  // Builds the small n=15 setting: uniform scores from seed 0, corruption from seed 42.
  void small_artifact(double dp, double ap) const {
    ASSERT_EQ(run({"--seed", "0", "--set", "simulate.n=15", "--set", "simulate.distribution=uniform", "--set",
                   "simulate.nu=1", "simulate"}),
              0);
    ASSERT_EQ(run({"--seed", "42", "--set", "corrupt.dp=" + std::to_string(dp), "--set",
                   "corrupt.ap=" + std::to_string(ap), "corrupt"}),
              0);
  }

  fs::path dir_;
};

TEST_F(Cli, UnknownConfigKeysAreListed) {
  std::ofstream(path("bad.ini")) << "[simulate]\nn = 10\nbogus = 1\n[nowhere]\nx = 2\n";
  testing::internal::CaptureStderr();
  const int code = run({"--config", path("bad.ini").string(), "simulate"});
  const std::string err = testing::internal::GetCapturedStderr();
  EXPECT_EQ(code, cli::kExitInvalid);
  EXPECT_NE(err.find("simulate.bogus"), std::string::npos) << err;
  EXPECT_NE(err.find("nowhere.x"), std::string::npos) << err;
}

TEST_F(Cli, BadValuesExitWithValidationCode) {
  testing::internal::CaptureStderr();
  EXPECT_EQ(run({"--set", "simulate.n=ten", "simulate"}), cli::kExitInvalid);
  EXPECT_EQ(run({"--set", "simulate.nu=-1", "simulate"}), cli::kExitInvalid);
  EXPECT_EQ(run({"recover"}), cli::kExitInvalid);  // no input file
  EXPECT_EQ(run({"no-such-command"}), cli::kExitInvalid);
  testing::internal::GetCapturedStderr();
}

TEST_F(Cli, SimulateIsByteIdentical) {
  const std::vector<std::string> args{"--seed", "7", "--set", "simulate.n=500", "--set", "simulate.nu=2",
                                      "--set", "simulate.comparisons=3", "simulate"};
  ASSERT_EQ(run(args, path("a")), 0);
  ASSERT_EQ(run(args, path("b")), 0);
  for (const char* f : {"params.json", "truth.csv", "dataset.jsonl", "empirical.csv"}) {
    EXPECT_EQ(slurp(path("a") / f), slurp(path("b") / f)) << f;
    EXPECT_FALSE(slurp(path("a") / f).empty()) << f;
  }
}

TEST_F(Cli, ZeroSpreadGivesAllTies) {
  ASSERT_EQ(run({"--set", "simulate.n=6", "--set", "simulate.nu=0", "simulate"}), 0);
  const PreferenceMatrix p = load_matrix_csv(path("truth.csv"));
  for (std::size_t i = 0; i < 6; ++i) {
    for (std::size_t j = 0; j < 6; ++j) EXPECT_EQ(p(i, j), 0.5);
  }
}

TEST_F(Cli, NoDeletionNoCorruptionIsIdentity) {
  small_artifact(0.0, 0.0);
  EXPECT_EQ(load_matrix_csv(path("corrupted.csv")), load_matrix_csv(path("truth.csv")));
  EXPECT_TRUE(load_corruption(path("corruption.jsonl")).entries.empty());
}

TEST_F(Cli, CuratronRepairsTheSmallArtifact) {
  small_artifact(0.1, 0.1);
  ASSERT_EQ(run({"--set", "recover.pipeline=curatron", "recover"}), 0);
  const double err = nfe(load_matrix_csv(path("truth.csv")), load_matrix_csv(path("recovered.csv")));
  EXPECT_LE(err, 0.02);
  ASSERT_EQ(run({"metrics"}), 0);
  const auto doc = nlohmann::json::parse(slurp(path("metrics.json")));
  EXPECT_NEAR(doc["nfe"].get<double>(), err, 1e-15);
  EXPECT_TRUE(doc.contains("precision"));
}

TEST_F(Cli, CoratronMatchesCuratronWithoutCorruption) {
  small_artifact(0.3, 0.0);
  ASSERT_EQ(run({"--set", "recover.pipeline=coratron", "--set", "recover.input=" + path("corrupted.csv").string(),
                 "recover"},
                path("co")),
            0);
  ASSERT_EQ(run({"--set", "recover.pipeline=curatron", "--set", "recover.input=" + path("corrupted.csv").string(),
                 "recover"},
                path("cu")),
            0);
  EXPECT_EQ(load_ranking(path("co") / "ranking.json"), load_ranking(path("cu") / "ranking.json"));
}

TEST_F(Cli, RankMethodsWriteTheirFiles) {
  small_artifact(0.0, 0.0);
  for (const char* m : {"copeland", "borda", "rank-centrality", "btl-mle"}) {
    ASSERT_EQ(run({"--set", "rank.input=truth.csv", "--set", std::string("rank.method=") + m, "rank"}), 0) << m;
    EXPECT_EQ(load_ranking(path(std::string("ranking_") + m + ".json")).n(), 15u) << m;
  }
}

TEST_F(Cli, ExportBestOfN) {
  ASSERT_EQ(run({"--set", "simulate.source=catalog", "--set", "simulate.n=5", "simulate"}), 0);
  ASSERT_EQ(run({"--set", "export.matrix=truth.csv", "--set", "export.strategy=best-of-n", "export"}), 0);
  EXPECT_EQ(load_export(path("export.jsonl")).size(), 4u);
}

TEST_F(Cli, DeskInjectionExportKeepsInjectedOut) {
  ASSERT_EQ(run({"--set", "simulate.source=catalog", "--set", "simulate.n=30", "--set", "simulate.catalog_seed=2024",
                 "simulate"}),
            0);
  ASSERT_EQ(run({"--seed", "1", "--set", "corrupt.kind=injection", "--set", "corrupt.catalog=catalog.json", "corrupt"}),
            0);
  const int code = run({"--set", "recover.pipeline=roratron", "--set", "recover.augment_k=15", "recover"});
  ASSERT_TRUE(code == 0 || code == cli::kExitNotConverged);
  ASSERT_EQ(run({"--set", "export.catalog=catalog_injected.json", "export"}), 0);
  const ResponseCatalog catalog = load_catalog(path("catalog_injected.json"));
  const auto records = load_export(path("export.jsonl"));
  EXPECT_EQ(records.size(), 21u);
  std::map<std::string, std::string> id_of;
  for (const auto& r : catalog.responses) id_of[r.text] = r.id;
  for (const auto& rec : records) {
    EXPECT_NE(rec.chosen, rec.rejected);
    EXPECT_EQ(id_of.at(rec.chosen).rfind("injected-", 0), std::string::npos) << rec.chosen;
  }
  ASSERT_EQ(run({"health-check"}), 0);
  EXPECT_TRUE(nlohmann::json::parse(slurp(path("health.json")))["flagged"].get<bool>());
}

TEST_F(Cli, ExperimentRowTotals) {
  ASSERT_EQ(run({"--threads", "2", "--set", "experiment.dp_values=0,0.1", "--set", "experiment.ap_values=0:0.2:0.1",
                 "--set", "experiment.runs=2", "--set", "experiment.arms=plain,augmented", "--set",
                 "recover.augment_k=15", "experiment"}),
            0);
  const auto rows = lines(path("results.csv"));
  EXPECT_EQ(rows.size(), 1u + 2 * 2 * 3 * 2);
  EXPECT_EQ(rows.front(), "arm,dp,ap,run,nfe,corr,dist,precision,recall,converged,status");
  const auto summary = lines(path("summary.csv"));
  EXPECT_EQ(summary.size(), 1u + 2 * 2 * 3 * 5);
}

TEST_F(Cli, ExperimentIsThreadIndependent) {
  const std::vector<std::string> common{"--set", "experiment.dp_values=0.1", "--set", "experiment.ap_values=0.1,0.2",
                                        "--set", "experiment.runs=3"};
  auto one = common;
  one.insert(one.end(), {"--threads", "1", "experiment"});
  auto four = common;
  four.insert(four.end(), {"--threads", "4", "experiment"});
  ASSERT_EQ(run(one, path("t1")), 0);
  ASSERT_EQ(run(four, path("t4")), 0);
  EXPECT_EQ(slurp(path("t1") / "results.csv"), slurp(path("t4") / "results.csv"));
  EXPECT_EQ(slurp(path("t1") / "summary.csv"), slurp(path("t4") / "summary.csv"));
}

TEST_F(Cli, BaselinesSmallSweep) {
  ASSERT_EQ(run({"--set", "baselines.n=30", "--set", "baselines.runs=1", "--set", "baselines.sweeps=d,nu", "--set",
                 "baselines.d_values=2,4", "--set", "baselines.nu_values=1", "--set", "baselines.d=3", "baselines"}),
            0);
  EXPECT_EQ(lines(path("baselines.csv")).size(), 1u + 3 * 4);
  EXPECT_EQ(lines(path("baselines_summary.csv")).size(), 1u + 3 * 4);
}

TEST_F(Cli, NonConvergenceExitsWithThree) {
  small_artifact(0.0, 0.3);
  testing::internal::CaptureStderr();
  const int code = run({"--set", "solver.max_iters=1", "--set", "recover.pipeline=roratron", "recover"});
  testing::internal::GetCapturedStderr();
  EXPECT_EQ(code, cli::kExitNotConverged);
  EXPECT_TRUE(fs::exists(path("recovered.csv")));
  EXPECT_FALSE(nlohmann::json::parse(slurp(path("recover.json")))["converged"].get<bool>());
}

TEST_F(Cli, PresetsParse) {
  for (const auto& entry : fs::directory_iterator(PREFREPAIR_PRESET_DIR)) {
    cli::Config c;
    EXPECT_NO_THROW({
      c.load(entry.path());
      c.check_known();
    }) << entry.path();
  }
}

}  // namespace
}  // namespace prefrepair
