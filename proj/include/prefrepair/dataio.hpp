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

#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "prefrepair/adversary.hpp"
#include "prefrepair/core.hpp"
#include "prefrepair/ranking.hpp"
#include "prefrepair/recovery.hpp"

namespace prefrepair {

inline constexpr int kFormatVersion = 1;

// ---------------------------------------------------------------------------
// Response catalogs and the pairwise export path.

struct CatalogResponse {
  std::string id;
  std::string text;
  std::optional<double> score;  // normalized to [0, 1]

  bool operator==(const CatalogResponse&) const = default;
};

struct ResponseCatalog {
  std::string prompt;
  std::vector<CatalogResponse> responses;

  std::size_t size() const { return responses.size(); }
  // Unique ids, scores in [0, 1].
  void validate() const;
  bool operator==(const ResponseCatalog&) const = default;
};

// Drops responses whose text repeats an earlier one; keeps the first.
ResponseCatalog deduplicate(const ResponseCatalog& catalog);

// n scored placeholder responses with scores uniform on [0, 1].
ResponseCatalog synthetic_catalog(std::size_t n, Rng& rng, std::string prompt = "desk prompt");

// Appends k unscored responses in the order inject_responses numbers them.
ResponseCatalog with_injected(const ResponseCatalog& catalog, std::size_t k);

// BTL matrix with the normalized scores as w (lower score wins). Throws
// ValidationError naming every unscored id.
PreferenceMatrix scores_to_matrix(const ResponseCatalog& catalog);

struct PairwiseExportRecord {
  std::string prompt;
  std::string chosen;
  std::string rejected;

  bool operator==(const PairwiseExportRecord&) const = default;
};

enum class ExportStrategy { kTopGroups, kAllPairs, kBestOfN, kWorstOfN };

std::string_view export_strategy_name(ExportStrategy s);
ExportStrategy parse_export_strategy(std::string_view name);

// kTopGroups: the 3 best responses are each paired with a random group of 7
// drawn from the 21 worst. Below 24 responses the counts shrink in
// proportion. kBestOfN pairs the best response with every other one,
// kWorstOfN every other one with the worst, kAllPairs every pair. Chosen is
// always the better-ranked side.
std::vector<PairwiseExportRecord> sample_pairs(const PreferenceMatrix& p, const Ranking& ranking,
                                               const ResponseCatalog& catalog,
                                               ExportStrategy strategy, Rng& rng);

// ---------------------------------------------------------------------------
// Persistence. Every file starts with a header carrying the format name and
// version. Errors are ValidationError with "<path>:<line>[:<column>]".

// CSV: header "# prefrepair-matrix,<version>,<n>", then n rows of n cells.
// An empty cell is unobserved. Values use 17 significant digits.
void save_matrix_csv(const std::filesystem::path& path, const PreferenceMatrix& p);
PreferenceMatrix load_matrix_csv(const std::filesystem::path& path);
void save_logit_csv(const std::filesystem::path& path, const LogitMatrix& m);
LogitMatrix load_logit_csv(const std::filesystem::path& path);

// JSONL: header object, then one {"i","j","outcomes"} record per line.
void save_dataset(const std::filesystem::path& path, const ComparisonDataset& data);
ComparisonDataset load_dataset(const std::filesystem::path& path);

// JSONL: header object, then one {"i","j","delta","space"} record per line.
void save_corruption(const std::filesystem::path& path, const SparseCorruption& s);
SparseCorruption load_corruption(const std::filesystem::path& path);

// JSONL: header object, then one {"prompt","chosen","rejected"} record per line.
void save_export(const std::filesystem::path& path, const std::vector<PairwiseExportRecord>& records);
std::vector<PairwiseExportRecord> load_export(const std::filesystem::path& path);

// Single-document JSON files.
void save_ranking(const std::filesystem::path& path, const Ranking& r);
Ranking load_ranking(const std::filesystem::path& path);
void save_btl_params(const std::filesystem::path& path, const BTLParams& params);
BTLParams load_btl_params(const std::filesystem::path& path);
void save_catalog(const std::filesystem::path& path, const ResponseCatalog& catalog);
ResponseCatalog load_catalog(const std::filesystem::path& path);
void save_report(const std::filesystem::path& path, const RecoveryReport& report);
RecoveryReport load_report(const std::filesystem::path& path);

}  // namespace prefrepair
