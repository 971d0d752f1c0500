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
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "prefrepair/adversary.hpp"
#include "prefrepair/dataio.hpp"
#include "prefrepair/recovery.hpp"

namespace prefrepair::cli {

// Runs fn(0..count-1) on up to `threads` workers. Each index must write only
// its own slot, so the result does not depend on scheduling.
void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& fn);

enum class PipelineKind { kRoratron, kCoratron, kCuratron };
PipelineKind parse_pipeline(const std::string& name);
PipelineResult run_pipeline(PipelineKind kind, const PreferenceMatrix& p, const PipelineOptions& o);

// Restricts a report's sparse part to pairs among the first n items.
SparseCorruption detected_support(const RecoveryReport& report, std::size_t n);

// --- dp x ap grid on small BTL instances ------------------------------------

struct GridSettings {
  std::size_t n = 15;
  std::vector<double> dp_values;
  std::vector<double> ap_values;
  std::size_t runs = 5;
  std::uint64_t weight_seed_base = 0;  // run r draws w ~ U(0,1) from Rng(base + r)
  std::uint64_t corruption_seed = 42;  // fresh Rng(seed) per run for deletion + corruption
  std::pair<double, double> value_range{0.269, 0.731};
  PipelineKind pipeline = PipelineKind::kCuratron;
  std::vector<std::string> arms{"plain"};  // "plain" and/or "augmented"
  PipelineOptions options;                 // augment_k applies to the augmented arm
};

struct GridInstance {
  PreferenceMatrix truth;
  PreferenceMatrix observed;  // after deletion and corruption
  SparseCorruption corruption;
};

GridInstance grid_instance(const GridSettings& s, double dp, double ap, std::size_t run);

struct GridRow {
  std::string arm;
  double dp = 0.0;
  double ap = 0.0;
  std::size_t run = 0;
  double nfe = 0.0;
  std::optional<double> corr;
  double dist = 0.0;
  double precision = 1.0;
  double recall = 1.0;
  bool converged = false;
  std::string status = "ok";
  std::optional<PreferenceMatrix> recovered;  // kept only when asked
};

std::vector<GridRow> run_grid(const GridSettings& s, std::size_t threads, bool keep_matrices = false);

// --- ranking-method comparison on larger instances ---------------------------

struct BaselineSettings {
  std::size_t n = 200;
  double nu = 2.0;               // spread for the d sweep
  double d = 100.0;              // corruption degree for the nu sweep
  std::vector<double> d_values{10, 40, 70, 100};
  std::vector<double> nu_values{0.5, 1, 2, 3, 4};
  std::vector<std::string> sweeps{"d"};
  std::size_t runs = 5;
  std::pair<double, double> magnitude{5.0, 10.0};
  std::size_t comparisons = 0;  // 0 = exact preference probabilities
  std::uint64_t seed = 42;
  PipelineOptions options;
};

struct BaselineRow {
  std::string sweep;
  double value = 0.0;
  std::size_t run = 0;
  std::string method;
  double dist = 0.0;
  std::string status = "ok";
};

inline const std::vector<std::string>& baseline_methods() {
  static const std::vector<std::string> m{"roratron", "ml", "rc", "bc"};
  return m;
}

std::vector<BaselineRow> run_baselines(const BaselineSettings& s, std::size_t threads);

// --- injected dismissive responses on a synthetic catalog --------------------

struct InjectionSettings {
  std::size_t incumbents = 30;
  std::uint64_t catalog_seed = 2024;
  std::size_t runs = 5;
  std::size_t top = 3;
  double tau_rel = 1e-3;
  ExportStrategy strategy = ExportStrategy::kTopGroups;
  InjectionScenario scenario;
  std::uint64_t seed = 42;
  PipelineOptions options;
};

struct InjectionRow {
  std::size_t run = 0;
  std::size_t effective_rank = 0;
  bool flagged = false;
  bool converged = false;
  std::vector<std::size_t> top;
  std::size_t injected_in_top = 0;
  std::size_t records = 0;
  std::size_t injected_chosen = 0;
  std::string status = "ok";
  std::vector<PairwiseExportRecord> exported;
};

std::vector<InjectionRow> run_injection(const InjectionSettings& s, std::size_t threads);

}  // namespace prefrepair::cli
