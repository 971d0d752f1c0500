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
#include <span>
#include <vector>

#include "prefrepair/core.hpp"

namespace prefrepair {

// Copeland ordering is a 5-approximation to the best permutation under dist().
inline constexpr double kCopelandApproximation = 5.0;

struct Ranking {
  std::vector<std::size_t> order;  // most preferred first
  std::vector<double> scores;      // per item, indexed by item

  std::size_t n() const { return order.size(); }
  // position[item] = place of item in order (0 = best)
  std::vector<std::size_t> positions() const;
  void validate() const;

  bool operator==(const Ranking&) const = default;
};

// Order items by score, highest first, ties by ascending index.
Ranking rank_by_scores_descending(std::vector<double> scores);
// Lowest score first, ties by ascending index.
Ranking rank_by_scores_ascending(std::vector<double> scores);

// v_i = #{j : P_ij > 1/2}. Requires a fully observed matrix.
Ranking copeland(const PreferenceMatrix& p);

struct BordaResult {
  Ranking ranking;
  std::vector<std::size_t> isolated;  // items with no comparisons, scored 0
};

// Win fraction over every outcome the item took part in.
BordaResult borda(const ComparisonDataset& data);
// Same statistic with the matrix entries standing in for outcome frequencies.
BordaResult borda(const PreferenceMatrix& p);

struct RankCentralityResult {
  Ranking ranking;
  std::vector<double> stationary;
  std::size_t iterations = 0;
  bool smoothed = false;   // chain was reducible; 1e-8 added off the diagonal
  bool converged = false;  // power iteration reached 1e-12 in L1
};

RankCentralityResult rank_centrality(const PreferenceMatrix& p);

struct BtlMleOptions {
  double gradient_tol = 1e-9;
  std::size_t max_iters = 200;  // Newton iterations
};

struct BtlMleResult {
  BTLParams params;  // centered, sum w = 0
  Ranking ranking;   // ascending w under the lower-wins convention
  std::size_t iterations = 0;
  bool converged = false;
  double log_likelihood = 0.0;
};

// sum_{i<j observed} P_ij (w_j - w_i) - log(1 + exp(w_j - w_i))
double btl_log_likelihood(const PreferenceMatrix& p, std::span<const double> w);
std::vector<double> btl_gradient(const PreferenceMatrix& p, std::span<const double> w);

BtlMleResult btl_mle(const PreferenceMatrix& p, const BtlMleOptions& options = {});

}  // namespace prefrepair
