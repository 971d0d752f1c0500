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
#include <utility>
#include <vector>

#include "prefrepair/core.hpp"

namespace prefrepair {

enum class CorruptionSpace { kLogit, kProbability };

struct CorruptionEntry {
  std::size_t i = 0;  // i < j; the mirror cell (j, i) carries -delta
  std::size_t j = 0;
  double delta = 0.0;

  bool operator==(const CorruptionEntry&) const = default;
};

// Skew-symmetric sparse perturbation stored as its upper triangle.
struct SparseCorruption {
  std::size_t n = 0;
  std::vector<CorruptionEntry> entries;
  CorruptionSpace space = CorruptionSpace::kLogit;

  // Largest number of nonzeros in any row (equivalently column).
  std::size_t max_degree() const;
  DenseMatrix to_dense() const;
  // Unordered pairs in the support, sorted.
  std::vector<std::pair<std::size_t, std::size_t>> support() const;
  void validate() const;

  bool operator==(const SparseCorruption&) const = default;
};

// Each upper-triangle pair is corrupted with probability `density`; the
// magnitude is uniform on [magnitude.first, magnitude.second] and the sign is
// positive with probability 1/2.
SparseCorruption random_logit_corruption(std::size_t n, double density,
                                         std::pair<double, double> magnitude, Rng& rng);

// Corrupts pairs with prescribed maximum degree: at most `degree` corrupted
// pairs touch any item. Used for identifiable instances.
SparseCorruption bounded_degree_logit_corruption(std::size_t n, std::size_t degree,
                                                 std::pair<double, double> magnitude, Rng& rng);

// Adds the corruption to the observed cells of a logit matrix.
LogitMatrix apply_corruption(const LogitMatrix& m, const SparseCorruption& s);

// Each observed upper-triangle pair is selected with probability `ap` and its
// value replaced by u ~ U(value_range); the mirror becomes 1 - u. The
// returned corruption records delta = u - P_ij in probability space.
std::pair<PreferenceMatrix, SparseCorruption> probability_corruption(
    const PreferenceMatrix& p, double ap, std::pair<double, double> value_range, Rng& rng);

// Hides each upper-triangle pair with probability dp. The diagonal stays.
PreferenceMatrix delete_entries(const PreferenceMatrix& p, double dp, Rng& rng);

// Swaps P_ij and P_ji for every listed pair.
PreferenceMatrix flip_adversary(const PreferenceMatrix& p,
                                const std::vector<std::pair<std::size_t, std::size_t>>& pairs);

// Random pair subset with at most `degree` pairs per item.
std::vector<std::pair<std::size_t, std::size_t>> bounded_degree_pairs(std::size_t n,
                                                                      std::size_t degree,
                                                                      Rng& rng);

// Response injection: an adversary appends k responses, boosts them against a
// random share of incumbents and softens the strongest incumbents.
struct InjectionScenario {
  std::size_t k_injected = 5;
  std::pair<double, double> s1_range{0.7, 0.731};
  double p1 = 0.45;
  std::pair<double, double> s2_range{0.5, 0.55};
  double p2 = 0.30;
  double p3 = 0.35;

  void validate() const;
};

struct InjectionResult {
  PreferenceMatrix matrix;
  std::vector<std::size_t> injected;
};

InjectionResult inject_responses(const PreferenceMatrix& p, const InjectionScenario& scenario,
                                 Rng& rng);

}  // namespace prefrepair
