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
#include <optional>
#include <span>

#include "prefrepair/adversary.hpp"
#include "prefrepair/core.hpp"
#include "prefrepair/ranking.hpp"

namespace prefrepair {

// All metrics run over the full n x n grid, diagonal included.

// ||P - Q||_F / ||P||_F. Throws ValidationError when ||P||_F = 0.
double nfe(const PreferenceMatrix& p, const PreferenceMatrix& q);

// Pearson correlation of the n^2 entries; nullopt when either side is constant.
std::optional<double> correlation(const PreferenceMatrix& p, const PreferenceMatrix& q);

// Fraction of pairs i < j on which the ranking puts an item below one it
// strictly loses to under P.
double ranking_distance(const Ranking& sigma, const PreferenceMatrix& p);

// Fraction of pairs i < j with Q and R strictly on opposite sides of 1/2.
double matrix_disagreement(const PreferenceMatrix& q, const PreferenceMatrix& r);

struct SupportScores {
  double precision = 1.0;
  double recall = 1.0;
};

// Set precision and recall over unordered-pair supports. An empty detection
// has precision 1; an empty truth has recall 1.
SupportScores support_scores(const SparseCorruption& detected, const SparseCorruption& truth);

struct MeanStderr {
  double mean = 0.0;
  double stderr_of_mean = 0.0;
  std::size_t count = 0;
};

// Sample standard error s / sqrt(m); zero for a single value.
MeanStderr mean_stderr(std::span<const double> values);

}  // namespace prefrepair
