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
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "prefrepair/matrix.hpp"
#include "prefrepair/random.hpp"

namespace prefrepair {

// Which end of the score scale wins. The default follows the BTL form
// P_ij = e^{-w_i} / (e^{-w_i} + e^{-w_j}), where the LOWER score is preferred.
enum class ScoreOrientation { kLowerWins, kHigherWins };

struct BTLParams {
  std::vector<double> w;
  std::optional<std::pair<double, double>> score_range;
  ScoreOrientation orientation = ScoreOrientation::kLowerWins;

  std::size_t n() const { return w.size(); }
  void validate() const;
  double mean() const;
  // min_{i != j} |w_i - w_j|
  double min_gap() const;
};

// Pairwise preference matrix: entry (i, j) is the probability that item i is
// preferred to item j. Unobserved pairs keep the placeholder 1/2 and are
// tracked in the mask; the diagonal is always observed and equal to 1/2.
class PreferenceMatrix {
 public:
  PreferenceMatrix() = default;
  // Fully observed, every entry 1/2.
  explicit PreferenceMatrix(std::size_t n);
  PreferenceMatrix(DenseMatrix values, Mask mask);

  std::size_t n() const { return values_.rows(); }
  double operator()(std::size_t i, std::size_t j) const { return values_(i, j); }
  bool observed(std::size_t i, std::size_t j) const { return mask_(i, j); }
  bool fully_observed() const { return mask_.all(); }
  const DenseMatrix& values() const { return values_; }
  const Mask& mask() const { return mask_; }

  // Sets (i, j) = p and (j, i) = 1 - p, both observed.
  void set_pair(std::size_t i, std::size_t j, double p);
  // Marks (i, j) and (j, i) unobserved and resets them to the placeholder.
  void hide_pair(std::size_t i, std::size_t j);

  // Throws ValidationError on a broken complement rule, diagonal or mask.
  void validate(double tol = 1e-12) const;

  bool operator==(const PreferenceMatrix&) const = default;

 private:
  DenseMatrix values_;
  Mask mask_;
};

struct ComparisonRecord {
  std::size_t i = 0;
  std::size_t j = 0;
  std::vector<std::uint8_t> outcomes;  // 1 means item i was preferred

  bool operator==(const ComparisonRecord&) const = default;
};

struct ComparisonDataset {
  std::size_t n = 0;
  std::vector<ComparisonRecord> records;

  void validate() const;
  bool operator==(const ComparisonDataset&) const = default;
};

enum class LinkId { kLogit, kProbit };

std::string_view link_name(LinkId id);
LinkId parse_link(std::string_view name);

// Strictly increasing bijection [0,1] -> R under which clean preference
// matrices become low rank.
class LinkFunction {
 public:
  static LinkFunction logit() { return LinkFunction(LinkId::kLogit); }
  static LinkFunction probit() { return LinkFunction(LinkId::kProbit); }
  static LinkFunction from_id(LinkId id) { return LinkFunction(id); }

  LinkId id() const { return id_; }
  double forward(double p) const;
  double inverse(double x) const;
  // Lipschitz constant of forward() on [lo, hi] within (0, 1).
  double lipschitz_on(double lo, double hi) const;

 private:
  explicit LinkFunction(LinkId id) : id_(id) {}
  LinkId id_;
};

// Link-transformed preference matrix. Skew-symmetric on the observed support.
struct LogitMatrix {
  DenseMatrix values;
  Mask mask;
  LinkId link = LinkId::kLogit;

  std::size_t n() const { return values.rows(); }
  void validate(double tol = 1e-9) const;
};

PreferenceMatrix btl_preference(const BTLParams& params);

ComparisonDataset sample_comparisons(const PreferenceMatrix& p, std::size_t k, Rng& rng);

PreferenceMatrix empirical_matrix(const ComparisonDataset& data);

// Default clamp: min(1e-6, 1/(4K)).
double default_clamp(std::size_t comparisons_per_pair);

LogitMatrix link_transform(const PreferenceMatrix& p, const LinkFunction& link,
                           double clamp = 1e-6);

PreferenceMatrix inverse_link(const LogitMatrix& m, const LinkFunction& link);

struct IncoherenceReport {
  double mu = 0.0;
  std::size_t max_corruption_degree = 0;  // floor(n / (512 mu^2 r))
  double delta = 0.0;                     // min off-diagonal |entry|
  std::size_t achieved_rank = 0;
};

// mu from the rank-r singular factors: max row norm of U or V times sqrt(n/r).
IncoherenceReport incoherence_and_bound(const LogitMatrix& m, std::size_t r);

// Closed-form BTL incoherence: sqrt(n/2) * (1 + (w_max - mean)^2 / (w_min - mean)^2)^{1/2}.
double btl_incoherence(const std::vector<double>& w);

}  // namespace prefrepair
