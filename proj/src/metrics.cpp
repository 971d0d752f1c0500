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

#include "prefrepair/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <numeric>

#include "prefrepair/error.hpp"
#include "prefrepair/kernels.hpp"

namespace prefrepair {
namespace {

void require_same_size(const PreferenceMatrix& a, const PreferenceMatrix& b) {
  if (a.n() != b.n()) throw ValidationError("matrices differ in size");
}

double pairs(std::size_t n) { return 0.5 * static_cast<double>(n) * static_cast<double>(n - 1); }

}  // namespace

double nfe(const PreferenceMatrix& p, const PreferenceMatrix& q) {
  require_same_size(p, q);
  if (!p.fully_observed() || !q.fully_observed()) throw ValidationError("nfe needs fully observed matrices");
  const double denom = frobenius_norm(p.values());
  if (denom == 0.0) throw ValidationError("nfe reference matrix has zero norm");
  const double num = kernels::sum_sq_diff(p.values().data(), q.values().data(), p.values().size());
  return std::sqrt(num) / denom;
}

std::optional<double> correlation(const PreferenceMatrix& p, const PreferenceMatrix& q) {
  require_same_size(p, q);
  const auto a = p.values().values();
  const auto b = q.values().values();
  const double count = static_cast<double>(a.size());
  if (a.empty()) return std::nullopt;
  const double mean_a = std::accumulate(a.begin(), a.end(), 0.0) / count;
  const double mean_b = std::accumulate(b.begin(), b.end(), 0.0) / count;
  double cov = 0.0;
  double var_a = 0.0;
  double var_b = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double da = a[k] - mean_a;
    const double db = b[k] - mean_b;
    cov += da * db;
    var_a += da * da;
    var_b += db * db;
  }
  if (var_a == 0.0 || var_b == 0.0) return std::nullopt;
  return std::clamp(cov / std::sqrt(var_a * var_b), -1.0, 1.0);
}

double ranking_distance(const Ranking& sigma, const PreferenceMatrix& p) {
  const std::size_t n = p.n();
  if (sigma.n() != n) throw ValidationError("ranking and matrix differ in size");
  sigma.validate();
  if (n < 2) return 0.0;
  const auto pos = sigma.positions();
  std::size_t wrong = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (p(i, j) > 0.5 && pos[i] > pos[j]) ++wrong;
      if (p(j, i) > 0.5 && pos[j] > pos[i]) ++wrong;
    }
  }
  return static_cast<double>(wrong) / pairs(n);
}

double matrix_disagreement(const PreferenceMatrix& q, const PreferenceMatrix& r) {
  require_same_size(q, r);
  const std::size_t n = q.n();
  if (n < 2) return 0.0;
  std::size_t wrong = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (q(i, j) > 0.5 && r(i, j) < 0.5) ++wrong;
      if (q(i, j) < 0.5 && r(i, j) > 0.5) ++wrong;
    }
  }
  return static_cast<double>(wrong) / pairs(n);
}

SupportScores support_scores(const SparseCorruption& detected, const SparseCorruption& truth) {
  if (detected.n != truth.n) throw ValidationError("corruptions differ in size");
  const auto found = detected.support();
  const auto real = truth.support();
  std::vector<std::pair<std::size_t, std::size_t>> hits;
  std::set_intersection(found.begin(), found.end(), real.begin(), real.end(),
                        std::back_inserter(hits));
  SupportScores out;
  if (!found.empty()) out.precision = static_cast<double>(hits.size()) / static_cast<double>(found.size());
  if (!real.empty()) out.recall = static_cast<double>(hits.size()) / static_cast<double>(real.size());
  return out;
}

MeanStderr mean_stderr(std::span<const double> values) {
  MeanStderr out;
  out.count = values.size();
  if (values.empty()) return out;
  const double m = static_cast<double>(values.size());
  out.mean = std::accumulate(values.begin(), values.end(), 0.0) / m;
  if (values.size() < 2) return out;
  double ss = 0.0;
  for (double v : values) ss += (v - out.mean) * (v - out.mean);
  out.stderr_of_mean = std::sqrt(ss / (m - 1.0)) / std::sqrt(m);
  return out;
}

}  // namespace prefrepair
