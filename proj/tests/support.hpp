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

// Reference computations written directly from the definitions, kept apart
// from the library so tests compare two independent paths.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "prefrepair/core.hpp"
#include "prefrepair/random.hpp"

namespace prefrepair::testing {

inline double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// P_ij = e^{-w_i} / (e^{-w_i} + e^{-w_j}).
inline std::vector<std::vector<double>> btl_table(const std::vector<double>& w) {
  const std::size_t n = w.size();
  std::vector<std::vector<double>> p(n, std::vector<double>(n, 0.5));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) p[i][j] = std::exp(-w[i]) / (std::exp(-w[i]) + std::exp(-w[j]));
    }
  }
  return p;
}

inline PreferenceMatrix btl(const std::vector<double>& w) {
  BTLParams params;
  params.w = w;
  return btl_preference(params);
}

inline std::vector<double> uniform_weights(std::size_t n, Rng& rng, double lo = 0.0, double hi = 1.0) {
  std::vector<double> w(n);
  for (auto& x : w) x = uniform(rng, lo, hi);
  return w;
}

inline std::vector<double> gaussian_weights(std::size_t n, double nu, Rng& rng) {
  std::vector<double> w(n);
  for (auto& x : w) x = nu * standard_normal(rng);
  return w;
}

inline double frob_diff(const PreferenceMatrix& a, const PreferenceMatrix& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.n(); ++i) {
    for (std::size_t j = 0; j < a.n(); ++j) s += (a(i, j) - b(i, j)) * (a(i, j) - b(i, j));
  }
  return std::sqrt(s);
}

inline double frob(const PreferenceMatrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.n(); ++i) {
    for (std::size_t j = 0; j < a.n(); ++j) s += a(i, j) * a(i, j);
  }
  return std::sqrt(s);
}

inline double relative_error(const DenseMatrix& est, const DenseMatrix& truth) {
  double num = 0.0;
  double den = 0.0;
  for (std::size_t k = 0; k < truth.size(); ++k) {
    const double d = est.data()[k] - truth.data()[k];
    num += d * d;
    den += truth.data()[k] * truth.data()[k];
  }
  return std::sqrt(num / den);
}

// Pairs (i < j) whose order under `order` contradicts the strict majority of p.
inline double naive_dist(const std::vector<std::size_t>& order, const PreferenceMatrix& p) {
  const std::size_t n = p.n();
  std::vector<std::size_t> pos(n);
  for (std::size_t k = 0; k < n; ++k) pos[order[k]] = k;
  double bad = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (p(i, j) > 0.5 && pos[i] > pos[j]) bad += 1.0;
      if (p(i, j) < 0.5 && pos[i] < pos[j]) bad += 1.0;
    }
  }
  return bad / (static_cast<double>(n) * static_cast<double>(n - 1) / 2.0);
}

// Order by w ascending (lower score wins), ties by index.
inline std::vector<std::size_t> ascending_order(const std::vector<double>& w) {
  std::vector<std::size_t> idx(w.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return w[a] < w[b]; });
  return idx;
}

}  // namespace prefrepair::testing
