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

#include "prefrepair/adversary.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <string>

#include "prefrepair/error.hpp"
#include "prefrepair/ranking.hpp"

namespace prefrepair {
namespace {

void require_fraction(double x, const char* what) {
  if (!(x >= 0.0 && x <= 1.0)) throw ValidationError(std::string(what) + " must lie in [0,1]");
}

std::size_t rounded_share(double fraction, std::size_t count) {
  return std::min(count, static_cast<std::size_t>(std::lround(fraction * static_cast<double>(count))));
}

// k distinct indices from [0, count) with the given positive weights.
std::vector<std::size_t> weighted_sample(std::vector<double> weights, std::size_t k, Rng& rng) {
  std::vector<std::size_t> picked;
  k = std::min(k, weights.size());
  for (std::size_t draw = 0; draw < k; ++draw) {
    const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    double target = uniform01(rng) * total;
    std::size_t chosen = weights.size();
    for (std::size_t i = 0; i < weights.size(); ++i) {
      if (weights[i] <= 0.0) continue;
      chosen = i;
      if (target < weights[i]) break;
      target -= weights[i];
    }
    picked.push_back(chosen);
    weights[chosen] = 0.0;
  }
  return picked;
}

}  // namespace

std::size_t SparseCorruption::max_degree() const {
  std::vector<std::size_t> degree(n, 0);
  for (const auto& e : entries) {
    if (e.delta == 0.0) continue;
    ++degree[e.i];
    ++degree[e.j];
  }
  return degree.empty() ? 0 : *std::max_element(degree.begin(), degree.end());
}

DenseMatrix SparseCorruption::to_dense() const {
  DenseMatrix s(n, n);
  for (const auto& e : entries) {
    s(e.i, e.j) += e.delta;
    s(e.j, e.i) -= e.delta;
  }
  return s;
}

std::vector<std::pair<std::size_t, std::size_t>> SparseCorruption::support() const {
  std::set<std::pair<std::size_t, std::size_t>> pairs;
  for (const auto& e : entries) {
    if (e.delta != 0.0) pairs.emplace(e.i, e.j);
  }
  return {pairs.begin(), pairs.end()};
}

void SparseCorruption::validate() const {
  for (const auto& e : entries) {
    if (e.i >= e.j || e.j >= n) {
      throw ValidationError("corruption entry (" + std::to_string(e.i) + "," + std::to_string(e.j) +
                            ") must satisfy i < j < n");
    }
    if (!std::isfinite(e.delta)) throw ValidationError("corruption delta must be finite");
  }
}

SparseCorruption random_logit_corruption(std::size_t n, double density,
                                         std::pair<double, double> magnitude, Rng& rng) {
  require_fraction(density, "density");
  SparseCorruption s{n, {}, CorruptionSpace::kLogit};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!bernoulli(rng, density)) continue;
      const double mag = uniform(rng, magnitude.first, magnitude.second);
      const double sign = bernoulli(rng, 0.5) ? 1.0 : -1.0;
      s.entries.push_back({i, j, sign * mag});
    }
  }
  return s;
}

std::vector<std::pair<std::size_t, std::size_t>> bounded_degree_pairs(std::size_t n,
                                                                      std::size_t degree,
                                                                      Rng& rng) {
  std::vector<std::pair<std::size_t, std::size_t>> all;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) all.emplace_back(i, j);
  }
  for (std::size_t k = all.size(); k > 1; --k) {
    std::swap(all[k - 1], all[uniform_index(rng, k)]);
  }
  std::vector<std::size_t> used(n, 0);
  std::vector<std::pair<std::size_t, std::size_t>> picked;
  for (const auto& [i, j] : all) {
    if (used[i] < degree && used[j] < degree) {
      ++used[i];
      ++used[j];
      picked.emplace_back(i, j);
    }
  }
  std::sort(picked.begin(), picked.end());
  return picked;
}

SparseCorruption bounded_degree_logit_corruption(std::size_t n, std::size_t degree,
                                                 std::pair<double, double> magnitude, Rng& rng) {
  SparseCorruption s{n, {}, CorruptionSpace::kLogit};
  for (const auto& [i, j] : bounded_degree_pairs(n, degree, rng)) {
    const double mag = uniform(rng, magnitude.first, magnitude.second);
    const double sign = bernoulli(rng, 0.5) ? 1.0 : -1.0;
    s.entries.push_back({i, j, sign * mag});
  }
  return s;
}

LogitMatrix apply_corruption(const LogitMatrix& m, const SparseCorruption& s) {
  if (s.n != m.n()) throw ValidationError("corruption size differs from matrix size");
  if (s.space != CorruptionSpace::kLogit) {
    throw ValidationError("apply_corruption expects a logit-space corruption");
  }
  LogitMatrix out = m;
  for (const auto& e : s.entries) {
    if (!out.mask(e.i, e.j)) continue;
    out.values(e.i, e.j) += e.delta;
    out.values(e.j, e.i) -= e.delta;
  }
  return out;
}

std::pair<PreferenceMatrix, SparseCorruption> probability_corruption(
    const PreferenceMatrix& p, double ap, std::pair<double, double> value_range, Rng& rng) {
  require_fraction(ap, "ap");
  require_fraction(value_range.first, "value range");
  require_fraction(value_range.second, "value range");
  PreferenceMatrix out = p;
  SparseCorruption s{p.n(), {}, CorruptionSpace::kProbability};
  for (std::size_t i = 0; i < p.n(); ++i) {
    for (std::size_t j = i + 1; j < p.n(); ++j) {
      // Draw for every pair so the stream does not depend on the mask.
      const bool hit = bernoulli(rng, ap);
      const double u = uniform(rng, value_range.first, value_range.second);
      if (!hit || !p.observed(i, j)) continue;
      s.entries.push_back({i, j, u - p(i, j)});
      out.set_pair(i, j, u);
    }
  }
  return {std::move(out), std::move(s)};
}

PreferenceMatrix delete_entries(const PreferenceMatrix& p, double dp, Rng& rng) {
  require_fraction(dp, "dp");
  PreferenceMatrix out = p;
  for (std::size_t i = 0; i < p.n(); ++i) {
    for (std::size_t j = i + 1; j < p.n(); ++j) {
      if (bernoulli(rng, dp)) out.hide_pair(i, j);
    }
  }
  return out;
}

PreferenceMatrix flip_adversary(const PreferenceMatrix& p,
                                const std::vector<std::pair<std::size_t, std::size_t>>& pairs) {
  PreferenceMatrix out = p;
  for (const auto& [i, j] : pairs) {
    if (i >= p.n() || j >= p.n() || i == j) throw ValidationError("flip pair out of range");
    if (!p.observed(i, j)) continue;
    out.set_pair(i, j, p(j, i));
  }
  return out;
}

void InjectionScenario::validate() const {
  require_fraction(p1, "p1");
  require_fraction(p2, "p2");
  require_fraction(p3, "p3");
  for (auto [lo, hi] : {s1_range, s2_range}) {
    require_fraction(lo, "score range");
    require_fraction(hi, "score range");
    if (lo > hi) throw ValidationError("score range must have lo <= hi");
  }
}

InjectionResult inject_responses(const PreferenceMatrix& p, const InjectionScenario& scenario,
                                 Rng& rng) {
  scenario.validate();
  if (!p.fully_observed()) throw ValidationError("inject_responses needs a fully observed matrix");
  const std::size_t n = p.n();
  const std::size_t k = scenario.k_injected;
  if (k == 0) return {p, {}};
  const std::size_t total = n + k;

  PreferenceMatrix out(total);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) out.set_pair(i, j, p(i, j));
  }

  // Provisional score against incumbent j: how an average incumbent fares vs j.
  std::vector<double> provisional(n, 0.5);
  for (std::size_t j = 0; j < n && n > 1; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (i != j) s += p(i, j);
    }
    provisional[j] = s / static_cast<double>(n - 1);
  }

  InjectionResult result;
  const std::size_t boosted = rounded_share(scenario.p1, n);
  for (std::size_t m = n; m < total; ++m) {
    result.injected.push_back(m);
    for (std::size_t j = 0; j < n; ++j) out.set_pair(m, j, provisional[j]);
    std::vector<std::size_t> pool(n);
    std::iota(pool.begin(), pool.end(), 0);
    for (std::size_t c = 0; c < boosted; ++c) {
      std::swap(pool[c], pool[c + uniform_index(rng, n - c)]);
      out.set_pair(m, pool[c], uniform(rng, scenario.s1_range.first, scenario.s1_range.second));
    }
  }

  // Soften the strongest incumbents against a worst-leaning share of the rest.
  const Ranking order = copeland(p);
  const std::size_t top = rounded_share(scenario.p2, n);
  const std::size_t rest = n - top;
  const std::size_t victims = rounded_share(scenario.p3, rest);
  for (std::size_t t = 0; t < top; ++t) {
    std::vector<double> weights(rest);
    for (std::size_t q = 0; q < rest; ++q) weights[q] = static_cast<double>(q + 1);
    for (std::size_t q : weighted_sample(weights, victims, rng)) {
      const std::size_t a = order.order[t];
      const std::size_t b = order.order[top + q];
      out.set_pair(a, b, uniform(rng, scenario.s2_range.first, scenario.s2_range.second));
    }
  }

  result.matrix = std::move(out);
  return result;
}

}  // namespace prefrepair
