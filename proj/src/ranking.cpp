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

#include "prefrepair/ranking.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "prefrepair/error.hpp"

namespace prefrepair {
namespace {

double softplus(double x) { return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

double logistic(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

void require_full(const PreferenceMatrix& p, const char* who) {
  if (!p.fully_observed()) {
    throw ValidationError(std::string(who) + " needs a fully observed matrix; complete it first");
  }
}

// Strong connectivity of i -> j whenever j beats i with positive probability.
bool irreducible(const PreferenceMatrix& p) {
  const std::size_t n = p.n();
  auto reach_all = [&](bool forward) {
    std::vector<char> seen(n, 0);
    std::vector<std::size_t> stack{0};
    seen[0] = 1;
    while (!stack.empty()) {
      const std::size_t i = stack.back();
      stack.pop_back();
      for (std::size_t j = 0; j < n; ++j) {
        if (seen[j] || i == j) continue;
        const double w = forward ? p(j, i) : p(i, j);
        if (w > 0.0) {
          seen[j] = 1;
          stack.push_back(j);
        }
      }
    }
    return std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; });
  };
  return n <= 1 || (reach_all(true) && reach_all(false));
}

}  // namespace

std::vector<std::size_t> Ranking::positions() const {
  std::vector<std::size_t> pos(order.size());
  for (std::size_t k = 0; k < order.size(); ++k) pos[order[k]] = k;
  return pos;
}

void Ranking::validate() const {
  std::vector<char> seen(order.size(), 0);
  for (std::size_t item : order) {
    if (item >= order.size() || seen[item]) throw ValidationError("ranking order is not a permutation");
    seen[item] = 1;
  }
  if (!scores.empty() && scores.size() != order.size()) {
    throw ValidationError("ranking scores length differs from order length");
  }
}

Ranking rank_by_scores_descending(std::vector<double> scores) {
  Ranking r;
  r.order.resize(scores.size());
  std::iota(r.order.begin(), r.order.end(), 0);
  std::stable_sort(r.order.begin(), r.order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  r.scores = std::move(scores);
  return r;
}

Ranking rank_by_scores_ascending(std::vector<double> scores) {
  Ranking r;
  r.order.resize(scores.size());
  std::iota(r.order.begin(), r.order.end(), 0);
  std::stable_sort(r.order.begin(), r.order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  r.scores = std::move(scores);
  return r;
}

Ranking copeland(const PreferenceMatrix& p) {
  require_full(p, "copeland");
  const std::size_t n = p.n();
  std::vector<double> wins(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (p(i, j) > 0.5) wins[i] += 1.0;
    }
  }
  return rank_by_scores_descending(std::move(wins));
}

BordaResult borda(const ComparisonDataset& data) {
  data.validate();
  std::vector<double> wins(data.n, 0.0);
  std::vector<double> played(data.n, 0.0);
  for (const auto& rec : data.records) {
    double w = 0.0;
    for (auto y : rec.outcomes) w += y;
    const double k = static_cast<double>(rec.outcomes.size());
    wins[rec.i] += w;
    wins[rec.j] += k - w;
    played[rec.i] += k;
    played[rec.j] += k;
  }
  BordaResult out;
  std::vector<double> score(data.n, 0.0);
  for (std::size_t i = 0; i < data.n; ++i) {
    if (played[i] > 0) {
      score[i] = wins[i] / played[i];
    } else {
      out.isolated.push_back(i);
    }
  }
  out.ranking = rank_by_scores_descending(std::move(score));
  return out;
}

BordaResult borda(const PreferenceMatrix& p) {
  const std::size_t n = p.n();
  BordaResult out;
  std::vector<double> score(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double total = 0.0;
    std::size_t seen = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j || !p.observed(i, j)) continue;
      total += p(i, j);
      ++seen;
    }
    if (seen == 0) {
      out.isolated.push_back(i);
    } else {
      score[i] = total / static_cast<double>(seen);
    }
  }
  out.ranking = rank_by_scores_descending(std::move(score));
  return out;
}

RankCentralityResult rank_centrality(const PreferenceMatrix& p) {
  require_full(p, "rank_centrality");
  const std::size_t n = p.n();
  RankCentralityResult out;
  out.smoothed = !irreducible(p);
  const double smoothing = out.smoothed ? 1e-8 : 0.0;
  const double n_max = static_cast<double>(n);

  // Transition i -> j with probability P_ji / n_max; diagonal takes the rest.
  DenseMatrix q(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    double off = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      q(i, j) = (p(j, i) + smoothing) / n_max;
      off += q(i, j);
    }
    q(i, i) = 1.0 - off;
  }

  std::vector<double> pi(n, 1.0 / n_max);
  std::vector<double> next(n);
  constexpr std::size_t kMaxIters = 100000;
  for (std::size_t it = 1; it <= kMaxIters; ++it) {
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double w = pi[i];
      for (std::size_t j = 0; j < n; ++j) next[j] += w * q(i, j);
    }
    const double total = std::accumulate(next.begin(), next.end(), 0.0);
    double change = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      next[j] /= total;
      change += std::fabs(next[j] - pi[j]);
    }
    pi.swap(next);
    out.iterations = it;
    if (change <= 1e-12) {
      out.converged = true;
      break;
    }
  }
  if (!out.converged) {
    // Slow mixing: solve pi^T (I - Q) = 0 with sum(pi) = 1 directly.
    Eigen::MatrixXd a(n + 1, n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) a(j, i) = (i == j ? 1.0 : 0.0) - q(i, j);
    }
    a.row(static_cast<Eigen::Index>(n)).setOnes();
    Eigen::VectorXd b = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n + 1));
    b(static_cast<Eigen::Index>(n)) = 1.0;
    Eigen::VectorXd x = a.colPivHouseholderQr().solve(b);
    const double total = x.sum();
    for (std::size_t j = 0; j < n; ++j) pi[j] = std::max(x(static_cast<Eigen::Index>(j)), 0.0) / total;
    const double renorm = std::accumulate(pi.begin(), pi.end(), 0.0);
    for (double& v : pi) v /= renorm;
  }
  out.stationary = pi;
  out.ranking = rank_by_scores_descending(std::move(pi));
  return out;
}

double btl_log_likelihood(const PreferenceMatrix& p, std::span<const double> w) {
  double f = 0.0;
  for (std::size_t i = 0; i < p.n(); ++i) {
    for (std::size_t j = i + 1; j < p.n(); ++j) {
      if (!p.observed(i, j)) continue;
      const double x = w[j] - w[i];
      f += p(i, j) * x - softplus(x);
    }
  }
  return f;
}

std::vector<double> btl_gradient(const PreferenceMatrix& p, std::span<const double> w) {
  std::vector<double> g(p.n(), 0.0);
  for (std::size_t i = 0; i < p.n(); ++i) {
    for (std::size_t j = i + 1; j < p.n(); ++j) {
      if (!p.observed(i, j)) continue;
      const double r = p(i, j) - logistic(w[j] - w[i]);
      g[j] += r;
      g[i] -= r;
    }
  }
  return g;
}

BtlMleResult btl_mle(const PreferenceMatrix& p, const BtlMleOptions& options) {
  require_full(p, "btl_mle");
  const std::size_t n = p.n();
  const auto ni = static_cast<Eigen::Index>(n);
  std::vector<double> w(n, 0.0);
  std::vector<double> g = btl_gradient(p, w);
  double f = btl_log_likelihood(p, w);
  BtlMleResult out;
  std::vector<double> trial(n);
  auto inf_norm = [](const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::fabs(x));
    return m;
  };
  // Damped Newton. The negative Hessian is the graph Laplacian with weights
  // s(1 - s); adding 11^T / n removes its null space along constant shifts.
  Eigen::MatrixXd lap(ni, ni);
  Eigen::VectorXd rhs(ni);
  for (std::size_t it = 1; it <= options.max_iters; ++it) {
    if (inf_norm(g) <= options.gradient_tol) {
      out.converged = true;
      break;
    }
    lap.setConstant(1.0 / static_cast<double>(n));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if (!p.observed(i, j)) continue;
        const double s = logistic(w[j] - w[i]);
        const double c = s * (1.0 - s);
        const auto ii = static_cast<Eigen::Index>(i);
        const auto jj = static_cast<Eigen::Index>(j);
        lap(ii, ii) += c;
        lap(jj, jj) += c;
        lap(ii, jj) -= c;
        lap(jj, ii) -= c;
      }
    }
    for (std::size_t i = 0; i < n; ++i) rhs(static_cast<Eigen::Index>(i)) = g[i];
    Eigen::LDLT<Eigen::MatrixXd> ldlt(lap);
    Eigen::VectorXd dir = ldlt.solve(rhs);
    double slope = dir.dot(rhs);
    if (ldlt.info() != Eigen::Success || !dir.allFinite() || !(slope > 0.0)) {
      dir = rhs;  // plain gradient ascent
      slope = rhs.squaredNorm();
    }
    double t = 1.0;
    double f_trial = f;
    for (int halvings = 0;; ++halvings) {
      for (std::size_t i = 0; i < n; ++i) trial[i] = w[i] + t * dir(static_cast<Eigen::Index>(i));
      f_trial = btl_log_likelihood(p, trial);
      if (f_trial >= f + 1e-4 * t * slope) break;
      if (halvings > 60) {
        f_trial = f;
        trial = w;
        break;
      }
      t *= 0.5;
    }
    out.iterations = it;
    if (trial == w) break;  // no ascent left at machine precision
    w = trial;
    f = f_trial;
    g = btl_gradient(p, w);
  }
  if (!out.converged && inf_norm(g) <= options.gradient_tol) out.converged = true;
  const double mean = std::accumulate(w.begin(), w.end(), 0.0) / static_cast<double>(n);
  for (double& x : w) x -= mean;
  out.log_likelihood = btl_log_likelihood(p, w);
  out.params.w = w;
  out.ranking = rank_by_scores_ascending(std::move(w));
  return out;
}

}  // namespace prefrepair
