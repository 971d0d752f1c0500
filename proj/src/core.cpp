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

#include "prefrepair/core.hpp"

#include <algorithm>
#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>
#include <string>

#include "prefrepair/error.hpp"
#include "prefrepair/linalg.hpp"

namespace prefrepair {

void BTLParams::validate() const {
  if (w.size() < 2) throw ValidationError("BTL parameters need at least two items");
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!std::isfinite(w[i])) {
      throw ValidationError("BTL score " + std::to_string(i) + " is not finite");
    }
    if (score_range && (w[i] < score_range->first || w[i] > score_range->second)) {
      throw ValidationError("BTL score " + std::to_string(i) + " outside score_range");
    }
  }
}

double BTLParams::mean() const {
  double s = 0.0;
  for (double v : w) s += v;
  return w.empty() ? 0.0 : s / static_cast<double>(w.size());
}

double BTLParams::min_gap() const {
  std::vector<double> sorted = w;
  std::sort(sorted.begin(), sorted.end());
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < sorted.size(); ++i) gap = std::min(gap, sorted[i] - sorted[i - 1]);
  return gap;
}

PreferenceMatrix::PreferenceMatrix(std::size_t n) : values_(n, n, 0.5), mask_(n, true) {}

PreferenceMatrix::PreferenceMatrix(DenseMatrix values, Mask mask)
    : values_(std::move(values)), mask_(std::move(mask)) {
  if (values_.rows() != values_.cols() || mask_.n() != values_.rows()) {
    throw ValidationError("preference matrix must be square with a matching mask");
  }
}

void PreferenceMatrix::set_pair(std::size_t i, std::size_t j, double p) {
  values_(i, j) = p;
  values_(j, i) = 1.0 - p;
  mask_.set_pair(i, j, true);
}

void PreferenceMatrix::hide_pair(std::size_t i, std::size_t j) {
  values_(i, j) = 0.5;
  values_(j, i) = 0.5;
  mask_.set_pair(i, j, false);
}

void PreferenceMatrix::validate(double tol) const {
  const std::size_t m = n();
  for (std::size_t i = 0; i < m; ++i) {
    if (!mask_(i, i) || values_(i, i) != 0.5) {
      throw ValidationError("diagonal entry " + std::to_string(i) + " must be observed 1/2");
    }
    for (std::size_t j = i + 1; j < m; ++j) {
      if (mask_(i, j) != mask_(j, i)) {
        throw ValidationError("mask is not symmetric at (" + std::to_string(i) + "," +
                              std::to_string(j) + ")");
      }
      const double a = values_(i, j);
      const double b = values_(j, i);
      if (!(a >= 0.0 && a <= 1.0 && b >= 0.0 && b <= 1.0)) {
        throw ValidationError("entry outside [0,1] at (" + std::to_string(i) + "," +
                              std::to_string(j) + ")");
      }
      if (mask_(i, j) && std::fabs(a + b - 1.0) > tol) {
        throw ValidationError("complement rule broken at (" + std::to_string(i) + "," +
                              std::to_string(j) + ")");
      }
    }
  }
}

void ComparisonDataset::validate() const {
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (std::size_t r = 0; r < records.size(); ++r) {
    const auto& rec = records[r];
    const std::string where = "record " + std::to_string(r);
    if (rec.i >= rec.j) throw ValidationError(where + ": requires i < j");
    if (rec.j >= n) throw ValidationError(where + ": index out of range");
    if (rec.outcomes.empty()) throw ValidationError(where + ": no outcomes");
    for (auto y : rec.outcomes) {
      if (y > 1) throw ValidationError(where + ": outcomes must be 0 or 1");
    }
    if (!seen.emplace(rec.i, rec.j).second) throw ValidationError(where + ": duplicate pair");
  }
}

std::string_view link_name(LinkId id) { return id == LinkId::kLogit ? "logit" : "probit"; }

LinkId parse_link(std::string_view name) {
  if (name == "logit") return LinkId::kLogit;
  if (name == "probit") return LinkId::kProbit;
  throw ValidationError("unknown link function '" + std::string(name) + "'");
}

double LinkFunction::forward(double p) const {
  if (id_ == LinkId::kLogit) return std::log(p) - std::log1p(-p);
  return boost::math::quantile(boost::math::normal_distribution<double>(), p);
}

double LinkFunction::inverse(double x) const {
  if (id_ == LinkId::kLogit) {
    if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
  }
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double LinkFunction::lipschitz_on(double lo, double hi) const {
  if (!(lo > 0.0 && hi < 1.0 && lo <= hi)) {
    throw ValidationError("lipschitz_on needs 0 < lo <= hi < 1");
  }
  // The derivative is convex and symmetric about 1/2, so it peaks at an endpoint.
  auto slope = [this](double p) {
    if (id_ == LinkId::kLogit) return 1.0 / (p * (1.0 - p));
    const double z = forward(p);
    return std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * z * z);
  };
  return std::max(slope(lo), slope(hi));
}

void LogitMatrix::validate(double tol) const {
  const std::size_t m = n();
  if (values.cols() != m || mask.n() != m) throw ValidationError("logit matrix shape mismatch");
  for (std::size_t i = 0; i < m; ++i) {
    if (values(i, i) != 0.0) throw ValidationError("logit diagonal must be zero");
    for (std::size_t j = i + 1; j < m; ++j) {
      if (mask(i, j) && std::fabs(values(i, j) + values(j, i)) > tol) {
        throw ValidationError("logit matrix not skew-symmetric at (" + std::to_string(i) + "," +
                              std::to_string(j) + ")");
      }
    }
  }
}

PreferenceMatrix btl_preference(const BTLParams& params) {
  params.validate();
  const std::size_t n = params.n();
  const double sign = params.orientation == ScoreOrientation::kLowerWins ? 1.0 : -1.0;
  const LinkFunction logistic = LinkFunction::logit();
  PreferenceMatrix p(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      p.set_pair(i, j, logistic.inverse(sign * (params.w[j] - params.w[i])));
    }
  }
  return p;
}

ComparisonDataset sample_comparisons(const PreferenceMatrix& p, std::size_t k, Rng& rng) {
  if (k == 0) throw ValidationError("sample_comparisons needs K >= 1");
  if (!p.fully_observed()) {
    throw ValidationError("sample_comparisons needs a fully observed ground-truth matrix");
  }
  ComparisonDataset data;
  data.n = p.n();
  data.records.reserve(p.n() * (p.n() - 1) / 2);
  for (std::size_t i = 0; i < p.n(); ++i) {
    for (std::size_t j = i + 1; j < p.n(); ++j) {
      ComparisonRecord rec{i, j, std::vector<std::uint8_t>(k)};
      const double pij = p(i, j);
      for (auto& y : rec.outcomes) y = bernoulli(rng, pij) ? 1 : 0;
      data.records.push_back(std::move(rec));
    }
  }
  return data;
}

PreferenceMatrix empirical_matrix(const ComparisonDataset& data) {
  data.validate();
  const std::size_t n = data.n;
  PreferenceMatrix p(DenseMatrix(n, n, 0.5), Mask(n, false));
  for (std::size_t i = 0; i < n; ++i) {
    // PreferenceMatrix(values, mask) leaves the diagonal to us.
    p.set_pair(i, i, 0.5);
  }
  for (const auto& rec : data.records) {
    std::size_t wins = 0;
    for (auto y : rec.outcomes) wins += y;
    p.set_pair(rec.i, rec.j, static_cast<double>(wins) / static_cast<double>(rec.outcomes.size()));
  }
  return p;
}

double default_clamp(std::size_t comparisons_per_pair) {
  if (comparisons_per_pair == 0) return 1e-6;
  return std::min(1e-6, 1.0 / (4.0 * static_cast<double>(comparisons_per_pair)));
}

LogitMatrix link_transform(const PreferenceMatrix& p, const LinkFunction& link, double clamp) {
  if (!(clamp > 0.0 && clamp < 0.5)) throw ValidationError("clamp must lie in (0, 0.5)");
  const std::size_t n = p.n();
  LogitMatrix out{DenseMatrix(n, n), p.mask(), link.id()};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!p.observed(i, j)) continue;
      const double a = link.forward(std::clamp(p(i, j), clamp, 1.0 - clamp));
      const double b = link.forward(std::clamp(p(j, i), clamp, 1.0 - clamp));
      const double v = 0.5 * (a - b);
      out.values(i, j) = v;
      out.values(j, i) = -v;
    }
  }
  return out;
}

PreferenceMatrix inverse_link(const LogitMatrix& m, const LinkFunction& link) {
  const std::size_t n = m.n();
  PreferenceMatrix out(DenseMatrix(n, n, 0.5), m.mask);
  for (std::size_t i = 0; i < n; ++i) {
    out.set_pair(i, i, 0.5);
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!m.mask(i, j)) continue;
      const double a = link.inverse(m.values(i, j));
      const double b = link.inverse(m.values(j, i));
      out.set_pair(i, j, 0.5 * (a + (1.0 - b)));
    }
  }
  return out;
}

IncoherenceReport incoherence_and_bound(const LogitMatrix& m, std::size_t r) {
  if (!m.mask.all()) throw ValidationError("incoherence needs a fully observed matrix");
  if (r == 0) throw ValidationError("rank must be positive");
  m.validate();
  const std::size_t n = m.n();
  IncoherenceReport report;
  report.delta = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) report.delta = std::min(report.delta, std::fabs(m.values(i, j)));
    }
  }
  const SvdResult svd = dense_svd(m.values);
  const double top = svd.singular_values.empty() ? 0.0 : svd.singular_values[0];
  std::size_t rank = 0;
  for (double s : svd.singular_values) rank += (top > 0.0 && s > 1e-10 * top) ? 1 : 0;
  report.achieved_rank = rank;
  const std::size_t used = std::min(r, rank);
  if (used == 0) {
    report.mu = std::numeric_limits<double>::quiet_NaN();
    report.max_corruption_degree = 0;
    return report;
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double left = 0.0;
    double right = 0.0;
    for (std::size_t c = 0; c < used; ++c) {
      left += svd.left(c, i) * svd.left(c, i);
      right += svd.right(c, i) * svd.right(c, i);
    }
    worst = std::max({worst, left, right});
  }
  report.mu = std::sqrt(worst * static_cast<double>(n) / static_cast<double>(used));
  report.max_corruption_degree = static_cast<std::size_t>(
      std::floor(static_cast<double>(n) / (512.0 * report.mu * report.mu * static_cast<double>(r))));
  return report;
}

double btl_incoherence(const std::vector<double>& w) {
  if (w.size() < 2) throw ValidationError("btl_incoherence needs at least two items");
  double mean = 0.0;
  for (double v : w) mean += v;
  mean /= static_cast<double>(w.size());
  const auto [lo, hi] = std::minmax_element(w.begin(), w.end());
  const double below = *lo - mean;
  const double above = *hi - mean;
  if (below == 0.0) return std::numeric_limits<double>::infinity();
  const double n = static_cast<double>(w.size());
  return std::sqrt(n / 2.0) * std::sqrt(1.0 + (above * above) / (below * below));
}

}  // namespace prefrepair
