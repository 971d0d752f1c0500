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

#include <algorithm>

#include "prefrepair/error.hpp"
#include "prefrepair/recovery.hpp"

namespace prefrepair {
namespace {

enum class Stages { kRobust, kComplete, kCompleteRobust };

double dataset_clamp(const ComparisonDataset& data, double fallback) {
  std::size_t k = 0;
  for (const auto& rec : data.records) k = std::max(k, rec.outcomes.size());
  return k == 0 ? fallback : default_clamp(k);
}

PipelineResult run(const PreferenceMatrix& p_hat, const PipelineOptions& options, Stages stages) {
  options.solver.validate();
  p_hat.validate(1e-9);
  const std::size_t n = p_hat.n();
  if (n < 2) throw ValidationError("need at least two items");
  if (stages == Stages::kRobust && !p_hat.fully_observed()) {
    throw ValidationError("robust recovery needs a fully observed matrix; use completion first");
  }
  const PreferenceMatrix working =
      options.augment_k > 0
          ? augment(p_hat, options.augment_k, options.augment_upper, options.augment_lower)
          : p_hat;
  const LinkFunction link = LinkFunction::from_id(options.link);
  LogitMatrix m = link_transform(working, link, options.clamp);

  PipelineResult result;
  if (stages != Stages::kRobust) {
    CompletionResult done = complete(m, options.solver);
    m = done.completed;
    result.completion = std::move(done);
  }
  if (stages != Stages::kComplete) {
    RecoveryReport report = rpca(m, options.solver);
    m = report.l_hat;
    // Sparse mass on imputed cells corrects the completion, not a comparison.
    if (!working.fully_observed()) {
      auto& entries = report.s_hat.entries;
      std::erase_if(entries, [&](const CorruptionEntry& e) { return !working.observed(e.i, e.j); });
      std::erase_if(report.detected_pairs,
                    [&](const auto& pr) { return !working.observed(pr.first, pr.second); });
    }
    result.report = std::move(report);
  }
  PreferenceMatrix recovered = inverse_link(m, link);
  result.recovered = options.augment_k > 0 ? crop(recovered, n) : std::move(recovered);
  result.ranking = copeland(result.recovered);
  return result;
}

}  // namespace

PipelineResult roratron(const PreferenceMatrix& p_hat, const PipelineOptions& options) {
  return run(p_hat, options, Stages::kRobust);
}

PipelineResult roratron(const ComparisonDataset& data, const PipelineOptions& options) {
  PipelineOptions opts = options;
  opts.clamp = dataset_clamp(data, options.clamp);
  return roratron(empirical_matrix(data), opts);
}

PipelineResult coratron(const PreferenceMatrix& p_hat, const PipelineOptions& options) {
  return run(p_hat, options, Stages::kComplete);
}

PipelineResult coratron(const ComparisonDataset& data, const PipelineOptions& options) {
  PipelineOptions opts = options;
  opts.clamp = dataset_clamp(data, options.clamp);
  return coratron(empirical_matrix(data), opts);
}

PipelineResult curatron(const PreferenceMatrix& p_hat, const PipelineOptions& options) {
  return run(p_hat, options, Stages::kCompleteRobust);
}

PipelineResult curatron(const ComparisonDataset& data, const PipelineOptions& options) {
  PipelineOptions opts = options;
  opts.clamp = dataset_clamp(data, options.clamp);
  return curatron(empirical_matrix(data), opts);
}

PreferenceMatrix augment(const PreferenceMatrix& p, std::size_t k, double upper, double lower) {
  if (k == 0) return p;
  if (!(upper > 0.0 && upper < 1.0 && lower > 0.0 && lower < 1.0)) {
    throw ValidationError("augmentation bounds must lie in (0, 1)");
  }
  const std::size_t n = p.n();
  const std::size_t total = n + k;
  DenseMatrix values(total, total, 0.5);
  Mask mask(total, true);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      values(i, j) = p(i, j);
      mask.set(i, j, p.observed(i, j));
    }
    for (std::size_t j = n; j < total; ++j) {
      values(i, j) = upper;
      values(j, i) = lower;
    }
  }
  return PreferenceMatrix(std::move(values), std::move(mask));
}

PreferenceMatrix crop(const PreferenceMatrix& p, std::size_t n) {
  if (n > p.n()) throw ValidationError("crop size exceeds matrix size");
  DenseMatrix values(n, n);
  Mask mask(n, true);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      values(i, j) = p(i, j);
      mask.set(i, j, p.observed(i, j));
    }
  }
  return PreferenceMatrix(std::move(values), std::move(mask));
}

HealthCheck health_check(const PreferenceMatrix& p, const SolverParams& params, double tau_rel,
                         LinkId link, double clamp) {
  params.validate();
  if (!(tau_rel > 0.0 && tau_rel < 1.0)) throw ValidationError("tau_rel must lie in (0, 1)");
  const LogitMatrix m = link_transform(p, LinkFunction::from_id(link), clamp);
  HealthCheck out;
  out.spectrum = singular_values(m.values);
  const double top = out.spectrum.empty() ? 0.0 : out.spectrum.front();
  for (double s : out.spectrum) {
    if (top > 0.0 && s > tau_rel * top) ++out.effective_rank;
  }
  out.flagged = out.effective_rank > params.target_rank;
  return out;
}

}  // namespace prefrepair
