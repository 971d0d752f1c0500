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


#include "protocols.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>

#include "prefrepair/error.hpp"
#include "prefrepair/metrics.hpp"
#include "prefrepair/ranking.hpp"

namespace prefrepair::cli {

void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::max<std::size_t>(1, std::min(threads, count));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = next++; i < count; i = next++) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

PipelineKind parse_pipeline(const std::string& name) {
  if (name == "roratron") return PipelineKind::kRoratron;
  if (name == "coratron") return PipelineKind::kCoratron;
  if (name == "curatron") return PipelineKind::kCuratron;
  throw ValidationError("unknown pipeline '" + name + "' (roratron, coratron, curatron)");
}

PipelineResult run_pipeline(PipelineKind kind, const PreferenceMatrix& p, const PipelineOptions& o) {
  switch (kind) {
    case PipelineKind::kRoratron: return roratron(p, o);
    case PipelineKind::kCoratron: return coratron(p, o);
    case PipelineKind::kCuratron: break;
  }
  return curatron(p, o);
}

SparseCorruption detected_support(const RecoveryReport& report, std::size_t n) {
  SparseCorruption out;
  out.n = n;
  out.space = report.s_hat.space;
  for (const auto& e : report.s_hat.entries) {
    if (e.i < n && e.j < n) out.entries.push_back(e);
  }
  return out;
}

namespace {

bool converged_of(const PipelineResult& r) {
  bool ok = true;
  if (r.report) ok = ok && r.report->converged;
  if (r.completion) ok = ok && r.completion->converged;
  return ok;
}

std::string flat_message(const std::exception& e) {
  std::string m = std::string("error: ") + e.what();
  std::replace(m.begin(), m.end(), ',', ';');
  std::replace(m.begin(), m.end(), '\n', ' ');
  return m;
}

}  // namespace

GridInstance grid_instance(const GridSettings& s, double dp, double ap, std::size_t run) {
  Rng weights(s.weight_seed_base + run);
  BTLParams params;
  for (std::size_t i = 0; i < s.n; ++i) params.w.push_back(uniform01(weights));
  GridInstance out;
  out.truth = btl_preference(params);
  Rng adversary(s.corruption_seed);
  const PreferenceMatrix thinned = delete_entries(out.truth, dp, adversary);
  auto [corrupted, truth] = probability_corruption(thinned, ap, s.value_range, adversary);
  out.observed = std::move(corrupted);
  out.corruption = std::move(truth);
  return out;
}

std::vector<GridRow> run_grid(const GridSettings& s, std::size_t threads, bool keep_matrices) {
  for (const auto& arm : s.arms) {
    if (arm != "plain" && arm != "augmented") throw ValidationError("unknown arm '" + arm + "'");
    if (arm == "augmented" && s.options.augment_k == 0) {
      throw ValidationError("the augmented arm needs recover.augment_k > 0");
    }
  }
  std::vector<GridRow> rows;
  for (const auto& arm : s.arms) {
    for (double dp : s.dp_values) {
      for (double ap : s.ap_values) {
        for (std::size_t r = 0; r < s.runs; ++r) {
          GridRow row;
          row.arm = arm;
          row.dp = dp;
          row.ap = ap;
          row.run = r;
          rows.push_back(std::move(row));
        }
      }
    }
  }
  parallel_for(rows.size(), threads, [&](std::size_t idx) {
    GridRow& row = rows[idx];
    try {
      const GridInstance inst = grid_instance(s, row.dp, row.ap, row.run);
      PipelineOptions o = s.options;
      if (row.arm == "plain") o.augment_k = 0;
      const PipelineResult res = run_pipeline(s.pipeline, inst.observed, o);
      row.nfe = nfe(inst.truth, res.recovered);
      row.corr = correlation(inst.truth, res.recovered);
      row.dist = ranking_distance(res.ranking, inst.truth);
      if (res.report) {
        const auto scores = support_scores(detected_support(*res.report, s.n), inst.corruption);
        row.precision = scores.precision;
        row.recall = scores.recall;
      }
      row.converged = converged_of(res);
      if (keep_matrices) row.recovered = res.recovered;
    } catch (const std::exception& e) {
      row.status = flat_message(e);
    }
  });
  return rows;
}

std::vector<BaselineRow> run_baselines(const BaselineSettings& s, std::size_t threads) {
  struct Task {
    std::string sweep;
    double value;
    std::size_t run;
  };
  std::vector<Task> tasks;
  for (const auto& sweep : s.sweeps) {
    if (sweep != "d" && sweep != "nu") throw ValidationError("unknown sweep '" + sweep + "' (d, nu)");
    for (double v : sweep == "d" ? s.d_values : s.nu_values) {
      for (std::size_t r = 0; r < s.runs; ++r) tasks.push_back({sweep, v, r});
    }
  }
  const auto& methods = baseline_methods();
  std::vector<BaselineRow> rows(tasks.size() * methods.size());
  parallel_for(tasks.size(), threads, [&](std::size_t t) {
    const Task& task = tasks[t];
    for (std::size_t m = 0; m < methods.size(); ++m) {
      BaselineRow& row = rows[t * methods.size() + m];
      row.sweep = task.sweep;
      row.value = task.value;
      row.run = task.run;
      row.method = methods[m];
    }
    try {
      const double nu = task.sweep == "nu" ? task.value : s.nu;
      const double d = task.sweep == "d" ? task.value : s.d;
      // One instance stream per run, shared by every point of a sweep.
      Rng rng(derive_seed(s.seed, task.run));
      BTLParams params;
      for (std::size_t i = 0; i < s.n; ++i) params.w.push_back(nu * standard_normal(rng));
      const PreferenceMatrix truth = btl_preference(params);
      PreferenceMatrix base = truth;
      double clamp = s.options.clamp;
      if (s.comparisons > 0) {
        base = empirical_matrix(sample_comparisons(truth, s.comparisons, rng));
        clamp = default_clamp(s.comparisons);
      }
      const SparseCorruption corruption =
          random_logit_corruption(s.n, d / static_cast<double>(s.n), s.magnitude, rng);
      const LogitMatrix m =
          apply_corruption(link_transform(base, LinkFunction::from_id(s.options.link), clamp), corruption);
      const PreferenceMatrix attacked = inverse_link(m, LinkFunction::from_id(s.options.link));
      PipelineOptions o = s.options;
      o.clamp = clamp;
      const Ranking rankings[] = {roratron(attacked, o).ranking, btl_mle(attacked).ranking,
                                  rank_centrality(attacked).ranking, borda(attacked).ranking};
      for (std::size_t m2 = 0; m2 < methods.size(); ++m2) {
        rows[t * methods.size() + m2].dist = ranking_distance(rankings[m2], truth);
      }
    } catch (const std::exception& e) {
      for (std::size_t m2 = 0; m2 < methods.size(); ++m2) rows[t * methods.size() + m2].status = flat_message(e);
    }
  });
  return rows;
}

std::vector<InjectionRow> run_injection(const InjectionSettings& s, std::size_t threads) {
  s.scenario.validate();
  std::vector<InjectionRow> rows(s.runs);
  parallel_for(s.runs, threads, [&](std::size_t r) {
    InjectionRow& row = rows[r];
    row.run = r;
    try {
      Rng catalog_rng(derive_seed(s.catalog_seed, r));
      const ResponseCatalog incumbents = synthetic_catalog(s.incumbents, catalog_rng);
      const PreferenceMatrix clean = scores_to_matrix(incumbents);
      Rng rng(derive_seed(s.seed, r));
      const InjectionResult inj = inject_responses(clean, s.scenario, rng);
      const HealthCheck health = health_check(inj.matrix, s.options.solver, s.tau_rel, s.options.link, s.options.clamp);
      row.effective_rank = health.effective_rank;
      row.flagged = health.flagged;

      const PipelineResult res = roratron(inj.matrix, s.options);
      row.converged = res.report && res.report->converged;
      const std::size_t top = std::min(s.top, res.ranking.n());
      row.top.assign(res.ranking.order.begin(), res.ranking.order.begin() + static_cast<std::ptrdiff_t>(top));
      for (std::size_t item : row.top) {
        if (std::find(inj.injected.begin(), inj.injected.end(), item) != inj.injected.end()) ++row.injected_in_top;
      }

      const ResponseCatalog catalog = with_injected(incumbents, inj.injected.size());
      Rng export_rng(derive_seed(s.seed ^ 0x6578706f7274ULL, r));
      row.exported = sample_pairs(res.recovered, res.ranking, catalog, s.strategy, export_rng);
      row.records = row.exported.size();
      for (const auto& rec : row.exported) {
        for (std::size_t m : inj.injected) {
          if (rec.chosen == catalog.responses[m].text) ++row.injected_chosen;
        }
      }
    } catch (const std::exception& e) {
      row.status = flat_message(e);
    }
  });
  return rows;
}

}  // namespace prefrepair::cli
