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


#include "commands.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <tuple>

#include <CLI11.hpp>
#include <json.hpp>

#include "config.hpp"
#include "prefrepair/error.hpp"
#include "prefrepair/metrics.hpp"
#include "prefrepair/ranking.hpp"
#include "protocols.hpp"

namespace prefrepair::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Context {
  Config config;
  RunSettings run;

  fs::path out(const std::string& name) const { return run.out_dir / name; }
  // Relative input paths are looked up in the output directory.
  fs::path in(const std::string& section, const std::string& key, const std::string& fallback) const {
    const fs::path p = config.text(section, key, fallback);
    return p.is_absolute() ? p : run.out_dir / p;
  }
};

// Shortest text that reads back to the same double.
std::string num(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_text(const fs::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError(path.string() + ": cannot open for writing");
  out << body;
}

void write_json(const fs::path& path, const json& doc) { write_text(path, doc.dump(2) + "\n"); }

std::pair<double, double> range_of(const Config& c, const std::string& section, const std::string& lo,
                                   const std::string& hi, std::pair<double, double> fallback) {
  return {c.real(section, lo, fallback.first), c.real(section, hi, fallback.second)};
}

InjectionScenario injection_scenario(const Config& c) {
  InjectionScenario s;
  s.k_injected = c.count("injection", "k_injected", s.k_injected);
  s.p1 = c.real("injection", "p1", s.p1);
  s.p2 = c.real("injection", "p2", s.p2);
  s.p3 = c.real("injection", "p3", s.p3);
  s.s1_range = range_of(c, "injection", "s1_lo", "s1_hi", s.s1_range);
  s.s2_range = range_of(c, "injection", "s2_lo", "s2_hi", s.s2_range);
  s.validate();
  return s;
}

json corruption_summary(const std::vector<std::size_t>& injected) { return json{{"injected", injected}}; }

// ---------------------------------------------------------------------------

int cmd_simulate(const Context& ctx) {
  const Config& c = ctx.config;
  const std::string source = c.text("simulate", "source", "btl");
  const std::size_t n = c.count("simulate", "n", 500);
  if (source == "catalog") {
    Rng rng(c.seed("simulate", "catalog_seed", ctx.run.seed));
    const ResponseCatalog catalog = synthetic_catalog(n, rng);
    save_catalog(ctx.out("catalog.json"), catalog);
    save_matrix_csv(ctx.out("truth.csv"), scores_to_matrix(catalog));
    return kExitOk;
  }
  if (source != "btl") throw ValidationError("simulate.source must be btl or catalog");
  const double nu = c.real("simulate", "nu", 2.0);
  if (!(nu >= 0.0)) throw ValidationError("simulate.nu must be non-negative");
  const std::string dist = c.text("simulate", "distribution", "normal");
  Rng rng(ctx.run.seed);
  BTLParams params;
  for (std::size_t i = 0; i < n; ++i) {
    if (dist == "normal") {
      params.w.push_back(nu * standard_normal(rng));
    } else if (dist == "uniform") {
      params.w.push_back(nu * uniform01(rng));
    } else {
      throw ValidationError("simulate.distribution must be normal or uniform");
    }
  }
  const PreferenceMatrix truth = btl_preference(params);
  save_btl_params(ctx.out("params.json"), params);
  save_matrix_csv(ctx.out("truth.csv"), truth);
  const std::size_t k = c.count("simulate", "comparisons", 0);
  if (k > 0) {
    const ComparisonDataset data = sample_comparisons(truth, k, rng);
    save_dataset(ctx.out("dataset.jsonl"), data);
    save_matrix_csv(ctx.out("empirical.csv"), empirical_matrix(data));
  }
  return kExitOk;
}

int cmd_corrupt(const Context& ctx) {
  const Config& c = ctx.config;
  const PreferenceMatrix input = load_matrix_csv(ctx.in("corrupt", "input", "truth.csv"));
  const std::string kind = c.text("corrupt", "kind", "probability");
  const double dp = c.real("corrupt", "dp", 0.0);
  Rng rng(ctx.run.seed);

  if (kind == "injection") {
    if (dp != 0.0) throw ValidationError("corrupt.dp must be 0 for injection");
    const InjectionResult inj = inject_responses(input, injection_scenario(c), rng);
    save_matrix_csv(ctx.out("corrupted.csv"), inj.matrix);
    write_json(ctx.out("injected.json"), corruption_summary(inj.injected));
    if (c.has("corrupt", "catalog")) {
      const ResponseCatalog catalog = load_catalog(ctx.in("corrupt", "catalog", "catalog.json"));
      if (catalog.size() != input.n()) throw ValidationError("catalog size differs from the matrix");
      save_catalog(ctx.out("catalog_injected.json"), with_injected(catalog, inj.injected.size()));
    }
    return kExitOk;
  }

  const PreferenceMatrix thinned = delete_entries(input, dp, rng);
  PreferenceMatrix attacked = thinned;
  SparseCorruption truth;
  truth.n = input.n();
  if (kind == "probability") {
    const double ap = c.real("corrupt", "ap", 0.0);
    std::tie(attacked, truth) =
        probability_corruption(thinned, ap, range_of(c, "corrupt", "value_lo", "value_hi", {0.269, 0.731}), rng);
  } else if (kind == "random-logit" || kind == "bounded-degree") {
    const auto magnitude = range_of(c, "corrupt", "magnitude_lo", "magnitude_hi", {5.0, 10.0});
    truth = kind == "random-logit"
                ? random_logit_corruption(input.n(), c.real("corrupt", "density", 0.1), magnitude, rng)
                : bounded_degree_logit_corruption(input.n(), c.count("corrupt", "degree", 1), magnitude, rng);
    const double clamp = c.real("corrupt", "clamp", 1e-6);
    const LinkFunction link = LinkFunction::logit();
    attacked = inverse_link(apply_corruption(link_transform(thinned, link, clamp), truth), link);
  } else if (kind == "flip") {
    const std::size_t degree = c.count("corrupt", "degree", 0);
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    if (degree == 0) {
      for (std::size_t i = 0; i < input.n(); ++i) {
        for (std::size_t j = i + 1; j < input.n(); ++j) pairs.emplace_back(i, j);
      }
    } else {
      pairs = bounded_degree_pairs(input.n(), degree, rng);
    }
    attacked = flip_adversary(thinned, pairs);
    truth.space = CorruptionSpace::kProbability;
    for (const auto& [i, j] : pairs) {
      if (thinned.observed(i, j)) truth.entries.push_back({i, j, attacked(i, j) - thinned(i, j)});
    }
  } else if (kind != "none") {
    throw ValidationError("corrupt.kind must be none, probability, random-logit, bounded-degree, flip or injection");
  }
  save_matrix_csv(ctx.out("corrupted.csv"), attacked);
  save_corruption(ctx.out("corruption.jsonl"), truth);
  return kExitOk;
}

int cmd_recover(const Context& ctx) {
  const Config& c = ctx.config;
  const PreferenceMatrix input = load_matrix_csv(ctx.in("recover", "input", "corrupted.csv"));
  const PipelineKind kind = parse_pipeline(c.text("recover", "pipeline", "curatron"));
  const PipelineResult res = run_pipeline(kind, input, pipeline_options(c));
  save_matrix_csv(ctx.out("recovered.csv"), res.recovered);
  save_ranking(ctx.out("ranking.json"), res.ranking);
  json summary{{"pipeline", c.text("recover", "pipeline", "curatron")}};
  bool converged = true;
  if (res.report) {
    save_report(ctx.out("report.json"), *res.report);
    summary["rpca_converged"] = res.report->converged;
    summary["rpca_iterations"] = res.report->iterations_used;
    summary["detected_pairs"] = res.report->detected_pairs.size();
    converged = converged && res.report->converged;
  }
  if (res.completion) {
    summary["completion_converged"] = res.completion->converged;
    summary["completion_iterations"] = res.completion->iterations;
    summary["completion_observed_residual"] = res.completion->observed_residual;
    converged = converged && res.completion->converged;
  }
  summary["converged"] = converged;
  write_json(ctx.out("recover.json"), summary);
  if (!converged) {
    std::cerr << "prefrepair: solver did not converge; outputs written anyway\n";
    return kExitNotConverged;
  }
  return kExitOk;
}

int cmd_rank(const Context& ctx) {
  const PreferenceMatrix p = load_matrix_csv(ctx.in("rank", "input", "recovered.csv"));
  const std::string method = ctx.config.text("rank", "method", "copeland");
  Ranking r;
  if (method == "copeland") {
    r = copeland(p);
  } else if (method == "borda") {
    r = borda(p).ranking;
  } else if (method == "rank-centrality") {
    r = rank_centrality(p).ranking;
  } else if (method == "btl-mle") {
    r = btl_mle(p).ranking;
  } else {
    throw ValidationError("rank.method must be copeland, borda, rank-centrality or btl-mle");
  }
  save_ranking(ctx.out("ranking_" + method + ".json"), r);
  return kExitOk;
}

int cmd_metrics(const Context& ctx) {
  const PreferenceMatrix truth = load_matrix_csv(ctx.in("metrics", "truth", "truth.csv"));
  const PreferenceMatrix estimate = load_matrix_csv(ctx.in("metrics", "estimate", "recovered.csv"));
  json doc;
  doc["nfe"] = nfe(truth, estimate);
  const auto corr = correlation(truth, estimate);
  doc["corr"] = corr ? json(*corr) : json(nullptr);
  doc["disagreement"] = matrix_disagreement(truth, estimate);
  const fs::path ranking = ctx.in("metrics", "ranking", "ranking.json");
  if (fs::exists(ranking)) doc["dist"] = ranking_distance(load_ranking(ranking), truth);
  const fs::path corruption = ctx.in("metrics", "corruption", "corruption.jsonl");
  const fs::path report = ctx.in("metrics", "report", "report.json");
  if (fs::exists(corruption) && fs::exists(report)) {
    const SparseCorruption real = load_corruption(corruption);
    const auto scores = support_scores(detected_support(load_report(report), real.n), real);
    doc["precision"] = scores.precision;
    doc["recall"] = scores.recall;
  }
  write_json(ctx.out("metrics.json"), doc);
  return kExitOk;
}

int cmd_health(const Context& ctx) {
  const Config& c = ctx.config;
  const PreferenceMatrix p = load_matrix_csv(ctx.in("health", "input", "corrupted.csv"));
  const HealthCheck h = health_check(p, solver_params(c), c.real("health", "tau_rel", 1e-3),
                                     parse_link(c.text("recover", "link", "logit")),
                                     c.real("health", "clamp", 1e-6));
  write_json(ctx.out("health.json"),
             json{{"effective_rank", h.effective_rank}, {"flagged", h.flagged}, {"spectrum", h.spectrum}});
  std::cout << (h.flagged ? "flagged" : "clean") << " effective_rank=" << h.effective_rank << "\n";
  return kExitOk;
}

int cmd_export(const Context& ctx) {
  const Config& c = ctx.config;
  const PreferenceMatrix p = load_matrix_csv(ctx.in("export", "matrix", "recovered.csv"));
  const fs::path ranking_path = ctx.in("export", "ranking", "ranking.json");
  const Ranking ranking = fs::exists(ranking_path) ? load_ranking(ranking_path) : copeland(p);
  const ResponseCatalog catalog = load_catalog(ctx.in("export", "catalog", "catalog.json"));
  const ExportStrategy strategy = parse_export_strategy(c.text("export", "strategy", "top-groups"));
  Rng rng(derive_seed(ctx.run.seed ^ 0x6578706f7274ULL, 0));
  save_export(ctx.out("export.jsonl"), sample_pairs(p, ranking, catalog, strategy, rng));
  return kExitOk;
}

// ---------------------------------------------------------------------------

template <class Row, class Key>
std::string summary_csv(const std::vector<Row>& rows, const std::string& head, Key key,
                        const std::vector<std::pair<std::string, std::function<std::optional<double>(const Row&)>>>& metrics) {
  std::map<decltype(key(rows.front())), std::vector<const Row*>> cells;
  for (const auto& r : rows) cells[key(r)].push_back(&r);
  std::string out = head + ",metric,mean,stderr,count,failed\n";
  for (const auto& [k, members] : cells) {
    for (const auto& [name, get] : metrics) {
      std::vector<double> values;
      std::size_t failed = 0;
      for (const Row* r : members) {
        const auto v = r->status == "ok" ? get(*r) : std::nullopt;
        if (v) {
          values.push_back(*v);
        } else {
          ++failed;
        }
      }
      const MeanStderr m = mean_stderr(values);
      out += members.front()->summary_key() + "," + name + "," + (values.empty() ? "" : num(m.mean)) + "," +
             (values.empty() ? "" : num(m.stderr_of_mean)) + "," + std::to_string(values.size()) + "," +
             std::to_string(failed) + "\n";
    }
  }
  return out;
}

int experiment_grid(const Context& ctx) {
  const Config& c = ctx.config;
  GridSettings s;
  s.n = c.count("experiment", "n", s.n);
  const std::vector<double> grid{0, 0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5};
  s.dp_values = c.reals("experiment", "dp_values", grid);
  s.ap_values = c.reals("experiment", "ap_values", grid);
  s.runs = c.count("experiment", "runs", s.runs);
  s.weight_seed_base = c.seed("experiment", "weight_seed_base", s.weight_seed_base);
  s.corruption_seed = ctx.run.seed;
  s.value_range = range_of(c, "experiment", "value_lo", "value_hi", s.value_range);
  s.pipeline = parse_pipeline(c.text("experiment", "pipeline", "curatron"));
  s.arms = c.words("experiment", "arms", s.arms);
  s.options = pipeline_options(c);
  const bool save = c.flag("experiment", "save_matrices", false);

  const auto rows = run_grid(s, ctx.run.threads, save);
  std::string csv = "arm,dp,ap,run,nfe,corr,dist,precision,recall,converged,status\n";
  for (const auto& r : rows) {
    const bool ok = r.status == "ok";
    csv += r.arm + "," + num(r.dp) + "," + num(r.ap) + "," + std::to_string(r.run) + "," +
           (ok ? num(r.nfe) : "") + "," + (ok && r.corr ? num(*r.corr) : "") + "," + (ok ? num(r.dist) : "") +
           "," + (ok ? num(r.precision) : "") + "," + (ok ? num(r.recall) : "") + "," +
           (r.converged ? "1" : "0") + "," + r.status + "\n";
  }
  write_text(ctx.out("results.csv"), csv);

  struct Keyed {
    const GridRow* row;
    std::string status;
    std::string summary_key() const { return row->arm + "," + num(row->dp) + "," + num(row->ap); }
  };
  std::vector<Keyed> keyed;
  for (const auto& r : rows) keyed.push_back({&r, r.status});
  using Getter = std::function<std::optional<double>(const Keyed&)>;
  const std::vector<std::pair<std::string, Getter>> metrics{
      {"nfe", [](const Keyed& k) { return std::optional<double>(k.row->nfe); }},
      {"corr", [](const Keyed& k) { return k.row->corr; }},
      {"dist", [](const Keyed& k) { return std::optional<double>(k.row->dist); }},
      {"precision", [](const Keyed& k) { return std::optional<double>(k.row->precision); }},
      {"recall", [](const Keyed& k) { return std::optional<double>(k.row->recall); }},
  };
  const auto key = [](const Keyed& k) { return std::make_tuple(k.row->arm, k.row->dp, k.row->ap); };
  write_text(ctx.out("summary.csv"), summary_csv(keyed, "arm,dp,ap", key, metrics));

  if (save) {
    const fs::path dir = ctx.out("matrices");
    fs::create_directories(dir);
    for (const auto& r : rows) {
      if (r.run != 0 || r.status != "ok") continue;
      const std::string stem = r.arm + "_dp" + num(r.dp) + "_ap" + num(r.ap);
      const GridInstance inst = grid_instance(s, r.dp, r.ap, 0);
      save_matrix_csv(dir / (stem + "_truth.csv"), inst.truth);
      save_matrix_csv(dir / (stem + "_observed.csv"), inst.observed);
      save_matrix_csv(dir / (stem + "_recovered.csv"), *r.recovered);
    }
  }
  return kExitOk;
}

int experiment_injection(const Context& ctx) {
  const Config& c = ctx.config;
  InjectionSettings s;
  s.incumbents = c.count("injection", "incumbents", s.incumbents);
  s.catalog_seed = c.seed("injection", "catalog_seed", s.catalog_seed);
  s.runs = c.count("injection", "runs", s.runs);
  s.top = c.count("injection", "top", s.top);
  s.tau_rel = c.real("injection", "tau_rel", s.tau_rel);
  s.strategy = parse_export_strategy(c.text("injection", "strategy", "top-groups"));
  s.scenario = injection_scenario(c);
  s.seed = ctx.run.seed;
  s.options = pipeline_options(c);

  const auto rows = run_injection(s, ctx.run.threads);
  std::string csv = "run,effective_rank,flagged,converged,top,injected_in_top,records,injected_chosen,status\n";
  for (const auto& r : rows) {
    std::string top;
    for (std::size_t t = 0; t < r.top.size(); ++t) top += (t ? ";" : "") + std::to_string(r.top[t]);
    csv += std::to_string(r.run) + "," + std::to_string(r.effective_rank) + "," + (r.flagged ? "1" : "0") + "," +
           (r.converged ? "1" : "0") + "," + top + "," + std::to_string(r.injected_in_top) + "," +
           std::to_string(r.records) + "," + std::to_string(r.injected_chosen) + "," + r.status + "\n";
    if (r.status == "ok") save_export(ctx.out("export_run" + std::to_string(r.run) + ".jsonl"), r.exported);
  }
  write_text(ctx.out("injection.csv"), csv);
  return kExitOk;
}

int cmd_experiment(const Context& ctx) {
  const std::string protocol = ctx.config.text("experiment", "protocol", "grid");
  if (protocol == "grid") return experiment_grid(ctx);
  if (protocol == "injection") return experiment_injection(ctx);
  throw ValidationError("experiment.protocol must be grid or injection");
}

int cmd_baselines(const Context& ctx) {
  const Config& c = ctx.config;
  BaselineSettings s;
  s.n = c.count("baselines", "n", s.n);
  s.nu = c.real("baselines", "nu", s.nu);
  s.d = c.real("baselines", "d", s.d);
  s.d_values = c.reals("baselines", "d_values", s.d_values);
  s.nu_values = c.reals("baselines", "nu_values", s.nu_values);
  s.sweeps = c.words("baselines", "sweeps", s.sweeps);
  s.runs = c.count("baselines", "runs", s.runs);
  s.magnitude = range_of(c, "baselines", "magnitude_lo", "magnitude_hi", s.magnitude);
  s.comparisons = c.count("baselines", "comparisons", s.comparisons);
  s.seed = ctx.run.seed;
  s.options = pipeline_options(c);
  if (!c.has("recover", "clamp") && s.comparisons == 0) s.options.clamp = 1e-15;

  const auto rows = run_baselines(s, ctx.run.threads);
  std::string csv = "sweep,value,run,method,dist,status\n";
  for (const auto& r : rows) {
    csv += r.sweep + "," + num(r.value) + "," + std::to_string(r.run) + "," + r.method + "," +
           (r.status == "ok" ? num(r.dist) : "") + "," + r.status + "\n";
  }
  write_text(ctx.out("baselines.csv"), csv);

  struct Keyed {
    const BaselineRow* row;
    std::string status;
    std::string summary_key() const { return row->sweep + "," + num(row->value) + "," + row->method; }
  };
  std::vector<Keyed> keyed;
  for (const auto& r : rows) keyed.push_back({&r, r.status});
  std::map<std::string, std::size_t> method_order;
  for (std::size_t m = 0; m < baseline_methods().size(); ++m) method_order[baseline_methods()[m]] = m;
  const auto key = [&](const Keyed& k) {
    return std::make_tuple(k.row->sweep, k.row->value, method_order.at(k.row->method));
  };
  using Getter = std::function<std::optional<double>(const Keyed&)>;
  const std::vector<std::pair<std::string, Getter>> metrics{
      {"dist", [](const Keyed& k) { return std::optional<double>(k.row->dist); }}};
  write_text(ctx.out("baselines_summary.csv"), summary_csv(keyed, "sweep,value,method", key, metrics));
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"Preference-matrix repair: recovery, ranking and experiment grids"};
  app.require_subcommand(1);
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<std::size_t> threads;
  std::vector<std::string> overrides;
  app.add_option("--config", config_path, "INI configuration file")->check(CLI::ExistingFile);
  app.add_option("--seed", seed, "master seed (overrides run.seed)");
  app.add_option("--out-dir", out_dir, "output directory (overrides run.out_dir)");
  app.add_option("--threads", threads, "worker threads for grids (overrides run.threads)");
  app.add_option("--set", overrides, "config override section.key=value (repeatable)");

  using Handler = int (*)(const Context&);
  const std::vector<std::tuple<std::string, std::string, Handler>> commands{
      {"simulate", "draw a BTL instance or a synthetic response catalog", cmd_simulate},
      {"corrupt", "delete, corrupt or inject into a preference matrix", cmd_corrupt},
      {"recover", "run a recovery pipeline and rank the result", cmd_recover},
      {"rank", "rank a matrix with a single method", cmd_rank},
      {"metrics", "compare an estimate against the ground truth", cmd_metrics},
      {"experiment", "dp x ap grid or injection protocol", cmd_experiment},
      {"baselines", "compare recovery against classical rankers", cmd_baselines},
      {"export", "emit chosen/rejected pairs", cmd_export},
      {"health-check", "estimate the effective rank of the link-transformed matrix", cmd_health},
  };
  Handler chosen = nullptr;
  for (const auto& [name, help, handler] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->fallthrough();
    sub->callback([&chosen, h = handler] { chosen = h; });
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend() - 1);
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    Context ctx;
    if (!config_path.empty()) ctx.config = Config::load(config_path);
    for (const auto& o : overrides) ctx.config.set(o);
    if (seed) ctx.config.set("run", "seed", std::to_string(*seed));
    if (out_dir) ctx.config.set("run", "out_dir", *out_dir);
    if (threads) ctx.config.set("run", "threads", std::to_string(*threads));
    ctx.config.check_known();
    ctx.run = run_settings(ctx.config);
    fs::create_directories(ctx.run.out_dir);
    return chosen(ctx);
  } catch (const ValidationError& e) {
    std::cerr << "prefrepair: invalid input: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const ConvergenceError& e) {
    std::cerr << "prefrepair: " << e.what() << "\n";
    return kExitNotConverged;
  } catch (const std::exception& e) {
    std::cerr << "prefrepair: " << e.what() << "\n";
    return kExitInvalid;
  }
}

}  // namespace prefrepair::cli
