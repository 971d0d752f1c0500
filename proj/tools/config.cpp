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


#include "config.hpp"

#include <charconv>
#include <cmath>
#include <map>
#include <set>

#include <boost/property_tree/ini_parser.hpp>

#include "prefrepair/error.hpp"

namespace prefrepair::cli {
namespace {

namespace pt = boost::property_tree;

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> known = {
      {"run", {"seed", "threads", "out_dir"}},
      {"simulate", {"source", "n", "nu", "distribution", "comparisons", "catalog_seed"}},
      {"corrupt",
       {"input", "kind", "dp", "ap", "value_lo", "value_hi", "density", "degree", "magnitude_lo",
        "magnitude_hi", "clamp", "catalog"}},
      {"injection",
       {"k_injected", "p1", "p2", "p3", "s1_lo", "s1_hi", "s2_lo", "s2_hi", "incumbents",
        "catalog_seed", "runs", "top", "tau_rel", "strategy"}},
      {"recover", {"input", "pipeline", "augment_k", "augment_upper", "augment_lower", "clamp", "link"}},
      {"solver",
       {"target_rank", "max_iters", "tol", "beta", "decay", "noise_floor", "consensus_repair",
        "consensus_samples", "repair_seed", "support_tol", "svd", "dense_cutoff"}},
      {"rank", {"input", "method"}},
      {"metrics", {"truth", "estimate", "ranking", "corruption", "report"}},
      {"health", {"input", "tau_rel", "clamp"}},
      {"export", {"matrix", "ranking", "catalog", "strategy"}},
      {"experiment",
       {"protocol", "n", "dp_values", "ap_values", "runs", "weight_seed_base", "value_lo", "value_hi",
        "pipeline", "arms", "save_matrices"}},
      {"baselines",
       {"n", "nu", "d", "d_values", "nu_values", "sweeps", "runs", "magnitude_lo", "magnitude_hi",
        "comparisons"}},
  };
  return known;
}

std::string path_of(const std::string& section, const std::string& key) { return section + "." + key; }

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

double parse_real(const std::string& where, const std::string& raw) {
  const std::string s = trim(raw);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw ValidationError(where + ": expected a number, got '" + raw + "'");
  }
  return v;
}

std::uint64_t parse_unsigned(const std::string& where, const std::string& raw) {
  const std::string s = trim(raw);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ValidationError(where + ": expected a non-negative integer, got '" + raw + "'");
  }
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace

Config Config::load(const std::filesystem::path& path) {
  Config c;
  try {
    pt::read_ini(path.string(), c.tree_);
  } catch (const pt::ini_parser_error& e) {
    throw ValidationError(e.what());
  }
  return c;
}

void Config::set(const std::string& assignment) {
  const auto eq = assignment.find('=');
  const auto dot = assignment.find('.');
  if (eq == std::string::npos || dot == std::string::npos || dot > eq) {
    throw ValidationError("override must look like section.key=value: '" + assignment + "'");
  }
  set(trim(assignment.substr(0, dot)), trim(assignment.substr(dot + 1, eq - dot - 1)),
      trim(assignment.substr(eq + 1)));
}

void Config::set(const std::string& section, const std::string& key, const std::string& value) {
  tree_.put(pt::ptree::path_type(section + "\x1f" + key, '\x1f'), value);
}

bool Config::has(const std::string& section, const std::string& key) const {
  return tree_.get_child_optional(pt::ptree::path_type(section + "\x1f" + key, '\x1f')).has_value();
}

std::string Config::text(const std::string& section, const std::string& key,
                         const std::string& fallback) const {
  const auto v = tree_.get_optional<std::string>(pt::ptree::path_type(section + "\x1f" + key, '\x1f'));
  return v ? trim(*v) : fallback;
}

double Config::real(const std::string& section, const std::string& key, double fallback) const {
  return has(section, key) ? parse_real(path_of(section, key), text(section, key, "")) : fallback;
}

std::size_t Config::count(const std::string& section, const std::string& key, std::size_t fallback) const {
  return has(section, key) ? parse_unsigned(path_of(section, key), text(section, key, "")) : fallback;
}

std::uint64_t Config::seed(const std::string& section, const std::string& key,
                           std::uint64_t fallback) const {
  return has(section, key) ? parse_unsigned(path_of(section, key), text(section, key, "")) : fallback;
}

bool Config::flag(const std::string& section, const std::string& key, bool fallback) const {
  if (!has(section, key)) return fallback;
  const std::string v = text(section, key, "");
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ValidationError(path_of(section, key) + ": expected true or false, got '" + v + "'");
}

std::vector<double> Config::reals(const std::string& section, const std::string& key,
                                  const std::vector<double>& fallback) const {
  if (!has(section, key)) return fallback;
  const std::string where = path_of(section, key);
  const std::string v = text(section, key, "");
  std::vector<double> out;
  if (v.find(':') != std::string::npos) {
    const auto parts = split(v, ':');
    if (parts.size() != 3) throw ValidationError(where + ": range must be start:stop:step");
    const double lo = parse_real(where, parts[0]);
    const double hi = parse_real(where, parts[1]);
    const double step = parse_real(where, parts[2]);
    if (!(step > 0.0) || hi < lo) throw ValidationError(where + ": empty or unbounded range");
    const auto steps = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9));
    for (std::size_t i = 0; i <= steps; ++i) {
      out.push_back(std::round((lo + static_cast<double>(i) * step) * 1e12) / 1e12);
    }
  } else {
    for (const auto& part : split(v, ',')) out.push_back(parse_real(where, part));
  }
  return out;
}

std::vector<std::string> Config::words(const std::string& section, const std::string& key,
                                       const std::vector<std::string>& fallback) const {
  if (!has(section, key)) return fallback;
  auto out = split(text(section, key, ""), ',');
  for (const auto& w : out) {
    if (w.empty()) throw ValidationError(path_of(section, key) + ": empty list item");
  }
  return out;
}

void Config::check_known() const {
  std::vector<std::string> unknown;
  const auto& known = schema();
  for (const auto& [section, body] : tree_) {
    const auto it = known.find(section);
    if (body.empty() && !body.data().empty()) {
      unknown.push_back(section);
      continue;
    }
    for (const auto& [key, value] : body) {
      if (it == known.end() || !it->second.contains(key)) unknown.push_back(path_of(section, key));
    }
  }
  if (!unknown.empty()) {
    std::string msg = "unknown config keys:";
    for (const auto& u : unknown) msg += " " + u;
    throw ValidationError(msg);
  }
}

RunSettings run_settings(const Config& c) {
  RunSettings s;
  s.seed = c.seed("run", "seed", s.seed);
  s.threads = c.count("run", "threads", s.threads);
  if (s.threads == 0) throw ValidationError("run.threads must be at least 1");
  s.out_dir = c.text("run", "out_dir", s.out_dir.string());
  return s;
}

SolverParams solver_params(const Config& c) {
  SolverParams p;
  p.target_rank = c.count("solver", "target_rank", p.target_rank);
  p.max_iters = c.count("solver", "max_iters", p.max_iters);
  p.tol = c.real("solver", "tol", p.tol);
  p.beta = c.real("solver", "beta", p.beta);
  p.decay = c.real("solver", "decay", p.decay);
  p.noise_floor = c.real("solver", "noise_floor", p.noise_floor);
  p.consensus_repair = c.flag("solver", "consensus_repair", p.consensus_repair);
  p.consensus_samples = c.count("solver", "consensus_samples", p.consensus_samples);
  p.seed = c.seed("solver", "repair_seed", p.seed);
  p.support_tol = c.real("solver", "support_tol", p.support_tol);
  p.dense_cutoff = c.count("solver", "dense_cutoff", p.dense_cutoff);
  const std::string svd = c.text("solver", "svd", "auto");
  if (svd == "auto") {
    p.svd_method = SvdMethod::kAuto;
  } else if (svd == "dense") {
    p.svd_method = SvdMethod::kDense;
  } else if (svd == "subspace") {
    p.svd_method = SvdMethod::kSubspace;
  } else {
    throw ValidationError("solver.svd must be auto, dense or subspace");
  }
  p.validate();
  return p;
}

PipelineOptions pipeline_options(const Config& c) {
  PipelineOptions o;
  o.solver = solver_params(c);
  o.link = parse_link(c.text("recover", "link", "logit"));
  o.clamp = c.real("recover", "clamp", o.clamp);
  o.augment_k = c.count("recover", "augment_k", o.augment_k);
  o.augment_upper = c.real("recover", "augment_upper", o.augment_upper);
  o.augment_lower = c.real("recover", "augment_lower", o.augment_lower);
  if (!(o.clamp > 0.0 && o.clamp < 0.5)) throw ValidationError("recover.clamp must lie in (0, 0.5)");
  return o;
}

}  // namespace prefrepair::cli
