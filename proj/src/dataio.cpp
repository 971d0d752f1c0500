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

#include "prefrepair/dataio.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "prefrepair/error.hpp"

namespace prefrepair {

using nlohmann::json;
namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// Catalog and export.

void ResponseCatalog::validate() const {
  std::unordered_set<std::string> seen;
  for (const auto& r : responses) {
    if (!seen.insert(r.id).second) throw ValidationError("duplicate response id '" + r.id + "'");
    if (r.score && !(*r.score >= 0.0 && *r.score <= 1.0)) {
      throw ValidationError("score of response '" + r.id + "' is outside [0, 1]");
    }
  }
}

ResponseCatalog deduplicate(const ResponseCatalog& catalog) {
  ResponseCatalog out{catalog.prompt, {}};
  std::unordered_set<std::string> seen;
  for (const auto& r : catalog.responses) {
    if (seen.insert(r.text).second) out.responses.push_back(r);
  }
  return out;
}

ResponseCatalog synthetic_catalog(std::size_t n, Rng& rng, std::string prompt) {
  ResponseCatalog out{std::move(prompt), {}};
  for (std::size_t i = 0; i < n; ++i) {
    char id[32];
    std::snprintf(id, sizeof id, "incumbent-%03zu", i);
    out.responses.push_back({id, std::string("Synthetic answer ") + id, uniform01(rng)});
  }
  return out;
}

ResponseCatalog with_injected(const ResponseCatalog& catalog, std::size_t k) {
  ResponseCatalog out = catalog;
  for (std::size_t m = 0; m < k; ++m) {
    char id[32];
    std::snprintf(id, sizeof id, "injected-%03zu", m);
    out.responses.push_back({id, std::string("I'd rather not answer that. ") + id, std::nullopt});
  }
  out.validate();
  return out;
}

PreferenceMatrix scores_to_matrix(const ResponseCatalog& catalog) {
  catalog.validate();
  std::vector<std::string> missing;
  BTLParams params;
  for (const auto& r : catalog.responses) {
    if (r.score) {
      params.w.push_back(*r.score);
    } else {
      missing.push_back(r.id);
    }
  }
  if (!missing.empty()) {
    std::string list;
    for (const auto& id : missing) list += (list.empty() ? "" : ", ") + id;
    throw ValidationError("responses without a score: " + list);
  }
  params.score_range = std::make_pair(0.0, 1.0);
  return btl_preference(params);
}

std::string_view export_strategy_name(ExportStrategy s) {
  switch (s) {
    case ExportStrategy::kTopGroups: return "top-groups";
    case ExportStrategy::kAllPairs: return "all-pairs";
    case ExportStrategy::kBestOfN: return "best-of-n";
    case ExportStrategy::kWorstOfN: return "worst-of-n";
  }
  return "unknown";
}

ExportStrategy parse_export_strategy(std::string_view name) {
  for (auto s : {ExportStrategy::kTopGroups, ExportStrategy::kAllPairs, ExportStrategy::kBestOfN,
                 ExportStrategy::kWorstOfN}) {
    if (name == export_strategy_name(s)) return s;
  }
  throw ValidationError("unknown export strategy '" + std::string(name) + "'");
}

std::vector<PairwiseExportRecord> sample_pairs(const PreferenceMatrix& p, const Ranking& ranking,
                                               const ResponseCatalog& catalog,
                                               ExportStrategy strategy, Rng& rng) {
  const std::size_t n = p.n();
  if (ranking.n() != n || catalog.size() != n) {
    throw ValidationError("matrix, ranking and catalog sizes differ");
  }
  ranking.validate();
  if (n < 2) throw ValidationError("export needs at least two responses");
  const auto& order = ranking.order;
  auto record = [&](std::size_t better, std::size_t worse) {
    return PairwiseExportRecord{catalog.prompt, catalog.responses[order[better]].text,
                                catalog.responses[order[worse]].text};
  };
  std::vector<PairwiseExportRecord> out;
  switch (strategy) {
    case ExportStrategy::kAllPairs:
      for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a + 1; b < n; ++b) out.push_back(record(a, b));
      }
      break;
    case ExportStrategy::kBestOfN:
      for (std::size_t b = 1; b < n; ++b) out.push_back(record(0, b));
      break;
    case ExportStrategy::kWorstOfN:
      for (std::size_t a = 0; a + 1 < n; ++a) out.push_back(record(a, n - 1));
      break;
    case ExportStrategy::kTopGroups: {
      constexpr std::size_t kTop = 3;
      constexpr std::size_t kGroup = 7;
      constexpr std::size_t kFull = kTop + kTop * kGroup;
      std::size_t tops = kTop;
      std::size_t group = kGroup;
      if (n < kFull) {
        tops = std::max<std::size_t>(1, (kTop * n + kFull / 2) / kFull);
        group = (n - tops) / tops;
        if (group == 0) throw ValidationError("too few responses for the top-groups strategy");
        group = std::min(group, kGroup);
      }
      std::vector<std::size_t> pool(tops * group);
      std::iota(pool.begin(), pool.end(), n - pool.size());
      for (std::size_t k = pool.size(); k > 1; --k) {
        std::swap(pool[k - 1], pool[uniform_index(rng, k)]);
      }
      for (std::size_t t = 0; t < tops; ++t) {
        std::vector<std::size_t> members(pool.begin() + static_cast<std::ptrdiff_t>(t * group),
                                         pool.begin() + static_cast<std::ptrdiff_t>((t + 1) * group));
        std::sort(members.begin(), members.end());
        for (std::size_t b : members) out.push_back(record(t, b));
      }
      break;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// File plumbing.

namespace {

[[noreturn]] void fail_at(const fs::path& path, std::size_t line, const std::string& what,
                          std::size_t column = 0) {
  std::string where = path.string() + ":" + std::to_string(line);
  if (column > 0) where += ":" + std::to_string(column);
  throw ValidationError(where + ": " + what);
}

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ValidationError("cannot write " + path.string());
  return out;
}

std::vector<std::string> read_lines(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read " + path.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  return lines;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

json parse_json_line(const fs::path& path, std::size_t line_no, const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    fail_at(path, line_no, std::string("malformed JSON: ") + e.what(), e.byte);
  }
}

json read_document(const fs::path& path, std::string_view format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const std::size_t upto = std::min<std::size_t>(e.byte, text.size());
    const std::size_t line = 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(upto), '\n'));
    const std::size_t nl = upto == 0 ? std::string::npos : text.rfind('\n', upto - 1);
    const std::size_t column = nl == std::string::npos ? upto : upto - nl - 1;
    fail_at(path, line, std::string("malformed JSON: ") + e.what(), std::max<std::size_t>(column, 1));
  }
  if (!doc.is_object() || doc.value("format", "") != format) {
    fail_at(path, 1, "expected a '" + std::string(format) + "' document");
  }
  if (doc.value("version", 0) != kFormatVersion) fail_at(path, 1, "unsupported version");
  return doc;
}

json header(std::string_view format) {
  return json{{"format", format}, {"version", kFormatVersion}};
}

void check_header(const fs::path& path, const std::vector<std::string>& lines,
                  std::string_view format, json& head) {
  if (lines.empty()) fail_at(path, 1, "missing header");
  head = parse_json_line(path, 1, lines[0]);
  if (!head.is_object() || head.value("format", "") != format) {
    fail_at(path, 1, "expected a '" + std::string(format) + "' header");
  }
  if (head.value("version", 0) != kFormatVersion) fail_at(path, 1, "unsupported version");
}

template <typename T>
T field(const fs::path& path, std::size_t line, const json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key)) {
    fail_at(path, line, std::string("missing field '") + key + "'");
  }
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    fail_at(path, line, std::string("field '") + key + "' has the wrong type");
  }
}

// Matrix CSV shared by preference and logit matrices.
struct CsvMatrix {
  DenseMatrix values;
  Mask mask;
  std::string kind;
};

void write_csv(const fs::path& path, std::string_view kind, const DenseMatrix& values,
               const Mask& mask) {
  auto out = open_out(path);
  const std::size_t n = values.rows();
  out << "# " << kind << "," << kFormatVersion << "," << n << "\n";
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (j > 0) out << ',';
      if (mask(i, j)) out << format_double(values(i, j));
    }
    out << "\n";
  }
  if (!out) throw ValidationError("write failed for " + path.string());
}

CsvMatrix read_csv(const fs::path& path, std::string_view kind) {
  const auto lines = read_lines(path);
  if (lines.empty()) fail_at(path, 1, "missing header");
  const std::string prefix = "# " + std::string(kind) + ",";
  if (lines[0].rfind(prefix, 0) != 0) fail_at(path, 1, "expected header '" + prefix + "<version>,<n>'", 1);
  int version = 0;
  std::size_t n = 0;
  {
    const std::string rest = lines[0].substr(prefix.size());
    const auto comma = rest.find(',');
    if (comma == std::string::npos) fail_at(path, 1, "header lacks the size field");
    const char* b = rest.data();
    auto r1 = std::from_chars(b, b + comma, version);
    auto r2 = std::from_chars(b + comma + 1, b + rest.size(), n);
    if (r1.ec != std::errc() || r1.ptr != b + comma || r2.ec != std::errc() ||
        r2.ptr != b + rest.size()) {
      fail_at(path, 1, "unreadable header fields");
    }
  }
  if (version != kFormatVersion) fail_at(path, 1, "unsupported version " + std::to_string(version));
  if (lines.size() < n + 1) fail_at(path, lines.size() + 1, "expected " + std::to_string(n) + " rows");
  CsvMatrix out{DenseMatrix(n, n), Mask(n, true), std::string(kind)};
  for (std::size_t i = 0; i < n; ++i) {
    const std::string& line = lines[i + 1];
    const std::size_t line_no = i + 2;
    std::size_t start = 0;
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t end = j + 1 < n ? line.find(',', start) : line.size();
      if (end == std::string::npos) fail_at(path, line_no, "expected " + std::to_string(n) + " cells", start + 1);
      if (j + 1 == n && line.find(',', start) != std::string::npos) {
        fail_at(path, line_no, "too many cells", line.find(',', start) + 1);
      }
      if (end == start) {
        out.mask.set(i, j, false);
      } else {
        double v = 0.0;
        auto res = std::from_chars(line.data() + start, line.data() + end, v);
        if (res.ec != std::errc() || res.ptr != line.data() + end || !std::isfinite(v)) {
          fail_at(path, line_no, "not a number", start + 1);
        }
        out.values(i, j) = v;
      }
      start = end + 1;
    }
  }
  for (std::size_t k = n + 1; k < lines.size(); ++k) {
    if (!lines[k].empty()) fail_at(path, k + 1, "unexpected content after the last row");
  }
  return out;
}

json matrix_json(const DenseMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    rows.push_back(std::vector<double>(m.row(i).begin(), m.row(i).end()));
  }
  return rows;
}

DenseMatrix matrix_from_json(const fs::path& path, const json& rows) {
  if (!rows.is_array()) fail_at(path, 1, "matrix must be an array of rows");
  const std::size_t n = rows.size();
  DenseMatrix out(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = rows[i].get<std::vector<double>>();
    if (row.size() != n) fail_at(path, 1, "matrix row " + std::to_string(i) + " has the wrong length");
    std::copy(row.begin(), row.end(), out.row(i).begin());
  }
  return out;
}

std::string_view space_name(CorruptionSpace s) {
  return s == CorruptionSpace::kLogit ? "logit" : "probability";
}

CorruptionSpace parse_space(const fs::path& path, std::size_t line, const std::string& s) {
  if (s == "logit") return CorruptionSpace::kLogit;
  if (s == "probability") return CorruptionSpace::kProbability;
  fail_at(path, line, "unknown corruption space '" + s + "'");
}

json corruption_json(const SparseCorruption& s) {
  json entries = json::array();
  for (const auto& e : s.entries) entries.push_back(json::array({e.i, e.j, e.delta}));
  return json{{"n", s.n}, {"space", space_name(s.space)}, {"entries", entries}};
}

}  // namespace

void save_matrix_csv(const fs::path& path, const PreferenceMatrix& p) {
  write_csv(path, "prefrepair-matrix", p.values(), p.mask());
}

PreferenceMatrix load_matrix_csv(const fs::path& path) {
  CsvMatrix m = read_csv(path, "prefrepair-matrix");
  for (std::size_t i = 0; i < m.values.rows(); ++i) {
    for (std::size_t j = 0; j < m.values.rows(); ++j) {
      if (!m.mask(i, j)) m.values(i, j) = 0.5;
    }
  }
  try {
    return PreferenceMatrix(std::move(m.values), std::move(m.mask));
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

void save_logit_csv(const fs::path& path, const LogitMatrix& m) {
  write_csv(path, std::string("prefrepair-logit-") + std::string(link_name(m.link)), m.values, m.mask);
}

LogitMatrix load_logit_csv(const fs::path& path) {
  for (LinkId id : {LinkId::kLogit, LinkId::kProbit}) {
    const std::string kind = std::string("prefrepair-logit-") + std::string(link_name(id));
    const auto lines = read_lines(path);
    if (!lines.empty() && lines[0].rfind("# " + kind + ",", 0) == 0) {
      CsvMatrix m = read_csv(path, kind);
      return LogitMatrix{std::move(m.values), std::move(m.mask), id};
    }
  }
  fail_at(path, 1, "expected a prefrepair-logit-<link> header", 1);
}

void save_dataset(const fs::path& path, const ComparisonDataset& data) {
  data.validate();
  auto out = open_out(path);
  json head = header("prefrepair-dataset");
  head["n"] = data.n;
  out << head.dump() << "\n";
  for (const auto& r : data.records) {
    out << json{{"i", r.i}, {"j", r.j}, {"outcomes", r.outcomes}}.dump() << "\n";
  }
}

ComparisonDataset load_dataset(const fs::path& path) {
  const auto lines = read_lines(path);
  json head;
  check_header(path, lines, "prefrepair-dataset", head);
  ComparisonDataset data;
  data.n = field<std::size_t>(path, 1, head, "n");
  for (std::size_t k = 1; k < lines.size(); ++k) {
    if (lines[k].empty()) continue;
    const json rec = parse_json_line(path, k + 1, lines[k]);
    ComparisonRecord r;
    r.i = field<std::size_t>(path, k + 1, rec, "i");
    r.j = field<std::size_t>(path, k + 1, rec, "j");
    r.outcomes = field<std::vector<std::uint8_t>>(path, k + 1, rec, "outcomes");
    data.records.push_back(std::move(r));
  }
  try {
    data.validate();
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
  return data;
}

void save_corruption(const fs::path& path, const SparseCorruption& s) {
  s.validate();
  auto out = open_out(path);
  json head = header("prefrepair-corruption");
  head["n"] = s.n;
  head["space"] = space_name(s.space);
  out << head.dump() << "\n";
  for (const auto& e : s.entries) {
    out << json{{"i", e.i}, {"j", e.j}, {"delta", e.delta}, {"space", space_name(s.space)}}.dump()
        << "\n";
  }
}

SparseCorruption load_corruption(const fs::path& path) {
  const auto lines = read_lines(path);
  json head;
  check_header(path, lines, "prefrepair-corruption", head);
  SparseCorruption s;
  s.n = field<std::size_t>(path, 1, head, "n");
  s.space = parse_space(path, 1, field<std::string>(path, 1, head, "space"));
  for (std::size_t k = 1; k < lines.size(); ++k) {
    if (lines[k].empty()) continue;
    const json rec = parse_json_line(path, k + 1, lines[k]);
    CorruptionEntry e;
    e.i = field<std::size_t>(path, k + 1, rec, "i");
    e.j = field<std::size_t>(path, k + 1, rec, "j");
    e.delta = field<double>(path, k + 1, rec, "delta");
    if (parse_space(path, k + 1, field<std::string>(path, k + 1, rec, "space")) != s.space) {
      fail_at(path, k + 1, "record space differs from the header");
    }
    s.entries.push_back(e);
  }
  try {
    s.validate();
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
  return s;
}

void save_export(const fs::path& path, const std::vector<PairwiseExportRecord>& records) {
  auto out = open_out(path);
  out << header("prefrepair-export").dump() << "\n";
  for (const auto& r : records) {
    out << json{{"prompt", r.prompt}, {"chosen", r.chosen}, {"rejected", r.rejected}}.dump() << "\n";
  }
}

std::vector<PairwiseExportRecord> load_export(const fs::path& path) {
  const auto lines = read_lines(path);
  json head;
  check_header(path, lines, "prefrepair-export", head);
  std::vector<PairwiseExportRecord> out;
  for (std::size_t k = 1; k < lines.size(); ++k) {
    if (lines[k].empty()) continue;
    const json rec = parse_json_line(path, k + 1, lines[k]);
    PairwiseExportRecord r{field<std::string>(path, k + 1, rec, "prompt"),
                           field<std::string>(path, k + 1, rec, "chosen"),
                           field<std::string>(path, k + 1, rec, "rejected")};
    if (r.chosen == r.rejected) fail_at(path, k + 1, "chosen equals rejected");
    out.push_back(std::move(r));
  }
  return out;
}

void save_ranking(const fs::path& path, const Ranking& r) {
  r.validate();
  json doc = header("prefrepair-ranking");
  doc["order"] = r.order;
  doc["scores"] = r.scores;
  open_out(path) << doc.dump() << "\n";
}

Ranking load_ranking(const fs::path& path) {
  const json doc = read_document(path, "prefrepair-ranking");
  Ranking r{field<std::vector<std::size_t>>(path, 1, doc, "order"),
            field<std::vector<double>>(path, 1, doc, "scores")};
  try {
    r.validate();
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
  return r;
}

void save_btl_params(const fs::path& path, const BTLParams& params) {
  params.validate();
  json doc = header("prefrepair-btl");
  doc["w"] = params.w;
  doc["orientation"] = params.orientation == ScoreOrientation::kLowerWins ? "lower-wins" : "higher-wins";
  if (params.score_range) doc["score_range"] = {params.score_range->first, params.score_range->second};
  open_out(path) << doc.dump() << "\n";
}

BTLParams load_btl_params(const fs::path& path) {
  const json doc = read_document(path, "prefrepair-btl");
  BTLParams p;
  p.w = field<std::vector<double>>(path, 1, doc, "w");
  const auto orientation = field<std::string>(path, 1, doc, "orientation");
  if (orientation == "lower-wins") {
    p.orientation = ScoreOrientation::kLowerWins;
  } else if (orientation == "higher-wins") {
    p.orientation = ScoreOrientation::kHigherWins;
  } else {
    fail_at(path, 1, "unknown orientation '" + orientation + "'");
  }
  if (doc.contains("score_range")) {
    const auto range = field<std::vector<double>>(path, 1, doc, "score_range");
    if (range.size() != 2) fail_at(path, 1, "score_range needs two values");
    p.score_range = std::make_pair(range[0], range[1]);
  }
  p.validate();
  return p;
}

void save_catalog(const fs::path& path, const ResponseCatalog& catalog) {
  catalog.validate();
  json doc = header("prefrepair-catalog");
  doc["prompt"] = catalog.prompt;
  json responses = json::array();
  for (const auto& r : catalog.responses) {
    json item{{"id", r.id}, {"text", r.text}};
    item["score"] = r.score ? json(*r.score) : json(nullptr);
    responses.push_back(item);
  }
  doc["responses"] = responses;
  open_out(path) << doc.dump(2) << "\n";
}

ResponseCatalog load_catalog(const fs::path& path) {
  const json doc = read_document(path, "prefrepair-catalog");
  ResponseCatalog c;
  c.prompt = field<std::string>(path, 1, doc, "prompt");
  const json responses = field<json>(path, 1, doc, "responses");
  if (!responses.is_array()) fail_at(path, 1, "responses must be an array");
  for (const auto& item : responses) {
    CatalogResponse r;
    r.id = field<std::string>(path, 1, item, "id");
    r.text = field<std::string>(path, 1, item, "text");
    if (item.contains("score") && !item["score"].is_null()) r.score = item["score"].get<double>();
    c.responses.push_back(std::move(r));
  }
  try {
    c.validate();
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
  return c;
}

void save_report(const fs::path& path, const RecoveryReport& report) {
  json doc = header("prefrepair-report");
  doc["link"] = link_name(report.l_hat.link);
  doc["l_hat"] = matrix_json(report.l_hat.values);
  doc["s_hat"] = corruption_json(report.s_hat);
  doc["singular_values"] = report.singular_values;
  doc["iterations_used"] = report.iterations_used;
  doc["residual_frobenius"] = report.residual_frobenius;
  json pairs = json::array();
  for (const auto& [i, j] : report.detected_pairs) pairs.push_back({i, j});
  doc["detected_pairs"] = pairs;
  doc["converged"] = report.converged;
  doc["beta"] = report.beta;
  doc["repair_moves"] = report.repair_moves;
  doc["residual_trace"] = report.residual_trace;
  doc["repair_trace"] = report.repair_trace;
  doc["threshold_trace"] = report.threshold_trace;
  open_out(path) << doc.dump() << "\n";
}

RecoveryReport load_report(const fs::path& path) {
  const json doc = read_document(path, "prefrepair-report");
  RecoveryReport r;
  try {
    const DenseMatrix l = matrix_from_json(path, doc.at("l_hat"));
    const std::size_t n = l.rows();
    r.l_hat = LogitMatrix{l, Mask(n, true), parse_link(doc.at("link").get<std::string>())};
    const json& s = doc.at("s_hat");
    r.s_hat.n = s.at("n").get<std::size_t>();
    r.s_hat.space = parse_space(path, 1, s.at("space").get<std::string>());
    for (const auto& e : s.at("entries")) {
      r.s_hat.entries.push_back({e.at(0).get<std::size_t>(), e.at(1).get<std::size_t>(),
                                 e.at(2).get<double>()});
    }
    r.singular_values = doc.at("singular_values").get<std::vector<double>>();
    r.iterations_used = doc.at("iterations_used").get<std::size_t>();
    r.residual_frobenius = doc.at("residual_frobenius").get<double>();
    for (const auto& pr : doc.at("detected_pairs")) {
      r.detected_pairs.emplace_back(pr.at(0).get<std::size_t>(), pr.at(1).get<std::size_t>());
    }
    r.converged = doc.at("converged").get<bool>();
    r.beta = doc.at("beta").get<double>();
    r.repair_moves = doc.at("repair_moves").get<std::size_t>();
    r.residual_trace = doc.at("residual_trace").get<std::vector<double>>();
    r.repair_trace = doc.at("repair_trace").get<std::vector<double>>();
    r.threshold_trace = doc.at("threshold_trace").get<std::vector<double>>();
  } catch (const json::exception& e) {
    fail_at(path, 1, std::string("report schema mismatch: ") + e.what());
  }
  return r;
}

}  // namespace prefrepair
