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

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <boost/property_tree/ptree.hpp>

#include "prefrepair/recovery.hpp"

namespace prefrepair::cli {

// Flat INI configuration. Every key must belong to the known schema; unknown
// keys are rejected together in one ValidationError.
class Config {
 public:
  Config() = default;
  static Config load(const std::filesystem::path& path);

  // "section.key=value" override, applied after loading.
  void set(const std::string& assignment);
  void set(const std::string& section, const std::string& key, const std::string& value);

  bool has(const std::string& section, const std::string& key) const;
  std::string text(const std::string& section, const std::string& key, const std::string& fallback) const;
  double real(const std::string& section, const std::string& key, double fallback) const;
  std::size_t count(const std::string& section, const std::string& key, std::size_t fallback) const;
  std::uint64_t seed(const std::string& section, const std::string& key, std::uint64_t fallback) const;
  bool flag(const std::string& section, const std::string& key, bool fallback) const;
  // Comma list ("0,0.1,0.2") or inclusive range ("0:0.5:0.05").
  std::vector<double> reals(const std::string& section, const std::string& key,
                            const std::vector<double>& fallback) const;
  std::vector<std::string> words(const std::string& section, const std::string& key,
                                 const std::vector<std::string>& fallback) const;

  void check_known() const;

 private:
  boost::property_tree::ptree tree_;
};

// Global run settings shared by every subcommand.
struct RunSettings {
  std::uint64_t seed = 42;
  std::size_t threads = 1;
  std::filesystem::path out_dir = "out";
};

RunSettings run_settings(const Config& c);
SolverParams solver_params(const Config& c);
PipelineOptions pipeline_options(const Config& c);

}  // namespace prefrepair::cli
