// Copyright 2026 The qdimer Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "qdimer/measure.hpp"
#include "qdimer/model.hpp"
#include "qdimer/reff.hpp"
#include "qdimer/spectra.hpp"

namespace qdimer::cli {

/// Invalid or inconsistent run configuration (exit status 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Format { kCsv, kJson };

struct EvolutionBlock {
  EvolutionMethod method = EvolutionMethod::kReff;
  double dt = 0.3;
  int n_steps = 100;
  std::string initial_state = "ground";
};

struct EstimatorBlock {
  bool enabled = true;
  EstimatorConfig config;
};

struct ReffBlock {
  OptimizerConfig optimizer;
  std::optional<std::filesystem::path> params_file;
};

struct SpectraBlock {
  std::vector<SeriesKey> series = same_site_keys();
  Vec3 q{0.0, 0.0, 0.0};
  std::optional<Vec3> q_hat;
  std::vector<std::pair<int, int>> pairs;  // 0-based; empty = all present
  SpectrumOptions options;
};

struct OutputBlock {
  std::filesystem::path directory = "qdimer-out";
  Format format = Format::kCsv;
};

struct ExperimentBlock {
  std::filesystem::path path;
  double energy_scale = 1.0;
  std::optional<std::pair<double, double>> middle_window;
};

struct RunConfig {
  SpinModel model = SpinModel::heisenberg(1.0, 1.0);
  EvolutionBlock evolution;
  EstimatorBlock estimator;
  ReffBlock reff;
  SpectraBlock spectra;
  OutputBlock output;
  std::optional<ExperimentBlock> experiment;
  std::uint64_t seed = 42;
  int threads = 1;

  /// Defaults documented in the README.
  RunConfig();

  /// Fully resolved configuration, used for the manifest hash.
  nlohmann::json to_json() const;
};

/// Strict parse: unknown keys, wrong types and out-of-range values throw
/// ConfigError naming the offending key. Relative paths resolve against `base`.
RunConfig parse_config(const nlohmann::json& doc, const std::filesystem::path& base = {});
RunConfig load_config(const std::filesystem::path& path);

Format parse_format(const std::string& name);
std::string format_name(Format f);

}  // namespace qdimer::cli
