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
#include <istream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace qdimer::cli {

struct ExperimentRow {
  double energy = 0.0;
  double intensity = 0.0;
  std::optional<double> error;  // absent, not zero, when not supplied
};

struct ExperimentTable {
  std::vector<ExperimentRow> rows;
  bool has_error_column = false;
};

/// CSV with header `energy,intensity[,error]`. Energies must be strictly
/// increasing; failures throw ConfigError naming the row and column.
ExperimentTable parse_experiment(std::istream& in, const std::string& source = "experiment");

/// Reads `path` and multiplies the energy column by `energy_scale`.
ExperimentTable ingest_experiment(const std::filesystem::path& path, double energy_scale = 1.0);

struct Overlay {
  std::size_t simulated_bin = 0;
  double simulated_peak = 0.0;   // omega of the simulated peak bin
  double experiment_peak = 0.0;  // scaled energy of the tallest experiment row
  double bin_width = 0.0;
  double offset = 0.0;           // experiment_peak - simulated_peak
};

/// Peaks searched inside `window` (scaled energies) when given; the simulated
/// search skips the omega = 0 bin.
Overlay align_peaks(const std::vector<double>& omegas, const std::vector<double>& intensity,
                    const ExperimentTable& table, const std::optional<std::pair<double, double>>& window);

}  // namespace qdimer::cli
