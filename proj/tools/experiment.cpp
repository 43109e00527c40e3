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

#include "experiment.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "config.hpp"

namespace qdimer::cli {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

double cell_number(const std::string& cell, const std::string& where) {
  if (cell.empty()) throw ConfigError(where + ": empty cell");
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(cell, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != cell.size() || !std::isfinite(v)) throw ConfigError(where + ": '" + cell + "' is not a finite number");
  return v;
}

}  // namespace

ExperimentTable parse_experiment(std::istream& in, const std::string& source) {
  std::string line;
  int line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) {
      header = split(trim(line));
      break;
    }
  }
  if (header.empty()) throw ConfigError(source + ": missing header");
  const bool with_error = header.size() == 3;
  if (header.size() < 2 || header.size() > 3 || header[0] != "energy" || header[1] != "intensity" ||
      (with_error && header[2] != "error")) {
    throw ConfigError(source + " row " + std::to_string(line_no) + ": header must be energy,intensity[,error]");
  }

  ExperimentTable table;
  table.has_error_column = with_error;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split(trim(line));
    const std::string row = source + " row " + std::to_string(line_no);
    if (cells.size() != header.size()) {
      throw ConfigError(row + ": expected " + std::to_string(header.size()) + " columns, found " +
                        std::to_string(cells.size()));
    }
    ExperimentRow r;
    r.energy = cell_number(cells[0], row + ", column 'energy'");
    r.intensity = cell_number(cells[1], row + ", column 'intensity'");
    if (with_error && !cells[2].empty()) {
      r.error = cell_number(cells[2], row + ", column 'error'");
      if (*r.error < 0.0) throw ConfigError(row + ", column 'error': negative uncertainty");
    }
    if (!table.rows.empty() && !(r.energy > table.rows.back().energy)) {
      throw ConfigError(row + ", column 'energy': energies must be strictly increasing");
    }
    table.rows.push_back(r);
  }
  if (table.rows.empty()) throw ConfigError(source + ": no data rows");
  return table;
}

ExperimentTable ingest_experiment(const std::filesystem::path& path, double energy_scale) {
  if (!(energy_scale > 0.0) || !std::isfinite(energy_scale)) throw ConfigError("energy_scale must be positive");
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read experiment file '" + path.string() + "'");
  ExperimentTable t = parse_experiment(in, path.filename().string());
  for (ExperimentRow& r : t.rows) r.energy *= energy_scale;
  return t;
}

Overlay align_peaks(const std::vector<double>& omegas, const std::vector<double>& intensity,
                    const ExperimentTable& table, const std::optional<std::pair<double, double>>& window) {
  if (omegas.size() != intensity.size() || omegas.size() < 2) throw ConfigError("simulated spectrum is too short");
  if (table.rows.empty()) throw ConfigError("experiment table is empty");
  auto inside = [&](double e) { return !window || (e >= window->first && e <= window->second); };

  Overlay o;
  o.bin_width = omegas[1] - omegas[0];
  bool found = false;
  for (std::size_t m = 1; m < omegas.size(); ++m) {
    if (!inside(omegas[m])) continue;
    if (!found || intensity[m] > intensity[o.simulated_bin]) o.simulated_bin = m;
    found = true;
  }
  if (!found) throw ConfigError("no simulated frequency bin inside the middle-peak window");
  o.simulated_peak = omegas[o.simulated_bin];

  const ExperimentRow* best = nullptr;
  for (const ExperimentRow& r : table.rows) {
    if (inside(r.energy) && (best == nullptr || r.intensity > best->intensity)) best = &r;
  }
  if (best == nullptr) throw ConfigError("no experiment row inside the middle-peak window");
  o.experiment_peak = best->energy;
  o.offset = o.experiment_peak - o.simulated_peak;
  return o;
}

}  // namespace qdimer::cli
