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

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "config.hpp"
#include "qdimer/spectra.hpp"

namespace qdimer::cli {

/// Lowercase hex SHA-256 digest.
std::string sha256_hex(std::string_view data);

using Cell = std::variant<std::monostate, double, std::int64_t, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

Table series_table(const CorrelationSeries& s, bool raw = false);
Table spectrum_table(const PowerSpectrum& p);
Table dsf_table(const std::vector<double>& omegas, const std::vector<double>& intensity);

/// Writes artifacts under one directory and remembers their digests.
class ArtifactWriter {
 public:
  ArtifactWriter(std::filesystem::path directory, Format format);

  /// `stem` may contain '/' for subdirectories; the extension follows the format.
  void table(const std::string& stem, const Table& t);
  /// Written verbatim regardless of format.
  void text(const std::string& name, const std::string& contents);

  const std::filesystem::path& directory() const { return directory_; }
  Format format() const { return format_; }

  /// Artifact list sorted by path: [{path, bytes, sha256}].
  nlohmann::json listing() const;

 private:
  void write(const std::string& relative, const std::string& contents);

  std::filesystem::path directory_;
  Format format_;
  std::vector<std::pair<std::string, std::string>> written_;  // path, contents digest
  std::vector<std::uint64_t> sizes_;
};

}  // namespace qdimer::cli
