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

#include "artifacts.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "qdimer/errors.hpp"

namespace qdimer::cli {

using nlohmann::json;

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 digest failed");
  }
  std::string hex;
  char buf[3];
  for (unsigned int k = 0; k < length; ++k) {
    std::snprintf(buf, sizeof buf, "%02x", digest[k]);
    hex += buf;
  }
  return hex;
}

Table series_table(const CorrelationSeries& s, bool raw) {
  Table t{{"t", "re", "im"}, {}};
  const auto& v = raw ? s.raw : s.values;
  for (std::size_t k = 0; k < s.size(); ++k) t.rows.push_back({s.times[k], v[k].real(), v[k].imag()});
  return t;
}

Table spectrum_table(const PowerSpectrum& p) {
  Table t{{"omega", "power"}, {}};
  for (std::size_t m = 0; m < p.omegas.size(); ++m) t.rows.push_back({p.omegas[m], p.power[m]});
  return t;
}

Table dsf_table(const std::vector<double>& omegas, const std::vector<double>& intensity) {
  Table t{{"omega", "intensity"}, {}};
  for (std::size_t m = 0; m < omegas.size(); ++m) t.rows.push_back({omegas[m], intensity[m]});
  return t;
}

ArtifactWriter::ArtifactWriter(std::filesystem::path directory, Format format)
    : directory_(std::move(directory)), format_(format) {}

void ArtifactWriter::table(const std::string& stem, const Table& t) {
  for (const auto& row : t.rows) {
    if (row.size() != t.columns.size()) throw std::logic_error("table row width mismatch in " + stem);
  }
  std::ostringstream out;
  if (format_ == Format::kCsv) {
    for (std::size_t c = 0; c < t.columns.size(); ++c) out << (c ? "," : "") << t.columns[c];
    out << '\n';
    for (const auto& row : t.rows) {
      for (std::size_t c = 0; c < row.size(); ++c) {
        if (c) out << ',';
        std::visit(
            [&](const auto& v) {
              using V = std::decay_t<decltype(v)>;
              if constexpr (std::is_same_v<V, double>) {
                out << format_number(v);
              } else if constexpr (std::is_same_v<V, std::int64_t> || std::is_same_v<V, std::string>) {
                out << v;
              }
            },
            row[c]);
      }
      out << '\n';
    }
    write(stem + ".csv", out.str());
    return;
  }
  json doc = json::object();
  for (std::size_t c = 0; c < t.columns.size(); ++c) {
    json col = json::array();
    for (const auto& row : t.rows) {
      std::visit(
          [&](const auto& v) {
            using V = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<V, std::monostate>) {
              col.push_back(nullptr);
            } else {
              col.push_back(v);
            }
          },
          row[c]);
    }
    doc[t.columns[c]] = std::move(col);
  }
  write(stem + ".json", doc.dump(1) + "\n");
}

void ArtifactWriter::text(const std::string& name, const std::string& contents) { write(name, contents); }

void ArtifactWriter::write(const std::string& relative, const std::string& contents) {
  const std::filesystem::path path = directory_ / relative;
  std::error_code ec;
  std::filesystem::create_directories(path.parent_path(), ec);
  if (ec) throw InvalidArgument("cannot create directory " + path.parent_path().string());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot write " + path.string());
  out << contents;
  out.close();
  if (!out) throw InvalidArgument("failed writing " + path.string());
  for (std::size_t k = 0; k < written_.size(); ++k) {
    if (written_[k].first == relative) {
      written_[k].second = sha256_hex(contents);
      sizes_[k] = contents.size();
      return;
    }
  }
  written_.emplace_back(relative, sha256_hex(contents));
  sizes_.push_back(contents.size());
}

json ArtifactWriter::listing() const {
  std::vector<std::size_t> order(written_.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return written_[a].first < written_[b].first; });
  json list = json::array();
  for (std::size_t k : order) {
    list.push_back({{"path", written_[k].first}, {"bytes", sizes_[k]}, {"sha256", written_[k].second}});
  }
  return list;
}

}  // namespace qdimer::cli
