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

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "artifacts.hpp"
#include "config.hpp"
#include "qdimer/reff.hpp"

namespace qdimer::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

struct Session {
  RunConfig config;
  std::string command;
  ArtifactWriter out;
  nlohmann::json metrics = nlohmann::json::object();
  std::vector<std::string> warnings;
  std::optional<ReffAnsatz> reff;  // trained or loaded once per session

  Session(RunConfig c, std::string cmd)
      : config(std::move(c)), command(std::move(cmd)), out(config.output.directory, config.output.format) {}
};

/// Runs one subcommand and writes manifest.json. `figure` is only used by
/// `reproduce`. Returns the process exit status; configuration errors throw
/// ConfigError and numerical failures throw NumericalError.
int run_command(const std::string& command, const std::string& figure, const RunConfig& config);

int exact_spectrum(Session& s);
int trotter_sim(Session& s);
int reff_train(Session& s);
int correlate(Session& s);
int dsf(Session& s);
int compare_experiment(Session& s);
int reproduce(Session& s, const std::string& figure);

/// Canonical manifest for the session (no timestamps).
nlohmann::json manifest(const Session& s);

}  // namespace qdimer::cli
