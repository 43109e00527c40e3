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

#include <CLI11.hpp>

#include <iostream>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>

#include "commands.hpp"
#include "config.hpp"
#include "qdimer/errors.hpp"
#include "qdimer/version.hpp"

namespace {

int fail(const char* kind, const std::string& message, int status) {
  std::cerr << nlohmann::json{{"error", kind}, {"message", message}}.dump() << '\n';
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace qdimer::cli;

  CLI::App app{"Two-spin dimer simulator: exact, Trotter and REFF dynamics, correlators and spectra."};
  app.set_version_flag("--version", std::string(qdimer::kVersion));
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<int> threads;
  std::optional<std::string> format;
  app.add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
  app.add_option("--seed", seed, "Master RNG seed");
  app.add_option("--out-dir", out_dir, "Output directory");
  app.add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--format", format, "Table format: csv or json");

  std::string figure;
  for (const char* name : {"exact-spectrum", "trotter-sim", "reff-train", "correlate", "dsf", "compare-experiment"}) {
    app.add_subcommand(name);
  }
  app.get_subcommand("exact-spectrum")->description("Eigenvalues, spectral-sum lines and exact correlators");
  app.get_subcommand("trotter-sim")->description("Trotter error, step convergence and Trotter correlators");
  app.get_subcommand("reff-train")->description("Train the fast-forwarding ansatz on one Trotter step");
  app.get_subcommand("correlate")->description("Correlator time series with the configured method");
  app.get_subcommand("dsf")->description("Dynamical structure factor with the configured method");
  app.get_subcommand("compare-experiment")->description("Overlay the simulated intensity on experimental data");
  auto* repro = app.add_subcommand("reproduce", "Fixed recipes for the reference figures");
  repro->add_option("figure", figure, "fig2, fig4, fig5 or fig8")
      ->required()
      ->check(CLI::IsMember({"fig2", "fig4", "fig5", "fig8"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("config", e.what(), kExitConfig);
  }

  try {
    RunConfig config = config_path.empty() ? RunConfig{} : load_config(config_path);
    if (seed) config.seed = *seed;
    if (out_dir) config.output.directory = *out_dir;
    if (threads) config.threads = *threads;
    if (format) config.output.format = parse_format(*format);
    const std::string command = app.get_subcommands().front()->get_name();
    return run_command(command, figure, config);
  } catch (const ConfigError& e) {
    return fail("config", e.what(), kExitConfig);
  } catch (const qdimer::InvalidArgument& e) {
    return fail("config", e.what(), kExitConfig);
  } catch (const qdimer::NumericalError& e) {
    return fail("numerical", e.what(), kExitNumerical);
  } catch (const std::exception& e) {
    return fail("numerical", e.what(), kExitNumerical);
  }
}
