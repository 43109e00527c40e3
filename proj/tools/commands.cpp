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

#include "commands.hpp"

#include <Eigen/Core>

#include <cmath>
#include <fstream>
#include <iostream>
#include <mutex>
#include <numeric>
#include <sstream>

#include "experiment.hpp"
#include "qdimer/errors.hpp"
#include "qdimer/trotter.hpp"
#include "qdimer/version.hpp"

namespace qdimer::cli {

using nlohmann::json;

namespace {

QuantumState initial_state(const RunConfig& c) {
  if (c.evolution.initial_state == "ground") return QuantumState::pure(ground_state(eigensystem(c.model)));
  return prepare_state(c.evolution.initial_state);
}

std::string file_digest(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return sha256_hex(buf.str());
}

bool same_model(const SpinModel& a, const SpinModel& b) {
  return std::abs(a.jxx - b.jxx) < 1e-12 && std::abs(a.jyy - b.jyy) < 1e-12 && std::abs(a.jzz - b.jzz) < 1e-12 &&
         std::abs(a.h - b.h) < 1e-12;
}

json rms_json(const CorrelationSeries& s, const CorrelationSeries& oracle) {
  const RmsReport r = rms_report(s, oracle);
  const auto thirds = rms_by_third(s.values, oracle.values, Part::kReal);
  json j = {{"rms_time", r.rms_time}, {"rms_freq", r.rms_freq}, {"rms_re_thirds", {thirds[0], thirds[1], thirds[2]}}};
  if (s.raw != s.values) {
    CorrelationSeries raw = s;
    raw.values = s.raw;
    const auto raw_thirds = rms_by_third(raw.values, oracle.values, Part::kReal);
    j["raw"] = {{"rms_time", rms_report(raw, oracle).rms_time},
                {"rms_re_thirds", {raw_thirds[0], raw_thirds[1], raw_thirds[2]}}};
  }
  return j;
}

// Trains on the configured Trotter step, or loads the parameter file.
ReffAnsatz obtain_reff(Session& s, const std::string& prefix, bool force_train = false) {
  const RunConfig& c = s.config;
  if (s.reff && !force_train) return *s.reff;
  if (c.reff.params_file && !force_train) {
    const ReffParameters p = load_parameters(*c.reff.params_file);
    if (!same_model(p.model, c.model) || std::abs(p.dt - c.evolution.dt) > 1e-12) {
      throw ConfigError("reff.params_file was trained for a different model or dt");
    }
    s.metrics[prefix + "reff"] = {{"source", "file"}, {"final_cost", p.final_cost}};
    s.reff = p.ansatz();
    return *s.reff;
  }
  const CMatrix target = trotter_step_circuit(c.model, c.evolution.dt).to_matrix();
  Rng rng = Rng(c.seed).child("reff");
  const TrainResult r = train(target, c.reff.optimizer, rng);

  ReffParameters p{c.model, c.evolution.dt, r.theta_opt, r.gamma_opt, r.final_cost};
  s.out.text(prefix + "reff_params.txt", format_parameters(p));
  Table history{{"iteration", "cost"}, {}};
  for (std::size_t k = 0; k < r.cost_history.size(); ++k) {
    history.rows.push_back({static_cast<std::int64_t>(k), r.cost_history[k]});
  }
  s.out.table(prefix + "reff_cost", history);
  s.metrics[prefix + "reff"] = {{"source", "trained"},
                                {"final_cost", r.final_cost},
                                {"threshold", r.threshold},
                                {"iterations", r.iterations},
                                {"converged", r.converged}};
  s.reff = r.ansatz();
  return *s.reff;
}

SweepConfig make_sweep(const RunConfig& c, EvolutionMethod method, const std::optional<EstimatorConfig>& estimator,
                       const std::vector<SeriesKey>& keys, const std::optional<ReffAnsatz>& reff) {
  SweepConfig sc;
  sc.model = c.model;
  sc.method = method;
  sc.dt = c.evolution.dt;
  sc.n_steps = c.evolution.n_steps;
  sc.keys = keys;
  sc.estimator = estimator;
  sc.reff = reff;
  sc.initial = initial_state(c);
  sc.threads = c.threads;
  return sc;
}

std::optional<EstimatorConfig> configured_estimator(const RunConfig& c) {
  if (!c.estimator.enabled) return std::nullopt;
  return c.estimator.config;
}

std::vector<CorrelationSeries> oracle_series(const RunConfig& c, const std::vector<SeriesKey>& keys) {
  std::vector<CorrelationSeries> out;
  for (const SeriesKey& k : keys) {
    if (c.evolution.initial_state == "ground") {
      out.push_back(lehmann_series(c.model, k, c.evolution.dt, c.evolution.n_steps));
    }
  }
  return out;
}

// Series, raw series and power spectra under `label/`; RMS against the
// spectral-sum oracle when the initial state is the ground state.
void emit_series(Session& s, const std::string& label, const std::vector<CorrelationSeries>& series) {
  const auto oracles = oracle_series(s.config, [&] {
    std::vector<SeriesKey> keys;
    for (const auto& x : series) keys.push_back(x.key);
    return keys;
  }());
  json rms = json::object();
  for (std::size_t k = 0; k < series.size(); ++k) {
    const CorrelationSeries& x = series[k];
    s.out.table(label + "/C_" + x.key.name(), series_table(x));
    if (x.raw != x.values) s.out.table(label + "/raw/C_" + x.key.name(), series_table(x, true));
    s.out.table(label + "/P_" + x.key.name(), spectrum_table(power_spectrum(x, s.config.spectra.options)));
    if (!oracles.empty() && label != "exact") rms["C_" + x.key.name()] = rms_json(x, oracles[k]);
  }
  if (!rms.empty()) s.metrics[label]["rms"] = rms;
}

std::vector<CorrelationSeries> raw_copy(std::vector<CorrelationSeries> series) {
  for (auto& x : series) x.values = x.raw;
  return series;
}

std::pair<std::vector<double>, std::vector<double>> emit_dsf(Session& s, const std::string& stem,
                                                             const std::vector<CorrelationSeries>& series) {
  const SpectraBlock& sp = s.config.spectra;
  DSFOptions opts;
  opts.pairs = sp.pairs;
  opts.spectrum = sp.options;
  const DSFResult d = dynamical_structure_factor(series, sp.q, opts);
  const auto inten = intensity(d, sp.q_hat);
  s.out.table(stem, dsf_table(d.omegas, inten));
  json peaks = json::array();
  for (std::size_t m : top_bins(inten, 3)) peaks.push_back(d.omegas[m]);
  s.metrics[stem]["top_peaks"] = peaks;
  return {d.omegas, inten};
}

std::vector<CorrelationSeries> exact_series(const RunConfig& c, const std::vector<SeriesKey>& keys) {
  if (c.evolution.initial_state == "ground") return oracle_series(c, keys);
  return sweep(make_sweep(c, EvolutionMethod::kExact, std::nullopt, keys, std::nullopt), Rng(c.seed));
}

std::vector<CorrelationSeries> simulate(Session& s, const std::string& label, EvolutionMethod method,
                                        const std::optional<EstimatorConfig>& estimator) {
  const RunConfig& c = s.config;
  std::optional<ReffAnsatz> reff;
  if (method == EvolutionMethod::kReff) reff = obtain_reff(s, "");
  return sweep(make_sweep(c, method, estimator, c.spectra.series, reff), Rng(c.seed).child(label));
}

std::string method_label(const RunConfig& c) {
  std::string label = evolution_name(c.evolution.method);
  if (c.estimator.enabled) label += "_" + scheme_name(c.estimator.config.scheme);
  return label;
}

// sigma^x channel peak against the strongest xx spectral-sum line.
json gap_check(const RunConfig& c, const std::vector<CorrelationSeries>& series) {
  for (const auto& x : series) {
    if (!(x.key.alpha == Axis::X && x.key.beta == Axis::X && x.key.i == x.key.j)) continue;
    const PowerSpectrum p = power_spectrum(x, c.spectra.options);
    const auto terms = lehmann_terms(c.model, Axis::X, Axis::X, x.key.i, x.key.j);
    double gap = 0.0, weight = -1.0;
    for (const auto& t : terms) {
      if (std::abs(t.amplitude) > weight) {
        weight = std::abs(t.amplitude);
        gap = t.omega;
      }
    }
    const std::size_t bin = peak_bin(p.power);
    const double width = p.omegas.size() > 1 ? p.omegas[1] : 0.0;
    return {{"series", "C_" + x.key.name()},
            {"peak_omega", p.omegas[bin]},
            {"gap", gap},
            {"bin_width", width},
            {"within_one_bin", std::abs(p.omegas[bin] - gap) <= width}};
  }
  return nullptr;
}

void overlay(Session& s, const std::vector<double>& omegas, const std::vector<double>& inten, const std::string& prefix) {
  const ExperimentBlock& e = *s.config.experiment;
  const ExperimentTable table = ingest_experiment(e.path, e.energy_scale);
  Table t{{"energy", "intensity", "error"}, {}};
  for (const auto& r : table.rows) {
    t.rows.push_back({r.energy, r.intensity, r.error ? Cell(*r.error) : Cell(std::monostate{})});
  }
  s.out.table(prefix + "experiment", t);
  std::optional<std::pair<double, double>> window;
  if (e.middle_window) window = std::make_pair(e.middle_window->first * e.energy_scale, e.middle_window->second * e.energy_scale);
  const Overlay o = align_peaks(omegas, inten, table, window);
  s.metrics[prefix + "overlay"] = {{"simulated_peak", o.simulated_peak},
                                   {"experiment_peak", o.experiment_peak},
                                   {"offset", o.offset},
                                   {"bin_width", o.bin_width},
                                   {"rows", table.rows.size()},
                                   {"has_error_column", table.has_error_column}};
}

void heisenberg_recipe(RunConfig& c) {
  c.model = SpinModel::heisenberg(1.0, 1.0);
  c.evolution.dt = 0.3;
  c.evolution.n_steps = 100;
  c.evolution.initial_state = "ground";
  c.estimator.config.shots = 8000;
  c.reff.params_file.reset();
}

}  // namespace

int exact_spectrum(Session& s) {
  const RunConfig& c = s.config;
  const EigenSystem es = eigensystem(c.model);
  Table energies{{"index", "energy", "excitation", "state", "overlap"}, {}};
  json levels = json::array();
  for (Eigen::Index k = 0; k < es.energies.size(); ++k) {
    const StateLabel l = label_state(es.states.col(k));
    energies.rows.push_back({static_cast<std::int64_t>(k), es.energies(k), es.energies(k) - es.energies(0),
                             dimer_state_name(l.state), l.overlap});
    levels.push_back(es.energies(k));
  }
  s.out.table("energies", energies);
  s.metrics["energies"] = levels;

  if (c.evolution.initial_state == "ground") {
    Table lines{{"series", "omega", "re", "im"}, {}};
    for (const SeriesKey& k : c.spectra.series) {
      for (const LehmannTerm& t : lehmann_terms(c.model, k.alpha, k.beta, k.i, k.j)) {
        lines.rows.push_back({"C_" + k.name(), t.omega, t.amplitude.real(), t.amplitude.imag()});
      }
    }
    s.out.table("lehmann_terms", lines);
  }
  const auto series = exact_series(c, c.spectra.series);
  emit_series(s, "exact", series);
  emit_dsf(s, "exact/dsf", series);
  return kExitOk;
}

int trotter_sim(Session& s) {
  const RunConfig& c = s.config;
  const double dt = c.evolution.dt;
  const int n = c.evolution.n_steps;

  const CMatrix step = trotter_step_circuit(c.model, dt).to_matrix();
  const EigenSystem es = eigensystem(c.model);
  Table growth{{"step", "t", "error"}, {}};
  CMatrix product = CMatrix::Identity(4, 4);
  for (int k = 0; k < n; ++k) {
    growth.rows.push_back({static_cast<std::int64_t>(k), k * dt, spectral_norm(es.evolution(k * dt) - product)});
    product = step * product;
  }
  s.out.table("trotter_error", growth);

  Table conv{{"dt", "n_steps", "error"}, {}};
  std::vector<double> xs, ys;
  for (int halvings = 0; halvings < 3; ++halvings) {
    const int steps = n << halvings;
    const double h = dt / (1 << halvings);
    const double err = trotter_error(c.model, h, steps);
    conv.rows.push_back({h, static_cast<std::int64_t>(steps), err});
    if (err > 1e-10) {
      xs.push_back(std::log(h));
      ys.push_back(std::log(err));
    }
  }
  s.out.table("trotter_convergence", conv);
  if (xs.size() >= 2) {
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / ys.size();
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
      sxy += (xs[k] - mx) * (ys[k] - my);
      sxx += (xs[k] - mx) * (xs[k] - mx);
    }
    s.metrics["trotter"]["loglog_slope"] = sxy / sxx;
  }

  const std::string label = "trotter" + (c.estimator.enabled ? "_" + scheme_name(c.estimator.config.scheme) : std::string());
  emit_series(s, label, simulate(s, label, EvolutionMethod::kTrotter, configured_estimator(c)));
  return kExitOk;
}

int reff_train(Session& s) {
  const RunConfig& c = s.config;
  const ReffAnsatz a = obtain_reff(s, "", true);
  const EigenSystem es = eigensystem(c.model);
  const CMatrix v1 = a.unitary(1);
  Table ff{{"step", "t", "error_vs_exact", "error_vs_power"}, {}};
  CMatrix power = CMatrix::Identity(4, 4);
  for (int k = 0; k < c.evolution.n_steps; ++k) {
    const CMatrix vk = a.unitary(k);
    ff.rows.push_back({static_cast<std::int64_t>(k), k * c.evolution.dt,
                       spectral_norm(vk - es.evolution(k * c.evolution.dt)), spectral_norm(vk - power)});
    power = v1 * power;
  }
  s.out.table("reff_fast_forward", ff);
  return s.metrics["reff"]["converged"].get<bool>() ? kExitOk : kExitNumerical;
}

int correlate(Session& s) {
  const RunConfig& c = s.config;
  const std::string label = method_label(c);
  emit_series(s, label, simulate(s, label, c.evolution.method, configured_estimator(c)));
  return kExitOk;
}

int dsf(Session& s) {
  const RunConfig& c = s.config;
  const std::string label = method_label(c);
  const auto series = simulate(s, label, c.evolution.method, configured_estimator(c));
  emit_series(s, label, series);
  emit_dsf(s, label + "/dsf", series);
  if (c.estimator.enabled && c.estimator.config.mitigation) emit_dsf(s, label + "/raw/dsf", raw_copy(series));
  emit_dsf(s, "exact/dsf", exact_series(c, c.spectra.series));
  return kExitOk;
}

int compare_experiment(Session& s) {
  const RunConfig& c = s.config;
  if (!c.experiment) throw ConfigError("compare-experiment needs an 'experiment' block");
  const std::string label = method_label(c);
  const auto series = simulate(s, label, c.evolution.method, configured_estimator(c));
  emit_series(s, label, series);
  const auto [omegas, inten] = emit_dsf(s, label + "/dsf", series);
  overlay(s, omegas, inten, "");
  s.metrics["gap_check"] = gap_check(c, exact_series(c, c.spectra.series));
  return kExitOk;
}

int reproduce(Session& s, const std::string& figure) {
  RunConfig& c = s.config;
  if (figure == "fig2" || figure == "fig5") {
    heisenberg_recipe(c);
    c.estimator.enabled = true;
    c.spectra.series = figure == "fig2"
                           ? std::vector<SeriesKey>{SeriesKey::parse("xx_1_1")}
                           : std::vector<SeriesKey>{SeriesKey::parse("xx_1_1"), SeriesKey::parse("yy_1_1"),
                                                    SeriesKey::parse("zz_1_1")};
    emit_series(s, "exact", exact_series(c, c.spectra.series));
    const std::vector<Scheme> schemes =
        figure == "fig2" ? std::vector<Scheme>{Scheme::kIndirect, Scheme::kDirect} : std::vector<Scheme>{Scheme::kDirect};
    for (EvolutionMethod m : {EvolutionMethod::kTrotter, EvolutionMethod::kReff}) {
      for (Scheme scheme : schemes) {
        EstimatorConfig e = c.estimator.config;
        e.scheme = scheme;
        const std::string label = evolution_name(m) + "_" + scheme_name(scheme);
        emit_series(s, label, simulate(s, label, m, e));
      }
    }
    return kExitOk;
  }
  if (figure == "fig4") {
    heisenberg_recipe(c);
    c.estimator.enabled = true;
    c.spectra.series = same_site_keys();
    c.spectra.q = {0.0, 0.0, 0.0};
    c.spectra.q_hat.reset();
    emit_dsf(s, "exact/dsf", exact_series(c, c.spectra.series));
    for (Scheme scheme : {Scheme::kDirect, Scheme::kIndirect}) {
      EstimatorConfig e = c.estimator.config;
      e.scheme = scheme;
      const std::string label = "reff_" + scheme_name(scheme);
      const auto series = simulate(s, label, EvolutionMethod::kReff, e);
      emit_series(s, label, series);
      emit_dsf(s, label + "/dsf", series);
      if (e.mitigation) emit_dsf(s, label + "/raw/dsf", raw_copy(series));
    }
    return kExitOk;
  }
  if (figure == "fig8") {
    c.model = SpinModel::xy_zz(11.4, 0.16);
    c.evolution.dt = 0.1;
    c.evolution.n_steps = 100;
    c.evolution.initial_state = "ground";
    c.estimator.enabled = true;
    c.estimator.config.scheme = Scheme::kDirect;
    c.estimator.config.shots = 8000;
    c.spectra.series = same_site_keys();
    c.spectra.q_hat.reset();
    c.reff.params_file.reset();
    const auto exact = exact_series(c, c.spectra.series);
    emit_dsf(s, "exact/dsf", exact);
    const auto series = simulate(s, "reff_direct", EvolutionMethod::kReff, c.estimator.config);
    emit_series(s, "reff_direct", series);
    const auto [omegas, inten] = emit_dsf(s, "reff_direct/dsf", series);
    if (c.estimator.config.mitigation) emit_dsf(s, "reff_direct/raw/dsf", raw_copy(series));
    s.metrics["gap_check"] = gap_check(c, series);
    if (c.experiment) overlay(s, omegas, inten, "");
    return kExitOk;
  }
  throw ConfigError("unknown figure '" + figure + "' (expected fig2, fig4, fig5 or fig8)");
}

json manifest(const Session& s) {
  json m;
  m["tool"] = "qdimer";
  m["versions"] = {{"qdimer", kVersion},
                   {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                 std::to_string(EIGEN_MINOR_VERSION)}};
  m["command"] = s.command;
  m["seed"] = s.config.seed;
  const json config = s.config.to_json();
  m["config"] = config;
  m["config_sha256"] = sha256_hex(config.dump());
  json inputs = json::array();
  if (s.config.reff.params_file) {
    inputs.push_back({{"path", s.config.reff.params_file->filename().generic_string()},
                      {"sha256", file_digest(*s.config.reff.params_file)}});
  }
  if (s.config.experiment) {
    inputs.push_back({{"path", s.config.experiment->path.filename().generic_string()},
                      {"sha256", file_digest(s.config.experiment->path)}});
  }
  m["inputs"] = inputs;
  m["artifacts"] = s.out.listing();
  m["metrics"] = s.metrics;
  m["warnings"] = s.warnings;
  return m;
}

int run_command(const std::string& command, const std::string& figure, const RunConfig& config) {
  Session s(config, figure.empty() ? command : command + " " + figure);
  std::mutex warn_mutex;
  set_warning_sink([&](const std::string& msg) {
    std::lock_guard<std::mutex> lock(warn_mutex);
    s.warnings.push_back(msg);
    std::cerr << "warning: " << msg << '\n';
  });
  struct Restore {
    ~Restore() {
      set_warning_sink([](const std::string& msg) { std::cerr << "warning: " << msg << '\n'; });
    }
  } restore;

  int status = kExitOk;
  if (command == "exact-spectrum") {
    status = exact_spectrum(s);
  } else if (command == "trotter-sim") {
    status = trotter_sim(s);
  } else if (command == "reff-train") {
    status = reff_train(s);
  } else if (command == "correlate") {
    status = correlate(s);
  } else if (command == "dsf") {
    status = dsf(s);
  } else if (command == "compare-experiment") {
    status = compare_experiment(s);
  } else if (command == "reproduce") {
    status = reproduce(s, figure);
  } else {
    throw ConfigError("unknown command '" + command + "'");
  }

  const std::filesystem::path path = s.out.directory() / "manifest.json";
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << manifest(s).dump(2) << '\n';
  return status;
}

}  // namespace qdimer::cli
