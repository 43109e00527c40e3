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

#include "qdimer/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <numeric>
#include <set>

#include "qdimer/errors.hpp"
#include "qdimer/parallel.hpp"
#include "qdimer/trotter.hpp"

namespace qdimer {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_grid(const CorrelationSeries& s) {
  if (s.values.empty()) throw InvalidArgument("empty correlation series");
  if (!(s.dt > 0.0)) throw InvalidArgument("series timestep must be positive");
  if (s.times.size() != s.values.size()) throw InvalidArgument("series times and values differ in length");
  for (std::size_t k = 0; k < s.times.size(); ++k) {
    if (std::abs(s.times[k] - static_cast<double>(k) * s.dt) > 1e-9 * (1.0 + std::abs(s.times[k]))) {
      throw InvalidArgument("series " + s.key.name() + " is not on a uniform grid starting at 0");
    }
  }
}

std::vector<double> grid(double dt, int n) {
  std::vector<double> t(n);
  for (int k = 0; k < n; ++k) t[k] = k * dt;
  return t;
}

double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

}  // namespace

EvolutionMethod parse_evolution(const std::string& name) {
  if (name == "exact") return EvolutionMethod::kExact;
  if (name == "trotter") return EvolutionMethod::kTrotter;
  if (name == "reff") return EvolutionMethod::kReff;
  throw InvalidArgument("unknown evolution method '" + name + "'");
}

std::string evolution_name(EvolutionMethod m) {
  switch (m) {
    case EvolutionMethod::kExact: return "exact";
    case EvolutionMethod::kTrotter: return "trotter";
    case EvolutionMethod::kReff: return "reff";
  }
  return "exact";
}

std::string SeriesKey::name() const {
  return std::string{axis_char(alpha), axis_char(beta)} + "_" + std::to_string(i + 1) + "_" + std::to_string(j + 1);
}

SeriesKey SeriesKey::parse(const std::string& name) {
  if (name.size() != 6 || name[2] != '_' || name[4] != '_') {
    throw InvalidArgument("series key '" + name + "' must look like xx_1_2");
  }
  SeriesKey k;
  k.alpha = axis_from_char(name[0]);
  k.beta = axis_from_char(name[1]);
  k.i = name[3] - '1';
  k.j = name[5] - '1';
  if (k.i < 0 || k.i >= SpinModel::n_sites || k.j < 0 || k.j >= SpinModel::n_sites) {
    throw InvalidArgument("series key '" + name + "' has a site outside 1..2");
  }
  return k;
}

std::vector<SeriesKey> all_keys() {
  std::vector<SeriesKey> out;
  for (Axis a : kAxes) {
    for (Axis b : kAxes) {
      for (int i = 0; i < SpinModel::n_sites; ++i) {
        for (int j = 0; j < SpinModel::n_sites; ++j) out.push_back({a, b, i, j});
      }
    }
  }
  return out;
}

std::vector<SeriesKey> same_site_keys() {
  std::vector<SeriesKey> out;
  for (Axis a : kAxes) {
    for (int i = 0; i < SpinModel::n_sites; ++i) out.push_back({a, a, i, i});
  }
  return out;
}

std::vector<SeriesKey> diagonal_keys() {
  std::vector<SeriesKey> out;
  for (const SeriesKey& k : all_keys()) {
    if (k.alpha == k.beta) out.push_back(k);
  }
  return out;
}

void SweepConfig::validate() const {
  model.validate();
  if (!(dt > 0.0)) throw InvalidArgument("dt must be positive");
  if (n_steps < 1) throw InvalidArgument("n_steps must be at least 1");
  if (keys.empty()) throw InvalidArgument("no correlation series requested");
  for (const SeriesKey& k : keys) {
    if (k.i < 0 || k.i >= SpinModel::n_sites || k.j < 0 || k.j >= SpinModel::n_sites) {
      throw InvalidArgument("series site out of range");
    }
  }
  if (method == EvolutionMethod::kReff && !reff) throw InvalidArgument("REFF evolution requested without trained parameters");
  if (estimator) estimator->validate();
  if (initial && initial->n_qubits() != SpinModel::n_sites) throw InvalidArgument("initial state must have two qubits");
}

Circuit evolution_circuit(const SweepConfig& config, int k) {
  switch (config.method) {
    case EvolutionMethod::kExact: {
      Circuit c(2);
      if (k > 0) c.unitary({0, 1}, exact_evolution(config.model, k * config.dt), "U");
      return c;
    }
    case EvolutionMethod::kTrotter:
      return trotter_evolution(config.model, config.dt, k);
    case EvolutionMethod::kReff:
      if (!config.reff) throw InvalidArgument("REFF evolution requested without trained parameters");
      return config.reff->circuit(k);
  }
  return Circuit(2);
}

std::vector<CorrelationSeries> sweep(const SweepConfig& config, const Rng& rng) {
  config.validate();
  const QuantumState initial =
      config.initial ? *config.initial : QuantumState::pure(ground_state(eigensystem(config.model)));
  const int n = config.n_steps;

  std::vector<Circuit> circuits;
  circuits.reserve(n);
  for (int k = 0; k < n; ++k) circuits.push_back(evolution_circuit(config, k));

  std::string provenance = evolution_name(config.method);
  if (config.estimator) {
    provenance += "/" + scheme_name(config.estimator->scheme);
    provenance += config.estimator->mitigation ? "/mitigated" : "/raw";
  } else {
    provenance += "/state";
  }

  std::vector<CorrelationSeries> out;
  for (const SeriesKey& key : config.keys) {
    CorrelationSeries s;
    s.key = key;
    s.dt = config.dt;
    s.times = grid(config.dt, n);
    s.values.assign(n, cplx(0.0, 0.0));
    s.raw.assign(n, cplx(0.0, 0.0));
    s.provenance = provenance;
    out.push_back(std::move(s));
  }

  std::vector<CMatrix> unitaries;
  if (!config.estimator) {
    unitaries.resize(n);
    parallel_for(n, config.threads, [&](std::size_t k) { unitaries[k] = circuits[k].to_matrix(); });
  }
  const CMatrix rho = initial.density();

  const std::size_t tasks = out.size() * static_cast<std::size_t>(n);
  parallel_for(tasks, config.threads, [&](std::size_t task) {
    CorrelationSeries& s = out[task / n];
    const int k = static_cast<int>(task % n);
    if (!config.estimator) {
      const CMatrix& u = unitaries[k];
      const CMatrix a = site_pauli(s.key.alpha, s.key.i, 2);
      const CMatrix b = site_pauli(s.key.beta, s.key.j, 2);
      const cplx c = (u.adjoint() * a * u * b * rho).trace();
      s.values[k] = c;
      s.raw[k] = c;
      return;
    }
    Rng local = rng.child(s.key.name()).child(static_cast<std::uint64_t>(k));
    const Estimate e = estimate(circuits[k], s.key.correlator(), initial, *config.estimator, local);
    s.raw[k] = e.raw;
    s.values[k] = config.estimator->mitigation ? e.mitigated : e.raw;
  });
  return out;
}

CorrelationSeries lehmann_series(const SpinModel& model, const SeriesKey& key, double dt, int n_steps) {
  if (!(dt > 0.0) || n_steps < 1) throw InvalidArgument("invalid time grid");
  const auto terms = lehmann_terms(model, key.alpha, key.beta, key.i, key.j);
  CorrelationSeries s;
  s.key = key;
  s.dt = dt;
  s.times = grid(dt, n_steps);
  s.provenance = "lehmann";
  for (double t : s.times) {
    cplx c(0.0, 0.0);
    for (const LehmannTerm& term : terms) c += term.amplitude * std::exp(cplx(0.0, -term.omega * t));
    s.values.push_back(c);
  }
  s.raw = s.values;
  return s;
}

std::vector<double> frequency_grid(std::size_t n, double dt, const SpectrumOptions& options) {
  if (options.zero_pad < 1) throw InvalidArgument("zero_pad must be at least 1");
  const std::size_t m = n * static_cast<std::size_t>(options.zero_pad);
  std::vector<double> w(m);
  for (std::size_t k = 0; k < m; ++k) w[k] = kTwoPi * static_cast<double>(k) / (static_cast<double>(m) * dt);
  return w;
}

std::vector<cplx> fourier(const std::vector<cplx>& values, double dt, const SpectrumOptions& options) {
  if (values.empty()) throw InvalidArgument("cannot transform an empty series");
  if (!(dt > 0.0)) throw InvalidArgument("dt must be positive");
  const std::size_t n = values.size();
  const auto omegas = frequency_grid(n, dt, options);
  std::vector<cplx> weighted(values);
  if (options.window && n > 1) {
    for (std::size_t k = 0; k < n; ++k) {
      weighted[k] *= 0.5 * (1.0 - std::cos(kTwoPi * static_cast<double>(k) / static_cast<double>(n - 1)));
    }
  }
  std::vector<cplx> out(omegas.size());
  for (std::size_t m = 0; m < omegas.size(); ++m) {
    cplx acc(0.0, 0.0);
    for (std::size_t k = 0; k < n; ++k) acc += weighted[k] * std::polar(1.0, omegas[m] * static_cast<double>(k) * dt);
    out[m] = dt * acc;
  }
  return out;
}

PowerSpectrum power_spectrum(const CorrelationSeries& series, const SpectrumOptions& options) {
  check_grid(series);
  PowerSpectrum p;
  p.omegas = frequency_grid(series.size(), series.dt, options);
  for (const cplx& f : fourier(series.values, series.dt, options)) p.power.push_back(std::norm(f) / kTwoPi);
  return p;
}

DSFResult dynamical_structure_factor(const std::vector<CorrelationSeries>& series, const Vec3& q,
                                     const DSFOptions& options) {
  if (series.empty()) throw InvalidArgument("no series for the structure factor");
  if (!(options.n_cells > 0.0)) throw InvalidArgument("n_cells must be positive");
  const double dt = series.front().dt;
  const std::size_t n = series.front().size();
  std::map<std::pair<Axis, Axis>, std::map<std::pair<int, int>, const CorrelationSeries*>> channels;
  for (const CorrelationSeries& s : series) {
    check_grid(s);
    if (s.size() != n || std::abs(s.dt - dt) > 1e-12) throw InvalidArgument("series grids differ");
    for (int site : {s.key.i, s.key.j}) {
      if (site < 0 || site >= static_cast<int>(options.positions.size())) {
        throw InvalidArgument("no position for site " + std::to_string(site + 1));
      }
    }
    channels[{s.key.alpha, s.key.beta}][{s.key.i, s.key.j}] = &s;
  }

  DSFResult r;
  r.q = q;
  r.omegas = frequency_grid(n, dt, options.spectrum);
  for (const auto& [channel, by_pair] : channels) {
    std::vector<std::pair<int, int>> pairs = options.pairs;
    if (pairs.empty()) {
      for (const auto& entry : by_pair) pairs.push_back(entry.first);
    }
    std::vector<cplx> acc(r.omegas.size(), cplx(0.0, 0.0));
    for (const auto& pair : pairs) {
      auto it = by_pair.find(pair);
      if (it == by_pair.end()) {
        throw InvalidArgument("missing series " + SeriesKey{channel.first, channel.second, pair.first, pair.second}.name());
      }
      const Vec3& ri = options.positions.at(pair.first);
      const Vec3& rj = options.positions.at(pair.second);
      const Vec3 rij{ri[0] - rj[0], ri[1] - rj[1], ri[2] - rj[2]};
      const cplx phase = std::polar(1.0 / options.n_cells, -dot(q, rij));
      const auto f = fourier(it->second->values, dt, options.spectrum);
      for (std::size_t m = 0; m < acc.size(); ++m) acc[m] += phase * f[m];
    }
    std::vector<double> pw(acc.size());
    for (std::size_t m = 0; m < acc.size(); ++m) pw[m] = std::norm(acc[m]) / kTwoPi;
    r.s[channel] = std::move(acc);
    r.power[channel] = std::move(pw);
  }
  return r;
}

std::vector<double> intensity(const DSFResult& dsf, const std::optional<Vec3>& q_hat) {
  std::vector<double> out(dsf.omegas.size(), 0.0);
  if (!q_hat) {
    bool any = false;
    for (Axis a : kAxes) {
      auto it = dsf.power.find({a, a});
      if (it == dsf.power.end()) continue;
      any = true;
      for (std::size_t m = 0; m < out.size(); ++m) out[m] += it->second[m];
    }
    if (!any) throw InvalidArgument("isotropic intensity needs at least one alpha = beta channel");
    return out;
  }
  const Vec3& u = *q_hat;
  if (std::abs(std::sqrt(dot(u, u)) - 1.0) > 1e-9) throw InvalidArgument("q_hat must be a unit vector");
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      const double w = (a == b ? 1.0 : 0.0) - u[a] * u[b];
      if (std::abs(w) < 1e-15) continue;
      auto it = dsf.power.find({kAxes[a], kAxes[b]});
      if (it == dsf.power.end()) {
        throw InvalidArgument(std::string("missing structure-factor channel ") + axis_char(kAxes[a]) + axis_char(kAxes[b]));
      }
      for (std::size_t m = 0; m < out.size(); ++m) out[m] += w * it->second[m];
    }
  }
  return out;
}

double rms(const std::vector<cplx>& a, const std::vector<cplx>& b, Part part, std::size_t begin, std::size_t end) {
  if (a.size() != b.size()) throw InvalidArgument("RMS grids differ in length");
  end = std::min(end, a.size());
  if (begin >= end) throw InvalidArgument("empty RMS window");
  double acc = 0.0;
  for (std::size_t k = begin; k < end; ++k) {
    const cplx d = a[k] - b[k];
    acc += part == Part::kReal ? d.real() * d.real() : part == Part::kImag ? d.imag() * d.imag() : std::norm(d);
  }
  return std::sqrt(acc / static_cast<double>(end - begin));
}

std::array<double, 3> rms_by_third(const std::vector<cplx>& a, const std::vector<cplx>& b, Part part) {
  const std::size_t n = a.size();
  if (n < 3) throw InvalidArgument("need at least three samples to split into thirds");
  const std::size_t t1 = n / 3, t2 = 2 * n / 3;
  return {rms(a, b, part, 0, t1), rms(a, b, part, t1, t2), rms(a, b, part, t2, n)};
}

RmsReport rms_report(const CorrelationSeries& series, const CorrelationSeries& oracle) {
  check_grid(series);
  check_grid(oracle);
  if (series.size() != oracle.size() || std::abs(series.dt - oracle.dt) > 1e-12) {
    throw InvalidArgument("RMS report grids differ");
  }
  RmsReport r;
  r.rms_time = rms(series.values, oracle.values);
  const auto ps = power_spectrum(series).power;
  const auto po = power_spectrum(oracle).power;
  double acc = 0.0;
  for (std::size_t m = 0; m < ps.size(); ++m) acc += (ps[m] - po[m]) * (ps[m] - po[m]);
  r.rms_freq = std::sqrt(acc / static_cast<double>(ps.size()));
  return r;
}

std::size_t peak_bin(const std::vector<double>& values) {
  if (values.empty()) throw InvalidArgument("empty spectrum");
  return static_cast<std::size_t>(std::max_element(values.begin(), values.end()) - values.begin());
}

std::vector<std::size_t> top_bins(const std::vector<double>& values, std::size_t count) {
  std::vector<std::size_t> idx(values.size());
  std::iota(idx.begin(), idx.end(), 0);
  count = std::min(count, idx.size());
  std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(count), idx.end(),
                    [&](std::size_t a, std::size_t b) { return values[a] > values[b] || (values[a] == values[b] && a < b); });
  idx.resize(count);
  return idx;
}

std::string format_number(double x) {
  if (x == 0.0) return "0";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

void write_series_csv(std::ostream& out, const CorrelationSeries& series) {
  out << "t,re,im\n";
  for (std::size_t k = 0; k < series.size(); ++k) {
    out << format_number(series.times[k]) << ',' << format_number(series.values[k].real()) << ','
        << format_number(series.values[k].imag()) << '\n';
  }
}

void write_spectrum_csv(std::ostream& out, const PowerSpectrum& spectrum) {
  out << "omega,power\n";
  for (std::size_t m = 0; m < spectrum.omegas.size(); ++m) {
    out << format_number(spectrum.omegas[m]) << ',' << format_number(spectrum.power[m]) << '\n';
  }
}

void write_dsf_csv(std::ostream& out, const std::vector<double>& omegas, const std::vector<double>& values) {
  if (omegas.size() != values.size()) throw InvalidArgument("DSF columns differ in length");
  out << "omega,intensity\n";
  for (std::size_t m = 0; m < omegas.size(); ++m) out << format_number(omegas[m]) << ',' << format_number(values[m]) << '\n';
}

}  // namespace qdimer
