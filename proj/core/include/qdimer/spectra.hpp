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

#include <array>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "qdimer/measure.hpp"
#include "qdimer/model.hpp"
#include "qdimer/reff.hpp"
#include "qdimer/rng.hpp"

namespace qdimer {

enum class EvolutionMethod { kExact, kTrotter, kReff };

EvolutionMethod parse_evolution(const std::string& name);
std::string evolution_name(EvolutionMethod m);

/// Identifies C^{alpha beta}_{ij}; sites are 0-based.
struct SeriesKey {
  Axis alpha = Axis::Z;
  Axis beta = Axis::Z;
  int i = 0;
  int j = 0;

  /// "xx_1_1" style label with 1-based sites.
  std::string name() const;
  static SeriesKey parse(const std::string& name);
  Correlator correlator() const { return {alpha, i, beta, j}; }

  auto operator<=>(const SeriesKey&) const = default;
};

/// All 36 (alpha, beta, i, j) combinations for the dimer.
std::vector<SeriesKey> all_keys();
/// alpha = beta and i = j (6 series).
std::vector<SeriesKey> same_site_keys();
/// alpha = beta, every (i, j) (12 series).
std::vector<SeriesKey> diagonal_keys();

struct CorrelationSeries {
  SeriesKey key;
  double dt = 0.3;
  std::vector<double> times;
  std::vector<cplx> values;
  /// Before readout mitigation; equal to `values` when none was applied.
  std::vector<cplx> raw;
  std::string provenance;

  std::size_t size() const { return values.size(); }
};

struct SweepConfig {
  SpinModel model;
  EvolutionMethod method = EvolutionMethod::kExact;
  double dt = 0.3;
  int n_steps = 100;
  std::vector<SeriesKey> keys = same_site_keys();
  /// Circuit estimator; absent means exact state arithmetic on the evolution.
  std::optional<EstimatorConfig> estimator;
  /// Trained ansatz, required for the REFF method.
  std::optional<ReffAnsatz> reff;
  /// Defaults to the ground state of `model`.
  std::optional<QuantumState> initial;
  int threads = 1;

  void validate() const;
};

/// Evolution circuit for time index k (t = k dt).
Circuit evolution_circuit(const SweepConfig& config, int k);

/// One series per key on the grid t_k = k dt, k = 0..n_steps-1. Every
/// (key, k) sample draws from its own labelled child of `rng`.
std::vector<CorrelationSeries> sweep(const SweepConfig& config, const Rng& rng);

/// Spectral-sum reference series.
CorrelationSeries lehmann_series(const SpinModel& model, const SeriesKey& key, double dt, int n_steps);

struct SpectrumOptions {
  bool window = false;  // Hann taper
  int zero_pad = 1;     // transform length = zero_pad * N
};

/// F_m = dt sum_k w_k C_k exp(+i omega_m t_k), omega_m = 2 pi m / (M dt).
/// The + sign puts exp(-i Omega t) at omega = +Omega.
std::vector<cplx> fourier(const std::vector<cplx>& values, double dt, const SpectrumOptions& options = {});
std::vector<double> frequency_grid(std::size_t n, double dt, const SpectrumOptions& options = {});

struct PowerSpectrum {
  std::vector<double> omegas;
  std::vector<double> power;  // |F|^2 / (2 pi)
};

PowerSpectrum power_spectrum(const CorrelationSeries& series, const SpectrumOptions& options = {});

using Vec3 = std::array<double, 3>;

struct DSFResult {
  Vec3 q{0.0, 0.0, 0.0};
  std::vector<double> omegas;
  /// S^{alpha beta}(Q, omega) and its power |S|^2 / (2 pi).
  std::map<std::pair<Axis, Axis>, std::vector<cplx>> s;
  std::map<std::pair<Axis, Axis>, std::vector<double>> power;
};

struct DSFOptions {
  /// Site coordinates; default R1 = 0, R2 = x.
  std::vector<Vec3> positions = {{0.0, 0.0, 0.0}, {1.0, 0.0, 0.0}};
  /// (i, j) pairs summed per channel; empty means every pair present.
  std::vector<std::pair<int, int>> pairs;
  double n_cells = 1.0;
  SpectrumOptions spectrum;
};

/// S^{ab}(Q, w) = (1 / N_cells) sum_ij exp(-i Q.(R_i - R_j)) F[C^{ab}_ij](w).
DSFResult dynamical_structure_factor(const std::vector<CorrelationSeries>& series, const Vec3& q,
                                     const DSFOptions& options = {});

/// sum_ab (delta_ab - qhat_a qhat_b) P^{ab}; nullopt sums the alpha = beta
/// channels with unit weight.
std::vector<double> intensity(const DSFResult& dsf, const std::optional<Vec3>& q_hat = std::nullopt);

enum class Part { kReal, kImag, kComplex };

struct RmsReport {
  double rms_time = 0.0;
  double rms_freq = 0.0;
};

double rms(const std::vector<cplx>& a, const std::vector<cplx>& b, Part part = Part::kComplex,
           std::size_t begin = 0, std::size_t end = static_cast<std::size_t>(-1));
/// RMS over the first, middle and last thirds of the grid.
std::array<double, 3> rms_by_third(const std::vector<cplx>& a, const std::vector<cplx>& b, Part part);
RmsReport rms_report(const CorrelationSeries& series, const CorrelationSeries& oracle);

std::size_t peak_bin(const std::vector<double>& values);
/// Indices of the `count` largest entries, largest first.
std::vector<std::size_t> top_bins(const std::vector<double>& values, std::size_t count);

/// CSV writers (12 significant digits).
std::string format_number(double x);
void write_series_csv(std::ostream& out, const CorrelationSeries& series);
void write_spectrum_csv(std::ostream& out, const PowerSpectrum& spectrum);
void write_dsf_csv(std::ostream& out, const std::vector<double>& omegas, const std::vector<double>& intensity);

}  // namespace qdimer
