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
#include <span>
#include <string>
#include <vector>

#include "qdimer/circuit.hpp"
#include "qdimer/statevector.hpp"

namespace qdimer {

enum class Scheme { kIndirect, kDirect };

Scheme parse_scheme(const std::string& name);
std::string scheme_name(Scheme s);

/// C(t) = <psi| U^dag sigma^alpha_i U sigma^beta_j |psi>.
struct Correlator {
  Axis alpha = Axis::Z;
  int i = 0;
  Axis beta = Axis::Z;
  int j = 0;
};

struct NoiseParameters {
  double p1 = 0.0;
  double p2 = 0.0;
  double readout_flip = 0.0;

  NoiseModel model(int n_qubits) const { return NoiseModel::uniform(n_qubits, p1, p2, readout_flip); }
  bool any() const { return p1 > 0.0 || p2 > 0.0 || readout_flip > 0.0; }
};

struct EstimatorConfig {
  Scheme scheme = Scheme::kDirect;
  std::uint64_t shots = 8000;
  /// Infinite-shot limit: exact outcome distributions, no sampling.
  bool exact_expectation = false;
  bool mitigation = true;
  NoiseParameters noise;
  /// Shots per prepared basis state when sampling the calibration matrix.
  std::uint64_t calibration_shots = 8000;

  void validate() const;
};

struct Estimate {
  cplx raw{0.0, 0.0};
  cplx mitigated{0.0, 0.0};
};

/// Column-stochastic M(observed, prepared) over measured bitstrings.
struct CalibrationMatrix {
  RMatrix m;
  double condition_number = 1.0;

  int n_bits() const;
};

/// Hadamard test on evolution.n_qubits() + 1 qubits, ancilla last. Ancilla <Z>
/// gives Re C for b = 0 and Im C for b = 1.
Circuit hadamard_test_circuit(const Circuit& evolution, const Correlator& c, int b);

/// Ancilla-free circuits: `real` measures G = sigma^beta_j mid-circuit; the
/// imaginary pair applies exp(+-i pi G / 4) before the evolution. Each ends with
/// a basis change so that sigma^alpha_i is read out as Z on qubit i.
struct DirectCircuits {
  Circuit real;
  Circuit imag_plus;
  Circuit imag_minus;
};

DirectCircuits direct_circuits(const Circuit& evolution, const Correlator& c);

/// Exact distribution over outcome bits: one bit per mid-circuit measurement
/// (0 for +1) followed by the computational-basis bits of `measured`.
std::vector<double> outcome_distribution(const Circuit& circuit, const QuantumState& initial,
                                         std::span<const int> measured, const NoiseModel* noise = nullptr);

Estimate indirect_estimate(const Circuit& evolution, const Correlator& c, const QuantumState& initial,
                           const EstimatorConfig& config, Rng& rng);
Estimate direct_estimate(const Circuit& evolution, const Correlator& c, const QuantumState& initial,
                         const EstimatorConfig& config, Rng& rng);
Estimate estimate(const Circuit& evolution, const Correlator& c, const QuantumState& initial,
                  const EstimatorConfig& config, Rng& rng);

/// Exact tensor product of `readout` when shots == 0, else empirical frequencies
/// with `shots` per prepared basis state. Throws NumericalError when the
/// condition number exceeds 1e6.
CalibrationMatrix build_calibration_matrix(std::span<const Confusion> readout, std::uint64_t shots, Rng* rng);

/// argmin ||M p - noisy||_2 over the probability simplex.
std::vector<double> mitigate(const std::vector<double>& noisy, const CalibrationMatrix& cal);
std::vector<double> mitigate(const Counts& counts, const CalibrationMatrix& cal);

/// Euclidean projection onto {p >= 0, sum p = 1}.
std::vector<double> project_to_simplex(const std::vector<double>& v);

}  // namespace qdimer
