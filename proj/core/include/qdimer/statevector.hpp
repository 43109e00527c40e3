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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qdimer/circuit.hpp"
#include "qdimer/linalg.hpp"
#include "qdimer/rng.hpp"

namespace qdimer {

inline constexpr int kMaxQubits = 3;

namespace detail {
struct StateAccess;
}

/// Pure state vector or density matrix over 1..3 qubits. Immutable once built;
/// operations return new states.
class QuantumState {
 public:
  static QuantumState pure(CVector amplitudes);
  static QuantumState mixed(CMatrix rho);
  static QuantumState basis(int n_qubits, std::uint64_t index);

  int n_qubits() const { return n_qubits_; }
  int dimension() const { return 1 << n_qubits_; }
  bool is_pure() const { return pure_; }

  /// Amplitudes; only valid for pure states.
  const CVector& amplitudes() const;
  /// Density matrix (outer product for pure states).
  CMatrix density() const;
  QuantumState to_mixed() const;

  /// Born probabilities of computational basis states.
  std::vector<double> probabilities() const;

  /// Expectation of an arbitrary operator on the full register.
  cplx expectation(const CMatrix& op) const;

 private:
  friend struct detail::StateAccess;
  QuantumState(int n, bool pure, CVector psi, CMatrix rho);

  int n_qubits_ = 0;
  bool pure_ = true;
  CVector psi_;
  CMatrix rho_;
};

/// Column-stochastic single-qubit confusion matrix: entry (observed, prepared).
using Confusion = Eigen::Matrix2d;

Confusion symmetric_flip(double p);
Confusion identity_confusion();

/// Gate noise plus readout error.
struct NoiseModel {
  double p1 = 0.0;  // depolarizing after each single-qubit gate
  double p2 = 0.0;  // two-qubit depolarizing after each two-qubit gate
  std::vector<Confusion> readout;  // per qubit; missing entries are ideal

  static NoiseModel none() { return {}; }
  static NoiseModel uniform(int n_qubits, double p1, double p2, double flip);

  const Confusion& confusion(int qubit) const;
  bool gate_noise() const { return p1 > 0.0 || p2 > 0.0; }
  void validate() const;
};

/// Histogram over bitstrings of `n_bits`; index bit (n_bits-1-k) is qubit k.
struct Counts {
  int n_bits = 0;
  std::vector<std::uint64_t> counts;

  std::uint64_t total() const;
  std::string label(std::size_t index) const;
  std::uint64_t at(std::string_view bitstring) const;
  std::vector<double> frequencies() const;
};

/// Applies `circuit`. Gate noise promotes the state to a density matrix.
/// Measurement gates need `rng`; passing nullptr for such circuits throws.
/// One gate, followed by depolarizing noise when `noise` has gate errors.
QuantumState apply_gate(const QuantumState& state, const Gate& gate, const NoiseModel* noise = nullptr,
                        Rng* rng = nullptr);

QuantumState apply_circuit(const QuantumState& state, const Circuit& circuit,
                           const NoiseModel* noise = nullptr, Rng* rng = nullptr);

/// Applies a single unitary gate (no noise).
QuantumState apply_unitary(const QuantumState& state, const CMatrix& u, std::span<const int> qubits);

/// Depolarizing channel rho -> (1-p) rho + p * (I/d tensor Tr_q rho) on `qubits`.
QuantumState depolarize(const QuantumState& state, std::span<const int> qubits, double p);

/// <P> for a Pauli string such as "ZZ" (length = n_qubits, qubit 0 first).
double expectation_pauli(const QuantumState& state, std::string_view pauli);

struct Branch {
  double probability = 0.0;
  std::optional<QuantumState> post_state;  // empty when probability is negligible
};

/// Deterministic projection onto the (1 + sign*G)/2 eigenspace of G.
/// `g` acts on `support` qubits (full register when empty).
Branch project_branch(const QuantumState& state, const CMatrix& g, int sign,
                      std::span<const int> support = {});

struct MeasureResult {
  int outcome = 1;
  QuantumState post_state;
  double probability = 0.0;
};

/// Samples outcome +/-1 of the projective measurement of G and collapses.
MeasureResult project_measure(const QuantumState& state, const CMatrix& g, Rng& rng,
                              std::span<const int> support = {});

/// Applies per-qubit readout confusion to a distribution over `n_bits`.
/// Marginal distribution over `qubits`, the first listed being the most significant bit.
std::vector<double> marginal(const std::vector<double>& probabilities, int n_qubits, std::span<const int> qubits);

std::vector<double> apply_readout(const std::vector<double>& probabilities,
                                  std::span<const Confusion> confusions);

/// Multinomial draw of `shots` outcomes from a probability vector.
Counts sample_distribution(const std::vector<double>& probabilities, int n_bits,
                           std::uint64_t shots, Rng& rng);

/// Finite-shot computational-basis sampling of all qubits with readout error.
Counts sample_counts(const QuantumState& state, std::uint64_t shots,
                     std::span<const Confusion> readout, Rng& rng);

}  // namespace qdimer
