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

#include <string>
#include <string_view>
#include <vector>

#include "qdimer/linalg.hpp"
#include "qdimer/statevector.hpp"

namespace qdimer {

/// Two-site spin model
///   H = Jxx X1X2 + Jyy Y1Y2 + Jzz Z1Z2 + h (Z1 + Z2)
/// in Pauli units with hbar = 1 for time evolution. Sites are 0-based qubit indices.
struct SpinModel {
  double jxx = 1.0;
  double jyy = 1.0;
  double jzz = 1.0;
  double h = 1.0;

  static SpinModel heisenberg(double j, double h) { return {j, j, j, h}; }
  /// XY exchange with a ZZ perturbation: Jxy (X1X2 + Y1Y2) + Jz Z1Z2.
  static SpinModel xy_zz(double jxy, double jz) { return {jxy, jxy, jz, 0.0}; }

  static constexpr int n_sites = 2;

  void validate() const;
};

/// Hermitian 4x4 Hamiltonian in the computational basis (qubit 0 leftmost, |0> = up).
CMatrix build_hamiltonian(const SpinModel& model);

struct EigenSystem {
  RVector energies;  // ascending
  CMatrix states;    // column k is the eigenvector of energies(k)

  /// E_k - E_0.
  RVector excitations() const;
  /// U(t) = sum_k exp(-i E_k t) |v_k><v_k|.
  CMatrix evolution(double t) const;
};

/// Eigen-decomposition with deterministic vectors: degenerate clusters are
/// re-spanned by Gram-Schmidt over the computational basis in index order, and
/// every vector's first significant component is made real positive.
EigenSystem eigensystem(const SpinModel& model);

enum class DimerState { kSinglet, kTripletPlus, kTripletZero, kTripletMinus };

DimerState parse_dimer_state(std::string_view label);
std::string dimer_state_name(DimerState s);
CVector dimer_vector(DimerState s);
QuantumState prepare_state(DimerState s);
QuantumState prepare_state(std::string_view label);

struct StateLabel {
  DimerState state;
  double overlap;  // |<label|v>|^2
};

/// Singlet/triplet label with the largest overlap.
StateLabel label_state(const CVector& v);

CMatrix exact_evolution(const SpinModel& model, double t);

/// Ground state; throws NumericalError if the lowest level is degenerate.
CVector ground_state(const EigenSystem& es);

/// One Lehmann term A_p exp(-i omega_p t) of a correlator.
struct LehmannTerm {
  double omega;  // E_p - E_0
  cplx amplitude;  // <0|sigma^alpha_i|p><p|sigma^beta_j|0>
};

/// Lehmann expansion of C^{ab}_{ij}(t) = <0| e^{iHt} s^a_i e^{-iHt} s^b_j |0>;
/// terms with the same excitation energy (within 1e-9) are merged and
/// vanishing ones dropped.
std::vector<LehmannTerm> lehmann_terms(const SpinModel& model, Axis alpha, Axis beta, int i, int j);

cplx lehmann_correlation(const SpinModel& model, Axis alpha, Axis beta, int i, int j, double t);

}  // namespace qdimer
