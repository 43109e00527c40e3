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

#include <span>
#include <string>
#include <vector>

#include "qdimer/linalg.hpp"

namespace qdimer {

enum class GateKind {
  kUnitary,          // one- or two-qubit unitary
  kControlledPauli,  // qubits = {control, target}
  kDepolarize,       // explicit depolarizing channel on its qubits
  kMeasure,          // projective measurement of a Hermitian involution G
};

struct Gate {
  GateKind kind = GateKind::kUnitary;
  std::string name;
  std::vector<int> qubits;
  // Unitary / controlled-Pauli: the operator on `qubits` (in that order).
  // Measure: the observable G.
  CMatrix matrix;
  double probability = 0.0;

  // Parameter slot. When slot >= 0 the gate is exp(-i angle/2 * generator) with
  // angle = coefficient * params[slot] + offset, and `matrix` is filled on bind().
  int slot = -1;
  double coefficient = 1.0;
  double offset = 0.0;
  CMatrix generator;

  bool parameterized() const { return slot >= 0; }
  bool two_qubit() const { return qubits.size() == 2 && kind != GateKind::kMeasure; }
};

/// Ordered gate / channel / measurement sequence over a fixed register.
class Circuit {
 public:
  explicit Circuit(int n_qubits);

  int n_qubits() const { return n_qubits_; }
  const std::vector<Gate>& gates() const { return gates_; }
  bool empty() const { return gates_.empty(); }
  std::size_t size() const { return gates_.size(); }

  /// Global phase e^{i phase} carried alongside the gates so that unitary()
  /// reproduces a target operator exactly, not just up to phase.
  double global_phase() const { return global_phase_; }

  Circuit& h(int q);
  Circuit& x(int q);
  Circuit& y(int q);
  Circuit& z(int q);
  Circuit& s(int q);
  Circuit& sdg(int q);
  Circuit& rx(int q, double angle);
  Circuit& ry(int q, double angle);
  Circuit& rz(int q, double angle);
  Circuit& rotation(int q, Axis axis, double angle);
  /// Parameterized exp(-i (coefficient * params[slot] + offset)/2 * sigma^axis).
  Circuit& rotation(int q, Axis axis, int slot, double coefficient = 1.0, double offset = 0.0);

  Circuit& cx(int control, int target);
  Circuit& cy(int control, int target);
  Circuit& cz(int control, int target);
  Circuit& controlled_pauli(int control, int target, Axis axis);

  Circuit& unitary(std::vector<int> qubits, const CMatrix& u, std::string name = "u");
  Circuit& depolarize(std::vector<int> qubits, double probability);
  Circuit& measure(std::vector<int> support, const CMatrix& g, std::string name = "measure");
  Circuit& phase(double angle);

  /// Appends `other`. `qubit_map[k]` gives the qubit in this circuit that
  /// `other`'s qubit k lands on; empty means identity.
  Circuit& append(const Circuit& other, std::span<const int> qubit_map = {});

  Circuit repeated(int times) const;

  /// Fills every parameter slot from `params`; the result has no open slots.
  Circuit bind(std::span<const double> params) const;

  /// Reversed, conjugated sequence. Parameterized gates stay parameterized with
  /// negated coefficient and offset. Throws on channels or measurements.
  Circuit adjoint() const;

  /// Dense unitary of the whole circuit (binding slots from `params` if any).
  CMatrix to_matrix(std::span<const double> params = {}) const;

  int two_qubit_gate_count() const;
  int parameter_count() const;

 private:
  Circuit& push(Gate gate);
  void check_qubit(int q) const;

  int n_qubits_;
  std::vector<Gate> gates_;
  double global_phase_ = 0.0;
};

}  // namespace qdimer
