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

#include "qdimer/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qdimer/errors.hpp"

namespace qdimer {

namespace {

CMatrix hadamard() {
  CMatrix m(2, 2);
  const double r = std::numbers::sqrt2 / 2.0;
  m << r, r, r, -r;
  return m;
}

CMatrix phase_gate(cplx p) {
  CMatrix m = CMatrix::Identity(2, 2);
  m(1, 1) = p;
  return m;
}

CMatrix controlled(const CMatrix& u) {
  CMatrix m = CMatrix::Identity(4, 4);
  m.bottomRightCorner(2, 2) = u;
  return m;
}

}  // namespace

Circuit::Circuit(int n_qubits) : n_qubits_(n_qubits) {
  if (n_qubits < 1) throw InvalidArgument("circuit needs at least one qubit");
}

void Circuit::check_qubit(int q) const {
  if (q < 0 || q >= n_qubits_) {
    throw InvalidArgument("qubit index " + std::to_string(q) + " out of range for " +
                          std::to_string(n_qubits_) + "-qubit circuit");
  }
}

Circuit& Circuit::push(Gate gate) {
  for (int q : gate.qubits) check_qubit(q);
  for (std::size_t a = 0; a < gate.qubits.size(); ++a) {
    for (std::size_t b = a + 1; b < gate.qubits.size(); ++b) {
      if (gate.qubits[a] == gate.qubits[b]) throw InvalidArgument("repeated qubit in gate " + gate.name);
    }
  }
  if (!gate.parameterized() && gate.kind != GateKind::kDepolarize) {
    const Eigen::Index dim = Eigen::Index{1} << gate.qubits.size();
    if (gate.matrix.rows() != dim || gate.matrix.cols() != dim) {
      throw InvalidArgument("matrix size mismatch for gate " + gate.name);
    }
    if ((gate.kind == GateKind::kUnitary || gate.kind == GateKind::kControlledPauli) &&
        !is_unitary(gate.matrix, 1e-12)) {
      throw InvalidArgument("gate " + gate.name + " is not unitary");
    }
    if (gate.kind == GateKind::kMeasure) {
      if (!is_hermitian(gate.matrix, 1e-10) ||
          (gate.matrix * gate.matrix - CMatrix::Identity(dim, dim)).cwiseAbs().maxCoeff() > 1e-10) {
        throw InvalidArgument("measured observable must be a Hermitian involution");
      }
    }
  }
  gates_.push_back(std::move(gate));
  return *this;
}

Circuit& Circuit::h(int q) { return unitary({q}, hadamard(), "h"); }
Circuit& Circuit::x(int q) { return unitary({q}, pauli(Axis::X), "x"); }
Circuit& Circuit::y(int q) { return unitary({q}, pauli(Axis::Y), "y"); }
Circuit& Circuit::z(int q) { return unitary({q}, pauli(Axis::Z), "z"); }
Circuit& Circuit::s(int q) { return unitary({q}, phase_gate(kI), "s"); }
Circuit& Circuit::sdg(int q) { return unitary({q}, phase_gate(-kI), "sdg"); }
Circuit& Circuit::rx(int q, double angle) { return rotation(q, Axis::X, angle); }
Circuit& Circuit::ry(int q, double angle) { return rotation(q, Axis::Y, angle); }
Circuit& Circuit::rz(int q, double angle) { return rotation(q, Axis::Z, angle); }

Circuit& Circuit::rotation(int q, Axis axis, double angle) {
  return unitary({q}, pauli_rotation(pauli(axis), angle), std::string("r") + axis_char(axis));
}

Circuit& Circuit::rotation(int q, Axis axis, int slot, double coefficient, double offset) {
  if (slot < 0) throw InvalidArgument("parameter slot must be non-negative");
  Gate g;
  g.kind = GateKind::kUnitary;
  g.name = std::string("r") + axis_char(axis);
  g.qubits = {q};
  g.slot = slot;
  g.coefficient = coefficient;
  g.offset = offset;
  g.generator = pauli(axis);
  return push(std::move(g));
}

Circuit& Circuit::cx(int c, int t) { return controlled_pauli(c, t, Axis::X); }
Circuit& Circuit::cy(int c, int t) { return controlled_pauli(c, t, Axis::Y); }
Circuit& Circuit::cz(int c, int t) { return controlled_pauli(c, t, Axis::Z); }

Circuit& Circuit::controlled_pauli(int c, int t, Axis axis) {
  Gate g;
  g.kind = GateKind::kControlledPauli;
  g.name = std::string("c") + axis_char(axis);
  g.qubits = {c, t};
  g.matrix = controlled(pauli(axis));
  return push(std::move(g));
}

Circuit& Circuit::unitary(std::vector<int> qubits, const CMatrix& u, std::string name) {
  if (qubits.empty() || qubits.size() > 2) throw InvalidArgument("unitary gates act on one or two qubits");
  Gate g;
  g.kind = GateKind::kUnitary;
  g.name = std::move(name);
  g.qubits = std::move(qubits);
  g.matrix = u;
  return push(std::move(g));
}

Circuit& Circuit::depolarize(std::vector<int> qubits, double probability) {
  if (!(probability >= 0.0 && probability <= 1.0)) throw InvalidArgument("depolarizing probability outside [0, 1]");
  if (qubits.empty() || qubits.size() > 2) throw InvalidArgument("depolarizing channel acts on one or two qubits");
  Gate g;
  g.kind = GateKind::kDepolarize;
  g.name = "depolarize";
  g.qubits = std::move(qubits);
  g.probability = probability;
  return push(std::move(g));
}

Circuit& Circuit::measure(std::vector<int> support, const CMatrix& g, std::string name) {
  Gate gate;
  gate.kind = GateKind::kMeasure;
  gate.name = std::move(name);
  gate.qubits = std::move(support);
  gate.matrix = g;
  return push(std::move(gate));
}

Circuit& Circuit::phase(double angle) {
  global_phase_ += angle;
  return *this;
}

Circuit& Circuit::append(const Circuit& other, std::span<const int> qubit_map) {
  if (!qubit_map.empty() && static_cast<int>(qubit_map.size()) != other.n_qubits()) {
    throw InvalidArgument("qubit map size must equal appended circuit width");
  }
  if (qubit_map.empty() && other.n_qubits() > n_qubits_) {
    throw InvalidArgument("appended circuit is wider than target");
  }
  for (Gate g : other.gates_) {
    if (!qubit_map.empty()) {
      for (int& q : g.qubits) q = qubit_map[q];
    }
    push(std::move(g));
  }
  global_phase_ += other.global_phase_;
  return *this;
}

Circuit Circuit::repeated(int times) const {
  if (times < 0) throw InvalidArgument("repetition count must be non-negative");
  Circuit out(n_qubits_);
  out.gates_.reserve(gates_.size() * static_cast<std::size_t>(times));
  for (int k = 0; k < times; ++k) {
    out.gates_.insert(out.gates_.end(), gates_.begin(), gates_.end());
    out.global_phase_ += global_phase_;
  }
  return out;
}

Circuit Circuit::bind(std::span<const double> params) const {
  Circuit out(n_qubits_);
  out.global_phase_ = global_phase_;
  out.gates_.reserve(gates_.size());
  for (Gate g : gates_) {
    if (g.parameterized()) {
      if (g.slot >= static_cast<int>(params.size())) {
        throw InvalidArgument("parameter slot " + std::to_string(g.slot) + " not supplied");
      }
      g.matrix = pauli_rotation(g.generator, g.coefficient * params[g.slot] + g.offset);
      g.slot = -1;
    }
    out.gates_.push_back(std::move(g));
  }
  return out;
}

Circuit Circuit::adjoint() const {
  Circuit out(n_qubits_);
  out.global_phase_ = -global_phase_;
  out.gates_.reserve(gates_.size());
  for (auto it = gates_.rbegin(); it != gates_.rend(); ++it) {
    Gate g = *it;
    if (g.kind == GateKind::kDepolarize || g.kind == GateKind::kMeasure) {
      throw InvalidArgument("adjoint of a circuit containing channels or measurements");
    }
    if (g.parameterized()) {
      g.coefficient = -g.coefficient;
      g.offset = -g.offset;
    } else {
      g.matrix = g.matrix.adjoint().eval();
    }
    if (g.name.size() < 4 || g.name.compare(g.name.size() - 4, 4, "_dag") != 0) {
      g.name += "_dag";
    } else {
      g.name.resize(g.name.size() - 4);
    }
    out.gates_.push_back(std::move(g));
  }
  return out;
}

CMatrix Circuit::to_matrix(std::span<const double> params) const {
  const Eigen::Index dim = Eigen::Index{1} << n_qubits_;
  CMatrix u = CMatrix::Identity(dim, dim);
  for (const Gate& g : gates_) {
    if (g.kind == GateKind::kDepolarize || g.kind == GateKind::kMeasure) {
      throw InvalidArgument("circuit with channels or measurements has no unitary");
    }
    CMatrix local = g.matrix;
    if (g.parameterized()) {
      if (g.slot >= static_cast<int>(params.size())) {
        throw InvalidArgument("parameter slot " + std::to_string(g.slot) + " not supplied");
      }
      local = pauli_rotation(g.generator, g.coefficient * params[g.slot] + g.offset);
    }
    u = embed(local, g.qubits, n_qubits_) * u;
  }
  return std::exp(kI * global_phase_) * u;
}

int Circuit::two_qubit_gate_count() const {
  return static_cast<int>(std::count_if(gates_.begin(), gates_.end(), [](const Gate& g) {
    return (g.kind == GateKind::kUnitary || g.kind == GateKind::kControlledPauli) && g.qubits.size() == 2;
  }));
}

int Circuit::parameter_count() const {
  int n = 0;
  for (const Gate& g : gates_) n = std::max(n, g.slot + 1);
  return n;
}

}  // namespace qdimer
