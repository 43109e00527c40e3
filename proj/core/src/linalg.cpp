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

#include "qdimer/linalg.hpp"

#include <cmath>

#include "qdimer/errors.hpp"

namespace qdimer {

char axis_char(Axis a) {
  switch (a) {
    case Axis::X: return 'x';
    case Axis::Y: return 'y';
    case Axis::Z: return 'z';
  }
  return '?';
}

Axis axis_from_char(char c) {
  switch (c) {
    case 'x': case 'X': return Axis::X;
    case 'y': case 'Y': return Axis::Y;
    case 'z': case 'Z': return Axis::Z;
    default: break;
  }
  throw InvalidArgument(std::string("unknown axis '") + c + "'");
}

CMatrix pauli(Axis a) {
  CMatrix m = CMatrix::Zero(2, 2);
  switch (a) {
    case Axis::X:
      m(0, 1) = 1.0;
      m(1, 0) = 1.0;
      break;
    case Axis::Y:
      m(0, 1) = -kI;
      m(1, 0) = kI;
      break;
    case Axis::Z:
      m(0, 0) = 1.0;
      m(1, 1) = -1.0;
      break;
  }
  return m;
}

CMatrix pauli(char label) {
  if (label == 'I' || label == 'i') return CMatrix::Identity(2, 2);
  return pauli(axis_from_char(label));
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

CMatrix pauli_string(std::string_view labels) {
  if (labels.empty()) throw InvalidArgument("empty Pauli string");
  CMatrix out = pauli(labels.front());
  for (std::size_t k = 1; k < labels.size(); ++k) out = kron(out, pauli(labels[k]));
  return out;
}

CMatrix embed(const CMatrix& gate, std::span<const int> targets, int n_qubits) {
  const int k = static_cast<int>(targets.size());
  const Eigen::Index dim = Eigen::Index{1} << n_qubits;
  if (gate.rows() != (Eigen::Index{1} << k) || gate.cols() != gate.rows()) {
    throw InvalidArgument("gate dimension does not match target count");
  }
  std::uint64_t target_mask = 0;
  for (int t : targets) {
    if (t < 0 || t >= n_qubits) throw InvalidArgument("target qubit out of range");
    const std::uint64_t bit = std::uint64_t{1} << (n_qubits - 1 - t);
    if (target_mask & bit) throw InvalidArgument("repeated target qubit");
    target_mask |= bit;
  }
  auto sub_index = [&](std::uint64_t idx) {
    std::uint64_t s = 0;
    for (int t : targets) s = (s << 1) | ((idx >> (n_qubits - 1 - t)) & 1U);
    return static_cast<Eigen::Index>(s);
  };
  CMatrix out = CMatrix::Zero(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r) {
    for (Eigen::Index c = 0; c < dim; ++c) {
      if ((static_cast<std::uint64_t>(r) & ~target_mask) != (static_cast<std::uint64_t>(c) & ~target_mask)) continue;
      out(r, c) = gate(sub_index(r), sub_index(c));
    }
  }
  return out;
}

CMatrix site_pauli(Axis a, int site, int n_qubits) {
  const int targets[] = {site};
  return embed(pauli(a), targets, n_qubits);
}

double spectral_norm(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMatrix> svd(m);
  return svd.singularValues()(0);
}

bool is_unitary(const CMatrix& u, double tol) {
  if (u.rows() != u.cols()) return false;
  return (u.adjoint() * u - CMatrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff() <= tol;
}

bool is_hermitian(const CMatrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

CMatrix pauli_rotation(const CMatrix& p, double angle) {
  const auto id = CMatrix::Identity(p.rows(), p.cols());
  return std::cos(angle / 2.0) * id - kI * std::sin(angle / 2.0) * p;
}

}  // namespace qdimer
