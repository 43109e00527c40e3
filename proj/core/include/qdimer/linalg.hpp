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

#include <complex>
#include <span>
#include <string_view>

#include <Eigen/Dense>

namespace qdimer {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;
using RMatrix = Eigen::MatrixXd;

inline constexpr cplx kI{0.0, 1.0};

/// Spin / Pauli axis.
enum class Axis { X = 0, Y = 1, Z = 2 };

inline constexpr Axis kAxes[] = {Axis::X, Axis::Y, Axis::Z};

char axis_char(Axis a);
Axis axis_from_char(char c);

/// 2x2 Pauli matrix (identity for 'I').
CMatrix pauli(Axis a);
CMatrix pauli(char label);

CMatrix kron(const CMatrix& a, const CMatrix& b);

/// Tensor product of single-qubit Paulis, qubit 0 leftmost. Accepts "I", "X", "Y", "Z".
CMatrix pauli_string(std::string_view labels);

/// Embeds a gate acting on `targets` (in the gate's own qubit order) into an
/// n-qubit operator. Qubit 0 is the most significant bit of the basis index.
CMatrix embed(const CMatrix& gate, std::span<const int> targets, int n_qubits);

/// sigma^axis acting on `site` of an n-qubit register.
CMatrix site_pauli(Axis a, int site, int n_qubits);

double spectral_norm(const CMatrix& m);

bool is_unitary(const CMatrix& u, double tol = 1e-10);
bool is_hermitian(const CMatrix& m, double tol = 1e-12);

/// exp(-i * angle/2 * P) for an involutory P (P^2 = I).
CMatrix pauli_rotation(const CMatrix& p, double angle);

}  // namespace qdimer
