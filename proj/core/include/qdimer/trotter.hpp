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

#include <vector>

#include "qdimer/circuit.hpp"
#include "qdimer/model.hpp"

namespace qdimer {

enum class TrotterTerm { kXX, kYY, kZZ, kField };

/// First-order product-formula plan: exp(-iH dt) ~ prod_j exp(-i H_j dt) over
/// `order`, repeated `n_steps` times.
struct TrotterPlan {
  double dt = 0.3;
  std::vector<TrotterTerm> order = {TrotterTerm::kXX, TrotterTerm::kYY, TrotterTerm::kZZ, TrotterTerm::kField};
  int n_steps = 1;

  /// dt > 0, n_steps >= 0, and every nonzero term of `model` appears exactly once.
  void validate(const SpinModel& model) const;
};

/// exp(-i (a XX + b YY + c ZZ)) on qubits (q0, q1) with three CNOTs, exact
/// including global phase.
Circuit two_qubit_exchange(double a, double b, double c);

/// One Trotter step. Consecutive exchange terms commute on a dimer and are fused
/// into one three-CNOT block; an isolated exchange term uses two CNOTs.
Circuit trotter_step_circuit(const SpinModel& model, double dt);
Circuit trotter_step_circuit(const SpinModel& model, const TrotterPlan& plan);

/// The step circuit repeated n_steps times (empty for zero steps).
Circuit trotter_evolution(const SpinModel& model, double dt, int n_steps);
Circuit trotter_evolution(const SpinModel& model, const TrotterPlan& plan);

/// Spectral-norm distance || exp(-iH N dt) - U_step^N ||_2.
double trotter_error(const SpinModel& model, double dt, int n_steps);
double trotter_error(const SpinModel& model, const TrotterPlan& plan);

}  // namespace qdimer
