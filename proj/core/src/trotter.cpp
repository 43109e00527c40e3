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

#include "qdimer/trotter.hpp"

#include <algorithm>
#include <numbers>

#include "qdimer/errors.hpp"

namespace qdimer {

namespace {

constexpr double kPi = std::numbers::pi;

double coefficient(const SpinModel& m, TrotterTerm t) {
  switch (t) {
    case TrotterTerm::kXX: return m.jxx;
    case TrotterTerm::kYY: return m.jyy;
    case TrotterTerm::kZZ: return m.jzz;
    case TrotterTerm::kField: return m.h;
  }
  return 0.0;
}

// exp(-i theta ZZ) with two CNOTs.
void append_zz(Circuit& c, double theta) {
  c.cx(0, 1).rz(1, 2.0 * theta).cx(0, 1);
}

// exp(-i theta PP) for a single exchange term, rotated into the ZZ frame.
void append_single_exchange(Circuit& c, TrotterTerm term, double theta) {
  switch (term) {
    case TrotterTerm::kZZ:
      append_zz(c, theta);
      break;
    case TrotterTerm::kXX:
      c.h(0).h(1);
      append_zz(c, theta);
      c.h(0).h(1);
      break;
    case TrotterTerm::kYY:
      // (H S^dag)^dag Z (H S^dag) = Y
      c.sdg(0).sdg(1).h(0).h(1);
      append_zz(c, theta);
      c.h(0).h(1).s(0).s(1);
      break;
    case TrotterTerm::kField:
      break;
  }
}

}  // namespace

void TrotterPlan::validate(const SpinModel& model) const {
  if (!(dt > 0.0)) throw InvalidArgument("Trotter timestep must be positive");
  if (n_steps < 0) throw InvalidArgument("Trotter step count must be non-negative");
  for (TrotterTerm t : {TrotterTerm::kXX, TrotterTerm::kYY, TrotterTerm::kZZ, TrotterTerm::kField}) {
    const auto n = std::count(order.begin(), order.end(), t);
    if (n > 1) throw InvalidArgument("Trotter term listed more than once");
    if (n == 0 && coefficient(model, t) != 0.0) throw InvalidArgument("Trotter order omits a nonzero term");
  }
}

Circuit two_qubit_exchange(double a, double b, double c) {
  Circuit out(2);
  out.rz(1, kPi / 2.0)
      .cx(1, 0)
      .rz(0, 2.0 * c - kPi / 2.0)
      .ry(1, 2.0 * a - kPi / 2.0)
      .cx(0, 1)
      .ry(1, kPi / 2.0 - 2.0 * b)
      .cx(1, 0)
      .rz(0, -kPi / 2.0)
      .phase(-kPi / 4.0);
  return out;
}

Circuit trotter_step_circuit(const SpinModel& model, double dt) {
  TrotterPlan plan;
  plan.dt = dt;
  return trotter_step_circuit(model, plan);
}

Circuit trotter_step_circuit(const SpinModel& model, const TrotterPlan& plan) {
  model.validate();
  plan.validate(model);
  Circuit step(2);
  std::size_t k = 0;
  while (k < plan.order.size()) {
    const TrotterTerm term = plan.order[k];
    if (term == TrotterTerm::kField) {
      if (model.h != 0.0) step.rz(0, 2.0 * model.h * plan.dt).rz(1, 2.0 * model.h * plan.dt);
      ++k;
      continue;
    }
    // Maximal run of exchange terms with nonzero coefficient.
    std::vector<TrotterTerm> run;
    while (k < plan.order.size() && plan.order[k] != TrotterTerm::kField) {
      if (coefficient(model, plan.order[k]) != 0.0) run.push_back(plan.order[k]);
      ++k;
    }
    if (run.size() == 1) {
      append_single_exchange(step, run.front(), coefficient(model, run.front()) * plan.dt);
    } else if (run.size() > 1) {
      double a = 0.0, b = 0.0, c = 0.0;
      for (TrotterTerm t : run) {
        if (t == TrotterTerm::kXX) a = model.jxx * plan.dt;
        if (t == TrotterTerm::kYY) b = model.jyy * plan.dt;
        if (t == TrotterTerm::kZZ) c = model.jzz * plan.dt;
      }
      step.append(two_qubit_exchange(a, b, c));
    }
  }
  return step;
}

Circuit trotter_evolution(const SpinModel& model, double dt, int n_steps) {
  TrotterPlan plan;
  plan.dt = dt;
  plan.n_steps = n_steps;
  return trotter_evolution(model, plan);
}

Circuit trotter_evolution(const SpinModel& model, const TrotterPlan& plan) {
  plan.validate(model);
  return trotter_step_circuit(model, plan).repeated(plan.n_steps);
}

double trotter_error(const SpinModel& model, double dt, int n_steps) {
  TrotterPlan plan;
  plan.dt = dt;
  plan.n_steps = n_steps;
  return trotter_error(model, plan);
}

double trotter_error(const SpinModel& model, const TrotterPlan& plan) {
  plan.validate(model);
  const CMatrix step = trotter_step_circuit(model, plan).to_matrix();
  CMatrix product = CMatrix::Identity(4, 4);
  for (int k = 0; k < plan.n_steps; ++k) product = step * product;
  return spectral_norm(exact_evolution(model, plan.dt * plan.n_steps) - product);
}

}  // namespace qdimer
