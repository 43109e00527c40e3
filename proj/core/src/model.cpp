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

#include "qdimer/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qdimer/errors.hpp"

namespace qdimer {

namespace {

constexpr double kDegeneracyTol = 1e-9;

void check_site(int site) {
  if (site < 0 || site >= SpinModel::n_sites) throw InvalidArgument("site index must be 0 or 1");
}

void fix_phase(Eigen::Ref<CVector> v) {
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    if (std::abs(v(k)) > 1e-8) {
      v *= std::abs(v(k)) / v(k);
      return;
    }
  }
}

}  // namespace

void SpinModel::validate() const {
  for (double c : {jxx, jyy, jzz, h}) {
    if (!std::isfinite(c)) throw InvalidArgument("spin model couplings must be finite");
  }
}

CMatrix build_hamiltonian(const SpinModel& m) {
  m.validate();
  CMatrix h = CMatrix::Zero(4, 4);
  h(0, 0) = 2.0 * m.h + m.jzz;
  h(1, 1) = -m.jzz;
  h(2, 2) = -m.jzz;
  h(3, 3) = -2.0 * m.h + m.jzz;
  h(1, 2) = h(2, 1) = m.jxx + m.jyy;
  h(0, 3) = h(3, 0) = m.jxx - m.jyy;
  return h;
}

RVector EigenSystem::excitations() const { return energies.array() - energies(0); }

CMatrix EigenSystem::evolution(double t) const {
  CVector phases(energies.size());
  for (Eigen::Index k = 0; k < energies.size(); ++k) phases(k) = std::exp(-kI * energies(k) * t);
  return states * phases.asDiagonal() * states.adjoint();
}

EigenSystem eigensystem(const SpinModel& model) {
  const CMatrix h = build_hamiltonian(model);
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(h);
  EigenSystem es{solver.eigenvalues(), solver.eigenvectors()};
  const Eigen::Index dim = h.rows();

  Eigen::Index start = 0;
  while (start < dim) {
    Eigen::Index end = start + 1;
    while (end < dim && es.energies(end) - es.energies(start) < kDegeneracyTol) ++end;
    const Eigen::Index size = end - start;
    if (size > 1) {
      const CMatrix block = es.states.middleCols(start, size);
      const CMatrix projector = block * block.adjoint();
      CMatrix basis(dim, size);
      Eigen::Index found = 0;
      for (Eigen::Index e = 0; e < dim && found < size; ++e) {
        CVector v = projector.col(e);
        for (Eigen::Index k = 0; k < found; ++k) v -= basis.col(k).dot(v) * basis.col(k);
        const double norm = v.norm();
        if (norm > 1e-6) basis.col(found++) = v / norm;
      }
      es.states.middleCols(start, size) = basis;
      // Mean of the cluster keeps exactly degenerate levels bit-identical.
      const double mean = es.energies.segment(start, size).mean();
      es.energies.segment(start, size).setConstant(mean);
    }
    start = end;
  }
  for (Eigen::Index k = 0; k < dim; ++k) fix_phase(es.states.col(k));
  return es;
}

DimerState parse_dimer_state(std::string_view label) {
  if (label == "singlet") return DimerState::kSinglet;
  if (label == "triplet+") return DimerState::kTripletPlus;
  if (label == "triplet0") return DimerState::kTripletZero;
  if (label == "triplet-") return DimerState::kTripletMinus;
  throw InvalidArgument("unknown dimer state label '" + std::string(label) + "'");
}

std::string dimer_state_name(DimerState s) {
  switch (s) {
    case DimerState::kSinglet: return "singlet";
    case DimerState::kTripletPlus: return "triplet+";
    case DimerState::kTripletZero: return "triplet0";
    case DimerState::kTripletMinus: return "triplet-";
  }
  return "?";
}

CVector dimer_vector(DimerState s) {
  const double r = std::numbers::sqrt2 / 2.0;
  CVector v = CVector::Zero(4);
  switch (s) {
    case DimerState::kSinglet: v << 0.0, r, -r, 0.0; break;
    case DimerState::kTripletPlus: v << 1.0, 0.0, 0.0, 0.0; break;
    case DimerState::kTripletZero: v << 0.0, r, r, 0.0; break;
    case DimerState::kTripletMinus: v << 0.0, 0.0, 0.0, 1.0; break;
  }
  return v;
}

QuantumState prepare_state(DimerState s) { return QuantumState::pure(dimer_vector(s)); }

QuantumState prepare_state(std::string_view label) { return prepare_state(parse_dimer_state(label)); }

StateLabel label_state(const CVector& v) {
  StateLabel best{DimerState::kSinglet, -1.0};
  for (DimerState s : {DimerState::kSinglet, DimerState::kTripletPlus, DimerState::kTripletZero,
                       DimerState::kTripletMinus}) {
    const double ov = std::norm(dimer_vector(s).dot(v));
    if (ov > best.overlap) best = {s, ov};
  }
  return best;
}

CMatrix exact_evolution(const SpinModel& model, double t) { return eigensystem(model).evolution(t); }

CVector ground_state(const EigenSystem& es) {
  if (es.energies.size() > 1 && es.energies(1) - es.energies(0) < kDegeneracyTol) {
    throw NumericalError("degenerate ground state (E0 = E1 = " + std::to_string(es.energies(0)) +
                         "); correlators are ill-defined");
  }
  return es.states.col(0);
}

std::vector<LehmannTerm> lehmann_terms(const SpinModel& model, Axis alpha, Axis beta, int i, int j) {
  check_site(i);
  check_site(j);
  const EigenSystem es = eigensystem(model);
  const CVector g = ground_state(es);
  const CVector left = site_pauli(alpha, i, 2) * g;   // s^a_i |0>, so <0|s^a_i|p> = <left|p>
  const CVector right = site_pauli(beta, j, 2) * g;   // s^b_j |0>
  std::vector<LehmannTerm> terms;
  for (Eigen::Index p = 0; p < es.energies.size(); ++p) {
    const double omega = es.energies(p) - es.energies(0);
    const cplx amp = left.dot(es.states.col(p)) * es.states.col(p).dot(right);
    auto it = std::find_if(terms.begin(), terms.end(),
                           [&](const LehmannTerm& t) { return std::abs(t.omega - omega) < kDegeneracyTol; });
    if (it != terms.end()) {
      it->amplitude += amp;
    } else {
      terms.push_back({omega, amp});
    }
  }
  std::erase_if(terms, [](const LehmannTerm& t) { return std::abs(t.amplitude) < 1e-12; });
  return terms;
}

cplx lehmann_correlation(const SpinModel& model, Axis alpha, Axis beta, int i, int j, double t) {
  cplx c = 0.0;
  for (const LehmannTerm& term : lehmann_terms(model, alpha, beta, i, j)) {
    c += term.amplitude * std::exp(-kI * term.omega * t);
  }
  return c;
}

}  // namespace qdimer
