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

#include "qdimer/statevector.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qdimer/errors.hpp"

namespace qdimer {

namespace {

constexpr double kStateTol = 1e-10;

int qubits_for_dimension(Eigen::Index dim) {
  for (int n = 1; n <= kMaxQubits; ++n) {
    if ((Eigen::Index{1} << n) == dim) return n;
  }
  throw InvalidArgument("state dimension must be 2, 4 or 8");
}

std::vector<int> full_support(int n) {
  std::vector<int> s(n);
  std::iota(s.begin(), s.end(), 0);
  return s;
}

// All Pauli strings over k qubits as matrices, identity first.
const std::vector<CMatrix>& pauli_basis(int k) {
  static const std::vector<CMatrix> one = {pauli('I'), pauli('X'), pauli('Y'), pauli('Z')};
  static const std::vector<CMatrix> two = [] {
    std::vector<CMatrix> out;
    for (const auto& a : one) {
      for (const auto& b : one) out.push_back(kron(a, b));
    }
    return out;
  }();
  return k == 1 ? one : two;
}

}  // namespace

namespace detail {

// Internal constructors for states produced by trace-preserving operations; the
// public factories validate, these only renormalize.
struct StateAccess {
  static QuantumState pure(CVector v) {
    v /= v.norm();
    const int n = qubits_for_dimension(v.size());
    return QuantumState(n, true, std::move(v), CMatrix());
  }
  static QuantumState mixed(CMatrix rho) {
    rho = 0.5 * (rho + rho.adjoint()).eval();
    rho /= rho.trace().real();
    const int n = qubits_for_dimension(rho.rows());
    return QuantumState(n, false, CVector(), std::move(rho));
  }
};

}  // namespace detail

using detail::StateAccess;

QuantumState::QuantumState(int n, bool pure, CVector psi, CMatrix rho)
    : n_qubits_(n), pure_(pure), psi_(std::move(psi)), rho_(std::move(rho)) {}

QuantumState QuantumState::pure(CVector amplitudes) {
  const int n = qubits_for_dimension(amplitudes.size());
  const double norm = amplitudes.squaredNorm();
  if (std::abs(norm - 1.0) > 1e-12) {
    throw InvalidArgument("pure state must have unit norm (got squared norm " + std::to_string(norm) + ")");
  }
  return QuantumState(n, true, std::move(amplitudes), CMatrix());
}

QuantumState QuantumState::mixed(CMatrix rho) {
  if (rho.rows() != rho.cols()) throw InvalidArgument("density matrix must be square");
  const int n = qubits_for_dimension(rho.rows());
  if (!is_hermitian(rho, 1e-12)) throw InvalidArgument("density matrix must be Hermitian");
  if (std::abs(rho.trace() - cplx(1.0)) > 1e-12) throw InvalidArgument("density matrix must have unit trace");
  Eigen::SelfAdjointEigenSolver<CMatrix> es(rho, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-10) throw InvalidArgument("density matrix must be positive semidefinite");
  return QuantumState(n, false, CVector(), std::move(rho));
}

QuantumState QuantumState::basis(int n_qubits, std::uint64_t index) {
  if (n_qubits < 1 || n_qubits > kMaxQubits) throw InvalidArgument("1 to 3 qubits supported");
  const Eigen::Index dim = Eigen::Index{1} << n_qubits;
  if (index >= static_cast<std::uint64_t>(dim)) throw InvalidArgument("basis index out of range");
  CVector v = CVector::Zero(dim);
  v(static_cast<Eigen::Index>(index)) = 1.0;
  return pure(std::move(v));
}

const CVector& QuantumState::amplitudes() const {
  if (!pure_) throw InvalidArgument("mixed state has no amplitude vector");
  return psi_;
}

CMatrix QuantumState::density() const { return pure_ ? CMatrix(psi_ * psi_.adjoint()) : rho_; }

QuantumState QuantumState::to_mixed() const {
  if (!pure_) return *this;
  return QuantumState(n_qubits_, false, CVector(), density());
}

std::vector<double> QuantumState::probabilities() const {
  std::vector<double> p(dimension());
  for (int k = 0; k < dimension(); ++k) {
    p[k] = pure_ ? std::norm(psi_(k)) : std::max(0.0, rho_(k, k).real());
  }
  return p;
}

cplx QuantumState::expectation(const CMatrix& op) const {
  if (op.rows() != dimension() || op.cols() != dimension()) throw InvalidArgument("operator dimension mismatch");
  if (pure_) return psi_.dot(op * psi_);
  return (rho_ * op).trace();
}

Confusion symmetric_flip(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("flip probability outside [0, 1]");
  Confusion c;
  c << 1.0 - p, p, p, 1.0 - p;
  return c;
}

Confusion identity_confusion() { return Confusion::Identity(); }

NoiseModel NoiseModel::uniform(int n_qubits, double p1, double p2, double flip) {
  NoiseModel m;
  m.p1 = p1;
  m.p2 = p2;
  m.readout.assign(n_qubits, symmetric_flip(flip));
  m.validate();
  return m;
}

const Confusion& NoiseModel::confusion(int qubit) const {
  static const Confusion ideal = Confusion::Identity();
  if (qubit < 0 || qubit >= static_cast<int>(readout.size())) return ideal;
  return readout[qubit];
}

void NoiseModel::validate() const {
  if (!(p1 >= 0.0 && p1 <= 1.0) || !(p2 >= 0.0 && p2 <= 1.0)) {
    throw InvalidArgument("depolarizing probabilities must lie in [0, 1]");
  }
  for (const auto& c : readout) {
    if ((c.array() < 0.0).any()) throw InvalidArgument("confusion matrix entries must be non-negative");
    for (int j = 0; j < 2; ++j) {
      if (std::abs(c.col(j).sum() - 1.0) > 1e-12) throw InvalidArgument("confusion columns must sum to 1");
    }
  }
}

std::uint64_t Counts::total() const { return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0}); }

std::string Counts::label(std::size_t index) const {
  std::string s(n_bits, '0');
  for (int k = 0; k < n_bits; ++k) {
    if ((index >> (n_bits - 1 - k)) & 1U) s[k] = '1';
  }
  return s;
}

std::uint64_t Counts::at(std::string_view bitstring) const {
  if (static_cast<int>(bitstring.size()) != n_bits) throw InvalidArgument("bitstring length mismatch");
  std::size_t idx = 0;
  for (char c : bitstring) {
    if (c != '0' && c != '1') throw InvalidArgument("bitstring must contain only 0 and 1");
    idx = (idx << 1) | static_cast<std::size_t>(c == '1');
  }
  return counts.at(idx);
}

std::vector<double> Counts::frequencies() const {
  const double n = static_cast<double>(total());
  std::vector<double> f(counts.size(), 0.0);
  if (n == 0.0) return f;
  for (std::size_t k = 0; k < counts.size(); ++k) f[k] = static_cast<double>(counts[k]) / n;
  return f;
}

QuantumState apply_unitary(const QuantumState& state, const CMatrix& u, std::span<const int> qubits) {
  const CMatrix full = embed(u, qubits, state.n_qubits());
  if (state.is_pure()) {
    return StateAccess::pure(full * state.amplitudes());
  }
  return StateAccess::mixed(full * state.density() * full.adjoint());
}

QuantumState depolarize(const QuantumState& state, std::span<const int> qubits, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("depolarizing probability outside [0, 1]");
  const int k = static_cast<int>(qubits.size());
  if (k < 1 || k > 2) throw InvalidArgument("depolarizing acts on one or two qubits");
  if (p == 0.0) return state;
  const CMatrix rho = state.density();
  CMatrix out = (1.0 - p) * rho;
  const double w = p / static_cast<double>(1 << (2 * k));
  for (const CMatrix& pk : pauli_basis(k)) {
    const CMatrix full = embed(pk, qubits, state.n_qubits());
    out += w * (full * rho * full.adjoint());
  }
  return StateAccess::mixed(std::move(out));
}

double expectation_pauli(const QuantumState& state, std::string_view label) {
  if (static_cast<int>(label.size()) != state.n_qubits()) {
    throw InvalidArgument("Pauli string length must equal the qubit count");
  }
  for (char c : label) {
    if (std::string_view("IXYZixyz").find(c) == std::string_view::npos) {
      throw InvalidArgument(std::string("malformed Pauli label '") + std::string(label) + "'");
    }
  }
  const double v = state.expectation(pauli_string(label)).real();
  return std::clamp(v, -1.0, 1.0);
}

Branch project_branch(const QuantumState& state, const CMatrix& g, int sign, std::span<const int> support) {
  if (sign != 1 && sign != -1) throw InvalidArgument("branch sign must be +1 or -1");
  const std::vector<int> all = full_support(state.n_qubits());
  if (support.empty()) support = all;
  const Eigen::Index k = Eigen::Index{1} << support.size();
  if (g.rows() != k || (g * g - CMatrix::Identity(k, k)).cwiseAbs().maxCoeff() > 1e-10) {
    throw InvalidArgument("G must be an involution (G^2 = I) on its support");
  }
  const CMatrix gf = embed(g, support, state.n_qubits());
  const CMatrix proj = 0.5 * (CMatrix::Identity(gf.rows(), gf.cols()) + static_cast<double>(sign) * gf);
  Branch b;
  if (state.is_pure()) {
    CVector v = proj * state.amplitudes();
    b.probability = std::clamp(v.squaredNorm(), 0.0, 1.0);
    if (b.probability > 1e-14) b.post_state = StateAccess::pure(std::move(v));
  } else {
    CMatrix rho = proj * state.density() * proj;
    b.probability = std::clamp(rho.trace().real(), 0.0, 1.0);
    if (b.probability > 1e-14) b.post_state = StateAccess::mixed(std::move(rho));
  }
  return b;
}

MeasureResult project_measure(const QuantumState& state, const CMatrix& g, Rng& rng, std::span<const int> support) {
  Branch plus = project_branch(state, g, +1, support);
  Branch minus = project_branch(state, g, -1, support);
  const double total = plus.probability + minus.probability;
  const double u = rng.uniform();
  bool take_plus = u * total < plus.probability;
  // A branch below the projection floor cannot be normalized; take the other one.
  if (take_plus && !plus.post_state) take_plus = false;
  if (!take_plus && !minus.post_state) take_plus = true;
  if (take_plus) return {+1, *plus.post_state, plus.probability / total};
  return {-1, *minus.post_state, minus.probability / total};
}

QuantumState apply_gate(const QuantumState& state, const Gate& g, const NoiseModel* noise, Rng* rng) {
  const bool noisy = noise != nullptr && noise->gate_noise();
  switch (g.kind) {
    case GateKind::kUnitary:
    case GateKind::kControlledPauli: {
      if (g.parameterized()) throw InvalidArgument("circuit has unbound parameter slots");
      QuantumState cur = apply_unitary(noisy ? state.to_mixed() : state, g.matrix, g.qubits);
      if (noisy) {
        const double p = g.qubits.size() == 1 ? noise->p1 : noise->p2;
        if (p > 0.0) cur = depolarize(cur, g.qubits, p);
      }
      return cur;
    }
    case GateKind::kDepolarize:
      return depolarize(state, g.qubits, g.probability);
    case GateKind::kMeasure:
      if (rng == nullptr) throw InvalidArgument("projective measurement in circuit requires an rng");
      return project_measure(state, g.matrix, *rng, g.qubits).post_state;
  }
  return state;
}

QuantumState apply_circuit(const QuantumState& state, const Circuit& circuit, const NoiseModel* noise, Rng* rng) {
  if (circuit.n_qubits() != state.n_qubits()) throw InvalidArgument("circuit and state widths differ");
  const bool noisy = noise != nullptr && noise->gate_noise();
  QuantumState cur = noisy ? state.to_mixed() : state;
  for (const Gate& g : circuit.gates()) cur = apply_gate(cur, g, noise, rng);
  if (cur.is_pure() && circuit.global_phase() != 0.0) {
    return QuantumState::pure(cur.amplitudes() * std::polar(1.0, circuit.global_phase()));
  }
  return cur;
}

std::vector<double> marginal(const std::vector<double>& probabilities, int n_qubits, std::span<const int> qubits) {
  if (probabilities.size() != (std::size_t{1} << n_qubits)) throw InvalidArgument("distribution width mismatch");
  const int m = static_cast<int>(qubits.size());
  for (int q : qubits) {
    if (q < 0 || q >= n_qubits) throw InvalidArgument("marginal qubit out of range");
  }
  std::vector<double> out(std::size_t{1} << m, 0.0);
  for (std::size_t idx = 0; idx < probabilities.size(); ++idx) {
    std::size_t key = 0;
    for (int k = 0; k < m; ++k) key = (key << 1) | ((idx >> (n_qubits - 1 - qubits[k])) & 1U);
    out[key] += probabilities[idx];
  }
  return out;
}

std::vector<double> apply_readout(const std::vector<double>& probabilities, std::span<const Confusion> confusions) {
  const int n = static_cast<int>(confusions.size());
  if (probabilities.size() != (std::size_t{1} << n)) throw InvalidArgument("readout width mismatch");
  std::vector<double> cur = probabilities;
  for (int q = 0; q < n; ++q) {
    const Confusion& c = confusions[q];
    const std::size_t bit = std::size_t{1} << (n - 1 - q);
    std::vector<double> next(cur.size(), 0.0);
    for (std::size_t idx = 0; idx < cur.size(); ++idx) {
      const int truth = (idx & bit) ? 1 : 0;
      const std::size_t base = idx & ~bit;
      next[base] += c(0, truth) * cur[idx];
      next[base | bit] += c(1, truth) * cur[idx];
    }
    cur = std::move(next);
  }
  return cur;
}

Counts sample_distribution(const std::vector<double>& probabilities, int n_bits, std::uint64_t shots, Rng& rng) {
  if (shots < 1) throw InvalidArgument("shots must be at least 1");
  if (probabilities.size() != (std::size_t{1} << n_bits)) throw InvalidArgument("distribution width mismatch");
  Counts out{n_bits, std::vector<std::uint64_t>(probabilities.size(), 0)};
  double remaining_mass = 0.0;
  for (double p : probabilities) remaining_mass += std::max(0.0, p);
  std::uint64_t remaining = shots;
  for (std::size_t k = 0; k + 1 < probabilities.size() && remaining > 0; ++k) {
    const double p = std::max(0.0, probabilities[k]);
    const double q = remaining_mass > 0.0 ? std::clamp(p / remaining_mass, 0.0, 1.0) : 0.0;
    const auto draw = std::binomial_distribution<std::uint64_t>(remaining, q)(rng.engine());
    out.counts[k] = draw;
    remaining -= draw;
    remaining_mass -= p;
  }
  out.counts.back() += remaining;
  return out;
}

Counts sample_counts(const QuantumState& state, std::uint64_t shots, std::span<const Confusion> readout, Rng& rng) {
  std::vector<Confusion> conf(readout.begin(), readout.end());
  conf.resize(state.n_qubits(), Confusion::Identity());
  return sample_distribution(apply_readout(state.probabilities(), conf), state.n_qubits(), shots, rng);
}

}  // namespace qdimer
