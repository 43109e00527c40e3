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

#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "qdimer/model.hpp"
#include "qdimer/statevector.hpp"
#include "qdimer/trotter.hpp"

namespace qdimer {
namespace {

CVector singlet() {
  CVector v(4);
  v << 0, 1, -1, 0;
  return v / std::sqrt(2.0);
}

TEST(StateVector, RejectsBadStates) {
  CVector v(3);
  v.setZero();
  EXPECT_ANY_THROW(QuantumState::pure(v));
  CVector w(4);
  w << 1, 1, 0, 0;
  EXPECT_ANY_THROW(QuantumState::pure(w));
}

TEST(StateVector, IdentityCircuit) {
  const QuantumState s = QuantumState::pure(singlet());
  EXPECT_LT((apply_circuit(s, Circuit(2)).amplitudes() - singlet()).norm(), 1e-15);
}

TEST(StateVector, XOnQubitZeroFlipsLeftBit) {
  Circuit c(2);
  c.x(0);
  const auto p = apply_circuit(QuantumState::basis(2, 0), c).probabilities();
  EXPECT_NEAR(p[2], 1.0, 1e-15);
}

TEST(StateVector, TrotterStepOnSingletMatchesDenseProduct) {
  const double dt = 0.3;
  const oracle::Mat xx = oracle::kron(oracle::pauli('X'), oracle::pauli('X'));
  const oracle::Mat yy = oracle::kron(oracle::pauli('Y'), oracle::pauli('Y'));
  const oracle::Mat zz = oracle::kron(oracle::pauli('Z'), oracle::pauli('Z'));
  const oracle::Mat z = oracle::site('Z', 0) + oracle::site('Z', 1);
  const oracle::cplx mi(0.0, -dt);
  const oracle::Mat u = oracle::expm(mi * z) * oracle::expm(mi * zz) * oracle::expm(mi * yy) * oracle::expm(mi * xx);
  const QuantumState out =
      apply_circuit(QuantumState::pure(singlet()), trotter_step_circuit(SpinModel::heisenberg(1, 1), dt));
  EXPECT_LT((out.amplitudes() - u * singlet()).norm(), 1e-10);
}

TEST(StateVector, PauliExpectations) {
  EXPECT_NEAR(expectation_pauli(QuantumState::basis(1, 0), "Z"), 1.0, 1e-15);
  const QuantumState s = QuantumState::pure(singlet());
  EXPECT_NEAR(expectation_pauli(s, "ZZ"), -1.0, 1e-12);
  EXPECT_NEAR(expectation_pauli(s, "XX"), -1.0, 1e-12);
  EXPECT_NEAR(expectation_pauli(s, "YY"), -1.0, 1e-12);
  EXPECT_ANY_THROW(expectation_pauli(s, "Q1"));
  EXPECT_ANY_THROW(expectation_pauli(s, "Z"));
}

TEST(StateVector, ProjectiveMeasurement) {
  Rng rng(1);
  const MeasureResult r = project_measure(QuantumState::basis(1, 0), pauli(Axis::Z), rng);
  EXPECT_EQ(r.outcome, 1);
  EXPECT_NEAR(r.probability, 1.0, 1e-15);

  const QuantumState s = QuantumState::pure(singlet());
  const CMatrix x2 = site_pauli(Axis::X, 1, 2);
  const double plus = project_branch(s, x2, +1).probability;
  const double minus = project_branch(s, x2, -1).probability;
  EXPECT_NEAR(plus, 0.5, 1e-12);
  EXPECT_NEAR(plus + minus, 1.0, 1e-12);

  const Branch b = project_branch(s, site_pauli(Axis::Z, 0, 2), +1);
  ASSERT_TRUE(b.post_state.has_value());
  EXPECT_NEAR(b.post_state->probabilities()[1], 1.0, 1e-12);  // |01> = up-down
}

TEST(StateVector, MeasurementCompletenessOnRandomStates) {
  std::mt19937_64 g(3);
  for (int n = 0; n < 20; ++n) {
    const QuantumState s = QuantumState::pure(oracle::haar_product(g));
    for (Axis a : kAxes) {
      for (int q = 0; q < 2; ++q) {
        const CMatrix p = site_pauli(a, q, 2);
        EXPECT_NEAR(project_branch(s, p, 1).probability + project_branch(s, p, -1).probability, 1.0, 1e-12);
      }
    }
  }
}

TEST(StateVector, SamplingIdealReadout) {
  Rng rng(5);
  const Counts c = sample_counts(QuantumState::basis(2, 0), 8000, {}, rng);
  EXPECT_EQ(c.total(), 8000u);
  EXPECT_EQ(c.at("00"), 8000u);
}

TEST(StateVector, SamplingWithFlipsWithinFiveSigma) {
  const std::vector<Confusion> ro(2, symmetric_flip(0.02));
  Rng rng(6);
  const Counts c = sample_counts(QuantumState::basis(2, 0), 8000, ro, rng);
  const double p = 0.98 * 0.98;
  EXPECT_NEAR(static_cast<double>(c.at("00")), 8000 * p, 5.0 * std::sqrt(8000 * p * (1 - p)));
}

TEST(StateVector, UniformSuperpositionWithinFiveSigma) {
  Circuit c(2);
  c.h(0).h(1);
  Rng rng(7);
  const Counts counts = sample_counts(apply_circuit(QuantumState::basis(2, 0), c), 8000, {}, rng);
  const double sigma = std::sqrt(8000 * 0.25 * 0.75);
  for (const char* b : {"00", "01", "10", "11"}) EXPECT_NEAR(static_cast<double>(counts.at(b)), 2000.0, 5 * sigma);
}

TEST(StateVector, NormPreservedOverManyGates) {
  std::mt19937_64 g(11);
  std::uniform_real_distribution<double> a(-M_PI, M_PI);
  Circuit c(3);
  for (int k = 0; k < 250; ++k) c.rx(k % 3, a(g)).cx(k % 3, (k + 1) % 3).ry((k + 2) % 3, a(g)).cz(0, 2);
  const QuantumState out = apply_circuit(QuantumState::basis(3, 0), c);
  EXPECT_NEAR(out.amplitudes().norm(), 1.0, 1e-10);
}

TEST(StateVector, PureAndMixedBackendsAgree) {
  Circuit c(2);
  c.h(0).cx(0, 1).ry(1, 0.3).rz(0, 1.2).cy(1, 0);
  const QuantumState start = QuantumState::pure(singlet());
  const CMatrix pure = apply_circuit(start, c).density();
  const CMatrix mixed = apply_circuit(start.to_mixed(), c).density();
  EXPECT_LT((pure - mixed).norm(), 1e-10);
}

TEST(StateVector, DepolarizingKeepsTraceAndHermiticity) {
  const NoiseModel noise = NoiseModel::uniform(2, 0.05, 0.1, 0.0);
  Circuit c(2);
  c.h(0).cx(0, 1).rx(1, 0.4).cx(1, 0);
  const CMatrix rho = apply_circuit(QuantumState::pure(singlet()), c, &noise).density();
  EXPECT_NEAR(rho.trace().real(), 1.0, 1e-12);
  EXPECT_LT((rho - rho.adjoint()).norm(), 1e-12);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(rho);
  EXPECT_GT(es.eigenvalues().minCoeff(), -1e-10);
}

TEST(StateVector, FullDepolarizationGivesMaximallyMixed) {
  const QuantumState s = depolarize(QuantumState::pure(singlet()), std::vector<int>{0, 1}, 1.0);
  EXPECT_LT((s.density() - CMatrix::Identity(4, 4) / 4.0).norm(), 1e-12);
}

TEST(StateVector, MeasureGateNeedsRng) {
  Circuit c(1);
  c.measure({0}, pauli(Axis::Z));
  EXPECT_ANY_THROW(apply_circuit(QuantumState::basis(1, 0), c));
}

TEST(StateVector, MarginalKeepsListedOrder) {
  const std::vector<double> p = {0.1, 0.2, 0.3, 0.4};
  const std::vector<int> q1 = {1};
  const auto m = marginal(p, 2, q1);
  EXPECT_NEAR(m[0], 0.4, 1e-15);
  EXPECT_NEAR(m[1], 0.6, 1e-15);
  const std::vector<int> swapped = {1, 0};
  const auto s = marginal(p, 2, swapped);
  EXPECT_NEAR(s[1], 0.3, 1e-15);
  EXPECT_NEAR(s[2], 0.2, 1e-15);
}

}  // namespace
}  // namespace qdimer
