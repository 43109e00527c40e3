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

#include <stdexcept>

#include "oracles.hpp"
#include "qdimer/circuit.hpp"

namespace qdimer {
namespace {

TEST(Circuit, EmptyIsIdentity) {
  EXPECT_TRUE(Circuit(2).to_matrix().isApprox(CMatrix::Identity(4, 4)));
}

TEST(Circuit, ApplicationOrderMultipliesOnTheLeft) {
  Circuit c(1);
  c.h(0).s(0);
  const oracle::Mat h = (oracle::pauli('X') + oracle::pauli('Z')) / std::sqrt(2.0);
  oracle::Mat s(2, 2);
  s << 1, 0, 0, oracle::cplx(0, 1);
  EXPECT_LT((c.to_matrix() - s * h).norm(), 1e-12);
}

TEST(Circuit, QubitZeroIsLeftmostFactor) {
  Circuit c(2);
  c.x(0);
  EXPECT_LT((c.to_matrix() - oracle::site('X', 0)).norm(), 1e-12);
}

TEST(Circuit, RotationsMatchTaylorExponential) {
  for (char a : {'X', 'Y', 'Z'}) {
    Circuit c(1);
    c.rotation(0, axis_from_char(a), 0.7);
    const oracle::Mat want = oracle::expm(oracle::cplx(0.0, -0.35) * oracle::pauli(a));
    EXPECT_LT((c.to_matrix() - want).norm(), 1e-12) << a;
  }
}

TEST(Circuit, CnotTruthTable) {
  Circuit c(2);
  c.cx(0, 1);
  const CMatrix u = c.to_matrix();
  EXPECT_NEAR(std::abs(u(0, 0)), 1.0, 1e-12);
  EXPECT_NEAR(std::abs(u(1, 1)), 1.0, 1e-12);
  EXPECT_NEAR(std::abs(u(3, 2)), 1.0, 1e-12);
  EXPECT_NEAR(std::abs(u(2, 3)), 1.0, 1e-12);
  EXPECT_EQ(c.two_qubit_gate_count(), 1);
}

TEST(Circuit, AdjointInvertsIncludingPhase) {
  Circuit c(2);
  c.h(0).cx(0, 1).ry(1, 0.4).rz(0, -1.1).cz(1, 0).phase(0.3);
  const CMatrix u = c.to_matrix();
  EXPECT_LT((c.adjoint().to_matrix() * u - CMatrix::Identity(4, 4)).norm(), 1e-12);
}

TEST(Circuit, BindFillsSlots) {
  Circuit c(1);
  c.rotation(0, Axis::Y, 0, 2.0, 0.1);
  EXPECT_EQ(c.parameter_count(), 1);
  const double p[] = {0.3};
  Circuit ref(1);
  ref.ry(0, 0.7);
  EXPECT_LT((c.bind(p).to_matrix() - ref.to_matrix()).norm(), 1e-12);
}

TEST(Circuit, RepeatedIsPower) {
  Circuit c(2);
  c.h(0).cx(0, 1).rz(1, 0.2);
  const CMatrix u = c.to_matrix();
  EXPECT_LT((c.repeated(3).to_matrix() - u * u * u).norm(), 1e-12);
  EXPECT_TRUE(c.repeated(0).empty());
}

TEST(Circuit, RejectsOutOfRangeQubit) {
  Circuit c(2);
  EXPECT_ANY_THROW(c.x(2));
  EXPECT_ANY_THROW(c.cx(0, 0));
}

}  // namespace
}  // namespace qdimer
