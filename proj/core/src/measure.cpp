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

#include "qdimer/measure.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <limits>
#include <mutex>
#include <numbers>

#include "qdimer/errors.hpp"

namespace qdimer {

namespace {

constexpr double kBranchFloor = 1e-12;

void basis_change(Circuit& c, Axis axis, int q) {
  if (axis == Axis::X) c.h(q);
  if (axis == Axis::Y) c.sdg(q).h(q);
}

void check_correlator(const Correlator& c, int n_qubits) {
  if (c.i < 0 || c.i >= n_qubits || c.j < 0 || c.j >= n_qubits) {
    throw InvalidArgument("correlator site out of range");
  }
}

// Expectation of the product of +-1 outcomes over all bits.
double parity(const std::vector<double>& dist) {
  double e = 0.0;
  for (std::size_t idx = 0; idx < dist.size(); ++idx) e += (std::popcount(idx) % 2 == 0 ? 1.0 : -1.0) * dist[idx];
  return e;
}

struct Readouts {
  std::vector<double> raw;
  std::vector<double> mitigated;
};

// Runs one circuit and returns the raw and mitigated distributions over its
// outcome bits (mid-circuit records, then `measured`).
Readouts run(const Circuit& circuit, const QuantumState& initial, std::vector<int> measured,
             const EstimatorConfig& config, std::uint64_t shots, Rng rng) {
  const NoiseModel noise = config.noise.model(circuit.n_qubits());
  std::vector<Confusion> confusions;
  for (const Gate& g : circuit.gates()) {
    if (g.kind == GateKind::kMeasure) confusions.push_back(noise.confusion(g.qubits.front()));
  }
  for (int q : measured) confusions.push_back(noise.confusion(q));

  const auto ideal = outcome_distribution(circuit, initial, measured, noise.gate_noise() ? &noise : nullptr);
  const auto noisy = apply_readout(ideal, confusions);

  Readouts out;
  if (config.exact_expectation) {
    out.raw = noisy;
  } else {
    Rng sample_rng = rng.child("sample");
    out.raw = sample_distribution(noisy, static_cast<int>(confusions.size()), shots, sample_rng).frequencies();
  }
  if (config.mitigation) {
    Rng cal_rng = rng.child("calibration");
    const auto cal = build_calibration_matrix(confusions, config.exact_expectation ? 0 : config.calibration_shots, &cal_rng);
    out.mitigated = mitigate(out.raw, cal);
  } else {
    out.mitigated = out.raw;
  }
  return out;
}

QuantumState with_ancilla(const QuantumState& s) {
  CVector zero = CVector::Zero(2);
  zero(0) = 1.0;
  if (s.is_pure()) return QuantumState::pure(kron(s.amplitudes(), zero));
  return QuantumState::mixed(kron(s.density(), CMatrix(zero * zero.adjoint())));
}

std::uint64_t share(std::uint64_t shots, std::uint64_t parts) { return std::max<std::uint64_t>(1, shots / parts); }

}  // namespace

Scheme parse_scheme(const std::string& name) {
  if (name == "indirect") return Scheme::kIndirect;
  if (name == "direct") return Scheme::kDirect;
  throw InvalidArgument("unknown measurement scheme '" + name + "'");
}

std::string scheme_name(Scheme s) { return s == Scheme::kIndirect ? "indirect" : "direct"; }

void EstimatorConfig::validate() const {
  if (shots < 1) throw InvalidArgument("shots must be at least 1");
  if (calibration_shots < 1) throw InvalidArgument("calibration_shots must be at least 1");
  auto prob = [](double p, const char* name) {
    if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument(std::string(name) + " must lie in [0, 1]");
  };
  prob(noise.p1, "p1");
  prob(noise.p2, "p2");
  prob(noise.readout_flip, "readout_flip");
}

int CalibrationMatrix::n_bits() const { return std::countr_zero(static_cast<std::size_t>(m.rows())); }

Circuit hadamard_test_circuit(const Circuit& evolution, const Correlator& c, int b) {
  const int n = evolution.n_qubits();
  if (n + 1 > kMaxQubits) throw InvalidArgument("no room for an ancilla qubit");
  if (b != 0 && b != 1) throw InvalidArgument("Hadamard test selector b must be 0 or 1");
  check_correlator(c, n);
  const int anc = n;
  std::vector<int> map(n);
  for (int q = 0; q < n; ++q) map[q] = q;
  Circuit out(n + 1);
  out.h(anc).controlled_pauli(anc, c.j, c.beta);
  out.append(evolution, map);
  out.controlled_pauli(anc, c.i, c.alpha);
  if (b == 1) out.sdg(anc);
  out.h(anc);
  return out;
}

DirectCircuits direct_circuits(const Circuit& evolution, const Correlator& c) {
  const int n = evolution.n_qubits();
  check_correlator(c, n);
  DirectCircuits out{Circuit(n), Circuit(n), Circuit(n)};
  out.real.measure({c.j}, pauli(c.beta), "measure_G").append(evolution);
  basis_change(out.real, c.alpha, c.i);
  // exp(+i pi G / 4) is a rotation by -pi/2.
  out.imag_plus.rotation(c.j, c.beta, -std::numbers::pi / 2.0).append(evolution);
  basis_change(out.imag_plus, c.alpha, c.i);
  out.imag_minus.rotation(c.j, c.beta, std::numbers::pi / 2.0).append(evolution);
  basis_change(out.imag_minus, c.alpha, c.i);
  return out;
}

std::vector<double> outcome_distribution(const Circuit& circuit, const QuantumState& initial,
                                         std::span<const int> measured, const NoiseModel* noise) {
  if (circuit.n_qubits() != initial.n_qubits()) throw InvalidArgument("circuit and state widths differ");
  const auto& gates = circuit.gates();
  const int records = static_cast<int>(std::count_if(
      gates.begin(), gates.end(), [](const Gate& g) { return g.kind == GateKind::kMeasure; }));
  const int m = static_cast<int>(measured.size());
  std::vector<double> dist(std::size_t{1} << (records + m), 0.0);
  bool dropped = false;

  std::function<void(QuantumState, std::size_t, double, std::size_t)> walk =
      [&](QuantumState state, std::size_t k, double weight, std::size_t record) {
        for (; k < gates.size(); ++k) {
          const Gate& g = gates[k];
          if (g.kind != GateKind::kMeasure) {
            state = apply_gate(state, g, noise);
            continue;
          }
          for (int bit = 0; bit < 2; ++bit) {
            Branch br = project_branch(state, g.matrix, bit == 0 ? 1 : -1, g.qubits);
            if (br.probability < kBranchFloor || !br.post_state) {
              if (br.probability > 0.0) dropped = true;
              continue;
            }
            walk(*br.post_state, k + 1, weight * br.probability, (record << 1) | bit);
          }
          return;
        }
        const auto local = marginal(state.probabilities(), state.n_qubits(), measured);
        for (std::size_t idx = 0; idx < local.size(); ++idx) dist[(record << m) | idx] += weight * local[idx];
      };
  walk(initial, 0, 1.0, 0);

  if (dropped) {
    static std::once_flag once;
    std::call_once(once, [] { warn("measurement branch below probability 1e-12 dropped"); });
  }
  return dist;
}

Estimate indirect_estimate(const Circuit& evolution, const Correlator& c, const QuantumState& initial,
                           const EstimatorConfig& config, Rng& rng) {
  config.validate();
  if (initial.n_qubits() != evolution.n_qubits()) throw InvalidArgument("state and evolution widths differ");
  const QuantumState start = with_ancilla(initial);
  const std::vector<int> anc{evolution.n_qubits()};
  const std::uint64_t shots = share(config.shots, 2);
  const Readouts re = run(hadamard_test_circuit(evolution, c, 0), start, anc, config, shots, rng.child("re"));
  const Readouts im = run(hadamard_test_circuit(evolution, c, 1), start, anc, config, shots, rng.child("im"));
  return {cplx(parity(re.raw), parity(im.raw)), cplx(parity(re.mitigated), parity(im.mitigated))};
}

Estimate direct_estimate(const Circuit& evolution, const Correlator& c, const QuantumState& initial,
                         const EstimatorConfig& config, Rng& rng) {
  config.validate();
  if (initial.n_qubits() != evolution.n_qubits()) throw InvalidArgument("state and evolution widths differ");
  const DirectCircuits dc = direct_circuits(evolution, c);
  const std::vector<int> read{c.i};
  const Readouts re = run(dc.real, initial, read, config, share(config.shots, 2), rng.child("re"));
  const Readouts plus = run(dc.imag_plus, initial, read, config, share(config.shots, 4), rng.child("im+"));
  const Readouts minus = run(dc.imag_minus, initial, read, config, share(config.shots, 4), rng.child("im-"));
  return {cplx(parity(re.raw), -0.5 * (parity(plus.raw) - parity(minus.raw))),
          cplx(parity(re.mitigated), -0.5 * (parity(plus.mitigated) - parity(minus.mitigated)))};
}

Estimate estimate(const Circuit& evolution, const Correlator& c, const QuantumState& initial,
                  const EstimatorConfig& config, Rng& rng) {
  return config.scheme == Scheme::kDirect ? direct_estimate(evolution, c, initial, config, rng)
                                          : indirect_estimate(evolution, c, initial, config, rng);
}

CalibrationMatrix build_calibration_matrix(std::span<const Confusion> readout, std::uint64_t shots, Rng* rng) {
  const int n = static_cast<int>(readout.size());
  if (n < 1 || n > 8) throw InvalidArgument("calibration needs between 1 and 8 measured bits");
  if (shots > 0 && rng == nullptr) throw InvalidArgument("sampled calibration requires an rng");
  const std::size_t dim = std::size_t{1} << n;
  CalibrationMatrix cal;
  cal.m = RMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (std::size_t j = 0; j < dim; ++j) {
    std::vector<double> prepared(dim, 0.0);
    prepared[j] = 1.0;
    std::vector<double> column = apply_readout(prepared, readout);
    if (shots > 0) column = sample_distribution(column, n, shots, *rng).frequencies();
    for (std::size_t i = 0; i < dim; ++i) cal.m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = column[i];
  }
  const Eigen::JacobiSVD<RMatrix> svd(cal.m);
  const auto& s = svd.singularValues();
  const double smin = s(s.size() - 1);
  cal.condition_number = smin > 0.0 ? s(0) / smin : std::numeric_limits<double>::infinity();
  if (!(cal.condition_number <= 1e6)) throw NumericalError("calibration matrix is singular (condition number > 1e6)");
  return cal;
}

std::vector<double> project_to_simplex(const std::vector<double>& v) {
  if (v.empty()) throw InvalidArgument("cannot project an empty vector");
  std::vector<double> u = v;
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumulative = 0.0, tau = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    cumulative += u[k];
    const double t = (cumulative - 1.0) / static_cast<double>(k + 1);
    if (u[k] - t > 0.0) tau = t;
  }
  std::vector<double> out(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) out[k] = std::max(v[k] - tau, 0.0);
  return out;
}

std::vector<double> mitigate(const std::vector<double>& noisy, const CalibrationMatrix& cal) {
  const Eigen::Index dim = cal.m.rows();
  if (static_cast<Eigen::Index>(noisy.size()) != dim) throw InvalidArgument("histogram and calibration sizes differ");
  double total = 0.0;
  for (double x : noisy) {
    if (!(x >= 0.0) || !std::isfinite(x)) throw InvalidArgument("histogram entries must be finite and non-negative");
    total += x;
  }
  if (!(total > 0.0)) throw InvalidArgument("empty histogram");
  RVector b(dim);
  for (Eigen::Index k = 0; k < dim; ++k) b(k) = noisy[k] / total;

  RVector x = cal.m.partialPivLu().solve(b);
  if (x.minCoeff() >= 0.0) return std::vector<double>(x.data(), x.data() + dim);

  // Accelerated projected gradient on 0.5 ||M p - b||^2.
  const double lipschitz = std::pow(Eigen::JacobiSVD<RMatrix>(cal.m).singularValues()(0), 2);
  auto proj = [](const RVector& v) {
    const auto p = project_to_simplex(std::vector<double>(v.data(), v.data() + v.size()));
    return RVector(Eigen::Map<const RVector>(p.data(), static_cast<Eigen::Index>(p.size())));
  };
  RVector p = proj(x);
  RVector y = p;
  double t = 1.0;
  for (int iter = 0; iter < 100000; ++iter) {
    const RVector next = proj(y - cal.m.transpose() * (cal.m * y - b) / lipschitz);
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    y = next + ((t - 1.0) / t_next) * (next - p);
    const double change = (next - p).norm();
    p = next;
    t = t_next;
    if (change < 1e-15) break;
  }
  return std::vector<double>(p.data(), p.data() + dim);
}

std::vector<double> mitigate(const Counts& counts, const CalibrationMatrix& cal) {
  std::vector<double> h(counts.counts.begin(), counts.counts.end());
  return mitigate(h, cal);
}

}  // namespace qdimer
