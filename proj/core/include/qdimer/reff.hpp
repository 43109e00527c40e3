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

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qdimer/circuit.hpp"
#include "qdimer/model.hpp"
#include "qdimer/rng.hpp"

namespace qdimer {

/// V(theta, gamma) = W(theta) D(gamma) W(theta)^dag with D diagonal.
struct ReffAnsatz {
  Circuit w_template{2};
  Circuit d_template{2};
  std::vector<double> theta;
  std::vector<double> gamma;

  /// The dimer ansatz: one W angle, D = Rz(g1) x Rz(g2) then Rzz(g3).
  /// Six two-qubit gates in the compiled V.
  static ReffAnsatz dimer();

  int theta_count() const { return w_template.parameter_count(); }
  int gamma_count() const { return d_template.parameter_count(); }

  CMatrix w(std::span<const double> theta) const;
  CMatrix d(std::span<const double> gamma, int scale = 1) const;

  /// Gate-level W D(N gamma) W^dag with all slots bound.
  Circuit circuit(int scale = 1) const;
  CMatrix unitary(int scale = 1) const;
};

/// W(theta) D(N gamma) W(theta)^dag.
CMatrix build_ansatz_unitary(const ReffAnsatz& ansatz, std::span<const double> theta,
                             std::span<const double> gamma, int scale);

struct TrainingSet {
  std::vector<CVector> states;

  /// Products of independent Haar-random single-qubit states.
  static TrainingSet haar_product(int count, int n_qubits, Rng& rng);
  std::size_t size() const { return states.size(); }
};

/// 1 - mean_j |<psi_j| V^dag U |psi_j>|^2.
double cost(const CMatrix& target, const CMatrix& v, const TrainingSet& training);
double cost(const CMatrix& target, const ReffAnsatz& ansatz, const TrainingSet& training);

struct Gradient {
  std::vector<double> theta;
  std::vector<double> gamma;
};

/// Parameter-shift gradient: four cost evaluations per W angle (shifting the W
/// and W^dag copies separately), two per D angle.
Gradient grad(const CMatrix& target, const ReffAnsatz& ansatz, const TrainingSet& training);

/// eps / (16 n_targ^2) - eps^2 / (4 (2^n + 1)); throws NumericalError when <= 0.
double threshold(double epsilon, int n_targ, int n_qubits);

struct OptimizerConfig {
  int training_states = 6;
  int max_iterations = 5000;
  double epsilon = 0.1;
  int n_targ = 3;
  /// Overrides the (epsilon, n_targ) threshold when set.
  std::optional<double> cost_threshold;
  double initial_step = 0.1;
  double step_growth = 1.5;
  double init_range = 0.1;
  std::optional<std::vector<double>> initial_theta;
  std::optional<std::vector<double>> initial_gamma;

  double resolved_threshold(int n_qubits = 2) const;
  void validate() const;
};

struct TrainResult {
  std::vector<double> theta_opt;
  std::vector<double> gamma_opt;
  double final_cost = 1.0;
  double threshold = 0.0;
  int iterations = 0;
  std::vector<double> cost_history;
  bool converged = false;

  ReffAnsatz ansatz(ReffAnsatz base = ReffAnsatz::dimer()) const;
};

/// Gradient descent with backtracking (halve on increase, grow on accept).
TrainResult train(const CMatrix& target, const OptimizerConfig& config, Rng& rng,
                  const ReffAnsatz& base = ReffAnsatz::dimer());

/// Trained parameters plus the model and timestep they were fitted to.
struct ReffParameters {
  SpinModel model;
  double dt = 0.3;
  std::vector<double> theta;
  std::vector<double> gamma;
  double final_cost = 0.0;

  ReffAnsatz ansatz() const;
};

/// Plain-text `name = value` lines; '#' starts a comment.
std::string format_parameters(const ReffParameters& p);
ReffParameters parse_parameters(const std::string& text);
void save_parameters(const std::filesystem::path& path, const ReffParameters& p);
ReffParameters load_parameters(const std::filesystem::path& path);

}  // namespace qdimer
