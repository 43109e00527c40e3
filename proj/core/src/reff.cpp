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

#include "qdimer/reff.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include "qdimer/errors.hpp"

namespace qdimer {

namespace {

void check_length(std::span<const double> v, int expected, const char* what) {
  if (static_cast<int>(v.size()) != expected) {
    throw InvalidArgument(std::string(what) + " has " + std::to_string(v.size()) + " entries, expected " +
                          std::to_string(expected));
  }
}

std::vector<double> scaled(std::span<const double> v, int scale) {
  std::vector<double> out(v.begin(), v.end());
  for (double& x : out) x *= scale;
  return out;
}

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

ReffAnsatz ReffAnsatz::dimer() {
  ReffAnsatz a;
  a.w_template.ry(0, -std::numbers::pi / 4.0).cz(0, 1).rotation(0, Axis::Y, 0).cx(0, 1);
  a.d_template.rotation(0, Axis::Z, 0).rotation(1, Axis::Z, 1).cx(0, 1).rotation(1, Axis::Z, 2).cx(0, 1);
  a.theta.assign(1, 0.0);
  a.gamma.assign(3, 0.0);
  return a;
}

CMatrix ReffAnsatz::w(std::span<const double> th) const {
  check_length(th, theta_count(), "theta");
  return w_template.to_matrix(th);
}

CMatrix ReffAnsatz::d(std::span<const double> g, int scale) const {
  check_length(g, gamma_count(), "gamma");
  if (scale < 0) throw InvalidArgument("fast-forward scale must be non-negative");
  return d_template.to_matrix(scaled(g, scale));
}

Circuit ReffAnsatz::circuit(int scale) const {
  check_length(theta, theta_count(), "theta");
  check_length(gamma, gamma_count(), "gamma");
  if (scale < 0) throw InvalidArgument("fast-forward scale must be non-negative");
  const Circuit w_bound = w_template.bind(theta);
  Circuit out(w_template.n_qubits());
  // Matrix W D W^dag: W^dag acts first.
  out.append(w_bound.adjoint()).append(d_template.bind(scaled(gamma, scale))).append(w_bound);
  return out;
}

CMatrix ReffAnsatz::unitary(int scale) const { return build_ansatz_unitary(*this, theta, gamma, scale); }

CMatrix build_ansatz_unitary(const ReffAnsatz& ansatz, std::span<const double> theta,
                             std::span<const double> gamma, int scale) {
  const CMatrix w = ansatz.w(theta);
  return w * ansatz.d(gamma, scale) * w.adjoint();
}

TrainingSet TrainingSet::haar_product(int count, int n_qubits, Rng& rng) {
  if (count < 1) throw InvalidArgument("training set needs at least one state");
  if (n_qubits < 1) throw InvalidArgument("training states need at least one qubit");
  TrainingSet set;
  set.states.reserve(count);
  for (int k = 0; k < count; ++k) {
    CVector psi = CVector::Ones(1);
    for (int q = 0; q < n_qubits; ++q) {
      CVector v(2);
      for (int c = 0; c < 2; ++c) v(c) = cplx(rng.normal(), rng.normal());
      v.normalize();
      psi = kron(psi, v);
    }
    set.states.push_back(std::move(psi));
  }
  return set;
}

double cost(const CMatrix& target, const CMatrix& v, const TrainingSet& training) {
  if (training.states.empty()) throw InvalidArgument("empty training set");
  if (target.rows() != v.rows() || target.cols() != v.cols()) {
    throw InvalidArgument("target and ansatz dimensions differ");
  }
  const CMatrix m = v.adjoint() * target;
  double fidelity = 0.0;
  for (const CVector& psi : training.states) {
    if (psi.size() != m.rows()) throw InvalidArgument("training state dimension mismatch");
    fidelity += std::norm(psi.dot(m * psi));
  }
  fidelity /= static_cast<double>(training.states.size());
  return std::clamp(1.0 - fidelity, 0.0, 1.0);
}

double cost(const CMatrix& target, const ReffAnsatz& ansatz, const TrainingSet& training) {
  return cost(target, ansatz.unitary(1), training);
}

Gradient grad(const CMatrix& target, const ReffAnsatz& ansatz, const TrainingSet& training) {
  const double shift = std::numbers::pi / 2.0;
  const CMatrix w = ansatz.w(ansatz.theta);
  const CMatrix d = ansatz.d(ansatz.gamma);
  Gradient g;

  std::vector<double> th = ansatz.theta;
  for (std::size_t l = 0; l < th.size(); ++l) {
    const double saved = th[l];
    th[l] = saved + shift;
    const CMatrix w_plus = ansatz.w(th);
    th[l] = saved - shift;
    const CMatrix w_minus = ansatz.w(th);
    th[l] = saved;
    const double left = cost(target, w_plus * d * w.adjoint(), training) -
                        cost(target, w_minus * d * w.adjoint(), training);
    const double right = cost(target, w * d * w_plus.adjoint(), training) -
                         cost(target, w * d * w_minus.adjoint(), training);
    g.theta.push_back(0.5 * (left + right));
  }

  std::vector<double> ga = ansatz.gamma;
  for (std::size_t l = 0; l < ga.size(); ++l) {
    const double saved = ga[l];
    ga[l] = saved + shift;
    const CMatrix d_plus = ansatz.d(ga);
    ga[l] = saved - shift;
    const CMatrix d_minus = ansatz.d(ga);
    ga[l] = saved;
    g.gamma.push_back(0.5 * (cost(target, w * d_plus * w.adjoint(), training) -
                             cost(target, w * d_minus * w.adjoint(), training)));
  }
  return g;
}

double threshold(double epsilon, int n_targ, int n_qubits) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw InvalidArgument("epsilon must lie in (0, 1)");
  if (n_targ < 1) throw InvalidArgument("n_targ must be at least 1");
  if (n_qubits < 1) throw InvalidArgument("n_qubits must be at least 1");
  const double value = epsilon / (16.0 * n_targ * n_targ) - epsilon * epsilon / (4.0 * (std::ldexp(1.0, n_qubits) + 1.0));
  if (!(value > 0.0)) throw NumericalError("infeasible (epsilon, n_targ) pair: threshold " + fmt17(value));
  return value;
}

double OptimizerConfig::resolved_threshold(int n_qubits) const {
  if (cost_threshold) return *cost_threshold;
  return threshold(epsilon, n_targ, n_qubits);
}

void OptimizerConfig::validate() const {
  if (training_states < 1) throw InvalidArgument("training_states must be at least 1");
  if (max_iterations < 0) throw InvalidArgument("max_iterations must be non-negative");
  if (!(initial_step > 0.0)) throw InvalidArgument("initial_step must be positive");
  if (!(step_growth >= 1.0)) throw InvalidArgument("step_growth must be at least 1");
  if (!(init_range >= 0.0)) throw InvalidArgument("init_range must be non-negative");
  if (cost_threshold && !(*cost_threshold >= 0.0 && *cost_threshold < 1.0)) {
    throw InvalidArgument("cost_threshold must lie in [0, 1)");
  }
}

ReffAnsatz TrainResult::ansatz(ReffAnsatz base) const {
  base.theta = theta_opt;
  base.gamma = gamma_opt;
  return base;
}

TrainResult train(const CMatrix& target, const OptimizerConfig& config, Rng& rng, const ReffAnsatz& base) {
  config.validate();
  if (!is_unitary(target)) throw InvalidArgument("training target is not unitary");
  const int n_qubits = base.w_template.n_qubits();
  if (target.rows() != (Eigen::Index{1} << n_qubits)) throw InvalidArgument("training target dimension mismatch");

  TrainResult result;
  result.threshold = config.resolved_threshold(n_qubits);

  Rng training_rng = rng.child("training");
  Rng init_rng = rng.child("init");
  const TrainingSet training = TrainingSet::haar_product(config.training_states, n_qubits, training_rng);

  ReffAnsatz ansatz = base;
  auto init = [&](const std::optional<std::vector<double>>& given, int count) {
    if (given) {
      check_length(*given, count, "initial parameters");
      return *given;
    }
    std::vector<double> v(count);
    for (double& x : v) x = init_rng.uniform(-config.init_range, config.init_range);
    return v;
  };
  ansatz.theta = init(config.initial_theta, base.theta_count());
  ansatz.gamma = init(config.initial_gamma, base.gamma_count());

  double current = cost(target, ansatz, training);
  result.cost_history.push_back(current);
  double step = config.initial_step;
  bool stalled = false;

  while (current > result.threshold && result.iterations < config.max_iterations) {
    const Gradient g = grad(target, ansatz, training);
    ReffAnsatz trial = ansatz;
    bool accepted = false;
    while (step > 1e-14) {
      for (std::size_t k = 0; k < g.theta.size(); ++k) trial.theta[k] = ansatz.theta[k] - step * g.theta[k];
      for (std::size_t k = 0; k < g.gamma.size(); ++k) trial.gamma[k] = ansatz.gamma[k] - step * g.gamma[k];
      const double c = cost(target, trial, training);
      if (c < current) {
        current = c;
        ansatz = trial;
        step *= config.step_growth;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    ++result.iterations;
    result.cost_history.push_back(current);
    if (!accepted) {
      stalled = true;
      break;
    }
  }

  result.theta_opt = ansatz.theta;
  result.gamma_opt = ansatz.gamma;
  result.final_cost = current;
  result.converged = current <= result.threshold;
  if (!result.converged) {
    warn(std::string(stalled ? "training stalled" : "training budget exhausted") + " at cost " + fmt17(current) +
         " (threshold " + fmt17(result.threshold) + ")");
  }
  return result;
}

ReffAnsatz ReffParameters::ansatz() const {
  ReffAnsatz a = ReffAnsatz::dimer();
  if (static_cast<int>(theta.size()) != a.theta_count() || static_cast<int>(gamma.size()) != a.gamma_count()) {
    throw InvalidArgument("parameter file does not match the dimer ansatz");
  }
  a.theta = theta;
  a.gamma = gamma;
  return a;
}

std::string format_parameters(const ReffParameters& p) {
  std::ostringstream out;
  out << "# qdimer reff parameters\n";
  out << "jxx = " << fmt17(p.model.jxx) << "\n";
  out << "jyy = " << fmt17(p.model.jyy) << "\n";
  out << "jzz = " << fmt17(p.model.jzz) << "\n";
  out << "h = " << fmt17(p.model.h) << "\n";
  out << "dt = " << fmt17(p.dt) << "\n";
  out << "final_cost = " << fmt17(p.final_cost) << "\n";
  for (std::size_t k = 0; k < p.theta.size(); ++k) out << "theta" << k + 1 << " = " << fmt17(p.theta[k]) << "\n";
  for (std::size_t k = 0; k < p.gamma.size(); ++k) out << "gamma" << k + 1 << " = " << fmt17(p.gamma[k]) << "\n";
  return out.str();
}

ReffParameters parse_parameters(const std::string& text) {
  std::map<std::string, double> values;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw InvalidArgument("parameter file line " + std::to_string(line_no) + ": missing '='");
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r");
      const auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    const std::string name = trim(line.substr(0, eq));
    const std::string raw = trim(line.substr(eq + 1));
    std::size_t used = 0;
    double value = 0.0;
    try {
      value = std::stod(raw, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != raw.size() || !std::isfinite(value)) {
      throw InvalidArgument("parameter file line " + std::to_string(line_no) + ": bad value for '" + name + "'");
    }
    if (!values.emplace(name, value).second) {
      throw InvalidArgument("parameter file line " + std::to_string(line_no) + ": duplicate '" + name + "'");
    }
  }

  auto take = [&](const std::string& name) {
    auto it = values.find(name);
    if (it == values.end()) throw InvalidArgument("parameter file: missing '" + name + "'");
    const double v = it->second;
    values.erase(it);
    return v;
  };
  ReffParameters p;
  p.model = {take("jxx"), take("jyy"), take("jzz"), take("h")};
  p.dt = take("dt");
  p.final_cost = take("final_cost");
  for (int k = 1; values.count("theta" + std::to_string(k)); ++k) p.theta.push_back(take("theta" + std::to_string(k)));
  for (int k = 1; values.count("gamma" + std::to_string(k)); ++k) p.gamma.push_back(take("gamma" + std::to_string(k)));
  if (!values.empty()) throw InvalidArgument("parameter file: unknown key '" + values.begin()->first + "'");
  p.model.validate();
  if (!(p.dt > 0.0)) throw InvalidArgument("parameter file: dt must be positive");
  return p;
}

void save_parameters(const std::filesystem::path& path, const ReffParameters& p) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot write " + path.string());
  out << format_parameters(p);
  if (!out) throw InvalidArgument("failed writing " + path.string());
}

ReffParameters load_parameters(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_parameters(buf.str());
}

}  // namespace qdimer
