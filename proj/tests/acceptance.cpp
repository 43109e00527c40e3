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

// Acceptance checks. `--criterion N` runs one check; no argument runs all.
// Each check prints one PASS/FAIL line; the exit status is nonzero on failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "commands.hpp"
#include "oracles.hpp"
#include "qdimer/measure.hpp"
#include "qdimer/model.hpp"
#include "qdimer/reff.hpp"
#include "qdimer/spectra.hpp"
#include "qdimer/trotter.hpp"

using namespace qdimer;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

char axis_letter(Axis a) { return "XYZ"[static_cast<int>(a)]; }

SpinModel heisenberg() { return SpinModel::heisenberg(1.0, 1.0); }

TrainResult train_step(const SpinModel& model, double dt, double cost_threshold) {
  OptimizerConfig cfg;
  cfg.cost_threshold = cost_threshold;
  Rng rng = Rng(42).child("reff");
  return train(trotter_step_circuit(model, dt).to_matrix(), cfg, rng);
}

Outcome criterion1() {
  const EigenSystem es = eigensystem(heisenberg());
  const double want[] = {-3.0, -1.0, 1.0, 3.0};
  double worst = 0.0;
  for (int k = 0; k < 4; ++k) worst = std::max(worst, std::abs(es.energies(k) - want[k]));
  return {worst < 1e-10, fmt("max |E - {-3,-1,1,3}| = %.2e", worst)};
}

Outcome criterion2() {
  std::mt19937_64 g(2024);
  std::uniform_int_distribution<int> axis(0, 2), site(0, 1);
  std::uniform_real_distribution<double> time(0.0, 10.0);
  const SpinModel models[] = {heisenberg(), SpinModel::xy_zz(11.4, 0.16), {1.0, 0.5, 0.3, 1.0}};
  double worst = 0.0;
  for (int n = 0; n < 200; ++n) {
    const SpinModel& m = models[n % 3];
    const Axis a = static_cast<Axis>(axis(g)), b = static_cast<Axis>(axis(g));
    const int i = site(g), j = site(g);
    const double t = time(g);
    const oracle::Mat h = oracle::hamiltonian(m.jxx, m.jyy, m.jzz, m.h);
    const oracle::cplx want = oracle::correlator(oracle::evolution(h, t), oracle::site(axis_letter(a), i),
                                                 oracle::site(axis_letter(b), j), oracle::ground(h));
    worst = std::max(worst, std::abs(lehmann_correlation(m, a, b, i, j, t) - want));
  }
  return {worst < 1e-9, fmt("max deviation over 200 samples = %.2e", worst)};
}

Outcome criterion3() {
  const int n = 100;
  const double dt = 0.3;
  SweepConfig sc;
  sc.model = heisenberg();
  sc.method = EvolutionMethod::kExact;
  sc.dt = dt;
  sc.n_steps = n;
  sc.keys = same_site_keys();
  const auto series = sweep(sc, Rng(42));
  const DSFResult d = dynamical_structure_factor(series, {0.0, 0.0, 0.0});
  const auto inten = intensity(d);

  const double lines[] = {2.0, 4.0, 6.0};
  std::vector<std::size_t> want;
  for (double w : lines) want.push_back(static_cast<std::size_t>(std::lround(w * n * dt / (2.0 * M_PI))));
  auto top = top_bins(inten, 3);
  std::sort(top.begin(), top.end());
  const bool bins_ok = top == want;

  // Least-squares line amplitudes against transforms of unit analytic lines.
  Eigen::MatrixXcd basis(n, 3);
  for (int p = 0; p < 3; ++p) {
    std::vector<oracle::cplx> line(n);
    for (int k = 0; k < n; ++k) line[k] = std::exp(oracle::cplx(0.0, -lines[p] * k * dt));
    const auto f = oracle::dft(line, dt);
    for (int m = 0; m < n; ++m) basis(m, p) = f[m];
  }
  double weight[3] = {0.0, 0.0, 0.0};
  for (const auto& [channel, s] : d.s) {
    if (channel.first != channel.second) continue;
    const Eigen::VectorXcd rhs = Eigen::Map<const Eigen::VectorXcd>(s.data(), n);
    const Eigen::VectorXcd amp = basis.colPivHouseholderQr().solve(rhs);
    for (int p = 0; p < 3; ++p) weight[p] += std::norm(amp(p));
  }
  const double lo = weight[0] / weight[1], hi = weight[2] / weight[1];
  const bool ratio_ok = std::abs(lo - 0.5) <= 0.025 && std::abs(hi - 0.5) <= 0.025;
  return {bins_ok && ratio_ok, fmt("top bins {%zu,%zu,%zu} (want {%zu,%zu,%zu}); corrected ratio %.4f : 1 : %.4f", top[0],
                                   top[1], top[2], want[0], want[1], want[2], lo, hi)};
}

Outcome criterion4() {
  const std::vector<double> dts = {0.3, 0.15, 0.075};
  std::vector<double> errs;
  for (double dt : dts) errs.push_back(trotter_error(heisenberg(), dt, static_cast<int>(std::lround(3.0 / dt))));
  const double slope = oracle::loglog_slope(dts, errs);
  std::vector<double> aniso;
  for (double dt : dts) aniso.push_back(trotter_error({1.0, 0.6, 0.3, 0.7}, dt, static_cast<int>(std::lround(3.0 / dt))));
  const bool ok = std::isfinite(slope) && std::abs(slope - 1.0) <= 0.15 && errs.back() > 1e-10;
  return {ok, fmt("J=h=1 errors {%.2e, %.2e, %.2e}, slope %.3f; anisotropic (1, 0.6, 0.3, h=0.7) slope %.3f", errs[0],
                  errs[1], errs[2], slope, oracle::loglog_slope(dts, aniso))};
}

Outcome criterion5() {
  const TrainResult r = train_step(heisenberg(), 0.3, 1e-6);
  const double th = threshold(0.1, 3, 2);
  const double want = 0.1 / 144.0 - 0.01 / 20.0;
  const bool ok = r.final_cost <= 1e-6 && r.iterations <= 5000 && std::abs(th - want) < 1e-15 &&
                  std::abs(th - 1.944e-4) < 1e-7;
  return {ok, fmt("cost %.3e after %d iterations; threshold(0.1, 3, 2) = %.6e", r.final_cost, r.iterations, th)};
}

Outcome criterion6() {
  const TrainResult r = train_step(heisenberg(), 0.3, 1e-12);
  const ReffAnsatz a = r.ansatz();
  const CMatrix v1 = a.unitary(1);
  CMatrix power = CMatrix::Identity(4, 4);
  double worst = 0.0;
  for (int n = 0; n <= 100; ++n) {
    worst = std::max(worst, oracle::spectral_norm(a.unitary(n) - power));
    power = v1 * power;
  }
  SweepConfig sc;
  sc.model = heisenberg();
  sc.method = EvolutionMethod::kReff;
  sc.reff = a;
  const auto series = sweep(sc, Rng(42));
  double rms_worst = 0.0;
  double early = 0.0, late = 0.0;
  for (const auto& s : series) {
    const auto ref = lehmann_series(sc.model, s.key, sc.dt, sc.n_steps);
    rms_worst = std::max(rms_worst, rms(s.values, ref.values));
    const auto thirds = rms_by_third(s.values, ref.values, Part::kComplex);
    early = std::max(early, thirds[0]);
    late = std::max(late, thirds[2]);
  }
  return {worst < 1e-9 && rms_worst < 1e-3,
          fmt("max ||V(N) - V(1)^N|| = %.2e; max correlator RMS = %.2e (first third %.2e, last third %.2e)", worst,
              rms_worst, early, late)};
}

Outcome criterion7() {
  std::mt19937_64 g(7);
  std::uniform_real_distribution<double> angle(-M_PI, M_PI);
  const CMatrix target = trotter_step_circuit(heisenberg(), 0.3).to_matrix();
  Rng rng(7);
  double worst = 0.0;
  const double h = 1e-5;
  for (int n = 0; n < 50; ++n) {
    const TrainingSet ts = TrainingSet::haar_product(6, 2, rng);
    ReffAnsatz a = ReffAnsatz::dimer();
    for (double& x : a.theta) x = angle(g);
    for (double& x : a.gamma) x = angle(g);
    const Gradient gr = grad(target, a, ts);
    auto fd = [&](std::vector<double>& p, std::size_t k) {
      const double keep = p[k];
      p[k] = keep + h;
      const double up = cost(target, build_ansatz_unitary(a, a.theta, a.gamma, 1), ts);
      p[k] = keep - h;
      const double down = cost(target, build_ansatz_unitary(a, a.theta, a.gamma, 1), ts);
      p[k] = keep;
      return (up - down) / (2.0 * h);
    };
    for (std::size_t k = 0; k < a.theta.size(); ++k) worst = std::max(worst, std::abs(gr.theta[k] - fd(a.theta, k)));
    for (std::size_t k = 0; k < a.gamma.size(); ++k) worst = std::max(worst, std::abs(gr.gamma[k] - fd(a.gamma, k)));
  }
  return {worst < 1e-6, fmt("max |shift - finite difference| over 50 points = %.2e", worst)};
}

Outcome criterion8() {
  std::mt19937_64 g(8);
  std::uniform_int_distribution<int> axis(0, 2), site(0, 1), steps(0, 12);
  std::uniform_real_distribution<double> coupling(-1.5, 1.5);
  EstimatorConfig cfg;
  cfg.exact_expectation = true;
  cfg.mitigation = false;
  Rng rng(8);
  double worst_pair = 0.0, worst_oracle = 0.0;
  bool gates_ok = true;
  for (int n = 0; n < 50; ++n) {
    const SpinModel m{coupling(g), coupling(g), coupling(g), coupling(g)};
    const double dt = 0.2;
    const Circuit evo = trotter_evolution(m, dt, steps(g));
    const Correlator c{static_cast<Axis>(axis(g)), site(g), static_cast<Axis>(axis(g)), site(g)};
    const oracle::Vec psi = oracle::haar_product(g);
    const QuantumState init = QuantumState::pure(psi);
    cfg.scheme = Scheme::kIndirect;
    const cplx ind = estimate(evo, c, init, cfg, rng).raw;
    cfg.scheme = Scheme::kDirect;
    const cplx dir = estimate(evo, c, init, cfg, rng).raw;
    const oracle::cplx want = oracle::correlator(evo.to_matrix(), oracle::site(axis_letter(c.alpha), c.i),
                                                 oracle::site(axis_letter(c.beta), c.j), psi);
    worst_pair = std::max(worst_pair, std::abs(ind - dir));
    worst_oracle = std::max({worst_oracle, std::abs(ind - want), std::abs(dir - want)});
    const DirectCircuits dc = direct_circuits(evo, c);
    const int direct_2q = std::max({dc.real.two_qubit_gate_count(), dc.imag_plus.two_qubit_gate_count(),
                                    dc.imag_minus.two_qubit_gate_count()});
    const int indirect_2q = std::min(hadamard_test_circuit(evo, c, 0).two_qubit_gate_count(),
                                     hadamard_test_circuit(evo, c, 1).two_qubit_gate_count());
    gates_ok = gates_ok && dc.real.n_qubits() == evo.n_qubits() && dc.imag_plus.n_qubits() == evo.n_qubits() &&
               direct_2q < indirect_2q;
  }
  return {worst_pair < 1e-9 && worst_oracle < 1e-9 && gates_ok,
          fmt("max |direct - indirect| = %.2e, max |estimate - oracle| = %.2e, ancilla-free with fewer 2q gates: %s",
              worst_pair, worst_oracle, gates_ok ? "yes" : "no")};
}

Outcome criterion9() {
  EstimatorConfig cfg;
  cfg.scheme = Scheme::kIndirect;
  cfg.shots = 8000;
  cfg.mitigation = false;
  cfg.noise = {0.0, 0.007, 0.01};
  SweepConfig sc;
  sc.model = heisenberg();
  sc.keys = {SeriesKey::parse("xx_1_1")};
  sc.estimator = cfg;
  const auto ref = lehmann_series(sc.model, sc.keys[0], sc.dt, sc.n_steps);

  sc.method = EvolutionMethod::kTrotter;
  const auto trot = rms_by_third(sweep(sc, Rng(42).child("trotter"))[0].values, ref.values, Part::kReal);
  sc.method = EvolutionMethod::kReff;
  sc.reff = train_step(heisenberg(), 0.3, 1e-12).ansatz();
  const auto reff = rms_by_third(sweep(sc, Rng(42).child("reff"))[0].values, ref.values, Part::kReal);

  const double trot_ratio = trot[2] / trot[0], reff_ratio = reff[2] / reff[0];
  return {trot_ratio > 3.0 && reff_ratio < 2.0,
          fmt("Trotter Re RMS thirds {%.3f, %.3f, %.3f} last/first %.2f (need > 3); REFF {%.3f, %.3f, %.3f} last/first "
              "%.2f (need < 2)",
              trot[0], trot[1], trot[2], trot_ratio, reff[0], reff[1], reff[2], reff_ratio)};
}

Outcome criterion10() {
  const std::vector<Confusion> readout(2, symmetric_flip(0.02));
  const QuantumState zero = QuantumState::basis(2, 0);
  const std::vector<double> ideal = {1.0, 0.0, 0.0, 0.0};
  auto dist = [&](const std::vector<double>& p) {
    double s = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) s += (p[k] - ideal[k]) * (p[k] - ideal[k]);
    return std::sqrt(s);
  };
  int better = 0;
  bool simplex = true;
  for (int trial = 0; trial < 100; ++trial) {
    Rng rng = Rng(10).child(static_cast<std::uint64_t>(trial));
    Rng cal_rng = rng.child("calibration");
    const CalibrationMatrix cal = build_calibration_matrix(readout, 8000, &cal_rng);
    const Counts counts = sample_counts(zero, 8000, readout, rng);
    const auto raw = counts.frequencies();
    const auto fixed = mitigate(counts, cal);
    double sum = 0.0;
    for (double p : fixed) {
      simplex = simplex && p >= 0.0;
      sum += p;
    }
    simplex = simplex && std::abs(sum - 1.0) < 1e-12;
    if (dist(fixed) < dist(raw)) ++better;
  }
  return {better >= 95 && simplex, fmt("mitigated closer in %d/100 trials; always on simplex: %s", better,
                                       simplex ? "yes" : "no")};
}

Outcome criterion11() {
  const SpinModel m = SpinModel::xy_zz(11.4, 0.16);
  const double dt = 0.1;
  const TrainResult r = train_step(m, dt, 1e-12);

  EstimatorConfig cfg;
  cfg.noise = {0.001, 0.007, 0.01};
  SweepConfig sc;
  sc.model = m;
  sc.method = EvolutionMethod::kReff;
  sc.dt = dt;
  sc.keys = {SeriesKey::parse("xx_1_1")};
  sc.estimator = cfg;
  sc.reff = r.ansatz();
  const auto series = sweep(sc, Rng(42).child("eq19"));
  const PowerSpectrum p = power_spectrum(series[0]);
  const double peak = p.omegas[peak_bin(p.power)];

  // Gap to the level most strongly coupled to the ground state by sigma^x_1.
  const oracle::Mat h = oracle::hamiltonian(m.jxx, m.jyy, m.jzz, m.h);
  Eigen::SelfAdjointEigenSolver<oracle::Mat> es(h);
  const oracle::Mat x1 = oracle::site('X', 0);
  double gap = 0.0, best = -1.0;
  for (int k = 1; k < 4; ++k) {
    const double w = std::norm(es.eigenvectors().col(k).dot(x1 * es.eigenvectors().col(0)));
    if (w > best) {
      best = w;
      gap = es.eigenvalues()(k) - es.eigenvalues()(0);
    }
  }
  const double bin = 2.0 * M_PI / (sc.n_steps * dt);
  return {r.final_cost <= 1e-6 && std::abs(peak - gap) <= bin,
          fmt("cost %.3e; sigma^x peak %.3f vs gap %.3f (bin %.3f)", r.final_cost, peak, gap, bin)};
}

Outcome criterion12() {
  const auto dir = std::filesystem::temp_directory_path() / "qdimer-acceptance-12";
  std::filesystem::remove_all(dir);
  cli::RunConfig cfg;
  cfg.output.directory = dir;
  const int status = cli::run_command("reproduce", "fig2", cfg);
  std::ifstream in(dir / "manifest.json");
  const auto manifest = nlohmann::json::parse(in);
  std::string detail = "manifest RMS (time domain):";
  bool ok = status == 0;
  for (const char* label : {"trotter_indirect", "trotter_direct", "reff_indirect", "reff_direct"}) {
    const auto& m = manifest["metrics"][label]["rms"]["C_xx_1_1"];
    const bool present = m.contains("rms_time") && m["rms_time"].is_number();
    ok = ok && present && std::isfinite(m["rms_time"].get<double>());
    detail += fmt(" %s %.4f", label, present ? m["rms_time"].get<double>() : NAN);
  }
  std::filesystem::remove_all(dir);
  return {ok, detail};
}

struct Criterion {
  Outcome (*run)();
  double budget_seconds;
};

const std::map<int, Criterion> kCriteria = {
    {1, {criterion1, 1e-3}},   {2, {criterion2, 1.0}},    {3, {criterion3, 1.0}},   {4, {criterion4, 1.0}},
    {5, {criterion5, 60.0}},   {6, {criterion6, 10.0}},   {7, {criterion7, 10.0}},  {8, {criterion8, 10.0}},
    {9, {criterion9, 300.0}},  {10, {criterion10, 60.0}}, {11, {criterion11, 120.0}}, {12, {criterion12, 600.0}},
};

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> selected;
  for (int k = 1; k < argc; ++k) {
    if (std::string(argv[k]) == "--criterion" && k + 1 < argc) selected.push_back(std::atoi(argv[++k]));
  }
  if (selected.empty()) {
    for (const auto& [n, c] : kCriteria) selected.push_back(n);
  }
  int failures = 0;
  for (int n : selected) {
    const auto it = kCriteria.find(n);
    if (it == kCriteria.end()) {
      std::printf("criterion %d: FAIL unknown criterion\n", n);
      ++failures;
      continue;
    }
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = it->second.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_budget = secs < it->second.budget_seconds;
    const bool pass = out.pass && in_budget;
    std::printf("criterion %d: %s  %s  [%.3f s, budget %g s%s]\n", n, pass ? "PASS" : "FAIL", out.detail.c_str(), secs,
                it->second.budget_seconds, in_budget ? "" : ", exceeded");
    std::fflush(stdout);
    if (!pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
