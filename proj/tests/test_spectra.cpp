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
#include <numeric>
#include <sstream>

#include "oracles.hpp"
#include "qdimer/errors.hpp"
#include "qdimer/spectra.hpp"

namespace qdimer {
namespace {

std::size_t bin_of(double omega, int n, double dt) {
  return static_cast<std::size_t>(std::lround(omega * n * dt / (2 * M_PI)));
}

SweepConfig exact_sweep(const SpinModel& m, std::vector<SeriesKey> keys) {
  SweepConfig sc;
  sc.model = m;
  sc.method = EvolutionMethod::kExact;
  sc.keys = std::move(keys);
  return sc;
}

TEST(Spectra, SeriesKeys) {
  EXPECT_EQ(all_keys().size(), 36u);
  EXPECT_EQ(same_site_keys().size(), 6u);
  EXPECT_EQ(diagonal_keys().size(), 12u);
  const SeriesKey k = SeriesKey::parse("xy_1_2");
  EXPECT_EQ(k.alpha, Axis::X);
  EXPECT_EQ(k.beta, Axis::Y);
  EXPECT_EQ(k.i, 0);
  EXPECT_EQ(k.j, 1);
  EXPECT_EQ(k.name(), "xy_1_2");
  for (const char* bad : {"xq_1_1", "xx_0_1", "xx_1", "xx_1_3"}) EXPECT_ANY_THROW(SeriesKey::parse(bad)) << bad;
}

TEST(Spectra, ExactSweepMatchesOracle) {
  const SpinModel m = SpinModel::heisenberg(1, 1);
  const auto series = sweep(exact_sweep(m, all_keys()), Rng(1));
  ASSERT_EQ(series.size(), 36u);
  const CVector g0 = ground_state(eigensystem(m));
  const oracle::Mat h = oracle::hamiltonian(1, 1, 1, 1);
  for (const auto& s : series) {
    ASSERT_EQ(s.size(), 100u);
    EXPECT_EQ(s.provenance, "exact/state");
    for (std::size_t k = 0; k < s.size(); k += 7) {
      EXPECT_DOUBLE_EQ(s.times[k], 0.3 * static_cast<double>(k));
      EXPECT_LT(std::abs(s.values[k] - lehmann_correlation(m, s.key.alpha, s.key.beta, s.key.i, s.key.j, s.times[k])),
                1e-9);
    }
    // Independent check on one grid point.
    const char a = "XYZ"[static_cast<int>(s.key.alpha)], b = "XYZ"[static_cast<int>(s.key.beta)];
    const oracle::cplx want =
        oracle::correlator(oracle::evolution(h, s.times[13]), oracle::site(a, s.key.i), oracle::site(b, s.key.j), g0);
    EXPECT_LT(std::abs(s.values[13] - want), 1e-9);
  }
}

TEST(Spectra, ClosedFormZz) {
  const auto s = sweep(exact_sweep(SpinModel::heisenberg(1, 1), {SeriesKey::parse("zz_1_1")}), Rng(1))[0];
  for (std::size_t k = 0; k < s.size(); ++k) EXPECT_LT(std::abs(s.values[k] - std::exp(cplx(0, -4 * s.times[k]))), 1e-10);
  for (const auto& x : sweep(exact_sweep(SpinModel::heisenberg(1, 1), same_site_keys()), Rng(1))) {
    EXPECT_LT(std::abs(x.values[0] - 1.0), 1e-12);
  }
}

TEST(Spectra, ReffSweepNeedsParameters) {
  SweepConfig sc = exact_sweep(SpinModel::heisenberg(1, 1), same_site_keys());
  sc.method = EvolutionMethod::kReff;
  EXPECT_ANY_THROW(sweep(sc, Rng(1)));
}

TEST(Spectra, SampledSweepIndependentOfThreads) {
  SweepConfig sc = exact_sweep(SpinModel::heisenberg(1, 1), {SeriesKey::parse("xx_1_1"), SeriesKey::parse("zz_2_2")});
  sc.method = EvolutionMethod::kTrotter;
  sc.n_steps = 12;
  EstimatorConfig cfg;
  cfg.shots = 400;
  cfg.noise = {0.001, 0.007, 0.01};
  sc.estimator = cfg;
  const auto a = sweep(sc, Rng(9));
  sc.threads = 3;
  const auto b = sweep(sc, Rng(9));
  for (std::size_t s = 0; s < a.size(); ++s) {
    EXPECT_EQ(a[s].values, b[s].values);
    EXPECT_EQ(a[s].raw, b[s].raw);
  }
  EXPECT_EQ(a[0].provenance, "trotter/direct/mitigated");
  const auto c = sweep(sc, Rng(10));
  EXPECT_NE(a[0].values, c[0].values);
}

TEST(Spectra, FourierMatchesDirectSum) {
  std::mt19937_64 g(3);
  std::normal_distribution<double> n;
  std::vector<cplx> x(37);
  for (auto& v : x) v = {n(g), n(g)};
  const auto f = fourier(x, 0.2);
  const auto want = oracle::dft(x, 0.2);
  for (std::size_t m = 0; m < x.size(); ++m) EXPECT_LT(std::abs(f[m] - want[m]), 1e-10);
  const auto grid = frequency_grid(37, 0.2);
  EXPECT_NEAR(grid[1], 2 * M_PI / (37 * 0.2), 1e-15);
}

TEST(Spectra, PowerSpectrumPeaks) {
  const SpinModel m = SpinModel::heisenberg(1, 1);
  const auto zz = power_spectrum(lehmann_series(m, SeriesKey::parse("zz_1_1"), 0.3, 100));
  EXPECT_EQ(peak_bin(zz.power), 19u);
  EXPECT_NEAR(zz.omegas[19], 2 * M_PI * 19 / 30, 1e-12);

  const auto xx = power_spectrum(lehmann_series(m, SeriesKey::parse("xx_1_1"), 0.3, 100));
  auto top = top_bins(xx.power, 2);
  std::sort(top.begin(), top.end());
  EXPECT_EQ(top[0], bin_of(2, 100, 0.3));
  EXPECT_EQ(top[1], bin_of(6, 100, 0.3));
  // Raw bins carry unequal leakage; line weights fitted against unit-line
  // transforms are equal.
  const auto s = lehmann_series(m, SeriesKey::parse("xx_1_1"), 0.3, 100);
  const auto f = fourier(s.values, 0.3);
  Eigen::MatrixXcd basis(100, 2);
  for (int p = 0; p < 2; ++p) {
    std::vector<cplx> line(100);
    for (int k = 0; k < 100; ++k) line[k] = std::exp(cplx(0, -(p == 0 ? 2.0 : 6.0) * 0.3 * k));
    const auto t = oracle::dft(line, 0.3);
    for (int k = 0; k < 100; ++k) basis(k, p) = t[k];
  }
  const Eigen::VectorXcd amp = basis.colPivHouseholderQr().solve(Eigen::Map<const Eigen::VectorXcd>(f.data(), 100));
  EXPECT_NEAR(std::norm(amp(0)) / std::norm(amp(1)), 1.0, 0.05);
  const auto want = oracle::dft(s.values, 0.3);
  for (std::size_t b : top) EXPECT_NEAR(xx.power[b], std::norm(want[b]) / (2 * M_PI), 1e-10);

  CorrelationSeries flat;
  flat.dt = 0.3;
  flat.values.assign(50, cplx(1.0));
  flat.times.resize(50);
  for (int k = 0; k < 50; ++k) flat.times[k] = 0.3 * k;
  EXPECT_EQ(peak_bin(power_spectrum(flat).power), 0u);
}

TEST(Spectra, Parseval) {
  const SpinModel m = SpinModel::heisenberg(1, 0.3);
  for (const char* name : {"xx_1_1", "zy_2_1"}) {
    const auto s = lehmann_series(m, SeriesKey::parse(name), 0.3, 100);
    const auto p = power_spectrum(s);
    double time = 0.0, freq = 0.0;
    for (const auto& v : s.values) time += std::norm(v) * s.dt;
    for (double x : p.power) freq += x * p.omegas[1];
    EXPECT_NEAR(time, freq, 1e-8);
  }
}

TEST(Spectra, WindowAndPadding) {
  const auto s = lehmann_series(SpinModel::heisenberg(1, 1), SeriesKey::parse("zz_1_1"), 0.3, 100);
  SpectrumOptions o;
  o.zero_pad = 4;
  o.window = true;
  const auto p = power_spectrum(s, o);
  EXPECT_EQ(p.power.size(), 400u);
  EXPECT_NEAR(p.omegas[peak_bin(p.power)], 4.0, p.omegas[1]);
}

TEST(Spectra, StructureFactorTriplet) {
  const auto series = sweep(exact_sweep(SpinModel::heisenberg(1, 1), same_site_keys()), Rng(1));
  const DSFResult d = dynamical_structure_factor(series, {0, 0, 0});
  const auto iso = intensity(d);
  auto top = top_bins(iso, 3);
  std::sort(top.begin(), top.end());
  EXPECT_EQ(top, (std::vector<std::size_t>{bin_of(2, 100, 0.3), bin_of(4, 100, 0.3), bin_of(6, 100, 0.3)}));
  for (double x : iso) EXPECT_GE(x, -1e-12);

  // Field along z removes the zz channel.
  const auto perp = intensity(d, Vec3{0, 0, 1});
  const auto& pxx = d.power.at({Axis::X, Axis::X});
  const auto& pyy = d.power.at({Axis::Y, Axis::Y});
  for (std::size_t m = 0; m < perp.size(); ++m) EXPECT_NEAR(perp[m], pxx[m] + pyy[m], 1e-12);
  EXPECT_ANY_THROW(intensity(d, Vec3{0, 0, 2}));
}

TEST(Spectra, ZeroFieldMergesPeaks) {
  const auto series = sweep(exact_sweep(SpinModel::heisenberg(1, 0), same_site_keys()), Rng(1));
  const auto iso = intensity(dynamical_structure_factor(series, {0, 0, 0}));
  EXPECT_EQ(peak_bin(iso), bin_of(4, 100, 0.3));
}

TEST(Spectra, XyZzPeaksAtExcitations) {
  const SpinModel m = SpinModel::xy_zz(11.4, 0.16);
  SweepConfig sc = exact_sweep(m, same_site_keys());
  sc.dt = 0.1;
  const auto series = sweep(sc, Rng(1));
  const DSFResult d = dynamical_structure_factor(series, {0, 0, 0});
  const double bin = d.omegas[1];
  const auto& pxx = d.power.at({Axis::X, Axis::X});
  const auto& pzz = d.power.at({Axis::Z, Axis::Z});
  EXPECT_NEAR(d.omegas[peak_bin(pxx)], 23.12, bin);
  EXPECT_NEAR(d.omegas[peak_bin(pzz)], 45.6, bin);
}

TEST(Spectra, PhaseFactorsAndPairs) {
  const auto series = sweep(exact_sweep(SpinModel::heisenberg(1, 1), diagonal_keys()), Rng(1));
  DSFOptions o;
  const Vec3 q{M_PI, 0, 0};
  const DSFResult d = dynamical_structure_factor(series, q, o);
  // At Q = pi x the cross terms enter with sign -1.
  const auto& sxx = d.s.at({Axis::X, Axis::X});
  std::vector<cplx> f[4];
  for (const auto& s : series) {
    if (s.key.alpha != Axis::X) continue;
    f[2 * s.key.i + s.key.j] = fourier(s.values, 0.3);
  }
  for (std::size_t m = 0; m < sxx.size(); m += 11) {
    EXPECT_LT(std::abs(sxx[m] - (f[0][m] + f[3][m] - f[1][m] - f[2][m])), 1e-9);
  }
  o.pairs = {{0, 0}};
  const DSFResult only = dynamical_structure_factor(series, q, o);
  EXPECT_LT(std::abs(only.s.at({Axis::X, Axis::X})[5] - f[0][5]), 1e-12);

  const auto same = sweep(exact_sweep(SpinModel::heisenberg(1, 1), same_site_keys()), Rng(1));
  o.pairs = {{0, 1}};
  EXPECT_ANY_THROW(dynamical_structure_factor(same, q, o));
}

TEST(Spectra, ZeroInZeroOut) {
  auto series = sweep(exact_sweep(SpinModel::heisenberg(1, 1), same_site_keys()), Rng(1));
  for (auto& s : series) std::fill(s.values.begin(), s.values.end(), cplx(0.0));
  for (double x : intensity(dynamical_structure_factor(series, {0, 0, 0}))) EXPECT_EQ(x, 0.0);
}

TEST(Spectra, HermitianSymmetry) {
  const SpinModel m{1.0, 0.8, 0.5, 0.4};
  for (Axis a : kAxes) {
    for (Axis b : kAxes) {
      for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
          const cplx lhs = lehmann_correlation(m, a, b, i, j, 1.7);
          const cplx rhs = std::conj(lehmann_correlation(m, b, a, j, i, -1.7));
          EXPECT_LT(std::abs(lhs - rhs), 1e-10);
        }
      }
    }
  }
}

TEST(Spectra, RmsReports) {
  auto s = lehmann_series(SpinModel::heisenberg(1, 1), SeriesKey::parse("xx_1_1"), 0.3, 99);
  const auto ref = s;
  EXPECT_EQ(rms_report(s, ref).rms_time, 0.0);
  EXPECT_EQ(rms_report(s, ref).rms_freq, 0.0);
  for (auto& v : s.values) v += 0.1;
  EXPECT_NEAR(rms_report(s, ref).rms_time, 0.1, 1e-12);
  const auto thirds = rms_by_third(s.values, ref.values, Part::kReal);
  for (double x : thirds) EXPECT_NEAR(x, 0.1, 1e-12);
  EXPECT_NEAR(rms(s.values, ref.values, Part::kImag), 0.0, 1e-15);
  const auto shorter = lehmann_series(SpinModel::heisenberg(1, 1), SeriesKey::parse("xx_1_1"), 0.3, 50);
  EXPECT_ANY_THROW(rms_report(s, shorter));
}

TEST(Spectra, CsvFormatting) {
  const auto s = lehmann_series(SpinModel::heisenberg(1, 1), SeriesKey::parse("zz_1_1"), 0.3, 3);
  std::ostringstream out;
  write_series_csv(out, s);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "t,re,im");
  std::getline(in, line);
  EXPECT_EQ(line, "0,1,0");
  std::getline(in, line);
  EXPECT_EQ(line, "0.3," + format_number(std::cos(1.2)) + "," + format_number(-std::sin(1.2)));
  EXPECT_EQ(format_number(1.0 / 3.0), "0.333333333333");
  EXPECT_EQ(format_number(-0.0), "0");

  std::ostringstream dsf;
  write_dsf_csv(dsf, {0.0, 1.5}, {2.0, 0.25});
  EXPECT_EQ(dsf.str(), "omega,intensity\n0,2\n1.5,0.25\n");
}

}  // namespace
}  // namespace qdimer
