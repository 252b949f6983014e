// Copyright 2026 The zulf Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Acceptance checks AC1-AC9. Prints one PASS/FAIL line each; exit status is
// the number of failures.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "zulf/analytic.hpp"
#include "zulf/eigen_basis.hpp"
#include "zulf/estimator.hpp"
#include "zulf/frame.hpp"
#include "zulf/spectrum.hpp"

using namespace zulf;

namespace {

constexpr double gc = constants::gamma_carbon13;
constexpr double gh = constants::gamma_proton;
constexpr double pi = constants::pi;

struct Check {
  bool pass = true;
  std::string detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

std::vector<TransitionLine> lines(const SpinSystem& s, const std::optional<FieldVector>& b,
                                  const std::optional<RotationVector>& w, const Vec3& guide) {
  const std::vector<double> g(s.gammas().begin(), s.gammas().end());
  return transition_catalogue(s, total_hamiltonian(s, b, w), thermal_probe(s, guide),
                              collective_operator(s, g, Axis::z));
}

std::vector<double> above(const std::vector<TransitionLine>& v, double f0) {
  std::vector<double> f;
  for (const auto& l : v) {
    if (l.frequency > f0) f.push_back(l.frequency);
  }
  return f;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Check ac1() {
  Check c;
  const auto t0 = std::chrono::steady_clock::now();
  const auto s = preset("formic_acid");
  for (double b : {0.0, 2.9e-8}) {
    const auto v = lines(s, FieldVector{0.0, 0.0, b}, std::nullopt, Vec3::UnitZ());
    c.require(v.size() == 1, fmt("B=%g T: %g lines", b, static_cast<double>(v.size())));
    if (!v.empty()) {
      c.require(std::abs(v[0].frequency - 222.2) <= 0.01, fmt("B=%g T: line at %.6f Hz", b, v[0].frequency));
      if (c.pass) c.detail = fmt("line at %.6f Hz", v[0].frequency);
    }
  }
  const double dt = seconds_since(t0);
  c.require(dt < 1.0, fmt("runtime %.3f s", dt));
  if (c.pass) c.detail += fmt(" (B=0 and 2.9e-8 T), %.4f s", dt);
  return c;
}

Check ac2() {
  Check c;
  const auto s = preset("formic_acid");
  double worst = 0.0;
  for (double b : {2.9e-8, 1e-7, 1.0788e-7}) {
    const double bound = std::pow(gh * b, 2) / 222.2;
    const auto v = above(lines(s, FieldVector{pi / 2, 0.0, b}, std::nullopt, Vec3::UnitZ()), 100.0);
    if (v.size() != 2) {
      c.require(false, fmt("B=%g: %g lines", b, static_cast<double>(v.size())));
      continue;
    }
    const double split = v[1] - v[0];
    const double law = (gc + gh) * b;
    const auto r = zeeman_lines(1, 0, 222.2, b);
    c.require(std::abs(split - law) <= bound, fmt("B=%g: split %.9f vs %.9f", b, split, law));
    c.require(std::abs(r.delta_sq - split) <= bound, fmt("B=%g: analytic %.9f", b, r.delta_sq));
    std::vector<double> a;
    for (const auto& l : r.single_quantum) a.push_back(l.frequency);
    std::sort(a.begin(), a.end());
    for (std::size_t i = 0; i < 2 && a.size() == 2; ++i) {
      c.require(std::abs(a[i] - v[i]) <= bound, fmt("B=%g: line %g off", b, static_cast<double>(i)));
      worst = std::max(worst, std::abs(a[i] - v[i]) / bound);
    }
    worst = std::max(worst, std::abs(split - law) / bound);
  }
  if (c.pass) c.detail = fmt("worst deviation %.3g of the second-order bound", worst);
  return c;
}

Check ac3() {
  Check c;
  std::string summary;
  for (const char* name : {"formaldehyde", "acetonitrile"}) {
    const auto s = preset(name);
    const int n = star_satellite_count(s);
    const auto par = count_manifold_lines(lines(s, FieldVector{0.0, 0.0, 1e-7}, std::nullopt, Vec3::UnitZ()), 1);
    const auto perp = count_manifold_lines(lines(s, FieldVector{pi / 2, 0.0, 1e-7}, std::nullopt, Vec3::UnitZ()), 1);
    for (int k = 0; k <= 1; ++k) {
      const int zq = par[k].zero_quantum;
      const int sq = perp[k].single_quantum;
      c.require(zq == n - 2 * k, std::string(name) + fmt(" k=%g: %g ZQ", k, zq));
      c.require(sq == 2 * (n - 2 * k), std::string(name) + fmt(" k=%g: %g SQ", k, sq));
      summary += std::string(summary.empty() ? "" : ", ") + "CH" + std::to_string(n) + " k=" +
                 std::to_string(k) + ": " + std::to_string(zq) + " ZQ/" + std::to_string(sq) + " SQ";
    }
  }
  if (c.pass) c.detail = summary;
  return c;
}

Check ac4() {
  Check c;
  const auto fa = preset("formic_acid");
  const auto ac = preset("acetonitrile");
  // ZQ lines along the rotation axis stay unsplit within each manifold.
  const auto zq = lines(ac, std::nullopt, RotationVector{0.0, 0.0, 2.0}, Vec3::UnitZ());
  double dzq = 0.0;
  int zq_lines = 0;
  for (const auto& a : zq) {
    if (!a.label || classify(*a.label) != TransitionKind::zero_quantum) continue;
    ++zq_lines;
    for (const auto& b : zq) {
      if (b.label && classify(*b.label) == TransitionKind::zero_quantum && b.label->lower.k == a.label->lower.k) {
        dzq = std::max(dzq, std::abs(a.frequency - b.frequency));
      }
    }
  }
  c.require(zq_lines > 0 && dzq <= 1e-9, fmt("delta_ZQ %.3g Hz over %g lines", dzq, zq_lines));
  double dsq_err = 0.0;
  for (const SpinSystem* s : {&fa, &ac}) {
    const auto v = lines(*s, std::nullopt, RotationVector{pi / 2, 0.0, 2.0}, Vec3::UnitZ());
    std::vector<double> k0;
    for (const auto& l : v) {
      if (l.frequency > 100.0 && l.label && l.label->lower.k == 0 && l.label->upper.k == 0) {
        k0.push_back(l.frequency);
      }
    }
    if (k0.size() != 2) {
      c.require(false, s->name() + fmt(": %g SQ lines in k=0", static_cast<double>(k0.size())));
      continue;
    }
    dsq_err = std::max(dsq_err, std::abs(k0[1] - k0[0] - 4.0));
  }
  c.require(dsq_err <= 1e-9, fmt("delta_SQ off by %.3g Hz", dsq_err));
  const int want[3] = {1, 3, 2};
  const double axes[3] = {0.0, pi / 4, pi / 2};
  for (int i = 0; i < 3; ++i) {
    const auto v = above(lines(fa, std::nullopt, RotationVector{axes[i], 0.0, 2.0}, Vec3::UnitZ()), 100.0);
    c.require(static_cast<int>(v.size()) == want[i],
              fmt("theta=%.4f: %g lines, want %g", axes[i], static_cast<double>(v.size()), want[i]));
  }
  if (c.pass) c.detail = fmt("delta_ZQ %.2g Hz, delta_SQ-4 %.2g Hz, multiplets 1/3/2", dzq, dsq_err);
  return c;
}

Check ac5() {
  Check c;
  const auto s = preset("formic_acid");
  // zero-field limit
  double worst = 0.0, cal = 0.0;
  for (double b : {0.0, 1e-15}) {
    const auto h = total_hamiltonian(s, FieldVector{1.289, 0.047, b});
    const auto cmp = compare_ch_elements(primed_matrix_elements(s, h, direction(1.289, 0.047)), gc, gh);
    worst = std::max(worst, cmp.max_relative_deviation);
    cal = cmp.calibration;
  }
  c.require(worst <= 1e-9, fmt("relative deviation %.3g", worst));
  if (c.pass) c.detail = fmt("max relative deviation %.2g, calibration %+g", worst, cal);
  return c;
}

Check ac6() {
  Check c;
  const auto s = preset("formic_acid");
  const std::vector<double> g(s.gammas().begin(), s.gammas().end());
  const auto o = collective_operator(s, g, Axis::z);
  const double scale = polarization_scale(kDefaultPolarizingField, kDefaultTemperature);
  double worst = 0.0;
  int compared = 0;
  for (int i = 0; i < 10; ++i) {
    for (int j = 0; j < 10; ++j) {
      const double theta = (i + 0.5) * pi / 10;
      const double phi = j * 2 * pi / 10;
      const auto h = total_hamiltonian(s, FieldVector{theta, phi, 1.0788e-7});
      const auto table = primed_matrix_elements(s, h, direction(theta, phi), false);
      for (const Vec3& guide : {Vec3::UnitX(), Vec3::UnitY(), Vec3::UnitZ()}) {
        const auto cat = transition_catalogue(s, h, thermal_probe(s, guide), o);
        for (const auto& l : cat) {
          double sum = 0.0;
          for (const auto& e : table.elements) {
            if (std::abs(e.frequency - l.frequency) < 1e-6) {
              sum += amplitude_formula(theta, phi, guide, e.element, scale);
            }
          }
          worst = std::max(worst, std::abs(sum - l.magnitude()) / l.magnitude());
          ++compared;
        }
      }
    }
  }
  c.require(worst <= 1e-6, fmt("worst relative deviation %.3g", worst));
  if (c.pass) c.detail = fmt("%g lines, worst relative deviation %.2g", compared, worst);
  return c;
}

Check ac7() {
  Check c;
  const auto s = preset("formic_acid");
  const double theta = 1.289, phi = 0.047, b = 1.0788e-7;
  const std::vector<Vec3> axes = {Vec3::UnitX(), Vec3::UnitY(), Vec3::UnitZ()};
  const auto targets = default_targets(s, b, EstimationMode::field);
  const auto ms = synthesize_measurements(s, theta, phi, b, EstimationMode::field, axes, targets);
  // Splitting of the single-quantum doublet, from the synthesized line positions.
  std::vector<double> f;
  for (std::size_t i = 0; i < ms[0].frequencies.size(); ++i) {
    if (ms[0].magnitudes[i] > 0.0) f.push_back(ms[0].frequencies[i]);
  }
  const auto [lo, hi] = std::minmax_element(f.begin(), f.end());
  const double delta = *hi - *lo;
  const double b_hat = magnitude_from_splitting(delta, 1, 0, gh, gc, EstimationMode::field);
  const double sigma_b = magnitude_from_splitting(3e-4, 1, 0, gh, gc, EstimationMode::field);
  const auto r = orientation_estimate(ms, s, b_hat, EstimationMode::field);
  const double dt = std::abs(r.theta - theta), dp = std::abs(wrap_angle(r.phi - phi));
  c.require(dt < 1e-3, fmt("theta %.6f", r.theta));
  c.require(dp < 1e-3, fmt("phi %.6f", r.phi));
  c.require(std::abs(b_hat - b) <= sigma_b, fmt("B %.6g vs bound %.3g", b_hat, sigma_b));
  c.require(!r.ambiguous, "ambiguous result");
  if (c.pass) {
    c.detail = fmt("theta %.6f, phi %.6f, ", r.theta, r.phi) +
               fmt("B %.7g T (|dB| %.2g <= %.2g)", b_hat, std::abs(b_hat - b), sigma_b);
  }
  return c;
}

Check ac8() {
  Check c;
  const auto t0 = std::chrono::steady_clock::now();
  const auto s = preset("formic_acid");
  MonteCarloConfig mc;
  mc.theta = 1.289;
  mc.phi = 0.047;
  mc.magnitude = 1.0788e-7;
  mc.noise_sigma = 0.01;
  mc.trials = 1000;
  mc.seed = 1;
  const auto r = monte_carlo_precision(s, mc);
  const double dt = seconds_since(t0);
  c.require(std::abs(r.sigma_theta / 0.009 - 1.0) <= 0.3, fmt("sigma_theta %.5f", r.sigma_theta));
  c.require(std::abs(r.sigma_phi / 0.017 - 1.0) <= 0.3, fmt("sigma_phi %.5f", r.sigma_phi));
  c.require(dt < 300.0, fmt("runtime %.1f s", dt));
  const double sigma_b = splitting_propagation({3e-4}, 1, 0, gh, gc, EstimationMode::field)[0].sigma_magnitude;
  c.require(std::abs(sigma_b / 5.6e-12 - 1.0) <= 0.02, fmt("sigma_B %.4g", sigma_b));
  if (c.pass) {
    c.detail = fmt("sigma_theta %.5f, sigma_phi %.5f, ", r.sigma_theta, r.sigma_phi) +
               fmt("%g trials in %.1f s, sigma_B %.3g T", r.trials, dt, sigma_b);
  }
  return c;
}

Check ac9() {
  Check c;
  const auto ac = preset("acetonitrile");
  const cplx i(0.0, 1.0);
  for (int j = 0; j < ac.size(); ++j) {
    const Matrix x = spin_operator(ac, j, Axis::x).matrix;
    const Matrix y = spin_operator(ac, j, Axis::y).matrix;
    const Matrix z = spin_operator(ac, j, Axis::z).matrix;
    const double herm = std::max({(x - x.adjoint()).cwiseAbs().maxCoeff(), (y - y.adjoint()).cwiseAbs().maxCoeff(),
                                  (z - z.adjoint()).cwiseAbs().maxCoeff()});
    const double comm = (x * y - y * x - i * z).cwiseAbs().maxCoeff();
    c.require(herm == 0.0 && comm <= 1e-12, "spin algebra");
  }
  const auto h = total_hamiltonian(ac, FieldVector{0.8, 2.0, 1e-7}, RotationVector{1.1, 0.3, 2.0});
  c.require((h.matrix - h.matrix.adjoint()).cwiseAbs().maxCoeff() == 0.0, "Hamiltonian hermiticity");

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double orth = 0.0;
  for (int k = 0; k < 100; ++k) {
    const auto f = frame_basis(std::acos(1 - 2 * u(rng)), 2 * pi * u(rng));
    orth = std::max(orth, (f.P.transpose() * f.P - Mat3::Identity()).norm());
    c.require(std::abs(f.P.determinant() - 1.0) < 1e-12, "frame determinant");
  }
  c.require(orth < 1e-12, fmt("frame orthogonality %.3g", orth));

  const auto fa = preset("formic_acid");
  const auto fh = total_hamiltonian(fa, FieldVector{1.289, 0.047, 1.0788e-7});
  const auto probe = thermal_probe(fa, Vec3::UnitX());
  const std::vector<double> g(fa.gammas().begin(), fa.gammas().end());
  const Matrix o = collective_operator(fa, g, Axis::z).matrix;
  double imag = 0.0;
  for (double t : {0.0, 0.0013, 0.21, 1.7}) {
    const Matrix rho = propagate(fh, probe.deviation, t);
    imag = std::max(imag, std::abs((rho * o).trace().imag()) / o.cwiseAbs().maxCoeff());
  }
  c.require(imag < 1e-15, fmt("imaginary signal %.3g", imag));

  const auto cat = transition_catalogue(fa, fh, probe, collective_operator(fa, g, Axis::z));
  const auto acq = default_acquisition(cat, fa.coherence_time());
  const auto series = time_signal(cat, fa.coherence_time(), acq.duration, acq.sample_rate);
  const auto spec = fourier_spectrum(series);
  const double e_t = std::inner_product(series.values.begin(), series.values.end(), series.values.begin(), 0.0);
  c.require(std::abs(spec.energy() / e_t - 1.0) <= 1e-9, fmt("Parseval %.3g", spec.energy() / e_t - 1.0));
  std::vector<double> targets;
  std::vector<double> truth;
  for (const auto& l : cat) {
    if (l.frequency > 100.0) {
      targets.push_back(l.frequency);
      truth.push_back(l.magnitude());
    }
  }
  const auto est = extract_line_amplitudes(spec, targets, 0.5);
  double extract = targets.empty() ? 1.0 : 0.0;
  for (std::size_t k = 0; k < targets.size(); ++k) {
    extract = std::max(extract, std::abs(est[k].magnitude / truth[k] - 1.0));
  }
  c.require(extract <= 0.01, fmt("extraction error %.3g", extract));

  const auto free = SpinSystem("free", {gc, gh}, Eigen::MatrixXd::Zero(2, 2), 1.0);
  for (double theta : {0.0, 0.7, pi / 2}) {
    for (const auto& l : lines(free, FieldVector{theta, 0.2, 1e-7}, std::nullopt, Vec3::UnitZ())) {
      const bool larmor = std::abs(l.frequency - gc * 1e-7) < 1e-6 || std::abs(l.frequency - gh * 1e-7) < 1e-6;
      c.require(larmor, fmt("line at %.6f Hz with J=0", l.frequency));
    }
  }
  const double b = 222.2 / (1e5 * gh);
  const double p = two_spin_theory(gc, gh, 222.2, b).zq_probability;
  const double limit = std::abs(gc - gh) / 2;
  c.require(std::abs(p / limit - 1.0) <= 1e-6, fmt("p limit %.3g", p / limit - 1.0));
  if (c.pass) {
    c.detail = fmt("orthogonality %.1e, Parseval %.1e, ", orth, spec.energy() / e_t - 1.0) +
               fmt("extraction %.2g, p-limit %.1e", extract, p / limit - 1.0);
  }
  return c;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Check()>>> checks = {
      {"AC1 zero-quantum line position", ac1}, {"AC2 single-quantum splitting law", ac2},
      {"AC3 manifold line counts", ac3},       {"AC4 rotation exactness", ac4},
      {"AC5 CH matrix elements", ac5},         {"AC6 factored amplitudes", ac6},
      {"AC7 field vector round trip", ac7},    {"AC8 Monte Carlo precision", ac8},
      {"AC9 property suites", ac9}};
  int failures = 0;
  for (const auto& [name, fn] : checks) {
    Check c;
    try {
      c = fn();
    } catch (const std::exception& e) {
      c.pass = false;
      c.detail = std::string("exception: ") + e.what();
    }
    failures += c.pass ? 0 : 1;
    std::printf("%s %s: %s\n", c.pass ? "PASS" : "FAIL", name, c.detail.c_str());
    std::fflush(stdout);
  }
  return failures;
}
