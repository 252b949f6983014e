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


#include "zulf/estimator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include "zulf/error.hpp"
#include "zulf/frame.hpp"
#include "zulf/hamiltonian.hpp"
#include "zulf/spectrum.hpp"

namespace zulf {

namespace {

constexpr double kPi = constants::pi;
constexpr double kSameFrequency = 1e-9;  // Hz
constexpr double kResidualSlack = 1e-12;
constexpr double kSameDirection = 1e-4;  // rad

Hamiltonian reference_hamiltonian(const SpinSystem& system, double theta, double phi,
                                  double magnitude, EstimationMode mode) {
  if (mode == EstimationMode::field) {
    return total_hamiltonian(system, FieldVector{theta, phi, magnitude}, std::nullopt);
  }
  return total_hamiltonian(system, std::nullopt, RotationVector{theta, phi, magnitude});
}

std::pair<double, double> canonical(double theta, double phi) {
  theta = std::fmod(theta, 2.0 * kPi);
  if (theta < 0.0) theta += 2.0 * kPi;
  if (theta > kPi) {
    theta = 2.0 * kPi - theta;
    phi += kPi;
  }
  phi = std::fmod(phi, 2.0 * kPi);
  if (phi < 0.0) phi += 2.0 * kPi;
  if (phi >= 2.0 * kPi) phi = 0.0;
  if (std::sin(theta) < 1e-12) phi = 0.0;
  return {theta, phi};
}

double direction_distance(double t1, double p1, double t2, double p2) {
  const double c = std::clamp(direction(t1, p1).dot(direction(t2, p2)), -1.0, 1.0);
  return std::acos(c);
}

struct SimplexResult {
  Eigen::VectorXd x;
  double value = 0.0;
  int iterations = 0;
};

SimplexResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f,
                          const Eigen::VectorXd& start, double step, double xtol,
                          int max_iterations = 4000) {
  const Eigen::Index d = start.size();
  std::vector<Eigen::VectorXd> pts(static_cast<std::size_t>(d + 1), start);
  std::vector<double> vals(static_cast<std::size_t>(d + 1));
  for (Eigen::Index i = 0; i < d; ++i) pts[static_cast<std::size_t>(i + 1)][i] += step;
  for (std::size_t i = 0; i < pts.size(); ++i) vals[i] = f(pts[i]);

  std::vector<std::size_t> order(pts.size());
  int it = 0;
  for (; it < max_iterations; ++it) {
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return vals[a] < vals[b];
    });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second = order[order.size() - 2];
    double size = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      size = std::max(size, (pts[i] - pts[best]).cwiseAbs().maxCoeff());
    }
    if (size < xtol) break;

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(d);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (i != worst) centroid += pts[i];
    }
    centroid /= static_cast<double>(d);

    const Eigen::VectorXd reflected = centroid + (centroid - pts[worst]);
    const double fr = f(reflected);
    if (fr < vals[best]) {
      const Eigen::VectorXd expanded = centroid + 2.0 * (centroid - pts[worst]);
      const double fe = f(expanded);
      if (fe < fr) {
        pts[worst] = expanded;
        vals[worst] = fe;
      } else {
        pts[worst] = reflected;
        vals[worst] = fr;
      }
      continue;
    }
    if (fr < vals[second]) {
      pts[worst] = reflected;
      vals[worst] = fr;
      continue;
    }
    const bool outside = fr < vals[worst];
    const Eigen::VectorXd contracted = outside ? Eigen::VectorXd(centroid + 0.5 * (reflected - centroid))
                                               : Eigen::VectorXd(centroid + 0.5 * (pts[worst] - centroid));
    const double fc = f(contracted);
    if (fc < (outside ? fr : vals[worst])) {
      pts[worst] = contracted;
      vals[worst] = fc;
      continue;
    }
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (i == best) continue;
      pts[i] = pts[best] + 0.5 * (pts[i] - pts[best]);
      vals[i] = f(pts[i]);
    }
  }
  const auto best = static_cast<std::size_t>(
      std::min_element(vals.begin(), vals.end()) - vals.begin());
  return {pts[best], vals[best], it};
}

struct Prepared {
  Vec3 axis;
  std::vector<std::size_t> index;  // into the model targets
  std::vector<double> magnitude;   // normalized
  std::vector<cplx> complex;       // normalized, empty without phases
};

double scale_of(const std::vector<double>& v, Normalization n) {
  double s = 0.0;
  if (n == Normalization::peak) {
    for (double x : v) s = std::max(s, x);
  } else {
    for (double x : v) s += x * x;
    s = std::sqrt(s);
  }
  return s;
}

class Objective {
 public:
  Objective(const LineModel& model, std::vector<Prepared> data, Normalization norm)
      : model_(model), data_(std::move(data)), norm_(norm) {}

  bool has_phases() const {
    return std::all_of(data_.begin(), data_.end(),
                       [](const Prepared& p) { return !p.complex.empty(); });
  }

  // Magnitude residual, and the complex residual when `with_phase`.
  double operator()(double theta, double phi, bool with_phase = false) const {
    double r = 0.0;
    std::vector<double> mags;
    for (const auto& m : data_) {
      const auto all = model_.amplitudes(theta, phi, m.axis);
      mags.resize(m.index.size());
      for (std::size_t t = 0; t < m.index.size(); ++t) mags[t] = std::abs(all[m.index[t]]);
      const double s = scale_of(mags, norm_);
      for (std::size_t t = 0; t < m.index.size(); ++t) {
        if (with_phase) {
          const cplx sim = s > 0.0 ? all[m.index[t]] / s : cplx{};
          r += std::norm(sim - m.complex[t]);
        } else {
          const double sim = s > 0.0 ? mags[t] / s : 0.0;
          r += (sim - m.magnitude[t]) * (sim - m.magnitude[t]);
        }
      }
    }
    return r;
  }

 private:
  const LineModel& model_;
  std::vector<Prepared> data_;
  Normalization norm_;
};

}  // namespace

const char* mode_name(EstimationMode mode) {
  return mode == EstimationMode::field ? "field" : "rotation";
}

const char* normalization_name(Normalization n) { return n == Normalization::peak ? "peak" : "l2"; }

double wrap_angle(double a) {
  a = std::remainder(a, 2.0 * kPi);
  if (a <= -kPi) a += 2.0 * kPi;
  return a;
}

AmplitudeVector normalized(const AmplitudeVector& v, Normalization mode) {
  if (v.frequencies.size() != v.magnitudes.size()) {
    throw DomainError("amplitude vector: frequencies and magnitudes differ in length");
  }
  if (v.phases && v.phases->size() != v.magnitudes.size()) {
    throw DomainError("amplitude vector: phases and magnitudes differ in length");
  }
  for (double m : v.magnitudes) {
    if (!(m >= 0.0) || !std::isfinite(m)) throw DomainError("amplitude magnitudes must be >= 0");
  }
  const double s = scale_of(v.magnitudes, mode);
  if (s == 0.0) throw DomainError("amplitude vector is all zero");
  AmplitudeVector out = v;
  for (double& m : out.magnitudes) m /= s;
  return out;
}

double magnitude_from_splitting(double delta, int n, int k, double gamma_h, double gamma_c,
                                EstimationMode mode) {
  if (!(delta >= 0.0)) throw DomainError("splitting must be >= 0");
  if (mode == EstimationMode::rotation) return delta / 2.0;
  if (n < 1 || k < 0 || 2 * k > n) throw DomainError("invalid (n, k) for the splitting law");
  const double q = 1.0 + n - 2.0 * k;
  return delta * q / (2.0 * (gamma_h + (n - 2 * k) * gamma_c));
}

std::vector<SplittingPropagation> splitting_propagation(const std::vector<double>& sigma_deltas,
                                                        int n, int k, double gamma_h,
                                                        double gamma_c, EstimationMode mode) {
  std::vector<SplittingPropagation> rows;
  for (double s : sigma_deltas) {
    rows.push_back({s, magnitude_from_splitting(s, n, k, gamma_h, gamma_c, mode)});
  }
  return rows;
}

LineModel::LineModel(const SpinSystem& system, double magnitude, EstimationMode mode,
                     std::vector<double> targets, double tolerance)
    : targets_(std::move(targets)) {
  if (!(magnitude >= 0.0)) throw DomainError("magnitude must be >= 0");
  if (!(tolerance > 0.0)) throw DomainError("match tolerance must be positive");
  const Hamiltonian h = reference_hamiltonian(system, 0.0, 0.0, magnitude, mode);
  const PrimedTable table = primed_matrix_elements(system, h, Vec3::UnitZ(), false);
  groups_.resize(targets_.size());
  for (std::size_t t = 0; t < targets_.size(); ++t) {
    for (const auto& e : table.elements) {
      if (std::abs(e.frequency - targets_[t]) <= tolerance) groups_[t].push_back(e.element);
    }
    if (groups_[t].empty()) {
      std::ostringstream msg;
      msg.precision(10);
      msg << "no model line within " << tolerance << " Hz of " << targets_[t] << " Hz";
      throw DomainError(msg.str());
    }
  }
}

std::vector<cplx> LineModel::amplitudes(double theta, double phi, const Vec3& guiding_axis) const {
  const Mat3 P = frame_basis(theta, phi).P;
  const Vec3 pg = P.transpose() * guiding_axis;
  const Vec3 pz = P.row(2).transpose();
  std::vector<cplx> out(groups_.size());
  for (std::size_t t = 0; t < groups_.size(); ++t) {
    cplx sum{};
    for (const auto& o : groups_[t]) {
      const cplx a = pg.x() * o.x() + pg.y() * o.y() + pg.z() * o.z();
      const cplx b = pz.x() * o.x() + pz.y() * o.y() + pz.z() * o.z();
      sum -= a * std::conj(b);
    }
    out[t] = sum;
  }
  return out;
}

EstimationResult orientation_estimate(const std::vector<AmplitudeVector>& measurements,
                                      const SpinSystem& system, double magnitude,
                                      EstimationMode mode, const EstimatorOptions& options) {
  if (measurements.empty()) throw DomainError("no measurements supplied");
  EstimationResult result;
  result.mode = mode;
  result.magnitude = magnitude;
  result.magnitude_sigma = options.magnitude_sigma;

  std::vector<AmplitudeVector> usable;
  for (const auto& m : measurements) {
    if (m.guiding_axis.norm() == 0.0) throw DomainError("guiding axis has zero norm");
    if (m.frequencies.size() != m.magnitudes.size()) {
      throw DomainError("amplitude vector: frequencies and magnitudes differ in length");
    }
    if (std::all_of(m.magnitudes.begin(), m.magnitudes.end(), [](double x) { return x == 0.0; })) {
      std::ostringstream msg;
      msg << "measurement with guiding axis (" << m.guiding_axis.x() << ", " << m.guiding_axis.y()
          << ", " << m.guiding_axis.z() << ") has no signal; excluded";
      result.warnings.push_back(msg.str());
      continue;
    }
    usable.push_back(normalized(m, options.normalization));
  }
  if (usable.empty()) throw DomainError("every measurement is empty");

  std::vector<double> targets;
  for (const auto& m : usable) {
    for (double f : m.frequencies) {
      if (std::none_of(targets.begin(), targets.end(),
                       [&](double t) { return std::abs(t - f) <= kSameFrequency; })) {
        targets.push_back(f);
      }
    }
  }
  const LineModel model(system, magnitude, mode, targets, options.match_tolerance);

  std::vector<Prepared> data;
  bool phases = true;
  bool axial = true;
  for (const auto& m : usable) {
    Prepared p;
    p.axis = m.guiding_axis.normalized();
    if (std::abs(p.axis.x()) > 1e-12 || std::abs(p.axis.y()) > 1e-12) axial = false;
    for (std::size_t t = 0; t < m.frequencies.size(); ++t) {
      const auto it = std::find_if(targets.begin(), targets.end(), [&](double x) {
        return std::abs(x - m.frequencies[t]) <= kSameFrequency;
      });
      p.index.push_back(static_cast<std::size_t>(it - targets.begin()));
      p.magnitude.push_back(m.magnitudes[t]);
    }
    if (m.phases) {
      for (std::size_t t = 0; t < m.magnitudes.size(); ++t) {
        p.complex.push_back(std::polar(m.magnitudes[t], (*m.phases)[t]));
      }
    } else {
      phases = false;
    }
    data.push_back(std::move(p));
  }
  result.diagnostics.axes_used = static_cast<int>(data.size());
  result.phi_undetermined = axial;
  const Objective objective(model, std::move(data), options.normalization);

  // Grid over theta (and phi unless it drops out); pole rows hold one point.
  const int nt = static_cast<int>(std::lround(kPi / options.grid_step)) + 1;
  const int np = axial ? 1 : static_cast<int>(std::lround(2.0 * kPi / options.grid_step));
  const double dt = kPi / (nt - 1);
  const double dp = 2.0 * kPi / np;
  std::vector<double> grid(static_cast<std::size_t>(nt * np), 0.0);
  auto at = [&](int i, int j) -> double& {
    return grid[static_cast<std::size_t>(i * np + ((j % np) + np) % np)];
  };
  for (int i = 0; i < nt; ++i) {
    const bool pole = i == 0 || i == nt - 1;
    for (int j = 0; j < np; ++j) {
      if (pole && j > 0) {
        at(i, j) = at(i, 0);
        continue;
      }
      at(i, j) = objective(i * dt, j * dp);
      ++result.diagnostics.grid_points;
    }
  }

  struct Cell {
    int i;
    int j;
    double value;
  };
  std::vector<Cell> minima;
  for (int i = 0; i < nt; ++i) {
    const bool pole = i == 0 || i == nt - 1;
    for (int j = 0; j < (pole ? 1 : np); ++j) {
      const double v = at(i, j);
      bool local = true;
      for (int di = -1; di <= 1 && local; ++di) {
        const int ii = i + di;
        if (ii < 0 || ii >= nt) continue;
        const bool pole_row = ii == 0 || ii == nt - 1;
        if (pole && di != 0) {
          for (int jj = 0; jj < np && local; ++jj) local = v <= at(ii, jj);
          continue;
        }
        for (int dj = -1; dj <= 1 && local; ++dj) {
          if (di == 0 && dj == 0) continue;
          local = v <= at(ii, pole_row ? 0 : j + dj);
        }
      }
      if (local) minima.push_back({i, j, v});
    }
  }
  std::sort(minima.begin(), minima.end(), [](const Cell& a, const Cell& b) {
    if (a.value != b.value) return a.value < b.value;
    return a.i != b.i ? a.i < b.i : a.j < b.j;
  });
  result.diagnostics.local_minima = static_cast<int>(minima.size());
  if (minima.empty()) throw NumericError("grid search found no minimum");
  result.diagnostics.best_grid_theta = minima.front().i;
  result.diagnostics.best_grid_phi = minima.front().j;
  if (static_cast<int>(minima.size()) > options.max_candidates) {
    minima.resize(static_cast<std::size_t>(options.max_candidates));
  }

  std::vector<Candidate> found;
  for (const auto& cell : minima) {
    SimplexResult s;
    if (axial) {
      s = nelder_mead(
          [&](const Eigen::VectorXd& x) { return objective(x[0], 0.0); },
          Eigen::VectorXd::Constant(1, cell.i * dt), 0.5 * dt, options.xtol);
    } else {
      s = nelder_mead(
          [&](const Eigen::VectorXd& x) { return objective(x[0], x[1]); },
          Eigen::Vector2d(cell.i * dt, cell.j * dp), 0.5 * dt, options.xtol);
    }
    ++result.diagnostics.refinements;
    result.diagnostics.iterations += s.iterations;
    auto [theta, phi] = canonical(s.x[0], axial ? 0.0 : s.x[1]);
    if (axial) phi = 0.0;
    const bool duplicate = std::any_of(found.begin(), found.end(), [&](const Candidate& c) {
      return direction_distance(c.theta, c.phi, theta, phi) < kSameDirection;
    });
    if (!duplicate) found.push_back({theta, phi, objective(theta, phi), -1.0});
  }

  double best = std::numeric_limits<double>::infinity();
  for (const auto& c : found) best = std::min(best, c.residual);
  std::vector<Candidate> kept;
  for (const auto& c : found) {
    if (c.residual <= 2.0 * best + kResidualSlack) kept.push_back(c);
  }
  if (phases && objective.has_phases()) {
    double best_phase = std::numeric_limits<double>::infinity();
    for (auto& c : kept) {
      c.phase_residual = objective(c.theta, c.phi, true);
      best_phase = std::min(best_phase, c.phase_residual);
    }
    std::erase_if(kept, [&](const Candidate& c) {
      return c.phase_residual > 2.0 * best_phase + kResidualSlack;
    });
  }
  const auto pick = std::min_element(kept.begin(), kept.end(), [](const Candidate& a, const Candidate& b) {
    const double ka = a.phase_residual >= 0.0 ? a.phase_residual : a.residual;
    const double kb = b.phase_residual >= 0.0 ? b.phase_residual : b.residual;
    return ka < kb;
  });
  result.theta = pick->theta;
  result.phi = pick->phi;
  result.residual = pick->residual;
  std::sort(kept.begin(), kept.end(), [](const Candidate& a, const Candidate& b) {
    return a.theta != b.theta ? a.theta < b.theta : a.phi < b.phi;
  });
  result.ambiguity_set = std::move(kept);
  result.ambiguous = result.ambiguity_set.size() > 1 || axial;
  if (axial) result.warnings.push_back("all guiding axes along z: phi is not identifiable");
  if (result.ambiguity_set.size() > 1) {
    result.warnings.push_back(std::to_string(result.ambiguity_set.size()) +
                              " orientations fit equally well");
  }
  return result;
}

EstimationResult rotation_estimate(const std::vector<AmplitudeVector>& measurements,
                                   const SpinSystem& system, std::optional<double> splitting,
                                   const EstimatorOptions& options) {
  double delta = 0.0;
  if (splitting) {
    delta = *splitting;
  } else {
    bool any = false;
    for (const auto& m : measurements) {
      double top = 0.0;
      for (double a : m.magnitudes) top = std::max(top, a);
      double lo = std::numeric_limits<double>::infinity();
      double hi = -lo;
      int count = 0;
      for (std::size_t t = 0; t < m.magnitudes.size() && t < m.frequencies.size(); ++t) {
        if (m.magnitudes[t] <= 1e-6 * top) continue;
        lo = std::min(lo, m.frequencies[t]);
        hi = std::max(hi, m.frequencies[t]);
        ++count;
      }
      if (count >= 2) {
        delta = std::max(delta, hi - lo);
        any = true;
      }
    }
    if (!any) throw DomainError("cannot infer the rotation splitting: no measurement has two lines");
  }
  const double omega = magnitude_from_splitting(delta, 1, 0, 0.0, 0.0, EstimationMode::rotation);
  return orientation_estimate(measurements, system, omega, EstimationMode::rotation, options);
}

std::vector<double> default_targets(const SpinSystem& system, double magnitude,
                                    EstimationMode mode) {
  const Hamiltonian h = reference_hamiltonian(system, 0.0, 0.0, magnitude, mode);
  const PrimedTable table = primed_matrix_elements(system, h, Vec3::UnitZ(), false);
  double top = 0.0;
  for (const auto& e : table.elements) top = std::max(top, e.element.norm());
  const double cut = 0.5 * system.min_coupling();
  std::vector<double> out;
  for (const auto& e : table.elements) {
    if (e.frequency < cut || e.element.norm() <= 1e-10 * top) continue;
    if (std::none_of(out.begin(), out.end(),
                     [&](double f) { return std::abs(f - e.frequency) <= 1e-6; })) {
      out.push_back(e.frequency);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<AmplitudeVector> synthesize_measurements(const SpinSystem& system, double theta,
                                                     double phi, double magnitude,
                                                     EstimationMode mode,
                                                     const std::vector<Vec3>& axes,
                                                     const std::vector<double>& targets,
                                                     const SynthesisOptions& options) {
  const Hamiltonian h = reference_hamiltonian(system, theta, phi, magnitude, mode);
  const std::vector<double> g(system.gammas().begin(), system.gammas().end());
  const SpinOperator obs = collective_operator(system, g, Axis::z);
  CatalogueOptions copt;
  copt.label = false;
  std::vector<AmplitudeVector> out;
  for (const auto& axis : axes) {
    const ProbeState probe =
        thermal_probe(system, axis, options.polarizing_field, options.temperature);
    const auto lines = transition_catalogue(system, h, probe, obs, copt);
    AmplitudeVector v;
    v.guiding_axis = axis.normalized();
    v.frequencies = targets;
    std::vector<double> phases;
    for (double t : targets) {
      cplx sum{};
      for (const auto& l : lines) {
        if (std::abs(l.frequency - t) <= options.tolerance) sum += l.amplitude;
      }
      v.magnitudes.push_back(std::abs(sum));
      phases.push_back(std::arg(sum));
    }
    v.phases = std::move(phases);
    out.push_back(std::move(v));
  }
  return out;
}

Histogram make_histogram(const std::vector<double>& values, double low, double high, int bins) {
  if (bins < 1 || !(high > low)) throw DomainError("histogram needs bins >= 1 and high > low");
  Histogram h{low, high, std::vector<int>(static_cast<std::size_t>(bins), 0)};
  for (double v : values) {
    auto b = static_cast<long>(std::floor((v - low) / (high - low) * bins));
    b = std::clamp<long>(b, 0, bins - 1);
    ++h.counts[static_cast<std::size_t>(b)];
  }
  return h;
}

MonteCarloResult monte_carlo_precision(const SpinSystem& system, const MonteCarloConfig& config) {
  if (config.trials < 100) throw DomainError("Monte Carlo needs at least 100 trials");
  if (!(config.noise_sigma > 0.0)) throw DomainError("noise sigma must be positive");
  if (config.axes.empty()) throw DomainError("no guiding axes");

  const std::vector<double> targets =
      config.targets.empty() ? default_targets(system, config.magnitude, config.mode)
                             : config.targets;
  if (targets.empty()) throw DomainError("no lines to fit");
  const auto clean = synthesize_measurements(system, config.theta, config.phi, config.magnitude,
                                             config.mode, config.axes, targets);
  std::vector<AmplitudeVector> base;
  for (const auto& m : clean) {
    const bool empty =
        std::all_of(m.magnitudes.begin(), m.magnitudes.end(), [](double x) { return x == 0.0; });
    base.push_back(empty ? m : normalized(m, config.estimator.normalization));
  }

  const auto n = static_cast<std::size_t>(config.trials);
  std::vector<double> dtheta(n, 0.0);
  std::vector<double> dphi(n, 0.0);
  std::vector<char> ok(n, 0);
  std::vector<char> amb(n, 0);
  std::vector<std::string> errors(n);

  auto run_trial = [&](std::size_t trial) {
    std::seed_seq seq{static_cast<std::uint32_t>(config.seed & 0xffffffffu),
                      static_cast<std::uint32_t>(config.seed >> 32),
                      static_cast<std::uint32_t>(trial)};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> noise(0.0, config.noise_sigma);
    std::vector<AmplitudeVector> noisy = base;
    for (auto& m : noisy) {
      for (double& a : m.magnitudes) a = std::abs(a + noise(rng));
      if (!config.use_phases) m.phases.reset();
    }
    try {
      const EstimationResult r =
          orientation_estimate(noisy, system, config.magnitude, config.mode, config.estimator);
      dtheta[trial] = r.theta - config.theta;
      dphi[trial] = wrap_angle(r.phi - config.phi);
      amb[trial] = r.ambiguous ? 1 : 0;
      ok[trial] = 1;
    } catch (const Error& e) {
      errors[trial] = e.what();
    }
  };

  int threads = config.threads > 0 ? config.threads
                                   : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  threads = std::min<int>(threads, config.trials);
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t t = next++; t < n; t = next++) run_trial(t);
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  MonteCarloResult out;
  out.trials = config.trials;
  for (std::size_t t = 0; t < n; ++t) {
    if (!ok[t]) {
      ++out.failures;
      out.failure_messages.push_back("trial " + std::to_string(t) + ": " + errors[t]);
      continue;
    }
    out.ambiguous += amb[t];
    out.theta_deviation.push_back(dtheta[t]);
    out.phi_deviation.push_back(dphi[t]);
  }
  if (out.failures * 100 >= config.trials) {
    throw NumericError("Monte Carlo: " + std::to_string(out.failures) + " of " +
                       std::to_string(config.trials) + " trials failed");
  }
  auto stats = [](const std::vector<double>& v, double& mean, double& sigma) {
    mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    sigma = std::sqrt(ss / static_cast<double>(v.size()));
  };
  stats(out.theta_deviation, out.mean_theta, out.sigma_theta);
  stats(out.phi_deviation, out.mean_phi, out.sigma_phi);
  const double th = out.sigma_theta > 0.0 ? 4.0 * out.sigma_theta : 1e-12;
  const double ph = out.sigma_phi > 0.0 ? 4.0 * out.sigma_phi : 1e-12;
  out.theta_histogram = make_histogram(out.theta_deviation, -th, th, config.histogram_bins);
  out.phi_histogram = make_histogram(out.phi_deviation, -ph, ph, config.histogram_bins);
  return out;
}

}  // namespace zulf
