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


#include "zulf/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <numeric>
#include <sstream>

#include <fftw3.h>
#include <unsupported/Eigen/MatrixFunctions>

#include "zulf/eigen_basis.hpp"
#include "zulf/error.hpp"

namespace zulf {

namespace {

constexpr double kZeroFrequency = 1e-6;  // Hz; gaps below this are static terms
constexpr double kTwoPi = 2.0 * constants::pi;
constexpr double kRoundOff = 1e-12;

void check_observable(const SpinSystem& system, const Hamiltonian& hamiltonian,
                      const ProbeState& probe, const SpinOperator& observable) {
  const Eigen::Index d = system.dimension();
  if (hamiltonian.matrix.rows() != d || hamiltonian.matrix.cols() != d ||
      probe.deviation.rows() != d || probe.deviation.cols() != d || observable.matrix.rows() != d ||
      observable.matrix.cols() != d) {
    throw DomainError("dimension mismatch between system, Hamiltonian, probe and observable");
  }
  if ((observable.matrix - observable.matrix.adjoint()).cwiseAbs().maxCoeff() > 1e-10) {
    throw DomainError("observable is not Hermitian");
  }
}

std::vector<TransitionLine> pairs_of(const EigenBasis& basis, const ProbeState& probe,
                                     const Matrix& observable) {
  const Matrix rho = in_eigenbasis(basis, probe.deviation);
  const Matrix obs = in_eigenbasis(basis, observable);
  const auto dim = static_cast<int>(basis.energies.size());
  std::vector<TransitionLine> out;
  for (int i = 0; i < dim; ++i) {
    for (int j = i + 1; j < dim; ++j) {
      const double nu = basis.energies[j] - basis.energies[i];
      if (nu <= kZeroFrequency) continue;
      TransitionLine line;
      line.frequency = nu;
      line.amplitude = rho(i, j) * obs(j, i);
      line.bra = i;
      line.ket = j;
      out.push_back(line);
    }
  }
  std::sort(out.begin(), out.end(), [](const TransitionLine& a, const TransitionLine& b) {
    if (a.frequency != b.frequency) return a.frequency < b.frequency;
    if (a.bra != b.bra) return a.bra < b.bra;
    return a.ket < b.ket;
  });
  return out;
}

void attach_labels(const SpinSystem& system, const EigenBasis& basis,
                   std::vector<TransitionLine>& lines) {
  std::vector<StateLabel> labels;
  try {
    labels = label_states(system, basis);
  } catch (const NumericError&) {
    return;
  }
  for (auto& line : lines) {
    line.label = TransitionLabel{labels[static_cast<std::size_t>(line.bra)],
                                 labels[static_cast<std::size_t>(line.ket)]};
  }
}

}  // namespace

std::vector<TransitionLine> raw_transitions(const SpinSystem& system,
                                            const Hamiltonian& hamiltonian,
                                            const ProbeState& probe,
                                            const SpinOperator& observable) {
  check_observable(system, hamiltonian, probe, observable);
  const EigenBasis basis =
      canonical_eigenbasis(system, hamiltonian, hamiltonian.quantization_axis);
  auto lines = pairs_of(basis, probe, observable.matrix);
  attach_labels(system, basis, lines);
  return lines;
}

std::vector<TransitionLine> transition_catalogue(const SpinSystem& system,
                                                 const Hamiltonian& hamiltonian,
                                                 const ProbeState& probe,
                                                 const SpinOperator& observable,
                                                 const CatalogueOptions& options) {
  check_observable(system, hamiltonian, probe, observable);
  const EigenBasis basis =
      canonical_eigenbasis(system, hamiltonian, hamiltonian.quantization_axis);
  const auto pairs = pairs_of(basis, probe, observable.matrix);

  std::vector<TransitionLine> merged;
  double last = -std::numeric_limits<double>::infinity();
  for (const auto& p : pairs) {
    if (merged.empty() || p.frequency - last > options.merge_tolerance) {
      merged.push_back(p);
    } else {
      merged.back().amplitude += p.amplitude;
      ++merged.back().pairs;
    }
    last = p.frequency;
  }

  double biggest = 0.0;
  for (const auto& l : merged) biggest = std::max(biggest, l.magnitude());
  // Round-off level of rho_ij O_ji; keeps exactly-forbidden catalogues empty.
  const double noise = kRoundOff * probe.deviation.cwiseAbs().maxCoeff() *
                       observable.matrix.cwiseAbs().maxCoeff();
  std::vector<TransitionLine> kept;
  for (const auto& l : merged) {
    if (l.magnitude() >= options.amplitude_floor * biggest && l.magnitude() > noise) {
      kept.push_back(l);
    }
  }
  if (options.label) attach_labels(system, basis, kept);
  return kept;
}

Acquisition default_acquisition(const std::vector<TransitionLine>& lines, double tau_coh) {
  double top = 0.0;
  for (const auto& l : lines) top = std::max(top, l.frequency);
  return {3.0 * tau_coh, std::max(8.0 * top, 1.0)};
}

Spectrum make_spectrum(std::vector<TransitionLine> lines, double tau_coh,
                       std::optional<Acquisition> acquisition) {
  if (!(tau_coh > 0.0)) throw DomainError("coherence time must be positive");
  Spectrum s;
  s.acquisition = acquisition ? *acquisition : default_acquisition(lines, tau_coh);
  s.linewidth = 1.0 / (constants::pi * tau_coh);
  s.lines = std::move(lines);
  return s;
}

TimeSeries time_signal(const std::vector<TransitionLine>& lines, double tau_coh, double duration,
                       double sample_rate) {
  if (!(tau_coh > 0.0)) throw DomainError("coherence time must be positive");
  if (!(duration > 0.0)) throw DomainError("duration must be positive");
  if (!(sample_rate > 0.0) || !std::isfinite(sample_rate)) {
    throw DomainError("sample rate must be positive and finite");
  }
  for (const auto& l : lines) {
    if (l.frequency >= sample_rate / 2.0) {
      std::ostringstream msg;
      msg.precision(12);
      msg << "line at " << l.frequency << " Hz (states " << l.bra << "->" << l.ket
          << ") violates Nyquist for sample rate " << sample_rate << " Hz";
      throw DomainError(msg.str());
    }
  }
  const auto n = static_cast<std::size_t>(std::llround(duration * sample_rate));
  if (n == 0) throw DomainError("duration shorter than one sample");
  TimeSeries series;
  series.sample_rate = sample_rate;
  series.decay_time = tau_coh;
  series.values.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = series.time(i);
    const double envelope = std::exp(-t / tau_coh);
    double s = 0.0;
    for (const auto& l : lines) s += l.magnitude() * std::cos(l.phase() + kTwoPi * l.frequency * t);
    series.values[i] = s * envelope;
  }
  return series;
}

std::vector<double> FourierSpectrum::magnitudes() const {
  std::vector<double> out(values.size());
  std::transform(values.begin(), values.end(), out.begin(), [](cplx v) { return std::abs(v); });
  return out;
}

double FourierSpectrum::energy() const {
  if (samples == 0) return 0.0;
  double e = std::norm(values[0]);
  const std::size_t last = values.size() - 1;
  for (std::size_t k = 1; k < values.size(); ++k) {
    const bool nyquist = samples % 2 == 0 && k == last;
    e += (nyquist ? 1.0 : 2.0) * std::norm(values[k]);
  }
  return e / static_cast<double>(samples);
}

FourierSpectrum fourier_spectrum(const TimeSeries& series) {
  const std::size_t n = series.values.size();
  if (n == 0) throw DomainError("cannot transform an empty series");
  std::vector<double> in(series.values);
  std::vector<fftw_complex> out(n / 2 + 1);
  static std::mutex planner;
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(planner);
    plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), in.data(), out.data(), FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(planner);
    fftw_destroy_plan(plan);
  }

  FourierSpectrum spec;
  spec.sample_rate = series.sample_rate;
  spec.samples = n;
  spec.decay_time = series.decay_time;
  spec.frequencies.resize(out.size());
  spec.values.resize(out.size());
  for (std::size_t k = 0; k < out.size(); ++k) {
    spec.frequencies[k] = static_cast<double>(k) * series.sample_rate / static_cast<double>(n);
    spec.values[k] = cplx(out[k][0], out[k][1]);
  }
  return spec;
}

namespace {

// DFT at frequency f of exp((2 pi i nu - lambda) t_n), n < N.
cplx kernel(double nu, double f, double lambda, double rate, std::size_t samples) {
  const cplx z(-lambda / rate, kTwoPi * (nu - f) / rate);
  const auto n = static_cast<double>(samples);
  if (std::abs(z) < 1e-12) return cplx(n, 0.0) + z * (n * (n - 1.0) / 2.0);
  return (1.0 - std::exp(n * z)) / (1.0 - std::exp(z));
}

struct PeakFit {
  std::vector<double> nu;
  Eigen::VectorXd coeffs;  // (re, im) per line
  Eigen::MatrixXd design;
  double rss = 0.0;
};

class JointFit {
 public:
  JointFit(const FourierSpectrum& spec, std::vector<std::size_t> bins)
      : spec_(spec), bins_(std::move(bins)) {
    lambda_ = std::isfinite(spec.decay_time) && spec.decay_time > 0.0 ? 1.0 / spec.decay_time : 0.0;
    data_.resize(static_cast<Eigen::Index>(2 * bins_.size()));
    for (std::size_t b = 0; b < bins_.size(); ++b) {
      data_[static_cast<Eigen::Index>(2 * b)] = spec.values[bins_[b]].real();
      data_[static_cast<Eigen::Index>(2 * b + 1)] = spec.values[bins_[b]].imag();
    }
  }

  PeakFit solve(const std::vector<double>& nu) const {
    const auto rows = data_.size();
    const auto cols = static_cast<Eigen::Index>(2 * nu.size());
    PeakFit fit;
    fit.nu = nu;
    fit.design.resize(rows, cols);
    for (std::size_t b = 0; b < bins_.size(); ++b) {
      const double f = spec_.frequencies[bins_[b]];
      for (std::size_t l = 0; l < nu.size(); ++l) {
        const cplx kp = kernel(nu[l], f, lambda_, spec_.sample_rate, spec_.samples);
        const cplx km = kernel(-nu[l], f, lambda_, spec_.sample_rate, spec_.samples);
        const cplx re = kp + km;
        const cplx im = cplx(0.0, 1.0) * (kp - km);
        const auto r = static_cast<Eigen::Index>(2 * b);
        const auto c = static_cast<Eigen::Index>(2 * l);
        fit.design(r, c) = re.real();
        fit.design(r + 1, c) = re.imag();
        fit.design(r, c + 1) = im.real();
        fit.design(r + 1, c + 1) = im.imag();
      }
    }
    fit.coeffs = fit.design.colPivHouseholderQr().solve(data_);
    fit.rss = (fit.design * fit.coeffs - data_).squaredNorm();
    return fit;
  }

  Eigen::Index observations() const { return data_.size(); }

 private:
  const FourierSpectrum& spec_;
  std::vector<std::size_t> bins_;
  double lambda_ = 0.0;
  Eigen::VectorXd data_;
};

double golden_minimize(double lo, double hi, const auto& fn) {
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  double c = b - g * (b - a);
  double d = a + g * (b - a);
  double fc = fn(c);
  double fd = fn(d);
  for (int it = 0; it < 80 && b - a > 1e-12 * (std::abs(a) + std::abs(b) + 1e-300); ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = fn(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = fn(d);
    }
  }
  return fc < fd ? c : d;
}

}  // namespace

std::vector<LineEstimate> extract_line_amplitudes(const FourierSpectrum& spectrum,
                                                  const std::vector<double>& targets,
                                                  double window) {
  if (!(window > 0.0)) throw DomainError("extraction window must be positive");
  const std::vector<double> mags = spectrum.magnitudes();
  const std::size_t nbins = mags.size();
  const double top = nbins ? *std::max_element(mags.begin(), mags.end()) : 0.0;
  std::vector<double> sorted(mags);
  std::nth_element(sorted.begin(), sorted.begin() + static_cast<long>(nbins / 2), sorted.end());
  const double median = nbins ? sorted[nbins / 2] : 0.0;
  const double floor = std::max(5.0 * median, 1e-9 * top);

  std::vector<LineEstimate> out(targets.size());
  std::vector<std::size_t> peak_of(targets.size(), nbins);
  for (std::size_t t = 0; t < targets.size(); ++t) {
    out[t].target = targets[t];
    out[t].uncertainty = std::numeric_limits<double>::infinity();
    if (targets[t] < 0.0 || targets[t] > spectrum.sample_rate / 2.0) {
      throw DomainError("target frequency outside the spectral range");
    }
    std::size_t best = nbins;
    for (std::size_t k = 1; k + 1 < nbins; ++k) {
      if (std::abs(spectrum.frequencies[k] - targets[t]) > window) continue;
      if (std::abs(spectrum.frequencies[k - 1] - targets[t]) > window ||
          std::abs(spectrum.frequencies[k + 1] - targets[t]) > window) {
        continue;
      }
      if (mags[k] >= mags[k - 1] && mags[k] > mags[k + 1] && mags[k] > floor &&
          (best == nbins || mags[k] > mags[best])) {
        best = k;
      }
    }
    peak_of[t] = best;
  }

  std::vector<std::size_t> peaks;
  for (auto p : peak_of) {
    if (p != nbins) peaks.push_back(p);
  }
  std::sort(peaks.begin(), peaks.end());
  peaks.erase(std::unique(peaks.begin(), peaks.end()), peaks.end());
  if (peaks.empty()) return out;

  const double bw = spectrum.bin_width();
  double half = 6.0;
  if (std::isfinite(spectrum.decay_time) && spectrum.decay_time > 0.0) {
    half = std::max(half, std::ceil(3.0 / (constants::pi * spectrum.decay_time * bw)));
  }
  std::vector<std::size_t> bins;
  for (auto p : peaks) {
    const auto h = static_cast<std::size_t>(half);
    const std::size_t lo = p > h ? p - h : 0;
    const std::size_t hi = std::min(nbins - 1, p + h);
    for (std::size_t k = lo; k <= hi; ++k) bins.push_back(k);
  }
  std::sort(bins.begin(), bins.end());
  bins.erase(std::unique(bins.begin(), bins.end()), bins.end());
  if (bins.size() < peaks.size() + 1) throw NumericError("too few bins for line fit");

  const JointFit model(spectrum, bins);
  std::vector<double> nu;
  for (auto p : peaks) nu.push_back(spectrum.frequencies[p]);
  for (int sweep = 0; sweep < 3; ++sweep) {
    for (std::size_t l = 0; l < nu.size(); ++l) {
      const double centre = spectrum.frequencies[peaks[l]];
      nu[l] = golden_minimize(centre - bw, centre + bw, [&](double v) {
        std::vector<double> trial(nu);
        trial[l] = v;
        return model.solve(trial).rss;
      });
    }
  }
  const PeakFit fit = model.solve(nu);
  const double dof = std::max<double>(1.0, static_cast<double>(model.observations() - fit.coeffs.size()));
  const Eigen::MatrixXd info = fit.design.transpose() * fit.design;
  const Eigen::MatrixXd cov = info.inverse() * (fit.rss / dof);

  for (std::size_t t = 0; t < targets.size(); ++t) {
    if (peak_of[t] == nbins) continue;
    const auto l = static_cast<std::size_t>(
        std::lower_bound(peaks.begin(), peaks.end(), peak_of[t]) - peaks.begin());
    const auto c = static_cast<Eigen::Index>(2 * l);
    const cplx a(fit.coeffs[c], fit.coeffs[c + 1]);
    const double mag = std::abs(a);
    Eigen::Vector2d u = mag > 0.0 ? Eigen::Vector2d(a.real() / mag, a.imag() / mag)
                                  : Eigen::Vector2d(1.0, 0.0);
    const double var = u.dot(cov.block<2, 2>(c, c) * u);
    out[t].frequency = nu[l];
    out[t].magnitude = 2.0 * mag;
    out[t].phase = std::arg(a);
    out[t].uncertainty = 2.0 * std::sqrt(std::max(0.0, var));
    out[t].found = true;
  }
  return out;
}

Matrix propagate(const Hamiltonian& hamiltonian, const Matrix& rho, double t) {
  const Matrix generator = cplx(0.0, -kTwoPi * t) * hamiltonian.matrix;
  const Matrix u = generator.exp();
  return u * rho * u.adjoint();
}

std::vector<double> propagated_signal(const Hamiltonian& hamiltonian, const Matrix& rho,
                                      const Matrix& observable, const std::vector<double>& times) {
  std::vector<double> out;
  out.reserve(times.size());
  for (double t : times) out.push_back((propagate(hamiltonian, rho, t) * observable).trace().real());
  return out;
}

}  // namespace zulf
