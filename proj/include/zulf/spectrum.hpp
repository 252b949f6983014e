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


#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "zulf/hamiltonian.hpp"
#include "zulf/labels.hpp"
#include "zulf/probe.hpp"
#include "zulf/spin_system.hpp"
#include "zulf/types.hpp"

namespace zulf {

/// One spectral line. amplitude = <i|rho0|j><j|O|i> summed over merged pairs;
/// bra/ket are the first contributing pair (bra < ket, E_ket > E_bra).
struct TransitionLine {
  double frequency = 0.0;  // Hz
  cplx amplitude{};
  int bra = 0;
  int ket = 0;
  int pairs = 1;  // eigenpairs merged into this line
  std::optional<TransitionLabel> label;

  double magnitude() const { return std::abs(amplitude); }
  double phase() const { return std::arg(amplitude); }
};

struct CatalogueOptions {
  double merge_tolerance = 1e-6;  // Hz
  double amplitude_floor = 1e-10;  // relative to the strongest line
  bool label = true;               // best effort; lines stay unlabeled on failure
};

/// Every eigenpair i < j with a nonzero gap, unmerged and unfiltered, sorted
/// by (frequency, bra, ket).
std::vector<TransitionLine> raw_transitions(const SpinSystem& system,
                                            const Hamiltonian& hamiltonian,
                                            const ProbeState& probe, const SpinOperator& observable);

/// Merged catalogue: pairs whose frequencies chain within merge_tolerance are
/// summed as complex amplitudes, then lines below the floor are dropped.
/// Throws DomainError on dimension mismatch or a non-Hermitian observable.
std::vector<TransitionLine> transition_catalogue(const SpinSystem& system,
                                                 const Hamiltonian& hamiltonian,
                                                 const ProbeState& probe,
                                                 const SpinOperator& observable,
                                                 const CatalogueOptions& options = {});

struct Acquisition {
  double duration = 0.0;     // s
  double sample_rate = 0.0;  // Hz
};

/// duration = 3 tau_coh, sample rate = 8x the highest line (1 Hz floor).
Acquisition default_acquisition(const std::vector<TransitionLine>& lines, double tau_coh);

/// Catalogue plus the decay it is observed with.
struct Spectrum {
  std::vector<TransitionLine> lines;
  double linewidth = 0.0;  // Hz, 1 / (pi tau_coh)
  Acquisition acquisition;
};

Spectrum make_spectrum(std::vector<TransitionLine> lines, double tau_coh,
                       std::optional<Acquisition> acquisition = std::nullopt);

struct TimeSeries {
  double sample_rate = 0.0;
  double decay_time = 0.0;  // s; infinity for undamped series
  std::vector<double> values;

  double time(std::size_t i) const { return static_cast<double>(i) / sample_rate; }
};

/// S(t) = sum magnitude * cos(phase + 2 pi nu t) exp(-t / tau), sampled at
/// t = i / sample_rate for i < round(duration * sample_rate). This is half the
/// oscillating part of Tr[rho(t) O]. Throws DomainError when a line sits at
/// or above Nyquist, or duration/sample_rate/tau are not positive.
TimeSeries time_signal(const std::vector<TransitionLine>& lines, double tau_coh, double duration,
                       double sample_rate);

/// One-sided DFT of a real series: bins k = 0..N/2 at k * rate / N.
struct FourierSpectrum {
  double sample_rate = 0.0;
  std::size_t samples = 0;  // N of the transformed series
  double decay_time = 0.0;
  std::vector<double> frequencies;
  std::vector<cplx> values;

  std::vector<double> magnitudes() const;
  double bin_width() const { return sample_rate / static_cast<double>(samples); }
  /// sum |x_n|^2 reconstructed from the one-sided bins (Parseval).
  double energy() const;
};

/// Throws DomainError for an empty series.
FourierSpectrum fourier_spectrum(const TimeSeries& series);

struct LineEstimate {
  double target = 0.0;     // requested frequency
  double frequency = 0.0;  // fitted
  double magnitude = 0.0;  // fitted line magnitude (same scale as TransitionLine)
  double phase = 0.0;
  double uncertainty = 0.0;  // one-sigma on magnitude; infinity when missing
  bool found = false;
};

/// Fits each target's strongest nearby peak with the exact discrete kernel of
/// a truncated decaying cosine (both frequency signs), jointly over all found
/// peaks so neighbouring lines do not leak into each other. A target whose
/// window holds no interior local maximum above the noise floor is reported
/// missing. Targets resolving to the same peak share its fit.
std::vector<LineEstimate> extract_line_amplitudes(const FourierSpectrum& spectrum,
                                                  const std::vector<double>& targets,
                                                  double window);

/// exp(-2 pi i H t) rho exp(2 pi i H t).
Matrix propagate(const Hamiltonian& hamiltonian, const Matrix& rho, double t);

/// Tr[rho(t) O] at each time by explicit propagation (no decay).
std::vector<double> propagated_signal(const Hamiltonian& hamiltonian, const Matrix& rho,
                                      const Matrix& observable, const std::vector<double>& times);

}  // namespace zulf
