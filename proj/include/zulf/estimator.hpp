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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "zulf/probe.hpp"
#include "zulf/spin_system.hpp"
#include "zulf/types.hpp"

namespace zulf {

enum class EstimationMode { field, rotation };
enum class Normalization { peak, l2 };

const char* mode_name(EstimationMode mode);
const char* normalization_name(Normalization n);

/// Line amplitudes measured after one guiding-field preparation.
struct AmplitudeVector {
  Vec3 guiding_axis = Vec3::UnitZ();
  std::vector<double> frequencies;  // Hz
  std::vector<double> magnitudes;   // >= 0, any common scale
  std::optional<std::vector<double>> phases;  // rad, same convention as TransitionLine
};

/// Scales magnitudes so the largest entry (peak) or the Euclidean norm (l2)
/// is 1. Throws DomainError for negative entries, mismatched lengths or an
/// all-zero vector.
AmplitudeVector normalized(const AmplitudeVector& v, Normalization mode);

/// field: B = delta (1 + n - 2k) / (2 [gamma_h + (n - 2k) gamma_c]);
/// rotation: Omega = delta / 2. Throws DomainError for delta < 0.
double magnitude_from_splitting(double delta, int n, int k, double gamma_h, double gamma_c,
                                EstimationMode mode);

/// Complex amplitude model of selected lines in the field (or rotation)
/// frame. Field-frame matrix elements are computed once; each target
/// frequency collects every eigenpair within `tolerance` of it.
class LineModel {
 public:
  LineModel(const SpinSystem& system, double magnitude, EstimationMode mode,
            std::vector<double> targets, double tolerance = 0.05);

  const std::vector<double>& targets() const noexcept { return targets_; }
  std::size_t size() const noexcept { return targets_.size(); }

  /// Unscaled catalogue amplitudes -(g . P o) conj(z . P o), summed per target.
  std::vector<cplx> amplitudes(double theta, double phi, const Vec3& guiding_axis) const;

 private:
  std::vector<double> targets_;
  std::vector<std::vector<CVec3>> groups_;
};

struct EstimatorOptions {
  Normalization normalization = Normalization::peak;
  double grid_step = 2.0 * constants::pi / 180.0;  // rad
  double match_tolerance = 0.05;                    // Hz
  double xtol = 1e-10;                              // rad, simplex size
  int max_candidates = 40;
  double magnitude_sigma = 0.0;  // reported alongside the magnitude
};

struct Candidate {
  double theta = 0.0;
  double phi = 0.0;
  double residual = 0.0;
  double phase_residual = -1.0;  // complex residual; -1 when no phases supplied
};

struct EstimationDiagnostics {
  int grid_points = 0;
  int local_minima = 0;
  int refinements = 0;
  int iterations = 0;  // simplex iterations, all refinements
  int best_grid_theta = 0;
  int best_grid_phi = 0;
  int axes_used = 0;
};

struct EstimationResult {
  EstimationMode mode = EstimationMode::field;
  double theta = 0.0;
  double phi = 0.0;
  double magnitude = 0.0;        // T or Hz
  double magnitude_sigma = 0.0;  // propagated from the splitting uncertainty
  double residual = 0.0;
  std::vector<Candidate> ambiguity_set;  // sorted by (theta, phi)
  bool ambiguous = false;
  bool phi_undetermined = false;  // every guiding axis along z: phi drops out
  std::vector<std::string> warnings;
  EstimationDiagnostics diagnostics;
};

/// Minimizes sum_g |A_sim(theta, phi) - A_exp|^2 over the supplied guiding
/// axes with a grid search and simplex refinement of every grid minimum.
/// Minima within twice the best residual form the ambiguity set; when all
/// measurements carry phases the set is narrowed by the complex residual.
/// Throws DomainError for empty or unusable input.
EstimationResult orientation_estimate(const std::vector<AmplitudeVector>& measurements,
                                      const SpinSystem& system, double magnitude,
                                      EstimationMode mode, const EstimatorOptions& options = {});

/// Rotation protocol; Omega = splitting / 2. Without a splitting the widest
/// span of detected lines in any single measurement is used.
EstimationResult rotation_estimate(const std::vector<AmplitudeVector>& measurements,
                                   const SpinSystem& system,
                                   std::optional<double> splitting = std::nullopt,
                                   const EstimatorOptions& options = {});

struct SynthesisOptions {
  double polarizing_field = kDefaultPolarizingField;
  double temperature = kDefaultTemperature;
  double tolerance = 0.05;  // Hz, grouping of catalogue lines per target
};

/// Line frequencies worth fitting: every transition at or above half the
/// smallest coupling with a nonzero field-frame magnetization element.
/// Orientation independent; lines absent at the true orientation are fitted
/// as zeros.
std::vector<double> default_targets(const SpinSystem& system, double magnitude,
                                    EstimationMode mode);
/// Runs the full simulation pipeline (probe, Hamiltonian, catalogue) per
/// guiding axis and reports the raw amplitudes and phases at `targets`.
std::vector<AmplitudeVector> synthesize_measurements(const SpinSystem& system, double theta,
                                                     double phi, double magnitude,
                                                     EstimationMode mode,
                                                     const std::vector<Vec3>& axes,
                                                     const std::vector<double>& targets,
                                                     const SynthesisOptions& options = {});

struct Histogram {
  double low = 0.0;
  double high = 0.0;
  std::vector<int> counts;

  double bin_width() const { return counts.empty() ? 0.0 : (high - low) / counts.size(); }
};

/// `bins` equal bins over [low, high]; values outside land in the edge bins.
Histogram make_histogram(const std::vector<double>& values, double low, double high, int bins);

struct MonteCarloConfig {
  double theta = 0.0;
  double phi = 0.0;
  double magnitude = 0.0;
  EstimationMode mode = EstimationMode::field;
  std::vector<Vec3> axes = {Vec3::UnitX(), Vec3::UnitY(), Vec3::UnitZ()};
  std::vector<double> targets;  // empty: default_targets
  double noise_sigma = 0.01;
  int trials = 1000;
  std::uint64_t seed = 1;
  bool use_phases = true;
  int threads = 0;  // 0: hardware concurrency
  int histogram_bins = 40;
  EstimatorOptions estimator;
};

struct MonteCarloResult {
  double sigma_theta = 0.0;
  double sigma_phi = 0.0;
  double mean_theta = 0.0;  // mean deviation
  double mean_phi = 0.0;
  int trials = 0;
  int failures = 0;
  int ambiguous = 0;
  std::vector<double> theta_deviation;  // per successful trial, trial order
  std::vector<double> phi_deviation;    // wrapped to (-pi, pi]
  Histogram theta_histogram;
  Histogram phi_histogram;
  std::vector<std::string> failure_messages;
};

/// Adds N(0, sigma^2) to every normalized magnitude (absolute value taken,
/// true phases kept), renormalizes and re-estimates. Trial i draws from
/// mt19937_64 seeded by (seed, i), so results do not depend on threading.
/// Throws DomainError for trials < 100 or sigma <= 0, NumericError when 1%
/// or more of the trials fail.
MonteCarloResult monte_carlo_precision(const SpinSystem& system, const MonteCarloConfig& config);

struct SplittingPropagation {
  double sigma_delta = 0.0;      // Hz
  double sigma_magnitude = 0.0;  // T or Hz
};

/// Linear propagation of a splitting uncertainty through
/// magnitude_from_splitting.
std::vector<SplittingPropagation> splitting_propagation(const std::vector<double>& sigma_deltas,
                                                        int n, int k, double gamma_h,
                                                        double gamma_c, EstimationMode mode);

/// Wraps an angle difference to (-pi, pi].
double wrap_angle(double a);

}  // namespace zulf
