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

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "zulf/types.hpp"

namespace zulf {

/// Largest cluster handled by the dense representation (dimension 4096).
inline constexpr int kMaxSpins = 12;

/// A molecule as a network of Heisenberg-coupled spin-1/2 nuclei.
///
/// Gyromagnetic ratios are in Hz/T, couplings in Hz. Spin 0 is the central
/// spin of star topologies; satellites follow. Instances are immutable.
class SpinSystem {
 public:
  /// Validates and builds a system. Throws DomainError when the coupling
  /// matrix is not square/symmetric with zero diagonal, sizes disagree, the
  /// system is empty or larger than kMaxSpins, or coherence_time <= 0.
  SpinSystem(std::string name, std::vector<double> gammas, Eigen::MatrixXd couplings,
             double coherence_time);

  const std::string& name() const noexcept { return name_; }
  std::span<const double> gammas() const noexcept { return gammas_; }
  double gamma(int spin) const { return gammas_.at(static_cast<std::size_t>(spin)); }
  const Eigen::MatrixXd& couplings() const noexcept { return couplings_; }
  double coupling(int i, int j) const { return couplings_(i, j); }
  double coherence_time() const noexcept { return coherence_time_; }

  int size() const noexcept { return static_cast<int>(gammas_.size()); }
  Eigen::Index dimension() const noexcept { return Eigen::Index{1} << size(); }

  /// Smallest nonzero |J_ij|, or 0 for an uncoupled system.
  double min_coupling() const;
  double max_abs_gamma() const;

 private:
  std::string name_;
  std::vector<double> gammas_;
  Eigen::MatrixXd couplings_;
  double coherence_time_;
};

/// One central spin coupled with strength J to each of n_protons equivalent
/// satellites (no satellite-satellite coupling).
SpinSystem build_star_molecule(int n_protons, double J, double gamma_center,
                               double gamma_satellite, double tau_coh,
                               std::string name = "star");

/// Number of satellites if the system is a uniform star (center 0 coupled to
/// every other spin with the same J, satellites mutually uncoupled and of
/// equal gamma); -1 otherwise.
int star_satellite_count(const SpinSystem& system);

/// Shipped molecule presets: formic_acid, formaldehyde, acetonitrile,
/// acetic_acid.
std::vector<std::string> preset_names();
SpinSystem preset(std::string_view name);
/// Same with overridden gyromagnetic ratios.
SpinSystem preset(std::string_view name, double gamma_center, double gamma_satellite);

/// Molecule definition file (JSON): name, gammas, couplings as
/// [[i, j, J_Hz], ...] upper-triangular entries, tau_coh_s.
SpinSystem molecule_from_json_text(const std::string& text);
std::string molecule_to_json_text(const SpinSystem& system);

struct SpinOperator {
  Matrix matrix;
  Axis axis = Axis::z;
  int spin_index = -1;  // -1 for collective operators
  std::string label;
};

/// sigma_axis / 2 on one spin, identity elsewhere; spin 0 is the most
/// significant tensor factor.
SpinOperator spin_operator(const SpinSystem& system, int spin_index, Axis axis);

/// sum_j weights[j] * I_j,axis. With weights = gammas this is the
/// magnetization observable O_axis; with all ones it is total F_axis.
SpinOperator collective_operator(const SpinSystem& system, std::span<const double> weights,
                                 Axis axis);

/// sum_j weights[j] * (I_j . direction).
Matrix projected_operator(const SpinSystem& system, std::span<const double> weights,
                          const Vec3& direction);

/// Total angular momentum components F_x, F_y, F_z over the given spins.
std::array<Matrix, 3> total_spin(const SpinSystem& system, std::span<const int> spins);

std::vector<double> unit_weights(const SpinSystem& system);

}  // namespace zulf
