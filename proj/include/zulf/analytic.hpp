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
#include <string>
#include <vector>

#include "zulf/labels.hpp"
#include "zulf/spectrum.hpp"
#include "zulf/types.hpp"

namespace zulf {

struct AnalyticLine {
  double frequency = 0.0;  // Hz
  TransitionLabel label;
};

/// Closed-form line positions of one satellite manifold k of a 13CH_n star.
///
/// Labels follow the Hamiltonian sign convention, E = -g_f m_f B, so a state
/// polarized along the field has m_f > 0 and the lowest Zeeman energy.
struct SplittingReport {
  int n = 0;
  int k = 0;
  double center = 0.0;  // Hz
  std::vector<AnalyticLine> zero_quantum;
  std::vector<AnalyticLine> single_quantum;
  double delta_zq = 0.0;  // Hz, adjacent ZQ spacing
  double delta_sq = 0.0;  // Hz, inner SQ doublet spacing
  int multiplicity = 1;   // copies of the manifold
  double regime_ratio = 0.0;
  bool regime_warning = false;  // regime_ratio >= 0.1
};

/// Largest manifold index, floor(n / 2).
int max_manifold(int n);

/// C(n, k) - C(n, k - 1).
int manifold_multiplicity(int n, int k);

/// Throws DomainError for n < 1 or k outside [0, floor(n/2)].
SplittingReport zeeman_lines(int n, int k, double J, double B,
                             double gamma_h = constants::gamma_proton,
                             double gamma_c = constants::gamma_carbon13);

SplittingReport rotation_lines(int n, int k, double J, double omega);

struct TwoSpinTheory {
  double xi = 0.0;              // rad, tan(2 xi) = J / ((g1 - g2) B)
  double zq_probability = 0.0;  // |<Psi2|O_z'|Psi3>|, Hz/T
  /// Psi1..Psi4 in the product basis (uu, ud, du, dd) along the field:
  /// uu, cos xi ud + sin xi du, sin xi ud - cos xi du, dd.
  std::array<std::array<double, 4>, 4> states{};
};

/// Throws DomainError when J = 0 and B = 0.
TwoSpinTheory two_spin_theory(double gamma_1, double gamma_2, double J, double B);

enum class ProbeGeometry { parallel, perpendicular };

/// Lines that break df in {0, +-1}, dk = 0, and dm = 0 (parallel) or +-1
/// (perpendicular); one message per offending or unlabeled line.
std::vector<std::string> audit_selection_rules(const std::vector<TransitionLine>& lines,
                                               ProbeGeometry geometry);

struct ManifoldCount {
  int k = 0;
  int zero_quantum = 0;
  int single_quantum = 0;
};

/// Counts labeled lines with df = +-1 per manifold k, k = 0..max_k.
std::vector<ManifoldCount> count_manifold_lines(const std::vector<TransitionLine>& lines,
                                                int max_k);

}  // namespace zulf
