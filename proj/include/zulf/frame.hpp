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
#include <optional>
#include <vector>

#include "zulf/hamiltonian.hpp"
#include "zulf/labels.hpp"
#include "zulf/spin_system.hpp"
#include "zulf/types.hpp"

namespace zulf {

/// Field-aligned frame: z' along the field, x' = dz'/dtheta,
/// y' = dz'/dphi / sin(theta). P has columns (x', y', z'), so lab-frame
/// vectors are P times primed vectors. At the poles phi is taken as 0.
struct FrameBasis {
  Vec3 x;
  Vec3 y;
  Vec3 z;
  Mat3 P;
};

FrameBasis frame_basis(double theta, double phi);

/// <Psi_bra|O'|Psi_ket> with O'_l' = sum_j gamma_j I_j . e_l' for one
/// eigenpair, bra below ket in energy.
struct PrimedElement {
  int bra = 0;
  int ket = 0;
  double frequency = 0.0;
  CVec3 element = CVec3::Zero();
  std::optional<TransitionLabel> label;
};

struct PrimedTable {
  std::vector<PrimedElement> elements;  // every pair with a nonzero gap
  double regime_ratio = 0.0;            // ||H - H_int|| / min |J|
  bool regime_warning = false;          // regime_ratio >= 0.1
};

/// Field-frame matrix elements of the magnetization observable. With the
/// canonical eigenvector phases these do not depend on the field orientation.
/// When `labels` is set, labeling failures propagate as NumericError.
PrimedTable primed_matrix_elements(const SpinSystem& system, const Hamiltonian& hamiltonian,
                                   const Vec3& field_direction, bool labels = true);

/// Singlet-to-triplet elements of a 13C-1H pair, ordered m' = 0, -1, +1.
std::array<CVec3, 3> ch_closed_form(double gamma_c, double gamma_h);

struct ChComparison {
  std::array<CVec3, 3> numeric;  // after calibration
  std::array<CVec3, 3> closed_form;
  double calibration = 1.0;       // +-1 applied to the singlet phase
  double max_relative_deviation = 0.0;
};

/// Finds the f = 0 -> f = 1 elements in a labeled two-spin table, fixes the
/// singlet sign so the m' = 0 element matches (gamma_c - gamma_h)/2, and
/// compares all three with the closed forms. Throws DomainError if the
/// table lacks those transitions.
ChComparison compare_ch_elements(const PrimedTable& table, double gamma_c, double gamma_h);

/// polarization_scale * |g . P o| * |z . P o|
double amplitude_formula(double theta, double phi, const Vec3& guiding_axis,
                         const CVec3& primed_element, double polarization_scale);

/// Complex catalogue amplitude -scale (g . P o) conj(z . P o).
cplx factored_amplitude(double theta, double phi, const Vec3& guiding_axis,
                        const CVec3& primed_element, double polarization_scale);

}  // namespace zulf
