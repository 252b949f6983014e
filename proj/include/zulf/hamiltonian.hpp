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

#include <optional>

#include "zulf/spin_system.hpp"
#include "zulf/types.hpp"

namespace zulf {

/// Unit vector (sin t cos p, sin t sin p, cos t).
Vec3 direction(double theta, double phi);

/// Magnetic field in spherical parameters; magnitude in tesla.
struct FieldVector {
  double theta = 0.0;
  double phi = 0.0;
  double magnitude = 0.0;

  Vec3 cartesian() const { return magnitude * direction(theta, phi); }
};

/// Inertial rotation in spherical parameters; magnitude is the rotation
/// frequency in Hz. Acts on spin j as the pseudo-field Omega / gamma_j.
struct RotationVector {
  double theta = 0.0;
  double phi = 0.0;
  double magnitude = 0.0;

  Vec3 cartesian() const { return magnitude * direction(theta, phi); }
};

/// Hermitian operator in frequency units (Hz); 2*pi enters only at
/// propagation time.
struct Hamiltonian {
  Matrix matrix;
  /// Direction used to label eigenstates (field, else rotation axis, else z).
  Vec3 quantization_axis = Vec3::UnitZ();
};

/// -sum_j gamma_j I_j . B
Hamiltonian zeeman_hamiltonian(const SpinSystem& system, const FieldVector& field);

/// sum_{i<j} J_ij I_i . I_j
Hamiltonian coupling_hamiltonian(const SpinSystem& system);

/// -Omega . sum_j I_j
Hamiltonian rotation_hamiltonian(const SpinSystem& system, const RotationVector& rotation);

Hamiltonian total_hamiltonian(const SpinSystem& system,
                              const std::optional<FieldVector>& field = std::nullopt,
                              const std::optional<RotationVector>& rotation = std::nullopt);

/// |gamma_max * B| / min |J_ij|; the strong-coupling analysis assumes this
/// is much smaller than one. Infinite for an uncoupled system in a field.
double regime_ratio(const SpinSystem& system, const FieldVector& field);

}  // namespace zulf
