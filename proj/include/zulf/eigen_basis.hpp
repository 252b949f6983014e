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
#include <utility>

#include "zulf/hamiltonian.hpp"
#include "zulf/spin_system.hpp"
#include "zulf/types.hpp"

namespace zulf {

inline constexpr double kDegeneracyTolerance = 1e-7;  // Hz

/// Eigen-decomposition with a reproducible choice of eigenvectors.
///
/// Energies ascend. Inside a degenerate level the basis diagonalizes, in
/// turn, F.n (n = quantization axis), F^2 and the nested satellite Casimirs
/// (spins 1.., 2.., ...), so states carry definite (m, f, f_s) and repeated
/// manifolds get a fixed basis. Each
/// eigenvector's phase makes its largest component real-positive in the
/// quantization-frame product basis (U(theta, phi)^dagger psi), which keeps
/// field-frame matrix elements independent of the field orientation.
struct EigenBasis {
  RealVector energies;
  Matrix vectors;
  Vec3 quantization_axis = Vec3::UnitZ();
};

EigenBasis canonical_eigenbasis(const SpinSystem& system, const Hamiltonian& hamiltonian,
                                const Vec3& quantization_axis);

/// Field direction if a field is present, else the rotation axis, else z.
Vec3 quantization_axis(const std::optional<FieldVector>& field,
                       const std::optional<RotationVector>& rotation);

/// Polar angles of a unit vector, theta in [0, pi], phi in [0, 2 pi).
std::pair<double, double> polar_angles(const Vec3& v);

/// Tensor product of exp(-i phi sz/2) exp(-i theta sy/2) over all spins:
/// U F_l U^dagger = sum_m P_ml F_m with P the frame matrix of (theta, phi).
Matrix spin_rotation(const SpinSystem& system, double theta, double phi);

/// A^dagger (op) B restricted to columns of eigenvectors.
Matrix in_eigenbasis(const EigenBasis& basis, const Matrix& op);

}  // namespace zulf
