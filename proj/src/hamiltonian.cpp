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

#include "zulf/hamiltonian.hpp"

#include <cmath>
#include <limits>

namespace zulf {

Vec3 direction(double theta, double phi) {
  return Vec3(std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta));
}

Hamiltonian zeeman_hamiltonian(const SpinSystem& system, const FieldVector& field) {
  const Vec3 b = field.cartesian();
  std::vector<double> w(system.gammas().begin(), system.gammas().end());
  return {-projected_operator(system, w, b),
          field.magnitude != 0.0 ? direction(field.theta, field.phi) : Vec3::UnitZ()};
}

Hamiltonian coupling_hamiltonian(const SpinSystem& system) {
  const int n = system.size();
  Matrix h = Matrix::Zero(system.dimension(), system.dimension());
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double J = system.coupling(i, j);
      if (J == 0.0) continue;
      for (int l = 0; l < 3; ++l) {
        const auto axis = static_cast<Axis>(l);
        h += J * (spin_operator(system, i, axis).matrix * spin_operator(system, j, axis).matrix);
      }
    }
  }
  return {h, Vec3::UnitZ()};
}

Hamiltonian rotation_hamiltonian(const SpinSystem& system, const RotationVector& rotation) {
  return {-projected_operator(system, unit_weights(system), rotation.cartesian()),
          rotation.magnitude != 0.0 ? direction(rotation.theta, rotation.phi) : Vec3::UnitZ()};
}

Hamiltonian total_hamiltonian(const SpinSystem& system, const std::optional<FieldVector>& field,
                              const std::optional<RotationVector>& rotation) {
  Hamiltonian h = coupling_hamiltonian(system);
  if (field && field->magnitude != 0.0) h.matrix += zeeman_hamiltonian(system, *field).matrix;
  if (rotation && rotation->magnitude != 0.0) {
    h.matrix += rotation_hamiltonian(system, *rotation).matrix;
    h.quantization_axis = direction(rotation->theta, rotation->phi);
  }
  if (field && field->magnitude != 0.0) h.quantization_axis = direction(field->theta, field->phi);
  return h;
}

double regime_ratio(const SpinSystem& system, const FieldVector& field) {
  const double zeeman = system.max_abs_gamma() * std::abs(field.magnitude);
  const double J = system.min_coupling();
  if (J == 0.0) return zeeman == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return zeeman / J;
}

}  // namespace zulf
