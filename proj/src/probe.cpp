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

#include "zulf/probe.hpp"

#include <cmath>

#include "zulf/error.hpp"

namespace zulf {

Matrix ProbeState::full() const {
  const auto dim = deviation.rows();
  return Matrix::Identity(dim, dim) / static_cast<double>(dim) + deviation;
}

double polarization_scale(double polarizing_field, double temperature) {
  return constants::planck * polarizing_field / (constants::boltzmann * temperature);
}

ProbeState thermal_probe(const SpinSystem& system, const Vec3& guiding_axis,
                         double polarizing_field, double temperature) {
  const double norm = guiding_axis.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw DomainError("guiding axis must have nonzero finite norm");
  }
  if (!(polarizing_field >= 0.0)) throw DomainError("polarizing field must be non-negative");
  if (!(temperature > 0.0)) throw DomainError("temperature must be positive");

  ProbeState probe;
  probe.guiding_axis = guiding_axis / norm;
  probe.polarization_scale = polarization_scale(polarizing_field, temperature);
  for (double g : system.gammas()) probe.epsilons.push_back(probe.polarization_scale * g);
  probe.deviation = -projected_operator(system, probe.epsilons, probe.guiding_axis);
  return probe;
}

ProbeState thermal_probe(const SpinSystem& system, Axis guiding_axis, double polarizing_field,
                         double temperature) {
  return thermal_probe(system, unit_vector(guiding_axis), polarizing_field, temperature);
}

}  // namespace zulf
