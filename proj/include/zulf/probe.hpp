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

#include <vector>

#include "zulf/spin_system.hpp"
#include "zulf/types.hpp"

namespace zulf {

inline constexpr double kDefaultPolarizingField = 1.3;  // T
inline constexpr double kDefaultTemperature = 298.0;    // K

/// High-temperature initial state prepared by a guiding field along
/// guiding_axis: rho0 = 1/2^n - sum_j eps_j I_j . k_g.
///
/// Only the traceless deviation is stored; eps_j = polarization_scale *
/// gamma_j, so the deviation equals -polarization_scale * (O . k_g).
struct ProbeState {
  Matrix deviation;
  Vec3 guiding_axis = Vec3::UnitZ();
  double polarization_scale = 0.0;  // h B_p / (k_B T), per Hz/T
  std::vector<double> epsilons;

  Matrix full() const;
};

/// Throws DomainError for a zero-norm axis, a negative field or T <= 0.
ProbeState thermal_probe(const SpinSystem& system, const Vec3& guiding_axis,
                         double polarizing_field = kDefaultPolarizingField,
                         double temperature = kDefaultTemperature);

ProbeState thermal_probe(const SpinSystem& system, Axis guiding_axis,
                         double polarizing_field = kDefaultPolarizingField,
                         double temperature = kDefaultTemperature);

/// h * B_p / (k_B * T).
double polarization_scale(double polarizing_field, double temperature);

}  // namespace zulf
