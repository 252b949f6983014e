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

#include <complex>

#include <Eigen/Dense>

namespace zulf {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Vec3 = Eigen::Vector3d;
using CVec3 = Eigen::Vector3cd;
using Mat3 = Eigen::Matrix3d;

enum class Axis { x = 0, y = 1, z = 2 };

inline char axis_name(Axis a) { return "xyz"[static_cast<int>(a)]; }

inline Vec3 unit_vector(Axis a) {
  Vec3 v = Vec3::Zero();
  v[static_cast<int>(a)] = 1.0;
  return v;
}

/// Physical constants (SI). Gyromagnetic ratios are in Hz/T.
namespace constants {
inline constexpr double planck = 6.62607015e-34;
inline constexpr double boltzmann = 1.380649e-23;
inline constexpr double gamma_carbon13 = 10.7077e6;
inline constexpr double gamma_proton = 42.5775e6;
inline constexpr double pi = 3.14159265358979323846;
}  // namespace constants

}  // namespace zulf
