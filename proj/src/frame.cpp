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


#include "zulf/frame.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "zulf/eigen_basis.hpp"
#include "zulf/error.hpp"

namespace zulf {

FrameBasis frame_basis(double theta, double phi) {
  if (std::abs(std::sin(theta)) < 1e-15) phi = 0.0;
  const double ct = std::cos(theta);
  const double st = std::sin(theta);
  const double cp = std::cos(phi);
  const double sp = std::sin(phi);
  FrameBasis f;
  f.z = Vec3(st * cp, st * sp, ct);
  f.x = Vec3(ct * cp, ct * sp, -st);
  f.y = Vec3(-sp, cp, 0.0);
  f.P.col(0) = f.x;
  f.P.col(1) = f.y;
  f.P.col(2) = f.z;
  return f;
}

PrimedTable primed_matrix_elements(const SpinSystem& system, const Hamiltonian& hamiltonian,
                                   const Vec3& field_direction, bool labels) {
  if (field_direction.norm() == 0.0) throw DomainError("field direction has zero norm");
  const Vec3 n = field_direction.normalized();
  const auto [theta, phi] = polar_angles(n);
  const FrameBasis frame = frame_basis(theta, phi);
  const EigenBasis basis = canonical_eigenbasis(system, hamiltonian, n);

  const std::vector<double> g(system.gammas().begin(), system.gammas().end());
  std::array<Matrix, 3> primed;
  primed[0] = in_eigenbasis(basis, projected_operator(system, g, frame.x));
  primed[1] = in_eigenbasis(basis, projected_operator(system, g, frame.y));
  primed[2] = in_eigenbasis(basis, projected_operator(system, g, frame.z));

  std::vector<StateLabel> names;
  if (labels) names = label_states(system, basis);

  PrimedTable table;
  const auto dim = static_cast<int>(basis.energies.size());
  for (int i = 0; i < dim; ++i) {
    for (int j = i + 1; j < dim; ++j) {
      const double nu = basis.energies[j] - basis.energies[i];
      if (nu <= 1e-6) continue;
      PrimedElement e;
      e.bra = i;
      e.ket = j;
      e.frequency = nu;
      for (int l = 0; l < 3; ++l) e.element[l] = primed[static_cast<std::size_t>(l)](i, j);
      if (labels) {
        e.label = TransitionLabel{names[static_cast<std::size_t>(i)],
                                  names[static_cast<std::size_t>(j)]};
      }
      table.elements.push_back(e);
    }
  }

  const Matrix zeeman = hamiltonian.matrix - coupling_hamiltonian(system).matrix;
  const double norm = Eigen::SelfAdjointEigenSolver<Matrix>(zeeman, Eigen::EigenvaluesOnly)
                          .eigenvalues()
                          .cwiseAbs()
                          .maxCoeff();
  const double J = system.min_coupling();
  table.regime_ratio =
      J != 0.0 ? norm / J : (norm == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
  table.regime_warning = table.regime_ratio >= 0.1;
  return table;
}

std::array<CVec3, 3> ch_closed_form(double gamma_c, double gamma_h) {
  const double d = gamma_c - gamma_h;
  const double r = d / (2.0 * std::sqrt(2.0));
  const cplx i(0.0, 1.0);
  return {CVec3(0.0, 0.0, d / 2.0), CVec3(r, -i * r, 0.0), CVec3(-r, -i * r, 0.0)};
}

ChComparison compare_ch_elements(const PrimedTable& table, double gamma_c, double gamma_h) {
  ChComparison out;
  out.closed_form = ch_closed_form(gamma_c, gamma_h);
  std::array<bool, 3> found{};
  for (const auto& e : table.elements) {
    if (!e.label) continue;
    const auto& l = *e.label;
    if (std::abs(l.lower.f) > 1e-9 || std::abs(l.upper.f - 1.0) > 1e-9) continue;
    const int slot = l.upper.m == 0.0 ? 0 : (l.upper.m < 0.0 ? 1 : 2);
    out.numeric[static_cast<std::size_t>(slot)] = e.element;
    found[static_cast<std::size_t>(slot)] = true;
  }
  if (!found[0] || !found[1] || !found[2]) {
    throw DomainError("table has no singlet-to-triplet transitions");
  }
  const double reference = out.closed_form[0].z().real();
  const double measured = out.numeric[0].z().real();
  out.calibration = measured * reference < 0.0 ? -1.0 : 1.0;
  const double scale = out.closed_form[0].norm();
  for (std::size_t s = 0; s < 3; ++s) {
    out.numeric[s] *= out.calibration;
    out.max_relative_deviation = std::max(
        out.max_relative_deviation, (out.numeric[s] - out.closed_form[s]).cwiseAbs().maxCoeff() / scale);
  }
  return out;
}

namespace {

std::pair<cplx, cplx> projections(double theta, double phi, const Vec3& g, const CVec3& o) {
  const Mat3 P = frame_basis(theta, phi).P;
  const CVec3 lab = P.cast<cplx>() * o;
  const Vec3 gn = g.normalized();
  return {gn.cast<cplx>().dot(lab), lab.z()};
}

}  // namespace

double amplitude_formula(double theta, double phi, const Vec3& guiding_axis,
                         const CVec3& primed_element, double polarization_scale) {
  const auto [pg, pz] = projections(theta, phi, guiding_axis, primed_element);
  return polarization_scale * std::abs(pg) * std::abs(pz);
}

cplx factored_amplitude(double theta, double phi, const Vec3& guiding_axis,
                        const CVec3& primed_element, double polarization_scale) {
  const auto [pg, pz] = projections(theta, phi, guiding_axis, primed_element);
  return -polarization_scale * pg * std::conj(pz);
}

}  // namespace zulf
