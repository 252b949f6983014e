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

#include "zulf/eigen_basis.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "zulf/error.hpp"

namespace zulf {

namespace {

constexpr double kQuantumNumberTolerance = 1e-6;

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

// Rotates the columns `subspace` so that the operators in `ops[level..]`
// are diagonal on it, splitting on distinct eigenvalues at each level.
void refine(Matrix& subspace, const std::vector<Matrix>& ops, std::size_t level) {
  if (level >= ops.size() || subspace.cols() < 2) return;
  const Matrix reduced = subspace.adjoint() * ops[level] * subspace;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(reduced);
  subspace = subspace * solver.eigenvectors();
  const RealVector& vals = solver.eigenvalues();
  Eigen::Index start = 0;
  for (Eigen::Index i = 1; i <= vals.size(); ++i) {
    if (i == vals.size() || vals[i] - vals[i - 1] > kQuantumNumberTolerance) {
      Matrix group = subspace.middleCols(start, i - start);
      refine(group, ops, level + 1);
      subspace.middleCols(start, i - start) = group;
      start = i;
    }
  }
}

Matrix squared(const std::array<Matrix, 3>& f) {
  return f[0] * f[0] + f[1] * f[1] + f[2] * f[2];
}

}  // namespace

std::pair<double, double> polar_angles(const Vec3& v) {
  const double norm = v.norm();
  if (norm == 0.0) return {0.0, 0.0};
  const double theta = std::acos(std::clamp(v.z() / norm, -1.0, 1.0));
  double phi = std::atan2(v.y(), v.x());
  if (phi < 0.0) phi += 2.0 * constants::pi;
  if (std::sin(theta) < 1e-15) phi = 0.0;
  return {theta, phi};
}

Vec3 quantization_axis(const std::optional<FieldVector>& field,
                       const std::optional<RotationVector>& rotation) {
  if (field && field->magnitude != 0.0) return direction(field->theta, field->phi);
  if (rotation && rotation->magnitude != 0.0) return direction(rotation->theta, rotation->phi);
  return Vec3::UnitZ();
}

Matrix spin_rotation(const SpinSystem& system, double theta, double phi) {
  Matrix rz = Matrix::Zero(2, 2);
  rz(0, 0) = std::polar(1.0, -phi / 2.0);
  rz(1, 1) = std::polar(1.0, phi / 2.0);
  Matrix ry(2, 2);
  ry << std::cos(theta / 2.0), -std::sin(theta / 2.0), std::sin(theta / 2.0),
      std::cos(theta / 2.0);
  const Matrix single = rz * ry;
  Matrix u = single;
  for (int j = 1; j < system.size(); ++j) u = kron(u, single);
  return u;
}

EigenBasis canonical_eigenbasis(const SpinSystem& system, const Hamiltonian& hamiltonian,
                                const Vec3& quantization_axis) {
  if (hamiltonian.matrix.rows() != system.dimension() ||
      hamiltonian.matrix.cols() != system.dimension()) {
    throw DomainError("Hamiltonian dimension does not match the spin system");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hamiltonian.matrix);
  if (solver.info() != Eigen::Success) throw NumericError("Hermitian eigensolver failed");

  EigenBasis basis;
  basis.energies = solver.eigenvalues();
  basis.vectors = solver.eigenvectors();
  basis.quantization_axis = quantization_axis.normalized();

  const Eigen::Index dim = basis.energies.size();
  bool degenerate = false;
  for (Eigen::Index i = 1; i < dim; ++i) {
    if (basis.energies[i] - basis.energies[i - 1] <= kDegeneracyTolerance) degenerate = true;
  }

  if (degenerate) {
    std::vector<int> all(static_cast<std::size_t>(system.size()));
    for (int j = 0; j < system.size(); ++j) all[static_cast<std::size_t>(j)] = j;
    const auto f = total_spin(system, all);
    std::vector<Matrix> ops;
    ops.push_back(basis.quantization_axis.x() * f[0] + basis.quantization_axis.y() * f[1] +
                  basis.quantization_axis.z() * f[2]);
    ops.push_back(squared(f));
    // Nested satellite Casimirs separate repeated manifolds.
    for (int first = 1; first + 1 < system.size(); ++first) {
      std::vector<int> tail(all.begin() + first, all.end());
      ops.push_back(squared(total_spin(system, tail)));
    }
    Eigen::Index start = 0;
    for (Eigen::Index i = 1; i <= dim; ++i) {
      if (i == dim || basis.energies[i] - basis.energies[i - 1] > kDegeneracyTolerance) {
        if (i - start > 1) {
          Matrix group = basis.vectors.middleCols(start, i - start);
          refine(group, ops, 0);
          basis.vectors.middleCols(start, i - start) = group;
        }
        start = i;
      }
    }
  }

  const auto [theta, phi] = polar_angles(basis.quantization_axis);
  const Matrix framed = spin_rotation(system, theta, phi).adjoint() * basis.vectors;
  for (Eigen::Index c = 0; c < dim; ++c) {
    const double biggest = framed.col(c).cwiseAbs().maxCoeff();
    Eigen::Index pick = 0;
    while (std::abs(framed(pick, c)) < biggest * (1.0 - 1e-9)) ++pick;
    const cplx v = framed(pick, c);
    basis.vectors.col(c) *= std::conj(v) / std::abs(v);
  }
  return basis;
}

Matrix in_eigenbasis(const EigenBasis& basis, const Matrix& op) {
  return basis.vectors.adjoint() * op * basis.vectors;
}

}  // namespace zulf
