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

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "zulf/hamiltonian.hpp"
#include "zulf/probe.hpp"
#include "zulf/spin_system.hpp"

namespace oracle {

using zulf::cplx;
using zulf::Matrix;

inline const Matrix kSx = (Matrix(2, 2) << 0.0, 0.5, 0.5, 0.0).finished();
inline const Matrix kSy =
    (Matrix(2, 2) << 0.0, cplx(0.0, -0.5), cplx(0.0, 0.5), 0.0).finished();
inline const Matrix kSz = (Matrix(2, 2) << 0.5, 0.0, 0.0, -0.5).finished();

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

// Single-spin operator embedded by explicit Kronecker products, spin 0 leftmost.
inline Matrix embed(int n, int spin, const Matrix& s) {
  Matrix out = Matrix::Identity(1, 1);
  for (int j = 0; j < n; ++j) out = kron(out, j == spin ? s : Matrix::Identity(2, 2));
  return out;
}

inline double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

// Lines from a plain Eigen diagonalization: the products
// <i|rho|j><j|O|i> do not depend on eigenvector phases, and their sums over
// degenerate levels do not depend on the basis inside a level.
struct Line {
  double frequency;
  cplx amplitude;
};

inline std::vector<Line> brute_force_lines(const Matrix& h, const Matrix& rho, const Matrix& o,
                                           double merge = 1e-6, double floor = 1e-10) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  const auto& e = es.eigenvalues();
  const Matrix& v = es.eigenvectors();
  const Matrix r = v.adjoint() * rho * v;
  const Matrix q = v.adjoint() * o * v;
  std::vector<Line> raw;
  for (Eigen::Index i = 0; i < e.size(); ++i) {
    for (Eigen::Index j = i + 1; j < e.size(); ++j) {
      const double f = e(j) - e(i);
      if (f > merge) raw.push_back({f, r(i, j) * q(j, i)});
    }
  }
  std::sort(raw.begin(), raw.end(), [](auto& a, auto& b) { return a.frequency < b.frequency; });
  std::vector<Line> merged;
  for (const auto& l : raw) {
    if (!merged.empty() && l.frequency - merged.back().frequency <= merge) {
      merged.back().amplitude += l.amplitude;
    } else {
      merged.push_back(l);
    }
  }
  double top = 0.0;
  for (const auto& l : merged) top = std::max(top, std::abs(l.amplitude));
  std::vector<Line> out;
  for (const auto& l : merged) {
    if (std::abs(l.amplitude) > floor * top) out.push_back(l);
  }
  return out;
}

}  // namespace oracle
