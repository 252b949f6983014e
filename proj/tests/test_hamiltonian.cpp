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


#include <doctest.h>

#include <Eigen/Eigenvalues>

#include "oracle.hpp"
#include "zulf/hamiltonian.hpp"

using namespace zulf;

namespace {

SpinSystem formic() { return preset("formic_acid"); }

Matrix commutator(const Matrix& a, const Matrix& b) { return a * b - b * a; }

RealVector eigenvalues(const Matrix& m) { return Eigen::SelfAdjointEigenSolver<Matrix>(m).eigenvalues(); }

}  // namespace

TEST_CASE("zeeman term") {
  const auto s = formic();
  CHECK(oracle::max_abs(zeeman_hamiltonian(s, {0.0, 0.0, 0.0}).matrix) == 0.0);

  const Matrix h = zeeman_hamiltonian(s, {0.0, 0.0, 1e-7}).matrix;
  CHECK(oracle::max_abs(h - Matrix(h.diagonal().asDiagonal())) < 1e-15);
  CHECK(h(0, 0).real() == doctest::Approx(-(10.7077e6 + 42.5775e6) * 1e-7 / 2).epsilon(1e-12));
  CHECK(h(0, 0).real() == doctest::Approx(-2.664).epsilon(1e-3));

  const auto p = SpinSystem("p", {42.5775e6}, Eigen::MatrixXd::Zero(1, 1), 1.0);
  const double b = 3e-8;
  const Matrix hx = zeeman_hamiltonian(p, {constants::pi / 2, 0.0, b}).matrix;
  CHECK(oracle::max_abs(hx + 42.5775e6 * b * oracle::kSx) < 1e-12);
  CHECK(oracle::max_abs(hx - hx.adjoint()) == 0.0);
}

TEST_CASE("coupling term") {
  const auto s = formic();
  const Matrix h = coupling_hamiltonian(s).matrix;
  const RealVector e = eigenvalues(h);
  CHECK(e(0) == doctest::Approx(-166.65));
  for (int i = 1; i < 4; ++i) CHECK(e(i) == doctest::Approx(55.55));

  const auto f = total_spin(s, std::vector<int>{0, 1});
  const Matrix f2 = f[0] * f[0] + f[1] * f[1] + f[2] * f[2];
  CHECK(oracle::max_abs(commutator(h, f[2])) < 1e-10);
  CHECK(oracle::max_abs(commutator(h, f2)) < 1e-10);

  const auto free = SpinSystem("free", {1.0, 2.0}, Eigen::MatrixXd::Zero(2, 2), 1.0);
  CHECK(oracle::max_abs(coupling_hamiltonian(free).matrix) == 0.0);

  const auto ac = preset("acetonitrile");
  const Matrix ha = coupling_hamiltonian(ac).matrix;
  const auto fa = total_spin(ac, std::vector<int>{0, 1, 2, 3});
  for (const auto& c : fa) CHECK(oracle::max_abs(commutator(ha, c)) < 1e-9);
}

TEST_CASE("rotation term") {
  const auto s = formic();
  const Matrix h = rotation_hamiltonian(s, {0.0, 0.0, 2.0}).matrix;
  const Matrix fz = collective_operator(s, unit_weights(s), Axis::z).matrix;
  CHECK(oracle::max_abs(h + 2.0 * fz) < 1e-15);
  const RealVector e = eigenvalues(h);
  CHECK(e(0) == doctest::Approx(-2.0));
  CHECK(e(3) == doctest::Approx(2.0));
  CHECK(oracle::max_abs(rotation_hamiltonian(s, {0.3, 0.2, 0.0}).matrix) == 0.0);

  const auto ac = preset("acetonitrile");
  const Matrix hr = rotation_hamiltonian(ac, {0.7, 2.1, 2.0}).matrix;
  CHECK(oracle::max_abs(commutator(hr, coupling_hamiltonian(ac).matrix)) < 1e-10);
}

TEST_CASE("total hamiltonian") {
  const auto s = formic();
  const FieldVector b{1.289, 0.047, 1.0788e-7};
  const Matrix h = total_hamiltonian(s, b).matrix;
  CHECK(oracle::max_abs(h - zeeman_hamiltonian(s, b).matrix - coupling_hamiltonian(s).matrix) <
        1e-12);
  // Field-frame gaps are those of a field along z of the same magnitude.
  const RealVector e1 = eigenvalues(h);
  const RealVector e2 = eigenvalues(total_hamiltonian(s, FieldVector{0.0, 0.0, b.magnitude}).matrix);
  CHECK((e1 - e2).cwiseAbs().maxCoeff() < 1e-9);
  CHECK(total_hamiltonian(s, b).quantization_axis.isApprox(direction(1.289, 0.047)));

  CHECK(oracle::max_abs(total_hamiltonian(s).matrix - coupling_hamiltonian(s).matrix) == 0.0);

  const Matrix hz = zeeman_hamiltonian(s, {0.0, 0.0, 1e-7}).matrix;
  const Matrix hw = rotation_hamiltonian(s, {0.0, 0.0, 2.0}).matrix;
  const Matrix hj = coupling_hamiltonian(s).matrix;
  const Matrix all = total_hamiltonian(s, FieldVector{0.0, 0.0, 1e-7}, RotationVector{0.0, 0.0, 2.0}).matrix;
  CHECK(oracle::max_abs(all - hz - hw - hj) < 1e-12);
  CHECK(oracle::max_abs(commutator(hz, hw)) < 1e-12);
  CHECK(oracle::max_abs(commutator(hw, hj)) < 1e-9);
  // unequal gammas: only F_z is shared
  CHECK(oracle::max_abs(commutator(hz, hj)) > 1.0);
  const Matrix fz = collective_operator(s, unit_weights(s), Axis::z).matrix;
  for (const Matrix* m : {&hz, &hw, &hj}) CHECK(oracle::max_abs(commutator(*m, fz)) < 1e-9);
}

TEST_CASE("field orientation does not change the spectrum of H") {
  const auto ac = preset("acetonitrile");
  const RealVector ref = eigenvalues(total_hamiltonian(ac, FieldVector{0.0, 0.0, 1e-7}).matrix);
  for (double t : {0.3, 1.2, 2.8}) {
    for (double p : {0.0, 1.0, 4.0}) {
      const RealVector e = eigenvalues(total_hamiltonian(ac, FieldVector{t, p, 1e-7}).matrix);
      CHECK((e - ref).cwiseAbs().maxCoeff() < 1e-9);
    }
  }
  CHECK(regime_ratio(preset("formic_acid"), {0.0, 0.0, 1e-7}) ==
        doctest::Approx(42.5775e6 * 1e-7 / 222.2));
}
