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

#include "zulf/eigen_basis.hpp"
#include "zulf/spin_system.hpp"

namespace zulf {

/// |f m_f; k> quantum numbers of one eigenstate. f and m_f are half-integers
/// stored as doubles; k indexes the satellite manifold, f_s = n/2 - k.
struct StateLabel {
  double f = 0.0;
  double m = 0.0;
  int k = 0;
};

/// Labels of the bra (lower index) and ket states of a transition.
struct TransitionLabel {
  StateLabel lower;
  StateLabel upper;

  double delta_f() const { return upper.f - lower.f; }
  double delta_m() const { return upper.m - lower.m; }
  bool same_manifold() const { return upper.k == lower.k; }
};

enum class TransitionKind {
  zero_quantum,    // df = +-1, dm = 0
  single_quantum,  // df = +-1, dm = +-1
  intra_level,     // df = 0
  other,
};

TransitionKind classify(const TransitionLabel& label);

/// Assigns (f, m_f, k) from <F^2>, <F.n> and the satellite Casimir <F_s^2>
/// (spins 1..n-1), each rounded to the nearest allowed value. Throws
/// NumericError when any expectation value is more than 0.1 from an allowed
/// value, which happens outside the strong-coupling regime.
std::vector<StateLabel> label_states(const SpinSystem& system, const EigenBasis& basis);

}  // namespace zulf
