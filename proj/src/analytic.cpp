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


#include "zulf/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "zulf/error.hpp"

namespace zulf {

namespace {

constexpr double kLabelTolerance = 0.1;

double expectation(const Matrix& op, const Eigen::Ref<const Vector>& v) {
  return (v.adjoint() * op * v)(0, 0).real();
}

Matrix casimir(const std::array<Matrix, 3>& f) {
  return f[0] * f[0] + f[1] * f[1] + f[2] * f[2];
}

// Nearest allowed total spin for `spins` spin-1/2 given <F^2>.
double round_spin(double f2, int spins, const char* what) {
  const double est = (-1.0 + std::sqrt(1.0 + 4.0 * std::max(f2, 0.0))) / 2.0;
  const double lowest = spins % 2 == 0 ? 0.0 : 0.5;
  double f = lowest + std::round(est - lowest);
  f = std::clamp(f, lowest, spins / 2.0);
  if (std::abs(est - f) > kLabelTolerance) {
    std::ostringstream msg;
    msg << "labeling failure: " << what << " = " << est << " is not near an allowed value";
    throw NumericError(msg.str());
  }
  return f;
}

double round_projection(double m_est, double f) {
  double m = -f + std::round(m_est + f) + 0.0;
  m = std::clamp(m, -f, f) + 0.0;
  if (std::abs(m_est - m) > kLabelTolerance) {
    std::ostringstream msg;
    msg << "labeling failure: m_f = " << m_est << " is not near an allowed value";
    throw NumericError(msg.str());
  }
  return m;
}

long binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

void check_manifold(int n, int k) {
  if (n < 1) throw DomainError("number of protons must be positive");
  if (k < 0 || k > max_manifold(n)) {
    std::ostringstream msg;
    msg << "manifold k = " << k << " invalid for n = " << n << " (0.." << max_manifold(n) << ")";
    throw DomainError(msg.str());
  }
}

SplittingReport skeleton(int n, int k, double J) {
  check_manifold(n, k);
  SplittingReport r;
  r.n = n;
  r.k = k;
  r.center = 0.5 * J * (1 + n - 2 * k);
  r.multiplicity = manifold_multiplicity(n, k);
  return r;
}

// Fills both line lists given the per-m ZQ slope `a` and the SQ offset `b`:
// ZQ nu = center + 2 m a, SQ nu = center + 2 m a - s b for upper m' = m + s.
void fill_lines(SplittingReport& r, double a, double b) {
  const double fh = r.n / 2.0 - r.k;
  const double f_low = fh - 0.5;
  const double f_up = fh + 0.5;
  if (f_low < 0.0) return;
  for (double m = -f_low; m <= f_low + 1e-9; m += 1.0) {
    const StateLabel lower{f_low, m, r.k};
    r.zero_quantum.push_back({std::abs(r.center + 2.0 * m * a), {lower, {f_up, m, r.k}}});
    for (int s : {-1, 1}) {
      r.single_quantum.push_back(
          {std::abs(r.center + 2.0 * m * a - s * b), {lower, {f_up, m + s, r.k}}});
    }
  }
}

}  // namespace

TransitionKind classify(const TransitionLabel& label) {
  const double df = std::abs(label.delta_f());
  const double dm = std::abs(label.delta_m());
  if (df < 0.5) return TransitionKind::intra_level;
  if (std::abs(df - 1.0) < 1e-9 && dm < 0.5) return TransitionKind::zero_quantum;
  if (std::abs(df - 1.0) < 1e-9 && std::abs(dm - 1.0) < 1e-9) {
    return TransitionKind::single_quantum;
  }
  return TransitionKind::other;
}

std::vector<StateLabel> label_states(const SpinSystem& system, const EigenBasis& basis) {
  const int n = system.size();
  std::vector<int> all(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) all[static_cast<std::size_t>(j)] = j;
  const auto f = total_spin(system, all);
  const Matrix f2 = casimir(f);
  const Vec3& axis = basis.quantization_axis;
  const Matrix fn = axis.x() * f[0] + axis.y() * f[1] + axis.z() * f[2];
  Matrix fs2;
  if (n > 1) {
    std::vector<int> sat(all.begin() + 1, all.end());
    fs2 = casimir(total_spin(system, sat));
  }

  std::vector<StateLabel> out;
  out.reserve(static_cast<std::size_t>(basis.vectors.cols()));
  for (Eigen::Index c = 0; c < basis.vectors.cols(); ++c) {
    const auto v = basis.vectors.col(c);
    StateLabel s;
    s.f = round_spin(expectation(f2, v), n, "f");
    s.m = round_projection(expectation(fn, v), s.f);
    if (n > 1) {
      const double fsat = round_spin(expectation(fs2, v), n - 1, "f_s");
      s.k = static_cast<int>(std::lround((n - 1) / 2.0 - fsat));
    }
    out.push_back(s);
  }
  return out;
}

int max_manifold(int n) { return n / 2; }

int manifold_multiplicity(int n, int k) {
  return static_cast<int>(binomial(n, k) - binomial(n, k - 1));
}

SplittingReport zeeman_lines(int n, int k, double J, double B, double gamma_h, double gamma_c) {
  SplittingReport r = skeleton(n, k, J);
  const int q = 1 + n - 2 * k;
  const double a = (gamma_h - gamma_c) * B / q;
  const double b = (gamma_c + (n - 2 * k) * gamma_h) * B / q;
  fill_lines(r, a, b);
  r.delta_zq = 2.0 * std::abs(gamma_h - gamma_c) * B / q;
  r.delta_sq = 2.0 * (gamma_h + (n - 2 * k) * gamma_c) * B / q;
  r.regime_ratio = J != 0.0 ? std::max(std::abs(gamma_h), std::abs(gamma_c)) * B / std::abs(J)
                            : std::numeric_limits<double>::infinity();
  r.regime_warning = r.regime_ratio >= 0.1;
  return r;
}

SplittingReport rotation_lines(int n, int k, double J, double omega) {
  SplittingReport r = skeleton(n, k, J);
  fill_lines(r, 0.0, omega);
  r.delta_zq = 0.0;
  r.delta_sq = 2.0 * omega;
  r.regime_ratio = J != 0.0 ? std::abs(omega / J) : std::numeric_limits<double>::infinity();
  r.regime_warning = r.regime_ratio >= 0.1;
  return r;
}

TwoSpinTheory two_spin_theory(double gamma_1, double gamma_2, double J, double B) {
  if (J == 0.0 && B == 0.0) {
    throw DomainError("two-spin theory undefined for J = 0 and B = 0 (fourfold degeneracy)");
  }
  const double dg = gamma_1 - gamma_2;
  TwoSpinTheory t;
  if (J == 0.0) {
    t.xi = 0.0;
  } else if (dg * B == 0.0) {
    t.xi = constants::pi / 4.0;
  } else {
    t.xi = 0.5 * std::atan(J / (dg * B));
  }
  t.zq_probability = 0.5 * std::abs(dg * std::sin(2.0 * t.xi));
  const double c = std::cos(t.xi);
  const double s = std::sin(t.xi);
  t.states = {{{1, 0, 0, 0}, {0, c, s, 0}, {0, s, -c, 0}, {0, 0, 0, 1}}};
  return t;
}

std::vector<std::string> audit_selection_rules(const std::vector<TransitionLine>& lines,
                                               ProbeGeometry geometry) {
  std::vector<std::string> issues;
  for (const auto& line : lines) {
    std::ostringstream msg;
    msg.precision(10);
    msg << "line " << line.frequency << " Hz (" << line.bra << "->" << line.ket << "): ";
    if (!line.label) {
      issues.push_back(msg.str() + "unlabeled");
      continue;
    }
    const auto& l = *line.label;
    const double df = std::abs(l.delta_f());
    const double dm = std::abs(l.delta_m());
    if (df > 1.0 + 1e-9) {
      msg << "df = " << l.delta_f();
    } else if (!l.same_manifold()) {
      msg << "dk = " << (l.upper.k - l.lower.k);
    } else if (geometry == ProbeGeometry::parallel && dm > 1e-9) {
      msg << "dm = " << l.delta_m() << " with probe parallel to the field";
    } else if (geometry == ProbeGeometry::perpendicular && std::abs(dm - 1.0) > 1e-9) {
      msg << "dm = " << l.delta_m() << " with probe perpendicular to the field";
    } else {
      continue;
    }
    issues.push_back(msg.str());
  }
  return issues;
}

std::vector<ManifoldCount> count_manifold_lines(const std::vector<TransitionLine>& lines,
                                                int max_k) {
  std::vector<ManifoldCount> counts(static_cast<std::size_t>(max_k + 1));
  for (int k = 0; k <= max_k; ++k) counts[static_cast<std::size_t>(k)].k = k;
  for (const auto& line : lines) {
    if (!line.label || !line.label->same_manifold()) continue;
    const int k = line.label->lower.k;
    if (k < 0 || k > max_k) continue;
    auto& c = counts[static_cast<std::size_t>(k)];
    switch (classify(*line.label)) {
      case TransitionKind::zero_quantum:
        ++c.zero_quantum;
        break;
      case TransitionKind::single_quantum:
        ++c.single_quantum;
        break;
      default:
        break;
    }
  }
  return counts;
}

}  // namespace zulf
