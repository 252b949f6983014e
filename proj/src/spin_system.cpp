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

#include "zulf/spin_system.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "zulf/error.hpp"

namespace zulf {

namespace {

Matrix pauli_half(Axis axis) {
  Matrix s = Matrix::Zero(2, 2);
  switch (axis) {
    case Axis::x:
      s(0, 1) = 0.5;
      s(1, 0) = 0.5;
      break;
    case Axis::y:
      s(0, 1) = cplx(0.0, -0.5);
      s(1, 0) = cplx(0.0, 0.5);
      break;
    case Axis::z:
      s(0, 0) = 0.5;
      s(1, 1) = -0.5;
      break;
  }
  return s;
}

// Embeds a 2x2 single-spin operator at position `spin` of an n-spin register
// without forming the Kronecker chain explicitly.
Matrix embed(const Matrix& single, int spin, int n) {
  const Eigen::Index dim = Eigen::Index{1} << n;
  const int shift = n - 1 - spin;
  Matrix out = Matrix::Zero(dim, dim);
  for (Eigen::Index col = 0; col < dim; ++col) {
    const int bit = static_cast<int>((col >> shift) & 1);
    for (int row_bit = 0; row_bit < 2; ++row_bit) {
      const cplx v = single(row_bit, bit);
      if (v == cplx(0.0)) continue;
      const Eigen::Index row = (col & ~(Eigen::Index{1} << shift)) |
                               (static_cast<Eigen::Index>(row_bit) << shift);
      out(row, col) += v;
    }
  }
  return out;
}

}  // namespace

SpinSystem::SpinSystem(std::string name, std::vector<double> gammas, Eigen::MatrixXd couplings,
                       double coherence_time)
    : name_(std::move(name)),
      gammas_(std::move(gammas)),
      couplings_(std::move(couplings)),
      coherence_time_(coherence_time) {
  const auto n = static_cast<Eigen::Index>(gammas_.size());
  if (n < 1) throw DomainError("spin system needs at least one spin");
  if (n > kMaxSpins) {
    throw DomainError("spin system has " + std::to_string(n) + " spins; the dense backend caps at " +
                      std::to_string(kMaxSpins));
  }
  if (couplings_.rows() != n || couplings_.cols() != n) {
    throw DomainError("coupling matrix must be " + std::to_string(n) + "x" + std::to_string(n));
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (couplings_(i, i) != 0.0) throw DomainError("coupling matrix must have a zero diagonal");
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (couplings_(i, j) != couplings_(j, i)) {
        throw DomainError("coupling matrix must be symmetric");
      }
    }
  }
  for (double g : gammas_) {
    if (!std::isfinite(g)) throw DomainError("gyromagnetic ratios must be finite");
  }
  if (!(coherence_time_ > 0.0) || !std::isfinite(coherence_time_)) {
    throw DomainError("coherence time must be positive");
  }
}

double SpinSystem::min_coupling() const {
  double best = 0.0;
  for (Eigen::Index i = 0; i < couplings_.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < couplings_.cols(); ++j) {
      const double a = std::abs(couplings_(i, j));
      if (a > 0.0 && (best == 0.0 || a < best)) best = a;
    }
  }
  return best;
}

double SpinSystem::max_abs_gamma() const {
  double best = 0.0;
  for (double g : gammas_) best = std::max(best, std::abs(g));
  return best;
}

SpinSystem build_star_molecule(int n_protons, double J, double gamma_center,
                               double gamma_satellite, double tau_coh, std::string name) {
  if (n_protons < 1) throw DomainError("star molecule needs n_protons >= 1");
  if (J == 0.0) throw DomainError("star molecule needs a nonzero coupling J");
  const int n = n_protons + 1;
  std::vector<double> gammas(static_cast<std::size_t>(n), gamma_satellite);
  gammas[0] = gamma_center;
  Eigen::MatrixXd couplings = Eigen::MatrixXd::Zero(n, n);
  for (int j = 1; j < n; ++j) {
    couplings(0, j) = J;
    couplings(j, 0) = J;
  }
  return SpinSystem(std::move(name), std::move(gammas), std::move(couplings), tau_coh);
}

int star_satellite_count(const SpinSystem& system) {
  const int n = system.size();
  if (n < 2) return -1;
  const double J = system.coupling(0, 1);
  if (J == 0.0) return -1;
  for (int j = 1; j < n; ++j) {
    if (system.coupling(0, j) != J || system.gamma(j) != system.gamma(1)) return -1;
    for (int k = j + 1; k < n; ++k) {
      if (system.coupling(j, k) != 0.0) return -1;
    }
  }
  return n - 1;
}

namespace {

struct PresetSpec {
  const char* name;
  int protons;
  double J;
  double tau;
};

// 13C-labelled CH_n molecules; acetic acid is modelled as the methyl group
// star (acidic proton exchanges rapidly).
constexpr PresetSpec kPresets[] = {
    {"formic_acid", 1, 222.2, 10.4},
    {"formaldehyde", 2, 163.9, 0.8},
    {"acetonitrile", 3, 136.25, 4.7},
    {"acetic_acid", 3, 129.5, 8.8},
};

}  // namespace

std::vector<std::string> preset_names() {
  std::vector<std::string> out;
  for (const auto& p : kPresets) out.emplace_back(p.name);
  return out;
}

SpinSystem preset(std::string_view name) {
  return preset(name, constants::gamma_carbon13, constants::gamma_proton);
}

SpinSystem preset(std::string_view name, double gamma_center, double gamma_satellite) {
  for (const auto& p : kPresets) {
    if (name == p.name) {
      return build_star_molecule(p.protons, p.J, gamma_center, gamma_satellite, p.tau,
                                 std::string(p.name));
    }
  }
  std::ostringstream msg;
  msg << "unknown molecule preset '" << name << "'; available presets:";
  for (const auto& p : kPresets) msg << ' ' << p.name;
  throw DomainError(msg.str());
}

SpinSystem molecule_from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("molecule file: ") + e.what());
  }
  try {
    std::string name = j.value("name", std::string("molecule"));
    auto gammas = j.at("gammas").get<std::vector<double>>();
    const auto n = static_cast<Eigen::Index>(gammas.size());
    Eigen::MatrixXd couplings = Eigen::MatrixXd::Zero(n, n);
    for (const auto& entry : j.at("couplings")) {
      if (!entry.is_array() || entry.size() != 3) {
        throw ParseError("molecule file: each coupling must be [i, j, J_Hz]");
      }
      const auto a = entry[0].get<Eigen::Index>();
      const auto b = entry[1].get<Eigen::Index>();
      const double J = entry[2].get<double>();
      if (a < 0 || b < 0 || a >= n || b >= n || a == b) {
        throw ParseError("molecule file: coupling indices out of range");
      }
      couplings(a, b) = J;
      couplings(b, a) = J;
    }
    const double tau = j.at("tau_coh_s").get<double>();
    return SpinSystem(std::move(name), std::move(gammas), std::move(couplings), tau);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("molecule file: ") + e.what());
  }
}

std::string molecule_to_json_text(const SpinSystem& system) {
  nlohmann::json j;
  j["name"] = system.name();
  j["gammas"] = std::vector<double>(system.gammas().begin(), system.gammas().end());
  nlohmann::json couplings = nlohmann::json::array();
  for (int i = 0; i < system.size(); ++i) {
    for (int k = i + 1; k < system.size(); ++k) {
      if (system.coupling(i, k) != 0.0) couplings.push_back({i, k, system.coupling(i, k)});
    }
  }
  j["couplings"] = couplings;
  j["tau_coh_s"] = system.coherence_time();
  return j.dump(2);
}

SpinOperator spin_operator(const SpinSystem& system, int spin_index, Axis axis) {
  if (spin_index < 0 || spin_index >= system.size()) {
    throw DomainError("spin index " + std::to_string(spin_index) + " out of range for " +
                      std::to_string(system.size()) + " spins");
  }
  SpinOperator op;
  op.matrix = embed(pauli_half(axis), spin_index, system.size());
  op.axis = axis;
  op.spin_index = spin_index;
  op.label = std::string("I") + std::to_string(spin_index) + axis_name(axis);
  return op;
}

SpinOperator collective_operator(const SpinSystem& system, std::span<const double> weights,
                                 Axis axis) {
  if (static_cast<int>(weights.size()) != system.size()) {
    throw DomainError("collective operator needs one weight per spin");
  }
  SpinOperator op;
  op.matrix = Matrix::Zero(system.dimension(), system.dimension());
  const Matrix single = pauli_half(axis);
  for (int j = 0; j < system.size(); ++j) {
    if (weights[static_cast<std::size_t>(j)] == 0.0) continue;
    op.matrix += weights[static_cast<std::size_t>(j)] * embed(single, j, system.size());
  }
  op.axis = axis;
  op.label = std::string("O") + axis_name(axis);
  return op;
}

Matrix projected_operator(const SpinSystem& system, std::span<const double> weights,
                          const Vec3& direction) {
  Matrix out = Matrix::Zero(system.dimension(), system.dimension());
  for (int l = 0; l < 3; ++l) {
    if (direction[l] == 0.0) continue;
    out += direction[l] * collective_operator(system, weights, static_cast<Axis>(l)).matrix;
  }
  return out;
}

std::array<Matrix, 3> total_spin(const SpinSystem& system, std::span<const int> spins) {
  std::vector<double> w(static_cast<std::size_t>(system.size()), 0.0);
  for (int s : spins) {
    if (s < 0 || s >= system.size()) throw DomainError("spin index out of range");
    w[static_cast<std::size_t>(s)] = 1.0;
  }
  return {collective_operator(system, w, Axis::x).matrix,
          collective_operator(system, w, Axis::y).matrix,
          collective_operator(system, w, Axis::z).matrix};
}

std::vector<double> unit_weights(const SpinSystem& system) {
  return std::vector<double>(static_cast<std::size_t>(system.size()), 1.0);
}

}  // namespace zulf
