// Copyright 2026 The eoqc Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "eoqc/qmath.hpp"

namespace eoqc {

enum class NamedGate { Hadamard, Cnot, T, RxPi2, Identity };

inline constexpr std::array<std::pair<NamedGate, std::string_view>, 5> kGateNames{{
    {NamedGate::Hadamard, "hadamard"},
    {NamedGate::Cnot, "cnot"},
    {NamedGate::T, "t"},
    {NamedGate::RxPi2, "rx_pi_2"},
    {NamedGate::Identity, "identity"},
}};

inline std::string_view gate_name(NamedGate g) {
  for (const auto& [gate, name] : kGateNames) {
    if (gate == g) return name;
  }
  return "unknown";
}

inline std::optional<NamedGate> parse_gate_name(std::string_view name) {
  for (const auto& [gate, n] : kGateNames) {
    if (n == name) return gate;
  }
  return std::nullopt;
}

/// Rotation exp(-i theta sigma_x / 2).
inline Matrix rx(double theta) {
  return std::cos(theta / 2) * identity(2) - kI * std::sin(theta / 2) * single_qubit_pauli(Axis::X);
}

/// Textbook matrix of a named gate; `n_qubits` sizes the identity.
inline Matrix gate_matrix(NamedGate g, int n_qubits = 1) {
  Matrix m;
  switch (g) {
    case NamedGate::Hadamard:
      m = Matrix(2, 2);
      m << 1, 1, 1, -1;
      m /= std::sqrt(2.0);
      return m;
    case NamedGate::Cnot:
      m = Matrix::Zero(4, 4);
      m(0, 0) = m(1, 1) = m(2, 3) = m(3, 2) = 1.0;
      return m;
    case NamedGate::T:
      m = Matrix::Identity(2, 2);
      m(1, 1) = std::exp(kI * kPi / 4.0);
      return m;
    case NamedGate::RxPi2:
      return rx(kPi / 2);
    case NamedGate::Identity:
      return identity(Eigen::Index{1} << n_qubits);
  }
  throw std::invalid_argument("gate_matrix: unknown gate");
}

inline int gate_qubits(NamedGate g, int n_qubits_for_identity = 1) {
  switch (g) {
    case NamedGate::Cnot: return 2;
    case NamedGate::Identity: return n_qubits_for_identity;
    default: return 1;
  }
}

}  // namespace eoqc
