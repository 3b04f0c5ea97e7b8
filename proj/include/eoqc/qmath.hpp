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

// Small dense complex linear algebra and the quantum primitives built on it.
// Everything here is a pure function over value types; hbar = 1 throughout.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

#include "eoqc/constants.hpp"

namespace eoqc {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using StateVector = Eigen::VectorXcd;

inline constexpr Complex kI{0.0, 1.0};

enum class Axis { I, X, Y, Z };

struct BlochVector {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double norm() const { return std::sqrt(x * x + y * y + z * z); }
  friend BlochVector operator-(const BlochVector& a, const BlochVector& b) {
    return {a.x - b.x, a.y - b.y, a.z - b.z};
  }
  friend double dot(const BlochVector& a, const BlochVector& b) {
    return a.x * b.x + a.y * b.y + a.z * b.z;
  }
  friend bool operator==(const BlochVector&, const BlochVector&) = default;
};

inline Matrix identity(Eigen::Index dim) { return Matrix::Identity(dim, dim); }

/// Kronecker product a (x) b; `a` acts on the more significant index.
inline Matrix tensor(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

inline Matrix single_qubit_pauli(Axis axis) {
  Matrix m(2, 2);
  switch (axis) {
    case Axis::I: m << 1, 0, 0, 1; break;
    case Axis::X: m << 0, 1, 1, 0; break;
    case Axis::Y: m << 0, -kI, kI, 0; break;
    case Axis::Z: m << 1, 0, 0, -1; break;
  }
  return m;
}

/// Pauli operator on `qubit` embedded in an `n_qubits` register. Qubit 0 is
/// the leftmost tensor factor, so pauli(Z, 0, 2) = sigma_z (x) I_2.
inline Matrix pauli(Axis axis, int qubit, int n_qubits) {
  if (n_qubits < 1 || n_qubits > 2) {
    throw std::out_of_range("pauli: n_qubits must be 1 or 2, got " + std::to_string(n_qubits));
  }
  if (qubit < 0 || qubit >= n_qubits) {
    throw std::out_of_range("pauli: qubit index " + std::to_string(qubit) +
                            " out of range for " + std::to_string(n_qubits) + " qubit(s)");
  }
  Matrix out = Matrix::Identity(1, 1);
  for (int q = 0; q < n_qubits; ++q) {
    out = tensor(out, single_qubit_pauli(q == qubit ? axis : Axis::I));
  }
  return out;
}

inline double fro_norm(const Matrix& a) { return a.norm(); }

inline bool is_hermitian(const Matrix& a, double tol = tol::kHermitian) {
  if (a.rows() != a.cols()) return false;
  return (a - a.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

inline bool is_unitary(const Matrix& u, double tol = tol::kUnitary) {
  if (u.rows() != u.cols()) return false;
  return (u.adjoint() * u - identity(u.rows())).norm() <= tol;
}

/// Spectral decomposition of a Hermitian matrix, h = V diag(values) V^dagger.
struct HermitianEigen {
  Eigen::VectorXd values;
  Matrix vectors;
};

inline HermitianEigen hermitian_eigen(const Matrix& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("hermitian_eigen: eigendecomposition failed");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

/// exp(-i dt h) from an existing decomposition of h.
inline Matrix propagator_from_eigen(const HermitianEigen& eig, double dt) {
  Eigen::VectorXcd phases(eig.values.size());
  for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
    phases(i) = std::exp(-kI * dt * eig.values(i));
  }
  return eig.vectors * phases.asDiagonal() * eig.vectors.adjoint();
}

/// exp(-i h dt) for Hermitian h, exact up to the eigensolver's accuracy.
inline Matrix expm_hermitian_prop(const Matrix& h, double dt) {
  if (!is_hermitian(h)) {
    throw std::invalid_argument("expm_hermitian_prop: generator is not Hermitian");
  }
  return propagator_from_eigen(hermitian_eigen(h), dt);
}

/// Haar-distributed unitary: complex Ginibre matrix, QR, then the phases of
/// diag(R) folded into Q so the distribution is exactly Haar.
inline Matrix haar_random_unitary(int dim, std::uint64_t seed) {
  if (dim < 2) throw std::invalid_argument("haar_random_unitary: dim must be >= 2");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix z(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      const double re = normal(rng);
      const double im = normal(rng);
      z(i, j) = Complex(re, im) / std::sqrt(2.0);
    }
  }
  Eigen::HouseholderQR<Matrix> qr(z);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < dim; ++j) {
    const Complex d = r(j, j);
    const double mag = std::abs(d);
    q.col(j) *= mag > 0.0 ? d / mag : Complex(1.0);
  }
  return q;
}

/// |Tr(U_T^dagger U) / d|^2; global-phase invariant, 1 for a perfect gate.
inline double process_fidelity(const Matrix& target, const Matrix& u) {
  if (target.rows() != u.rows() || target.cols() != u.cols() || target.rows() != target.cols()) {
    throw std::invalid_argument("process_fidelity: dimension mismatch");
  }
  const double d = static_cast<double>(target.rows());
  const Complex overlap = (target.adjoint() * u).trace() / d;
  return std::clamp(std::norm(overlap), 0.0, 1.0);
}

/// Checks a density matrix: square, Hermitian, unit trace, PSD.
inline void require_density_matrix(const Matrix& rho, const char* where) {
  if (rho.rows() != rho.cols()) {
    throw std::invalid_argument(std::string(where) + ": density matrix is not square");
  }
  if (!is_hermitian(rho, 1e-8)) {
    throw std::invalid_argument(std::string(where) + ": density matrix is not Hermitian");
  }
  if (std::abs(rho.trace() - Complex(1.0)) > tol::kTrace) {
    throw std::invalid_argument(std::string(where) + ": density matrix trace differs from 1");
  }
  const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Matrix>(rho, Eigen::EigenvaluesOnly).eigenvalues();
  if (ev.minCoeff() < tol::kPsdFloor) {
    throw std::invalid_argument(std::string(where) + ": density matrix has a negative eigenvalue");
  }
}

inline double floored(double v) { return v < tol::kEigenFloor ? 0.0 : v; }

/// Principal square root of a PSD matrix; roundoff-sized eigenvalues are zeroed.
inline Matrix psd_sqrt(const Matrix& a) {
  const HermitianEigen eig = hermitian_eigen(0.5 * (a + a.adjoint()));
  Eigen::VectorXd roots = eig.values.unaryExpr(&floored).cwiseSqrt();
  return eig.vectors * roots.asDiagonal() * eig.vectors.adjoint();
}

/// Uhlmann fidelity (Tr sqrt(sqrt(a) b sqrt(a)))^2.
inline double state_fidelity(const Matrix& rho_a, const Matrix& rho_b) {
  require_density_matrix(rho_a, "state_fidelity");
  require_density_matrix(rho_b, "state_fidelity");
  if (rho_a.rows() != rho_b.rows()) throw std::invalid_argument("state_fidelity: dimension mismatch");
  const Matrix s = psd_sqrt(rho_a);
  const Matrix m = s * rho_b * s;
  const Eigen::VectorXd ev =
      Eigen::SelfAdjointEigenSolver<Matrix>(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly).eigenvalues();
  double root_sum = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) root_sum += std::sqrt(floored(ev(i)));
  return std::clamp(root_sum * root_sum, 0.0, 1.0);
}

inline Matrix density(const StateVector& psi) { return psi * psi.adjoint(); }

/// Computational basis state |index> of dimension dim.
inline StateVector basis_state(Eigen::Index dim, Eigen::Index index) {
  StateVector v = StateVector::Zero(dim);
  v(index) = 1.0;
  return v;
}

inline BlochVector bloch_vector(const Matrix& rho) {
  if (rho.rows() != 2 || rho.cols() != 2) {
    throw std::invalid_argument("bloch_vector: expected a 2x2 density matrix");
  }
  auto expect = [&](Axis axis) {
    const Complex v = (rho * single_qubit_pauli(axis)).trace();
    if (std::abs(v.imag()) > tol::kRealResidue) {
      throw std::invalid_argument("bloch_vector: density matrix is not Hermitian");
    }
    return v.real();
  };
  return {expect(Axis::X), expect(Axis::Y), expect(Axis::Z)};
}

/// Angle between two Bloch vectors of pure states (arc length on the unit sphere).
inline double great_circle_distance(const BlochVector& a, const BlochVector& b) {
  const double c = dot(a, b) / std::max(a.norm() * b.norm(), 1e-300);
  return std::acos(std::clamp(c, -1.0, 1.0));
}

}  // namespace eoqc
