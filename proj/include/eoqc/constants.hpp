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

#include <numbers>

namespace eoqc {

/// Numerical tolerances shared by every module. Units are those of the
/// quantity being compared (matrix entries, traces, norms).
namespace tol {

/// Elementwise |A - A^dagger| accepted for a matrix flagged Hermitian.
inline constexpr double kHermitian = 1e-10;
/// ||U^dagger U - I||_F accepted for a propagator.
inline constexpr double kUnitary = 1e-10;
/// |Tr(rho) - 1| accepted for a density matrix.
inline constexpr double kTrace = 1e-8;
/// Smallest eigenvalue accepted for a positive semidefinite matrix.
inline constexpr double kPsdFloor = -1e-9;
/// Imaginary residue tolerated in an expectation value that must be real.
inline constexpr double kRealResidue = 1e-10;
/// Slice Hamiltonians with a smaller Frobenius norm are treated as zero when
/// differentiating the energetic cost (the norm is not differentiable there).
inline constexpr double kDegenerateNorm = 1e-12;
/// Eigenvalue gaps below this use the confluent divided difference.
inline constexpr double kEigenGap = 1e-10;
/// Eigenvalues of a unit-trace PSD matrix below this are roundoff and are
/// zeroed before square roots (sqrt would amplify 1e-17 noise to 3e-9).
inline constexpr double kEigenFloor = 1e-15;
/// |w_f + w_e - 1| accepted for user-supplied objective weights.
inline constexpr double kWeightSum = 1e-9;

}  // namespace tol

inline constexpr double kPi = std::numbers::pi;

}  // namespace eoqc
