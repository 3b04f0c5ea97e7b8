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

// Energy-optimized GRAPE. The minimized objective is
//
//   Phi = w_f (1 - F) + w_e C,   F = |Tr(U_T^dagger U(T)) / d|^2,
//
// with C the normalized energetic cost. Each iteration computes the forward
// propagators X_n = U_n ... U_1 and backward propagators
// P_n = U_{n+1}^dagger ... U_N^dagger once, evaluates dF/du and dC/du for every
// (k, n), and applies
//
//   u <- clip(u + eps_f w_f dF/du - eps_e w_e dC/du, -B, B).

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "eoqc/constants.hpp"
#include "eoqc/qmath.hpp"
#include "eoqc/system.hpp"

namespace eoqc {

enum class GradientMode {
  /// Exact derivative of each slice propagator (divided differences in the
  /// slice eigenbasis).
  Exact,
  /// First-order perturbative form -2 Re{<P_n|i dt sigma_k X_n><X_n|P_n>}.
  /// Accurate to O(dt^2); kept for comparison.
  FirstOrder,
};

/// Objective weights, normalized so that fidelity + energy = 1.
struct Weights {
  double fidelity = 1.0;
  double energy = 0.0;

  static Weights normalized(double w_f, double w_e) {
    if (!(w_f >= 0.0) || !(w_e >= 0.0)) throw std::invalid_argument("weights must be non-negative");
    const double sum = w_f + w_e;
    if (!(sum > 0.0)) throw std::invalid_argument("weights must not both be zero");
    return {w_f / sum, w_e / sum};
  }
  friend bool operator==(const Weights&, const Weights&) = default;
};

struct GrapeConfig {
  Weights weights;
  double eps_f = 1.0;
  double eps_e = 3.0;
  int n_iterations = 500;
  std::uint64_t seed = 0;
  double init_scale = 0.1;
  GradientMode gradient = GradientMode::Exact;

  void validate() const {
    if (std::abs(weights.fidelity + weights.energy - 1.0) > tol::kWeightSum || weights.fidelity < 0.0 ||
        weights.energy < 0.0) {
      throw std::invalid_argument("grape: weights must be non-negative and sum to 1");
    }
    if (!(eps_f > 0.0) || !(eps_e > 0.0)) throw std::invalid_argument("grape: learning rates must be positive");
    if (n_iterations < 1) throw std::invalid_argument("grape: n_iterations must be >= 1");
    if (!(init_scale >= 0.0)) throw std::invalid_argument("grape: init_scale must be non-negative");
  }
  friend bool operator==(const GrapeConfig&, const GrapeConfig&) = default;
};

struct GrapeIteration {
  int iteration = 0;
  double fidelity = 0.0;
  double infidelity = 0.0;
  double energetic_cost = 0.0;
  double combined_cost = 0.0;
  double fidelity_gradient_norm = 0.0;
  double energy_gradient_norm = 0.0;
};

struct GrapeTrace {
  std::vector<GrapeIteration> iterations;  // metrics before each update
  PulseSet final_pulses;
  double final_fidelity = 0.0;
  double final_energetic_cost = 0.0;
  std::size_t degenerate_slice_events = 0;
};

struct EnergyGradient {
  Eigen::MatrixXd grid;                  // K x N
  std::vector<int> degenerate_slices;    // slices where ||H_n|| ~ 0; entries set to 0
};

namespace detail {

struct SlicePropagator {
  HermitianEigen eig;
  Eigen::VectorXcd phases;  // exp(-i dt lambda)
  Matrix unitary;
};

struct Propagation {
  std::vector<SlicePropagator> slices;
  std::vector<Matrix> forward;   // X_1 .. X_N
  std::vector<Matrix> backward;  // P_1 .. P_N
};

inline Propagation propagate(const SystemSpec& spec, const PulseSet& pulses) {
  spec.require_shape(pulses);
  const int n_slices = spec.n_slices();
  const double dt = spec.dt();
  Propagation p;
  p.slices.reserve(static_cast<std::size_t>(n_slices));
  for (int n = 0; n < n_slices; ++n) {
    SlicePropagator s;
    s.eig = hermitian_eigen(slice_hamiltonian(spec, pulses, n));
    s.phases.resize(s.eig.values.size());
    for (Eigen::Index i = 0; i < s.eig.values.size(); ++i) s.phases(i) = std::exp(-kI * dt * s.eig.values(i));
    s.unitary = s.eig.vectors * s.phases.asDiagonal() * s.eig.vectors.adjoint();
    p.slices.push_back(std::move(s));
  }
  p.forward.resize(static_cast<std::size_t>(n_slices));
  Matrix x = identity(spec.dim());
  for (int n = 0; n < n_slices; ++n) {
    x = p.slices[static_cast<std::size_t>(n)].unitary * x;
    p.forward[static_cast<std::size_t>(n)] = x;
  }
  p.backward.resize(static_cast<std::size_t>(n_slices));
  Matrix back = identity(spec.dim());
  p.backward[static_cast<std::size_t>(n_slices - 1)] = back;
  for (int n = n_slices - 2; n >= 0; --n) {
    back = p.slices[static_cast<std::size_t>(n + 1)].unitary.adjoint() * back;
    p.backward[static_cast<std::size_t>(n)] = back;
  }
  return p;
}

/// Gamma_ab = (f(l_a) - f(l_b)) / (l_a - l_b) for f(l) = exp(-i dt l), with the
/// derivative on (near-)degenerate pairs.
inline Matrix divided_differences(const SlicePropagator& s, double dt) {
  const Eigen::Index d = s.eig.values.size();
  Matrix gamma(d, d);
  for (Eigen::Index a = 0; a < d; ++a) {
    for (Eigen::Index b = 0; b < d; ++b) {
      const double gap = s.eig.values(a) - s.eig.values(b);
      if (std::abs(gap) > tol::kEigenGap) {
        gamma(a, b) = (s.phases(a) - s.phases(b)) / gap;
      } else {
        gamma(a, b) = -kI * dt * 0.5 * (s.phases(a) + s.phases(b));
      }
    }
  }
  return gamma;
}

inline Eigen::MatrixXd fidelity_gradient(const SystemSpec& spec, const Propagation& p, const Matrix& target,
                                         GradientMode mode) {
  const int n_slices = spec.n_slices();
  const int n_controls = spec.n_controls();
  const double dt = spec.dt();
  const double d = static_cast<double>(spec.dim());
  const Matrix target_adj = target.adjoint();
  const Complex overlap = (target_adj * p.forward.back()).trace();
  const Complex overlap_conj = std::conj(overlap);
  Eigen::MatrixXd grad(n_controls, n_slices);
  for (int n = 0; n < n_slices; ++n) {
    const auto idx = static_cast<std::size_t>(n);
    const Matrix& p_n = p.backward[idx];
    if (mode == GradientMode::FirstOrder) {
      // -2 Re{ <Q_n| i dt sigma_k X_n> <X_n|Q_n> } / d^2 with Q_n = P_n U_T.
      const Matrix left = target_adj * p_n.adjoint();
      for (int k = 0; k < n_controls; ++k) {
        const Complex inner = kI * dt * (left * spec.control(k) * p.forward[idx]).trace();
        grad(k, n) = -2.0 * (inner * overlap_conj).real() / (d * d);
      }
      continue;
    }
    const SlicePropagator& s = p.slices[idx];
    const Matrix x_prev = n == 0 ? identity(spec.dim()) : p.forward[idx - 1];
    // dTr(U_T^dag P_n^dag U_n X_{n-1}) = Tr(W dU_n),  W = X_{n-1} U_T^dag P_n^dag.
    const Matrix w_eig = s.eig.vectors.adjoint() * (x_prev * target_adj * p_n.adjoint()) * s.eig.vectors;
    const Matrix gamma = divided_differences(s, dt);
    for (int k = 0; k < n_controls; ++k) {
      const Matrix sigma_eig = s.eig.vectors.adjoint() * spec.control(k) * s.eig.vectors;
      const Complex d_overlap = (w_eig.transpose().array() * gamma.array() * sigma_eig.array()).sum();
      grad(k, n) = 2.0 * (overlap_conj * d_overlap).real() / (d * d);
    }
  }
  return grad;
}

inline double fidelity_from(const Propagation& p, const Matrix& target) {
  return process_fidelity(target, p.forward.back());
}

}  // namespace detail

/// X_1 .. X_N with X_n = U_n X_{n-1}, X_0 = I.
inline std::vector<Matrix> forward_propagators(const SystemSpec& spec, const PulseSet& pulses) {
  return detail::propagate(spec, pulses).forward;
}

/// P_1 .. P_N with P_N = I and P_n = U_{n+1}^dagger P_{n+1}, so P_n^dagger X_n = U(T).
inline std::vector<Matrix> backward_propagators(const SystemSpec& spec, const PulseSet& pulses) {
  return detail::propagate(spec, pulses).backward;
}

/// dF/du_k(n) for F = process_fidelity(target, U(T)); ascending increases F.
inline Eigen::MatrixXd fidelity_gradient(const SystemSpec& spec, const PulseSet& pulses, const Matrix& target,
                                         GradientMode mode = GradientMode::Exact) {
  if (target.rows() != spec.dim() || target.cols() != spec.dim()) {
    throw std::invalid_argument("fidelity_gradient: target has wrong dimension");
  }
  return detail::fidelity_gradient(spec, detail::propagate(spec, pulses), target, mode);
}

/// Exact gradient of energetic_cost:
///   dt/N_e * [a_k + sum_k' u_k'(n) G_kk'] / (2 ||H_n||_F).
inline EnergyGradient energy_gradient(const SystemSpec& spec, const PulseSet& pulses) {
  spec.require_shape(pulses);
  const int n_controls = spec.n_controls();
  const Eigen::VectorXd& a = spec.drift_overlap();
  const Eigen::MatrixXd& gram = spec.control_gram();
  const double scale = spec.dt() / spec.energy_normalization();
  EnergyGradient out;
  out.grid.resize(n_controls, spec.n_slices());
  for (int n = 0; n < spec.n_slices(); ++n) {
    const Eigen::VectorXd u = pulses.amplitudes().col(n);
    const Eigen::VectorXd numer = a + gram * u;
    const double norm_sq = spec.drift_norm_squared() + u.dot(a) + 0.5 * u.dot(gram * u);
    const double norm = std::sqrt(std::max(norm_sq, 0.0));
    if (norm < tol::kDegenerateNorm) {
      out.grid.col(n).setZero();
      out.degenerate_slices.push_back(n);
      continue;
    }
    out.grid.col(n) = scale * numer / (2.0 * norm);
  }
  return out;
}

inline double combined_cost(const Weights& w, double fidelity, double energetic) {
  return w.fidelity * (1.0 - fidelity) + w.energy * energetic;
}

namespace detail {

inline PulseSet apply_update(const SystemSpec& spec, const PulseSet& pulses, const GrapeConfig& config,
                             const Eigen::MatrixXd& grad_f, const Eigen::MatrixXd& grad_e) {
  Eigen::MatrixXd next = pulses.amplitudes() + config.eps_f * config.weights.fidelity * grad_f -
                         config.eps_e * config.weights.energy * grad_e;
  return PulseSet(std::move(next)).clipped(spec.amplitude_bound());
}

}  // namespace detail

inline PulseSet grape_step(const SystemSpec& spec, const PulseSet& pulses, const GrapeConfig& config,
                           const Matrix& target) {
  config.validate();
  const Eigen::MatrixXd grad_f = fidelity_gradient(spec, pulses, target, config.gradient);
  const EnergyGradient grad_e = energy_gradient(spec, pulses);
  return detail::apply_update(spec, pulses, config, grad_f, grad_e.grid);
}

inline GrapeTrace optimize(const SystemSpec& spec, const GrapeConfig& config, const Matrix& target,
                           PulseSet init) {
  config.validate();
  spec.require_shape(init);
  if (target.rows() != spec.dim() || target.cols() != spec.dim()) {
    throw std::invalid_argument("optimize: target has wrong dimension");
  }
  GrapeTrace trace;
  trace.iterations.reserve(static_cast<std::size_t>(config.n_iterations));
  PulseSet pulses = init.clipped(spec.amplitude_bound());
  for (int it = 0; it < config.n_iterations; ++it) {
    const detail::Propagation prop = detail::propagate(spec, pulses);
    const Eigen::MatrixXd grad_f = detail::fidelity_gradient(spec, prop, target, config.gradient);
    const EnergyGradient grad_e = energy_gradient(spec, pulses);
    trace.degenerate_slice_events += grad_e.degenerate_slices.size();

    GrapeIteration rec;
    rec.iteration = it;
    rec.fidelity = detail::fidelity_from(prop, target);
    rec.infidelity = 1.0 - rec.fidelity;
    rec.energetic_cost = energetic_cost(spec, pulses);
    rec.combined_cost = combined_cost(config.weights, rec.fidelity, rec.energetic_cost);
    rec.fidelity_gradient_norm = grad_f.norm();
    rec.energy_gradient_norm = grad_e.grid.norm();
    trace.iterations.push_back(rec);

    pulses = detail::apply_update(spec, pulses, config, grad_f, grad_e.grid);
  }
  trace.final_fidelity = process_fidelity(target, propagate_closed(spec, pulses).total);
  trace.final_energetic_cost = energetic_cost(spec, pulses);
  trace.final_pulses = std::move(pulses);
  return trace;
}

/// Seeded uniform initial guess in [-init_scale, init_scale].
inline GrapeTrace optimize(const SystemSpec& spec, const GrapeConfig& config, const Matrix& target) {
  return optimize(spec, config, target,
                  PulseSet::uniform(spec.n_controls(), spec.n_slices(), config.init_scale, config.seed));
}

}  // namespace eoqc
