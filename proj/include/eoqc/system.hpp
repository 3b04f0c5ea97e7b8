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

// The controlled system: H(n) = H_D + sum_k u_k(n) sigma_k on a uniform grid of
// N slices of width dt = T / N, plus per-qubit T1/T2 decoherence used only by
// the noisy propagator.

#include <Eigen/Dense>

#include <cctype>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "eoqc/constants.hpp"
#include "eoqc/qmath.hpp"

namespace eoqc {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class DriftKind { OneQubitIdentity, OneQubitZ, TwoQubitZZ };

struct DriftParams {
  DriftKind kind = DriftKind::OneQubitZ;
  double omega1 = 1.0;
  double omega2 = 1.0;
  double coupling = 0.1;

  static DriftParams one_qubit_identity() { return {DriftKind::OneQubitIdentity, 0.0, 0.0, 0.0}; }
  static DriftParams one_qubit_z(double omega1) { return {DriftKind::OneQubitZ, omega1, 0.0, 0.0}; }
  static DriftParams two_qubit_zz(double omega1, double omega2, double coupling) {
    return {DriftKind::TwoQubitZZ, omega1, omega2, coupling};
  }
  int qubits() const { return kind == DriftKind::TwoQubitZZ ? 2 : 1; }
  friend bool operator==(const DriftParams&, const DriftParams&) = default;
};

/// H_D^1 = I_2 or (omega1/2) sigma_z;
/// H_D^2 = (omega1/2) Z(x)I + (omega2/2) I(x)Z + J Z(x)Z.
inline Matrix build_drift(const DriftParams& drift, int n_qubits) {
  if (drift.qubits() != n_qubits) {
    throw std::invalid_argument("build_drift: drift kind acts on " + std::to_string(drift.qubits()) +
                                " qubit(s) but the system has " + std::to_string(n_qubits));
  }
  switch (drift.kind) {
    case DriftKind::OneQubitIdentity:
      return identity(2);
    case DriftKind::OneQubitZ:
      return 0.5 * drift.omega1 * pauli(Axis::Z, 0, 1);
    case DriftKind::TwoQubitZZ: {
      const Matrix z1 = pauli(Axis::Z, 0, 2);
      const Matrix z2 = pauli(Axis::Z, 1, 2);
      return 0.5 * drift.omega1 * z1 + 0.5 * drift.omega2 * z2 + drift.coupling * z1 * z2;
    }
  }
  throw std::invalid_argument("build_drift: unknown drift kind");
}

struct ControlOperator {
  std::string name;
  Matrix op;
};

/// Parses a Pauli-product label such as "x1", "y2" or "x1x2" (1-based qubit
/// numbers) into the corresponding operator on an n_qubits register.
inline ControlOperator control_from_label(const std::string& label, int n_qubits) {
  if (label.empty() || label.size() % 2 != 0) {
    throw std::invalid_argument("control label '" + label + "' must be pairs of <axis><qubit>, e.g. x1x2");
  }
  Matrix op = identity(Eigen::Index{1} << n_qubits);
  std::vector<bool> used(static_cast<std::size_t>(n_qubits), false);
  for (std::size_t i = 0; i < label.size(); i += 2) {
    Axis axis;
    switch (std::tolower(static_cast<unsigned char>(label[i]))) {
      case 'x': axis = Axis::X; break;
      case 'y': axis = Axis::Y; break;
      case 'z': axis = Axis::Z; break;
      case 'i': axis = Axis::I; break;
      default: throw std::invalid_argument("control label '" + label + "': unknown axis");
    }
    const int qubit = label[i + 1] - '1';
    if (qubit < 0 || qubit >= n_qubits || used[static_cast<std::size_t>(qubit)]) {
      throw std::invalid_argument("control label '" + label + "': bad or repeated qubit index");
    }
    used[static_cast<std::size_t>(qubit)] = true;
    op = op * pauli(axis, qubit, n_qubits);
  }
  return {label, op};
}

struct Decoherence {
  double t1 = kInfinity;
  double t2 = kInfinity;

  bool noiseless() const { return std::isinf(t1) && std::isinf(t2); }
  /// 1/T_phi = 1/T2 - 1/(2 T1), clamped at zero (T2 = inf means no extra dephasing).
  double dephasing_rate() const {
    const double r2 = std::isinf(t2) ? 0.0 : 1.0 / t2;
    const double r1 = std::isinf(t1) ? 0.0 : 1.0 / t1;
    return std::max(0.0, r2 - 0.5 * r1);
  }
  friend bool operator==(const Decoherence&, const Decoherence&) = default;
};

/// K x N grid of real control amplitudes u_k(n).
class PulseSet {
 public:
  PulseSet() = default;
  explicit PulseSet(Eigen::MatrixXd amplitudes) : amplitudes_(std::move(amplitudes)) {}

  static PulseSet zeros(int controls, int slices) { return PulseSet(Eigen::MatrixXd::Zero(controls, slices)); }
  static PulseSet constant(int controls, int slices, double value) {
    return PulseSet(Eigen::MatrixXd::Constant(controls, slices, value));
  }
  /// Seeded i.i.d. uniform amplitudes in [-scale, scale], filled slice-major.
  static PulseSet uniform(int controls, int slices, double scale, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-scale, scale);
    Eigen::MatrixXd a(controls, slices);
    for (int n = 0; n < slices; ++n) {
      for (int k = 0; k < controls; ++k) a(k, n) = dist(rng);
    }
    return PulseSet(std::move(a));
  }

  int controls() const { return static_cast<int>(amplitudes_.rows()); }
  int slices() const { return static_cast<int>(amplitudes_.cols()); }
  double operator()(int k, int n) const { return amplitudes_(k, n); }
  double& operator()(int k, int n) { return amplitudes_(k, n); }
  const Eigen::MatrixXd& amplitudes() const { return amplitudes_; }
  Eigen::MatrixXd& amplitudes() { return amplitudes_; }

  double max_abs() const { return amplitudes_.size() == 0 ? 0.0 : amplitudes_.cwiseAbs().maxCoeff(); }
  PulseSet clipped(double bound) const { return PulseSet(amplitudes_.cwiseMax(-bound).cwiseMin(bound)); }

  friend bool operator==(const PulseSet& a, const PulseSet& b) {
    return a.amplitudes_.rows() == b.amplitudes_.rows() && a.amplitudes_.cols() == b.amplitudes_.cols() &&
           a.amplitudes_ == b.amplitudes_;
  }

 private:
  Eigen::MatrixXd amplitudes_;
};

class SystemSpec {
 public:
  SystemSpec(int n_qubits, Matrix drift, std::vector<ControlOperator> controls, double total_time, int n_slices,
             Decoherence noise = {}, double amplitude_bound = 1.0)
      : n_qubits_(n_qubits),
        drift_(std::move(drift)),
        controls_(std::move(controls)),
        total_time_(total_time),
        n_slices_(n_slices),
        noise_(noise),
        amplitude_bound_(amplitude_bound) {
    validate();
    precompute();
  }

  int n_qubits() const { return n_qubits_; }
  Eigen::Index dim() const { return Eigen::Index{1} << n_qubits_; }
  const Matrix& drift() const { return drift_; }
  const std::vector<ControlOperator>& controls() const { return controls_; }
  const Matrix& control(int k) const { return controls_[static_cast<std::size_t>(k)].op; }
  int n_controls() const { return static_cast<int>(controls_.size()); }
  double total_time() const { return total_time_; }
  int n_slices() const { return n_slices_; }
  double dt() const { return total_time_ / n_slices_; }
  const Decoherence& noise() const { return noise_; }
  double amplitude_bound() const { return amplitude_bound_; }

  /// N_e = T ||H_D + sum_k sigma_k||_F.
  double energy_normalization() const { return energy_normalization_; }
  /// Tr(H_D^dagger H_D).
  double drift_norm_squared() const { return drift_norm_sq_; }
  /// a_k = Tr(H_D^dagger sigma_k + sigma_k^dagger H_D).
  const Eigen::VectorXd& drift_overlap() const { return drift_overlap_; }
  /// G_kk' = Tr(sigma_k^dagger sigma_k' + sigma_k'^dagger sigma_k).
  const Eigen::MatrixXd& control_gram() const { return control_gram_; }

  SystemSpec with_noise(Decoherence noise) const {
    SystemSpec copy = *this;
    copy.noise_ = noise;
    copy.validate();
    return copy;
  }

  void require_shape(const PulseSet& pulses) const {
    if (pulses.controls() != n_controls() || pulses.slices() != n_slices_) {
      throw std::invalid_argument("pulse grid is " + std::to_string(pulses.controls()) + "x" +
                                  std::to_string(pulses.slices()) + ", system expects " +
                                  std::to_string(n_controls()) + "x" + std::to_string(n_slices_));
    }
  }

 private:
  void validate() const {
    if (n_qubits_ < 1 || n_qubits_ > 2) throw std::invalid_argument("system: n_qubits must be 1 or 2");
    const Eigen::Index d = dim();
    if (drift_.rows() != d || drift_.cols() != d) throw std::invalid_argument("system: drift has wrong dimension");
    if (!is_hermitian(drift_)) throw std::invalid_argument("system: drift Hamiltonian is not Hermitian");
    if (controls_.empty()) throw std::invalid_argument("system: at least one control operator is required");
    for (const auto& c : controls_) {
      if (c.op.rows() != d || c.op.cols() != d) {
        throw std::invalid_argument("system: control '" + c.name + "' has wrong dimension");
      }
      if (!is_hermitian(c.op)) throw std::invalid_argument("system: control '" + c.name + "' is not Hermitian");
    }
    if (!(total_time_ > 0.0) || !std::isfinite(total_time_)) {
      throw std::invalid_argument("system: total_time must be positive and finite");
    }
    if (n_slices_ < 2) throw std::invalid_argument("system: n_slices must be >= 2");
    if (!(amplitude_bound_ > 0.0)) throw std::invalid_argument("system: amplitude_bound must be positive");
    if (!(noise_.t1 > 0.0) || !(noise_.t2 > 0.0)) throw std::invalid_argument("system: t1 and t2 must be positive");
    if (std::isfinite(noise_.t1) && std::isfinite(noise_.t2) && noise_.t2 > 2.0 * noise_.t1) {
      throw std::invalid_argument("system: t2 must not exceed 2*t1");
    }
  }

  void precompute() {
    Matrix all = drift_;
    for (const auto& c : controls_) all += c.op;
    energy_normalization_ = total_time_ * fro_norm(all);
    if (energy_normalization_ <= tol::kDegenerateNorm) {
      throw std::invalid_argument("system: H_D + sum_k sigma_k vanishes, energetic cost undefined");
    }
    drift_norm_sq_ = (drift_.adjoint() * drift_).trace().real();
    const int k_count = n_controls();
    drift_overlap_.resize(k_count);
    control_gram_.resize(k_count, k_count);
    for (int k = 0; k < k_count; ++k) {
      const Matrix& sk = control(k);
      drift_overlap_(k) = (drift_.adjoint() * sk + sk.adjoint() * drift_).trace().real();
      for (int j = 0; j < k_count; ++j) {
        const Matrix& sj = control(j);
        control_gram_(k, j) = (sk.adjoint() * sj + sj.adjoint() * sk).trace().real();
      }
    }
  }

  int n_qubits_;
  Matrix drift_;
  std::vector<ControlOperator> controls_;
  double total_time_;
  int n_slices_;
  Decoherence noise_;
  double amplitude_bound_;

  double energy_normalization_ = 0.0;
  double drift_norm_sq_ = 0.0;
  Eigen::VectorXd drift_overlap_;
  Eigen::MatrixXd control_gram_;
};

inline Matrix slice_hamiltonian(const SystemSpec& spec, const PulseSet& pulses, int n) {
  spec.require_shape(pulses);
  if (n < 0 || n >= spec.n_slices()) {
    throw std::out_of_range("slice_hamiltonian: slice " + std::to_string(n) + " out of range");
  }
  Matrix h = spec.drift();
  for (int k = 0; k < spec.n_controls(); ++k) h += pulses(k, n) * spec.control(k);
  return h;
}

struct ClosedEvolution {
  Matrix total;                       // U_N ... U_1
  std::vector<Matrix> slice_unitaries;  // U_1 ... U_N
};

inline ClosedEvolution propagate_closed(const SystemSpec& spec, const PulseSet& pulses) {
  spec.require_shape(pulses);
  ClosedEvolution out;
  out.total = identity(spec.dim());
  out.slice_unitaries.reserve(static_cast<std::size_t>(spec.n_slices()));
  for (int n = 0; n < spec.n_slices(); ++n) {
    Matrix u = expm_hermitian_prop(slice_hamiltonian(spec, pulses, n), spec.dt());
    out.total = u * out.total;
    out.slice_unitaries.push_back(std::move(u));
  }
  return out;
}

/// Embeds a single-qubit operator on `qubit` of an n_qubits register.
inline Matrix embed_single_qubit(const Matrix& op, int qubit, int n_qubits) {
  Matrix out = Matrix::Identity(1, 1);
  for (int q = 0; q < n_qubits; ++q) out = tensor(out, q == qubit ? op : identity(2));
  return out;
}

/// Kraus operators applied after every slice: per qubit, amplitude damping with
/// gamma_1 = 1 - exp(-dt/T1) followed by a phase flip that scales coherences
/// by exp(-dt/T_phi).
inline std::vector<std::vector<Matrix>> slice_noise_channels(const SystemSpec& spec) {
  std::vector<std::vector<Matrix>> channels;
  const double dt = spec.dt();
  const Decoherence& noise = spec.noise();
  const double gamma1 = std::isinf(noise.t1) ? 0.0 : -std::expm1(-dt / noise.t1);
  const double rate_phi = noise.dephasing_rate();
  const double gamma_phi = rate_phi == 0.0 ? 0.0 : -std::expm1(-dt * rate_phi);
  for (int q = 0; q < spec.n_qubits(); ++q) {
    if (gamma1 > 0.0) {
      Matrix k0 = Matrix::Zero(2, 2), k1 = Matrix::Zero(2, 2);
      k0(0, 0) = 1.0;
      k0(1, 1) = std::sqrt(1.0 - gamma1);
      k1(0, 1) = std::sqrt(gamma1);
      channels.push_back({embed_single_qubit(k0, q, spec.n_qubits()), embed_single_qubit(k1, q, spec.n_qubits())});
    }
    if (gamma_phi > 0.0) {
      const double p = 0.5 * gamma_phi;
      channels.push_back({std::sqrt(1.0 - p) * identity(spec.dim()),
                          std::sqrt(p) * pauli(Axis::Z, q, spec.n_qubits())});
    }
  }
  return channels;
}

/// Density-matrix evolution: per slice, conjugation by U_n followed by the
/// decoherence channels.
inline Matrix propagate_noisy(const SystemSpec& spec, const PulseSet& pulses, const Matrix& rho0) {
  spec.require_shape(pulses);
  require_density_matrix(rho0, "propagate_noisy");
  if (rho0.rows() != spec.dim()) throw std::invalid_argument("propagate_noisy: rho0 has wrong dimension");
  const auto channels = slice_noise_channels(spec);
  Matrix rho = rho0;
  for (int n = 0; n < spec.n_slices(); ++n) {
    const Matrix u = expm_hermitian_prop(slice_hamiltonian(spec, pulses, n), spec.dt());
    rho = u * rho * u.adjoint();
    for (const auto& kraus : channels) {
      Matrix next = Matrix::Zero(rho.rows(), rho.cols());
      for (const auto& k : kraus) next += k * rho * k.adjoint();
      rho = std::move(next);
    }
  }
  return 0.5 * (rho + rho.adjoint());
}

/// sum_n dt ||H_n||_F / (T ||H_D + sum_k sigma_k||_F).
inline double energetic_cost(const SystemSpec& spec, const PulseSet& pulses) {
  spec.require_shape(pulses);
  double total = 0.0;
  for (int n = 0; n < spec.n_slices(); ++n) total += spec.dt() * fro_norm(slice_hamiltonian(spec, pulses, n));
  return total / spec.energy_normalization();
}

/// Bloch vectors b_0 ... b_N of the closed-system state, b_0 from psi0.
inline std::vector<BlochVector> bloch_trajectory(const SystemSpec& spec, const PulseSet& pulses,
                                                 const StateVector& psi0) {
  if (spec.n_qubits() != 1) throw std::invalid_argument("bloch_trajectory: only defined for one qubit");
  spec.require_shape(pulses);
  if (psi0.size() != 2) throw std::invalid_argument("bloch_trajectory: psi0 must have two amplitudes");
  StateVector psi = psi0.normalized();
  std::vector<BlochVector> points;
  points.reserve(static_cast<std::size_t>(spec.n_slices()) + 1);
  points.push_back(bloch_vector(density(psi)));
  for (int n = 0; n < spec.n_slices(); ++n) {
    psi = expm_hermitian_prop(slice_hamiltonian(spec, pulses, n), spec.dt()) * psi;
    points.push_back(bloch_vector(density(psi)));
  }
  return points;
}

/// Sum of chord lengths |b_n - b_{n-1}| along the Bloch trajectory.
inline double path_length(const SystemSpec& spec, const PulseSet& pulses, const StateVector& psi0) {
  if (spec.n_qubits() != 1) throw std::invalid_argument("path_length: only defined for one qubit");
  const auto points = bloch_trajectory(spec, pulses, psi0);
  double length = 0.0;
  for (std::size_t i = 1; i < points.size(); ++i) length += (points[i] - points[i - 1]).norm();
  return length;
}

}  // namespace eoqc
