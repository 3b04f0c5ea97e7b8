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

// Energy-optimized pulse learning with REINFORCE.
//
// Each episode is one step: the policy sees a fixed observation (the flattened
// target state), emits a whole K x N pulse grid sampled from a diagonal
// Gaussian around its mean, and receives one scalar reward. RLA-1 is rewarded
// by the noisy simulator; RLA-2 by closeness to an EO-GRAPE pulse, and its
// weights can seed RLA-1 (warm start).

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <functional>
#include <istream>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "eoqc/grape.hpp"
#include "eoqc/qmath.hpp"
#include "eoqc/system.hpp"

namespace eoqc {

/// Feed-forward policy: tanh hidden layers, mean = bound * tanh(last layer).
struct MlpPolicy {
  std::vector<int> layer_sizes;            // input, hidden..., K*N
  std::vector<Eigen::MatrixXd> weights;    // weights[l] is sizes[l+1] x sizes[l]
  std::vector<Eigen::VectorXd> biases;
  Eigen::VectorXd log_std;                 // per output; set from the annealing schedule
  double bound = 1.0;
  int controls = 0;
  int slices = 0;

  /// Glorot-uniform weights, zero biases, last layer scaled by output_scale so
  /// the initial means sit near zero.
  static MlpPolicy create(int input, const std::vector<int>& hidden, int controls, int slices, double bound,
                          std::uint64_t seed, double output_scale = 0.01) {
    if (input < 1 || controls < 1 || slices < 1) throw std::invalid_argument("policy: sizes must be positive");
    if (!(bound > 0.0)) throw std::invalid_argument("policy: bound must be positive");
    MlpPolicy p;
    p.layer_sizes.push_back(input);
    for (int h : hidden) {
      if (h < 1) throw std::invalid_argument("policy: hidden layer sizes must be positive");
      p.layer_sizes.push_back(h);
    }
    p.layer_sizes.push_back(controls * slices);
    p.bound = bound;
    p.controls = controls;
    p.slices = slices;
    std::seed_seq seq{seed, std::uint64_t{0x9e3779b9}};
    std::mt19937_64 rng(seq);
    const std::size_t n_layers = p.layer_sizes.size() - 1;
    for (std::size_t l = 0; l < n_layers; ++l) {
      const int fan_in = p.layer_sizes[l], fan_out = p.layer_sizes[l + 1];
      const double limit = std::sqrt(6.0 / (fan_in + fan_out));
      std::uniform_real_distribution<double> dist(-limit, limit);
      Eigen::MatrixXd w(fan_out, fan_in);
      for (int i = 0; i < fan_out; ++i) {
        for (int j = 0; j < fan_in; ++j) w(i, j) = dist(rng);
      }
      if (l + 1 == n_layers) w *= output_scale;
      p.weights.push_back(std::move(w));
      p.biases.push_back(Eigen::VectorXd::Zero(fan_out));
    }
    p.log_std = Eigen::VectorXd::Constant(p.output_size(), std::log(0.5));
    return p;
  }

  int input_size() const { return layer_sizes.front(); }
  int output_size() const { return layer_sizes.back(); }
  void set_std(double sigma) { log_std.setConstant(std::log(sigma)); }

  bool finite() const {
    for (const auto& w : weights) {
      if (!w.allFinite()) return false;
    }
    for (const auto& b : biases) {
      if (!b.allFinite()) return false;
    }
    return log_std.allFinite();
  }

  friend bool operator==(const MlpPolicy& a, const MlpPolicy& b) {
    if (a.layer_sizes != b.layer_sizes || a.bound != b.bound || a.controls != b.controls || a.slices != b.slices ||
        a.log_std != b.log_std) {
      return false;
    }
    for (std::size_t l = 0; l < a.weights.size(); ++l) {
      if (a.weights[l] != b.weights[l] || a.biases[l] != b.biases[l]) return false;
    }
    return true;
  }
};

namespace detail {

/// Layer outputs h_0 = obs, h_1 .. h_L (h_L = tanh of the output pre-activation).
inline std::vector<Eigen::VectorXd> forward_layers(const MlpPolicy& policy, const Eigen::VectorXd& obs) {
  if (obs.size() != policy.input_size()) {
    throw std::invalid_argument("policy_forward: observation has " + std::to_string(obs.size()) +
                                " entries, policy expects " + std::to_string(policy.input_size()));
  }
  std::vector<Eigen::VectorXd> h;
  h.reserve(policy.weights.size() + 1);
  h.push_back(obs);
  for (std::size_t l = 0; l < policy.weights.size(); ++l) {
    h.push_back((policy.weights[l] * h.back() + policy.biases[l]).array().tanh().matrix());
  }
  return h;
}

}  // namespace detail

inline Eigen::VectorXd policy_forward(const MlpPolicy& policy, const Eigen::VectorXd& obs) {
  return policy.bound * detail::forward_layers(policy, obs).back();
}

/// Slice-major flattening used for the action vector: index = n * K + k.
inline PulseSet pulses_from_vector(const Eigen::VectorXd& v, int controls, int slices) {
  if (v.size() != static_cast<Eigen::Index>(controls) * slices) throw std::invalid_argument("action size mismatch");
  Eigen::MatrixXd a(controls, slices);
  for (int n = 0; n < slices; ++n) {
    for (int k = 0; k < controls; ++k) a(k, n) = v(static_cast<Eigen::Index>(n) * controls + k);
  }
  return PulseSet(std::move(a));
}

inline Eigen::VectorXd vector_from_pulses(const PulseSet& p) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(p.controls()) * p.slices());
  for (int n = 0; n < p.slices(); ++n) {
    for (int k = 0; k < p.controls(); ++k) v(static_cast<Eigen::Index>(n) * p.controls() + k) = p(k, n);
  }
  return v;
}

struct SampledAction {
  PulseSet action;           // clipped to [-bound, bound]
  Eigen::VectorXd sample;    // pre-clip Gaussian draw
  Eigen::VectorXd mean;
  double log_prob = 0.0;     // of the pre-clip draw
};

inline SampledAction sample_action(const MlpPolicy& policy, const Eigen::VectorXd& obs, std::mt19937_64& rng) {
  SampledAction out;
  out.mean = policy_forward(policy, obs);
  std::normal_distribution<double> normal(0.0, 1.0);
  out.sample.resize(out.mean.size());
  double log_prob = 0.0;
  const double half_log_2pi = 0.5 * std::log(2.0 * kPi);
  for (Eigen::Index i = 0; i < out.mean.size(); ++i) {
    const double sigma = std::exp(policy.log_std(i));
    const double z = normal(rng);
    out.sample(i) = out.mean(i) + sigma * z;
    log_prob += -0.5 * z * z - policy.log_std(i) - half_log_2pi;
  }
  out.log_prob = log_prob;
  const Eigen::VectorXd clipped = out.sample.cwiseMax(-policy.bound).cwiseMin(policy.bound);
  out.action = pulses_from_vector(clipped, policy.controls, policy.slices);
  return out;
}

struct EpisodeRecord {
  int episode = 0;
  Eigen::VectorXd observation;
  PulseSet action;
  Eigen::VectorXd sample;
  double sigma = 0.0;
  double log_prob = 0.0;
  double reward = 0.0;
  double fidelity = 0.0;
  double energetic_cost = 0.0;
};

struct RewardParts {
  double reward = 0.0;
  double fidelity = 0.0;
  double energetic_cost = 0.0;
};

/// Flattened rho_T = U_T |0..0><0..0| U_T^dagger: real parts then imaginary
/// parts, row-major.
inline Eigen::VectorXd target_observation(const Matrix& target) {
  const Eigen::Index d = target.rows();
  const Matrix rho = target * density(basis_state(d, 0)) * target.adjoint();
  Eigen::VectorXd obs(2 * d * d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      obs(i * d + j) = rho(i, j).real();
      obs(d * d + i * d + j) = rho(i, j).imag();
    }
  }
  return obs;
}

/// w_f F(rho_T, rho_out) + w_e (1 - C) with rho_out from the noisy simulator.
inline RewardParts rla1_reward(const SystemSpec& spec, const PulseSet& pulses, const Matrix& target,
                               const Weights& w) {
  const Matrix rho0 = density(basis_state(spec.dim(), 0));
  const Matrix rho_target = target * rho0 * target.adjoint();
  RewardParts out;
  out.fidelity = state_fidelity(rho_target, propagate_noisy(spec, pulses, rho0));
  out.energetic_cost = energetic_cost(spec, pulses);
  out.reward = w.fidelity * out.fidelity + w.energy * (1.0 - out.energetic_cost);
  return out;
}

enum class ImitationNorm { Squared, L1 };

/// -sum |u_target - u|^2 (or -sum |u_target - u| for L1).
inline double rla2_reward(const PulseSet& target_pulses, const PulseSet& action,
                          ImitationNorm norm = ImitationNorm::Squared) {
  if (target_pulses.controls() != action.controls() || target_pulses.slices() != action.slices()) {
    throw std::invalid_argument("rla2_reward: pulse grids differ in shape");
  }
  const Eigen::ArrayXXd diff = (target_pulses.amplitudes() - action.amplitudes()).array();
  return norm == ImitationNorm::Squared ? -diff.square().sum() : -diff.abs().sum();
}

struct TrainConfig {
  int n_episodes = 2000;
  double learning_rate = 0.01;
  int batch_size = 16;
  double baseline_decay = 0.9;
  double std_initial = 0.5;
  double std_final = 0.05;
  double momentum = 0.9;
  std::uint64_t seed = 0;
  Weights weights = Weights::normalized(0.8, 0.2);
  std::vector<int> hidden_layers{200, 100, 50, 30, 10};
  double output_scale = 0.01;
  ImitationNorm imitation = ImitationNorm::Squared;

  void validate() const {
    if (n_episodes < 1) throw std::invalid_argument("train: n_episodes must be >= 1");
    if (!(learning_rate > 0.0)) throw std::invalid_argument("train: learning_rate must be positive");
    if (batch_size < 1) throw std::invalid_argument("train: batch_size must be >= 1");
    if (!(baseline_decay >= 0.0 && baseline_decay < 1.0)) {
      throw std::invalid_argument("train: baseline_decay must be in [0, 1)");
    }
    if (!(std_initial > 0.0) || !(std_final > 0.0)) throw std::invalid_argument("train: std must be positive");
    if (!(momentum >= 0.0 && momentum < 1.0)) throw std::invalid_argument("train: momentum must be in [0, 1)");
    if (std::abs(weights.fidelity + weights.energy - 1.0) > tol::kWeightSum || weights.fidelity < 0.0 ||
        weights.energy < 0.0) {
      throw std::invalid_argument("train: weights must be non-negative and sum to 1");
    }
    if (hidden_layers.empty()) throw std::invalid_argument("train: at least one hidden layer is required");
    for (int h : hidden_layers) {
      if (h < 1) throw std::invalid_argument("train: hidden layer sizes must be positive");
    }
    if (!(output_scale > 0.0)) throw std::invalid_argument("train: output_scale must be positive");
  }

  /// Linear anneal from std_initial (first episode) to std_final (last).
  double sigma_at(int episode) const {
    const double frac = n_episodes > 1 ? static_cast<double>(episode) / (n_episodes - 1) : 0.0;
    return std_initial + (std_final - std_initial) * frac;
  }

  friend bool operator==(const TrainConfig&, const TrainConfig&) = default;
};

struct PolicyGradient {
  std::vector<Eigen::MatrixXd> weights;
  std::vector<Eigen::VectorXd> biases;

  bool finite() const {
    for (const auto& w : weights) {
      if (!w.allFinite()) return false;
    }
    for (const auto& b : biases) {
      if (!b.allFinite()) return false;
    }
    return true;
  }
};

/// (1/|batch|) sum_i A_i grad_theta log pi(sample_i | obs_i).
inline PolicyGradient policy_gradient(const MlpPolicy& policy, const std::vector<EpisodeRecord>& batch,
                                      const std::vector<double>& advantages) {
  if (batch.empty() || advantages.size() != batch.size()) {
    throw std::invalid_argument("policy_gradient: batch and advantages must be non-empty and equal length");
  }
  PolicyGradient g;
  for (std::size_t l = 0; l < policy.weights.size(); ++l) {
    g.weights.push_back(Eigen::MatrixXd::Zero(policy.weights[l].rows(), policy.weights[l].cols()));
    g.biases.push_back(Eigen::VectorXd::Zero(policy.biases[l].size()));
  }
  const double inv = 1.0 / static_cast<double>(batch.size());
  for (std::size_t i = 0; i < batch.size(); ++i) {
    if (advantages[i] == 0.0) continue;
    const auto h = detail::forward_layers(policy, batch[i].observation);
    const Eigen::VectorXd mean = policy.bound * h.back();
    // d log pi / d mean for a Gaussian with the sampling-time sigma.
    const Eigen::VectorXd score = (batch[i].sample - mean) / (batch[i].sigma * batch[i].sigma);
    Eigen::VectorXd delta =
        (advantages[i] * inv * score).cwiseProduct(policy.bound * (1.0 - h.back().array().square()).matrix());
    for (std::size_t l = policy.weights.size(); l-- > 0;) {
      g.weights[l].noalias() += delta * h[l].transpose();
      g.biases[l] += delta;
      if (l > 0) {
        delta = (policy.weights[l].transpose() * delta).cwiseProduct((1.0 - h[l].array().square()).matrix());
      }
    }
  }
  return g;
}

struct OptimizerState {
  std::vector<Eigen::MatrixXd> weight_velocity;
  std::vector<Eigen::VectorXd> bias_velocity;
  std::optional<double> baseline;
};

class NonFiniteGradient : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One REINFORCE step with a running-mean baseline and SGD momentum. On a
/// non-finite gradient or update, throws NonFiniteGradient and leaves both
/// the policy and the optimizer state untouched.
inline MlpPolicy reinforce_update(const MlpPolicy& policy, const std::vector<EpisodeRecord>& batch,
                                  const TrainConfig& config, OptimizerState& state) {
  if (batch.empty()) throw std::invalid_argument("reinforce_update: empty batch");
  double mean_reward = 0.0;
  for (const auto& r : batch) {
    if (!std::isfinite(r.reward)) throw NonFiniteGradient("reinforce_update: non-finite reward in batch");
    mean_reward += r.reward;
  }
  mean_reward /= static_cast<double>(batch.size());
  const double baseline = state.baseline ? config.baseline_decay * *state.baseline +
                                               (1.0 - config.baseline_decay) * mean_reward
                                         : mean_reward;
  std::vector<double> advantages;
  advantages.reserve(batch.size());
  for (const auto& r : batch) advantages.push_back(r.reward - baseline);

  const PolicyGradient g = policy_gradient(policy, batch, advantages);
  if (!g.finite()) throw NonFiniteGradient("reinforce_update: non-finite policy gradient");

  OptimizerState next_state = state;
  next_state.baseline = baseline;
  if (next_state.weight_velocity.empty()) {
    for (std::size_t l = 0; l < g.weights.size(); ++l) {
      next_state.weight_velocity.push_back(Eigen::MatrixXd::Zero(g.weights[l].rows(), g.weights[l].cols()));
      next_state.bias_velocity.push_back(Eigen::VectorXd::Zero(g.biases[l].size()));
    }
  }
  MlpPolicy next = policy;
  for (std::size_t l = 0; l < g.weights.size(); ++l) {
    next_state.weight_velocity[l] = config.momentum * next_state.weight_velocity[l] + g.weights[l];
    next_state.bias_velocity[l] = config.momentum * next_state.bias_velocity[l] + g.biases[l];
    next.weights[l] += config.learning_rate * next_state.weight_velocity[l];
    next.biases[l] += config.learning_rate * next_state.bias_velocity[l];
  }
  if (!next.finite()) throw NonFiniteGradient("reinforce_update: update produced non-finite parameters");
  state = std::move(next_state);
  return next;
}

struct TrainResult {
  MlpPolicy policy;
  std::vector<EpisodeRecord> episodes;
  int aborted_batches = 0;
  std::vector<std::string> diagnostics;
};

using RewardFn = std::function<RewardParts(const PulseSet&)>;

/// Generic episodic loop: sample, score, update every batch_size episodes.
inline TrainResult train_policy(MlpPolicy policy, const TrainConfig& config, const Eigen::VectorXd& observation,
                                const RewardFn& reward) {
  config.validate();
  std::seed_seq seq{config.seed, std::uint64_t{0x5eed}};
  std::mt19937_64 rng(seq);
  TrainResult out;
  out.episodes.reserve(static_cast<std::size_t>(config.n_episodes));
  OptimizerState state;
  std::vector<EpisodeRecord> batch;
  for (int ep = 0; ep < config.n_episodes; ++ep) {
    const double sigma = config.sigma_at(ep);
    policy.set_std(sigma);
    SampledAction s = sample_action(policy, observation, rng);
    const RewardParts r = reward(s.action);
    EpisodeRecord rec;
    rec.episode = ep;
    rec.observation = observation;
    rec.action = std::move(s.action);
    rec.sample = std::move(s.sample);
    rec.sigma = sigma;
    rec.log_prob = s.log_prob;
    rec.reward = r.reward;
    rec.fidelity = r.fidelity;
    rec.energetic_cost = r.energetic_cost;
    batch.push_back(rec);
    out.episodes.push_back(std::move(rec));
    if (static_cast<int>(batch.size()) == config.batch_size || ep + 1 == config.n_episodes) {
      try {
        policy = reinforce_update(policy, batch, config, state);
      } catch (const NonFiniteGradient& e) {
        ++out.aborted_batches;
        out.diagnostics.push_back("episode " + std::to_string(ep) + ": " + e.what());
      }
      batch.clear();
    }
  }
  out.policy = std::move(policy);
  return out;
}

inline MlpPolicy make_policy(const SystemSpec& spec, const TrainConfig& config) {
  return MlpPolicy::create(static_cast<int>(2 * spec.dim() * spec.dim()), config.hidden_layers, spec.n_controls(),
                           spec.n_slices(), spec.amplitude_bound(), config.seed, config.output_scale);
}

/// RLA-1: learns pulses against the (noisy) simulator. A supplied init policy
/// replaces the seeded random initialization.
inline TrainResult train_rla1(const SystemSpec& spec, const Matrix& target, const TrainConfig& config,
                              const std::optional<MlpPolicy>& init = std::nullopt) {
  config.validate();
  if (target.rows() != spec.dim()) throw std::invalid_argument("train_rla1: target has wrong dimension");
  MlpPolicy policy = init ? *init : make_policy(spec, config);
  if (policy.controls != spec.n_controls() || policy.slices != spec.n_slices()) {
    throw std::invalid_argument("train_rla1: init policy emits a different pulse grid shape");
  }
  const Weights w = config.weights;
  return train_policy(std::move(policy), config, target_observation(target),
                      [&](const PulseSet& p) { return rla1_reward(spec, p, target, w); });
}

struct ImitationResult : TrainResult {
  double initial_distance = 0.0;  // ||mean action - target||_2 before training
  double final_distance = 0.0;
};

inline double mean_action_distance(const MlpPolicy& policy, const Eigen::VectorXd& obs, const PulseSet& target) {
  return (policy_forward(policy, obs) - vector_from_pulses(target)).norm();
}

/// RLA-2: imitates an EO-GRAPE pulse. Episode fidelity and cost describe the
/// sampled action on the closed system.
inline ImitationResult train_rla2(const SystemSpec& spec, const PulseSet& grape_pulses, const Matrix& target,
                                  const TrainConfig& config) {
  config.validate();
  spec.require_shape(grape_pulses);
  if (target.rows() != spec.dim()) throw std::invalid_argument("train_rla2: target has wrong dimension");
  const Eigen::VectorXd obs = target_observation(target);
  MlpPolicy policy = make_policy(spec, config);
  ImitationResult out;
  out.initial_distance = mean_action_distance(policy, obs, grape_pulses);
  const ImitationNorm norm = config.imitation;
  TrainResult trained = train_policy(std::move(policy), config, obs, [&](const PulseSet& p) {
    RewardParts r;
    r.reward = rla2_reward(grape_pulses, p, norm);
    r.fidelity = process_fidelity(target, propagate_closed(spec, p).total);
    r.energetic_cost = energetic_cost(spec, p);
    return r;
  });
  static_cast<TrainResult&>(out) = std::move(trained);
  out.final_distance = mean_action_distance(out.policy, obs, grape_pulses);
  return out;
}

/// Copies an RLA-2 policy for use as the RLA-1 initialization.
inline MlpPolicy warm_start(const MlpPolicy& source, const std::vector<int>& expected_layer_sizes) {
  if (source.layer_sizes != expected_layer_sizes) {
    std::string got, want;
    for (int s : source.layer_sizes) got += std::to_string(s) + " ";
    for (int s : expected_layer_sizes) want += std::to_string(s) + " ";
    throw std::invalid_argument("warm_start: layer sizes differ (source: " + got + "; expected: " + want + ")");
  }
  return source;
}

inline std::vector<int> layer_sizes_for(const SystemSpec& spec, const TrainConfig& config) {
  std::vector<int> sizes{static_cast<int>(2 * spec.dim() * spec.dim())};
  sizes.insert(sizes.end(), config.hidden_layers.begin(), config.hidden_layers.end());
  sizes.push_back(spec.n_controls() * spec.n_slices());
  return sizes;
}

// Text checkpoint: version header, shape, then every parameter at 17 digits.

inline constexpr const char* kCheckpointHeader = "eoqc-policy 1";

inline void save_policy(const MlpPolicy& p, std::ostream& os) {
  std::ostringstream out;
  out.precision(17);
  out << kCheckpointHeader << "\n";
  out << "bound " << p.bound << "\ncontrols " << p.controls << "\nslices " << p.slices << "\n";
  out << "layers " << p.layer_sizes.size();
  for (int s : p.layer_sizes) out << " " << s;
  out << "\nlog_std";
  for (Eigen::Index i = 0; i < p.log_std.size(); ++i) out << " " << p.log_std(i);
  out << "\n";
  for (std::size_t l = 0; l < p.weights.size(); ++l) {
    out << "W" << l;
    for (Eigen::Index i = 0; i < p.weights[l].rows(); ++i) {
      for (Eigen::Index j = 0; j < p.weights[l].cols(); ++j) out << " " << p.weights[l](i, j);
    }
    out << "\nb" << l;
    for (Eigen::Index i = 0; i < p.biases[l].size(); ++i) out << " " << p.biases[l](i);
    out << "\n";
  }
  os << out.str();
}

inline MlpPolicy load_policy(std::istream& is) {
  auto fail = [](const std::string& what) { throw std::runtime_error("load_policy: " + what); };
  std::string line;
  if (!std::getline(is, line) || line != kCheckpointHeader) fail("missing or unsupported version header");
  MlpPolicy p;
  std::string key;
  auto expect_key = [&](const std::string& want) {
    if (!(is >> key) || key != want) fail("expected '" + want + "'");
  };
  expect_key("bound");
  is >> p.bound;
  expect_key("controls");
  is >> p.controls;
  expect_key("slices");
  is >> p.slices;
  expect_key("layers");
  std::size_t n = 0;
  if (!(is >> n) || n < 2 || n > 64) fail("bad layer count");
  p.layer_sizes.resize(n);
  for (auto& s : p.layer_sizes) {
    if (!(is >> s) || s < 1) fail("bad layer size");
  }
  if (p.layer_sizes.back() != p.controls * p.slices) fail("output layer does not match controls x slices");
  expect_key("log_std");
  p.log_std.resize(p.layer_sizes.back());
  for (Eigen::Index i = 0; i < p.log_std.size(); ++i) is >> p.log_std(i);
  for (std::size_t l = 0; l + 1 < n; ++l) {
    expect_key("W" + std::to_string(l));
    Eigen::MatrixXd w(p.layer_sizes[l + 1], p.layer_sizes[l]);
    for (Eigen::Index i = 0; i < w.rows(); ++i) {
      for (Eigen::Index j = 0; j < w.cols(); ++j) is >> w(i, j);
    }
    expect_key("b" + std::to_string(l));
    Eigen::VectorXd b(p.layer_sizes[l + 1]);
    for (Eigen::Index i = 0; i < b.size(); ++i) is >> b(i);
    p.weights.push_back(std::move(w));
    p.biases.push_back(std::move(b));
  }
  if (!is) fail("truncated parameter data");
  if (!p.finite()) fail("non-finite parameters");
  return p;
}

}  // namespace eoqc
