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

// The three studies: Pareto sweep over objective weights, noise sweep over
// decoherence times, and the Bloch-path / energetic-cost analysis.
//
// Fidelity metric per study: Pareto and geodesic rows report closed-system
// process fidelity; noise-sweep rows report noisy state fidelity from
// rho0 = |0..0><0..0|.

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <exception>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include "eoqc/drlpe.hpp"
#include "eoqc/grape.hpp"
#include "eoqc/stats.hpp"
#include "eoqc/system.hpp"

namespace eoqc {

enum class Method { EoGrape, EoDrlpe, EoDrlpeWarm };

inline std::string_view method_name(Method m) {
  switch (m) {
    case Method::EoGrape: return "eo-grape";
    case Method::EoDrlpe: return "eo-drlpe";
    case Method::EoDrlpeWarm: return "eo-drlpe+warm";
  }
  return "unknown";
}

inline std::optional<Method> parse_method(std::string_view s) {
  for (Method m : {Method::EoGrape, Method::EoDrlpe, Method::EoDrlpeWarm}) {
    if (method_name(m) == s) return m;
  }
  return std::nullopt;
}

enum class FidelityMetric { Process, NoisyState };

inline std::string_view metric_name(FidelityMetric m) {
  return m == FidelityMetric::Process ? "process" : "noisy_state";
}

struct SweepRow {
  int index = 0;
  Method method = Method::EoGrape;
  std::string target;
  double w_f = 1.0;
  double w_e = 0.0;
  double eps_f = 0.0;
  double eps_e = 0.0;
  double t1 = kInfinity;
  double t2 = kInfinity;
  std::uint64_t seed = 0;
  double fidelity = 0.0;
  double infidelity = 0.0;
  double energetic_cost = 0.0;
  std::optional<double> path_length;
  std::optional<double> fidelity_ma;  // noise sweep: moving average along the sweep axis
  std::optional<double> cost_ma;
  double wall_time = 0.0;             // seconds; kept out of tabular outputs
};

struct EpisodeSummary {
  int episode = 0;
  double reward = 0.0;
  double fidelity = 0.0;
  double energetic_cost = 0.0;
};

/// Per-row outputs beyond the table: final pulses and, depending on the
/// method and study, the optimizer trace and the Bloch trajectory.
struct RunArtifacts {
  PulseSet pulses;
  std::vector<GrapeIteration> grape_trace;
  std::vector<EpisodeSummary> episodes;
  std::vector<BlochVector> trajectory;
};

struct SweepResult {
  FidelityMetric metric = FidelityMetric::Process;
  std::vector<SweepRow> rows;
  std::vector<RunArtifacts> artifacts;  // parallel to rows
};

/// Runs fn(0) .. fn(n-1) on up to `jobs` threads; results are ordered by index.
/// The first exception (lowest index) is rethrown after all workers finish.
template <class Fn>
auto parallel_map(int n, int jobs, Fn&& fn) -> std::vector<decltype(fn(0))> {
  using R = decltype(fn(0));
  std::vector<std::optional<R>> slots(static_cast<std::size_t>(std::max(n, 0)));
  std::vector<std::exception_ptr> errors(slots.size());
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i = next++; i < n; i = next++) {
      try {
        slots[static_cast<std::size_t>(i)].emplace(fn(i));
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
  };
  const int threads = std::max(1, std::min(jobs, n));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::vector<R> out;
  out.reserve(slots.size());
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

struct NamedTarget {
  std::string name;
  Matrix matrix;
};

namespace detail {

inline double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

inline std::vector<EpisodeSummary> summarize(const std::vector<EpisodeRecord>& episodes) {
  std::vector<EpisodeSummary> out;
  out.reserve(episodes.size());
  for (const auto& e : episodes) out.push_back({e.episode, e.reward, e.fidelity, e.energetic_cost});
  return out;
}

inline PulseSet mean_action(const MlpPolicy& policy, const Matrix& target) {
  return pulses_from_vector(policy_forward(policy, target_observation(target)), policy.controls, policy.slices);
}

inline double noisy_state_fidelity(const SystemSpec& spec, const PulseSet& pulses, const Matrix& target) {
  const Matrix rho0 = density(basis_state(spec.dim(), 0));
  return state_fidelity(target * rho0 * target.adjoint(), propagate_noisy(spec, pulses, rho0));
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Pareto sweep

struct LearningRates {
  double eps_f = 1.0;
  double eps_e = 3.0;
  friend bool operator==(const LearningRates&, const LearningRates&) = default;
};

/// The ten weight settings [1:0], [0.9:0.1], ..., [0.1:0.9].
inline std::vector<Weights> default_weight_grid() {
  std::vector<Weights> w;
  for (int i = 0; i < 10; ++i) w.push_back({(10 - i) / 10.0, i / 10.0});
  return w;
}

/// One EO-GRAPE run per (target, lr, seed, weight), weight varying fastest.
/// All weights of a (target, lr, seed) group share the initial pulses, so the
/// front reflects the weights rather than initialization noise.
inline SweepResult pareto_sweep(const SystemSpec& spec, const std::vector<NamedTarget>& targets,
                                const std::vector<Weights>& weights, const std::vector<LearningRates>& lrs,
                                const std::vector<std::uint64_t>& seeds, const GrapeConfig& base, int jobs = 1) {
  if (targets.empty() || weights.empty() || lrs.empty() || seeds.empty()) {
    throw std::invalid_argument("pareto_sweep: targets, weights, learning rates and seeds must be non-empty");
  }
  struct Job {
    const NamedTarget* target;
    Weights w;
    LearningRates lr;
    std::uint64_t seed;
  };
  std::vector<Job> plan;
  for (const auto& t : targets) {
    for (const auto& lr : lrs) {
      for (std::uint64_t s : seeds) {
        for (const auto& w : weights) plan.push_back({&t, w, lr, s});
      }
    }
  }
  for (const auto& j : plan) {
    GrapeConfig c = base;
    c.weights = j.w;
    c.eps_f = j.lr.eps_f;
    c.eps_e = j.lr.eps_e;
    c.validate();
  }
  auto run = [&](int i) {
    const Job& j = plan[static_cast<std::size_t>(i)];
    const auto t0 = std::chrono::steady_clock::now();
    GrapeConfig c = base;
    c.weights = j.w;
    c.eps_f = j.lr.eps_f;
    c.eps_e = j.lr.eps_e;
    c.seed = j.seed;
    GrapeTrace trace = optimize(spec, c, j.target->matrix);
    SweepRow row;
    row.index = i;
    row.method = Method::EoGrape;
    row.target = j.target->name;
    row.w_f = j.w.fidelity;
    row.w_e = j.w.energy;
    row.eps_f = c.eps_f;
    row.eps_e = c.eps_e;
    row.t1 = spec.noise().t1;
    row.t2 = spec.noise().t2;
    row.seed = j.seed;
    row.fidelity = trace.final_fidelity;
    row.infidelity = 1.0 - trace.final_fidelity;
    row.energetic_cost = trace.final_energetic_cost;
    RunArtifacts art;
    art.pulses = std::move(trace.final_pulses);
    art.grape_trace = std::move(trace.iterations);
    row.wall_time = detail::seconds_since(t0);
    return std::make_pair(std::move(row), std::move(art));
  };
  SweepResult out;
  out.metric = FidelityMetric::Process;
  for (auto& [row, art] : parallel_map(static_cast<int>(plan.size()), jobs, run)) {
    out.rows.push_back(std::move(row));
    out.artifacts.push_back(std::move(art));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Noise sweep

/// `points` log-spaced decoherence times from t_max down to t_min with
/// T1 = T2 at each point.
inline std::vector<Decoherence> log_schedule(double t_max, double t_min, int points) {
  if (!(t_max > 0.0) || !(t_min > 0.0) || t_max < t_min || points < 1) {
    throw std::invalid_argument("log_schedule: need t_max >= t_min > 0 and points >= 1");
  }
  std::vector<Decoherence> out;
  for (int i = 0; i < points; ++i) {
    const double frac = points > 1 ? static_cast<double>(i) / (points - 1) : 0.0;
    const double t = std::exp(std::log(t_max) + frac * (std::log(t_min) - std::log(t_max)));
    out.push_back({t, t});
  }
  return out;
}

struct StudyConfig {
  GrapeConfig grape;
  TrainConfig rla1;
  TrainConfig rla2;
  std::uint64_t base_seed = 0;
  int ma_window = 3;
  int jobs = 1;
};

namespace detail {

inline void check_schedule(const std::vector<Decoherence>& schedule) {
  if (schedule.empty()) throw std::invalid_argument("noise_sweep: empty schedule");
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    const auto& p = schedule[i];
    if (!(p.t1 > 0.0) || !(p.t2 > 0.0)) throw std::invalid_argument("noise_sweep: decoherence times must be positive");
    if (std::isfinite(p.t1) && std::isfinite(p.t2) && p.t2 > 2.0 * p.t1) {
      throw std::invalid_argument("noise_sweep: point " + std::to_string(i) + " has t2 > 2*t1 (unphysical)");
    }
    if (i > 0 && (p.t1 > schedule[i - 1].t1 || p.t2 > schedule[i - 1].t2)) {
      throw std::invalid_argument("noise_sweep: schedule must be non-increasing in decoherence time");
    }
  }
}

/// RLA-2 policy imitating the noiseless EO-GRAPE pulse, for warm starts.
inline MlpPolicy imitation_policy(const SystemSpec& spec, const Matrix& target, const StudyConfig& cfg,
                                  std::uint64_t seed) {
  GrapeConfig g = cfg.grape;
  g.seed = seed;
  const GrapeTrace trace = optimize(spec.with_noise({}), g, target);
  TrainConfig t = cfg.rla2;
  t.seed = seed;
  return train_rla2(spec.with_noise({}), trace.final_pulses, target, t).policy;
}

}  // namespace detail

/// Runs `method` once per noise point (re-optimized from scratch, seed =
/// base_seed + row index). EO-GRAPE optimizes the closed-system objective and
/// is then evaluated under the point's noise; the RL methods train against
/// the noisy simulator. For the warm-started method one RLA-2 policy is
/// trained per sweep (seed = base_seed) and copied into every point.
inline SweepResult noise_sweep(const SystemSpec& spec, const NamedTarget& target, Method method,
                               const std::vector<Decoherence>& schedule, const StudyConfig& cfg) {
  detail::check_schedule(schedule);
  cfg.grape.validate();
  if (method != Method::EoGrape) {
    cfg.rla1.validate();
    if (method == Method::EoDrlpeWarm) cfg.rla2.validate();
  }
  if (cfg.ma_window < 1) throw std::invalid_argument("noise_sweep: ma_window must be >= 1");

  std::optional<MlpPolicy> warm;
  if (method == Method::EoDrlpeWarm) warm = detail::imitation_policy(spec, target.matrix, cfg, cfg.base_seed);

  auto run = [&](int i) {
    const auto t0 = std::chrono::steady_clock::now();
    const Decoherence noise = schedule[static_cast<std::size_t>(i)];
    const SystemSpec noisy = spec.with_noise(noise);
    const std::uint64_t seed = cfg.base_seed + static_cast<std::uint64_t>(i);
    SweepRow row;
    row.index = i;
    row.method = method;
    row.target = target.name;
    row.t1 = noise.t1;
    row.t2 = noise.t2;
    row.seed = seed;
    RunArtifacts art;
    if (method == Method::EoGrape) {
      GrapeConfig g = cfg.grape;
      g.seed = seed;
      GrapeTrace trace = optimize(noisy, g, target.matrix);
      row.w_f = g.weights.fidelity;
      row.w_e = g.weights.energy;
      row.eps_f = g.eps_f;
      row.eps_e = g.eps_e;
      art.pulses = std::move(trace.final_pulses);
      art.grape_trace = std::move(trace.iterations);
    } else {
      TrainConfig t = cfg.rla1;
      t.seed = seed;
      std::optional<MlpPolicy> init;
      if (warm) init = warm_start(*warm, layer_sizes_for(noisy, t));
      TrainResult trained = train_rla1(noisy, target.matrix, t, init);
      row.w_f = t.weights.fidelity;
      row.w_e = t.weights.energy;
      art.pulses = detail::mean_action(trained.policy, target.matrix);
      art.episodes = detail::summarize(trained.episodes);
    }
    row.fidelity = detail::noisy_state_fidelity(noisy, art.pulses, target.matrix);
    row.infidelity = 1.0 - row.fidelity;
    row.energetic_cost = energetic_cost(noisy, art.pulses);
    row.wall_time = detail::seconds_since(t0);
    return std::make_pair(std::move(row), std::move(art));
  };
  SweepResult out;
  out.metric = FidelityMetric::NoisyState;
  for (auto& [row, art] : parallel_map(static_cast<int>(schedule.size()), cfg.jobs, run)) {
    out.rows.push_back(std::move(row));
    out.artifacts.push_back(std::move(art));
  }
  std::vector<double> fid, cost;
  for (const auto& r : out.rows) {
    fid.push_back(r.fidelity);
    cost.push_back(r.energetic_cost);
  }
  const int window = std::min(cfg.ma_window, static_cast<int>(fid.size()));
  const auto fid_ma = moving_average(fid, window);
  const auto cost_ma = moving_average(cost, window);
  for (std::size_t i = 0; i < out.rows.size(); ++i) {
    out.rows[i].fidelity_ma = fid_ma[i];
    out.rows[i].cost_ma = cost_ma[i];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Geodesic study

/// For every (method, weight) pair, method-major: final pulses, process
/// fidelity, energetic cost, Bloch path length from |0> and the N+1-point
/// trajectory. Seed = base_seed + row index.
inline SweepResult geodesic_experiment(const SystemSpec& spec, const NamedTarget& target,
                                       const std::vector<Method>& methods, const std::vector<Weights>& weights,
                                       const StudyConfig& cfg) {
  if (spec.n_qubits() != 1) throw std::invalid_argument("geodesic_experiment: requires a one-qubit system");
  if (methods.empty() || weights.empty()) throw std::invalid_argument("geodesic_experiment: empty methods or weights");
  cfg.grape.validate();
  for (Method m : methods) {
    if (m != Method::EoGrape) cfg.rla1.validate();
    if (m == Method::EoDrlpeWarm) cfg.rla2.validate();
  }
  struct Job {
    Method method;
    Weights w;
  };
  std::vector<Job> plan;
  for (Method m : methods) {
    for (const auto& w : weights) plan.push_back({m, w});
  }
  const StateVector psi0 = basis_state(2, 0);

  auto run = [&](int i) {
    const auto t0 = std::chrono::steady_clock::now();
    const Job& j = plan[static_cast<std::size_t>(i)];
    const std::uint64_t seed = cfg.base_seed + static_cast<std::uint64_t>(i);
    SweepRow row;
    row.index = i;
    row.method = j.method;
    row.target = target.name;
    row.w_f = j.w.fidelity;
    row.w_e = j.w.energy;
    row.t1 = spec.noise().t1;
    row.t2 = spec.noise().t2;
    row.seed = seed;
    RunArtifacts art;
    if (j.method == Method::EoGrape) {
      GrapeConfig g = cfg.grape;
      g.weights = j.w;
      g.seed = seed;
      GrapeTrace trace = optimize(spec, g, target.matrix);
      row.eps_f = g.eps_f;
      row.eps_e = g.eps_e;
      art.pulses = std::move(trace.final_pulses);
      art.grape_trace = std::move(trace.iterations);
    } else {
      TrainConfig t = cfg.rla1;
      t.weights = j.w;
      t.seed = seed;
      std::optional<MlpPolicy> init;
      if (j.method == Method::EoDrlpeWarm) {
        StudyConfig c = cfg;
        c.grape.weights = j.w;
        init = warm_start(detail::imitation_policy(spec, target.matrix, c, seed), layer_sizes_for(spec, t));
      }
      TrainResult trained = train_rla1(spec, target.matrix, t, init);
      art.pulses = detail::mean_action(trained.policy, target.matrix);
      art.episodes = detail::summarize(trained.episodes);
    }
    row.fidelity = process_fidelity(target.matrix, propagate_closed(spec, art.pulses).total);
    row.infidelity = 1.0 - row.fidelity;
    row.energetic_cost = energetic_cost(spec, art.pulses);
    art.trajectory = bloch_trajectory(spec, art.pulses, psi0);
    double length = 0.0;
    for (std::size_t k = 1; k < art.trajectory.size(); ++k) length += (art.trajectory[k] - art.trajectory[k - 1]).norm();
    row.path_length = length;
    row.wall_time = detail::seconds_since(t0);
    return std::make_pair(std::move(row), std::move(art));
  };
  SweepResult out;
  out.metric = FidelityMetric::Process;
  for (auto& [row, art] : parallel_map(static_cast<int>(plan.size()), cfg.jobs, run)) {
    out.rows.push_back(std::move(row));
    out.artifacts.push_back(std::move(art));
  }
  return out;
}

/// Pearson correlation of path length against energetic cost over the rows
/// of one method.
inline double path_cost_correlation(const SweepResult& result, Method method) {
  std::vector<double> length, cost;
  for (const auto& r : result.rows) {
    if (r.method == method && r.path_length) {
      length.push_back(*r.path_length);
      cost.push_back(r.energetic_cost);
    }
  }
  return pearson(length, cost);
}

}  // namespace eoqc
