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

// Run configuration: YAML parsing with field-path diagnostics, validation and
// lossless serialization.

#pragma once

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "eoqc/experiments.hpp"
#include "eoqc/gates.hpp"

namespace eoqc::cli {

enum class Task { Grape, Drlpe, Pareto, NoiseSweep, Geodesic };

inline constexpr std::array<std::pair<Task, std::string_view>, 5> kTaskNames{{
    {Task::Grape, "grape"},
    {Task::Drlpe, "drlpe"},
    {Task::Pareto, "pareto"},
    {Task::NoiseSweep, "noise-sweep"},
    {Task::Geodesic, "geodesic"},
}};

inline std::string_view task_name(Task t) {
  for (const auto& [task, name] : kTaskNames) {
    if (task == t) return name;
  }
  return "unknown";
}

inline std::optional<Task> parse_task(std::string_view s) {
  for (const auto& [task, name] : kTaskNames) {
    if (name == s) return task;
  }
  return std::nullopt;
}

inline std::string_view drift_name(DriftKind k) {
  switch (k) {
    case DriftKind::OneQubitIdentity: return "identity";
    case DriftKind::OneQubitZ: return "z";
    case DriftKind::TwoQubitZZ: return "zz";
  }
  return "unknown";
}

inline std::optional<DriftKind> parse_drift(std::string_view s) {
  for (DriftKind k : {DriftKind::OneQubitIdentity, DriftKind::OneQubitZ, DriftKind::TwoQubitZZ}) {
    if (drift_name(k) == s) return k;
  }
  return std::nullopt;
}

struct SystemConfig {
  int qubits = 1;
  DriftKind drift = DriftKind::OneQubitZ;
  double omega1 = 1.0;
  double omega2 = 1.0;
  double coupling = 0.1;
  std::vector<std::string> controls{"x1"};
  double total_time = 2 * kPi;
  int slices = 100;
  double t1 = kInfinity;
  double t2 = kInfinity;
  double amplitude_bound = 1.0;
  friend bool operator==(const SystemConfig&, const SystemConfig&) = default;
};

/// Log-spaced T1 = T2 schedule, in units of the gate time T.
struct ScheduleConfig {
  double t_max = 100.0;
  double t_min = 1.0;
  int points = 10;
  friend bool operator==(const ScheduleConfig&, const ScheduleConfig&) = default;
};

struct SweepConfig {
  std::vector<Weights> weights = default_weight_grid();
  std::vector<LearningRates> learning_rates{{1.0, 3.0}};
  /// Offsets added to the run seed (pareto only).
  std::vector<std::uint64_t> seeds{0};
  std::vector<Method> methods{Method::EoGrape};
  ScheduleConfig schedule;
  int ma_window = 3;
  friend bool operator==(const SweepConfig&, const SweepConfig&) = default;
};

struct RunConfig {
  Task task = Task::Grape;
  std::uint64_t seed = 0;
  std::string output_dir;
  bool fast = false;
  int jobs = 1;
  SystemConfig system;
  /// Named gates or "haar(<seed>)".
  std::vector<std::string> targets{"hadamard"};
  GrapeConfig grape;
  TrainConfig rla1;
  TrainConfig rla2;
  SweepConfig sweep;
  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Configuration error tied to a dotted field path and, when known, the
/// 1-based line of the offending node.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, int line, const std::string& message)
      : std::runtime_error(format(field, line, message)), field_(std::move(field)), line_(line) {}

  const std::string& field() const { return field_; }
  int line() const { return line_; }

 private:
  static std::string format(const std::string& field, int line, const std::string& message) {
    std::string out = "config error at " + (field.empty() ? std::string("<root>") : field);
    if (line > 0) out += " (line " + std::to_string(line) + ")";
    return out + ": " + message;
  }
  std::string field_;
  int line_;
};

/// Field path -> 1-based source line, filled while parsing.
using FieldLines = std::map<std::string, int>;

// ---------------------------------------------------------------------------
// Defaults

inline RunConfig default_config(Task task) {
  RunConfig c;
  c.task = task;
  c.output_dir = "runs/" + std::string(task_name(task));
  c.rla2.learning_rate = 3e-4;
  switch (task) {
    case Task::Grape:
      break;
    case Task::Drlpe:
      c.sweep.methods = {Method::EoDrlpe};
      break;
    case Task::Pareto:
      c.system.qubits = 2;
      c.system.drift = DriftKind::TwoQubitZZ;
      c.system.controls = {"x1", "x2", "x1x2"};
      c.targets = {"haar(1)"};
      c.grape.n_iterations = 100;
      c.sweep.learning_rates = {{1, 1}, {1, 3}, {1, 10}, {1, 100}};
      break;
    case Task::NoiseSweep:
      c.grape.weights = {0.7, 0.3};
      c.rla1.weights = {0.7, 0.3};
      break;
    case Task::Geodesic:
      c.system.controls = {"x1", "y1"};
      c.targets = {"rx_pi_2"};
      break;
  }
  return c;
}

// ---------------------------------------------------------------------------
// Targets

/// Resolves a named gate or "haar(<seed>)" for an n-qubit register.
inline Matrix resolve_target(const std::string& name, int n_qubits) {
  const Eigen::Index dim = Eigen::Index{1} << n_qubits;
  if (name.rfind("haar(", 0) == 0 && name.size() > 6 && name.back() == ')') {
    const std::string digits = name.substr(5, name.size() - 6);
    if (digits.empty() || !std::all_of(digits.begin(), digits.end(), [](char ch) { return ch >= '0' && ch <= '9'; })) {
      throw std::invalid_argument("haar target needs a non-negative integer seed, e.g. haar(1)");
    }
    return haar_random_unitary(dim, std::stoull(digits));
  }
  const auto gate = parse_gate_name(name);
  if (!gate) {
    throw std::invalid_argument("unknown target '" + name + "' (expected hadamard, cnot, t, rx_pi_2, identity or haar(<seed>))");
  }
  if (gate_qubits(*gate, n_qubits) != n_qubits) {
    throw std::invalid_argument("target '" + name + "' acts on " + std::to_string(gate_qubits(*gate, n_qubits)) +
                                " qubit(s) but the system has " + std::to_string(n_qubits));
  }
  return gate_matrix(*gate, n_qubits);
}

inline SystemSpec build_system(const SystemConfig& s) {
  DriftParams drift{s.drift, s.omega1, s.omega2, s.coupling};
  std::vector<ControlOperator> controls;
  for (const auto& label : s.controls) controls.push_back(control_from_label(label, s.qubits));
  return SystemSpec(s.qubits, build_drift(drift, s.qubits), std::move(controls), s.total_time, s.slices,
                    {s.t1, s.t2}, s.amplitude_bound);
}

// ---------------------------------------------------------------------------
// Validation

namespace detail {

class Checker {
 public:
  explicit Checker(const FieldLines* lines) : lines_(lines) {}

  void require(bool ok, const std::string& field, const std::string& message) const {
    if (!ok) fail(field, message);
  }

  [[noreturn]] void fail(const std::string& field, const std::string& message) const {
    int line = 0;
    if (lines_) {
      // Fall back to the closest enclosing node that has a recorded line.
      std::string f = field;
      while (true) {
        auto it = lines_->find(f);
        if (it != lines_->end()) {
          line = it->second;
          break;
        }
        const auto cut = f.find_last_of(".[");
        if (cut == std::string::npos) break;
        f = f.substr(0, cut);
      }
    }
    throw ConfigError(field, line, message);
  }

 private:
  const FieldLines* lines_;
};

inline bool weights_ok(const Weights& w) {
  return w.fidelity >= 0.0 && w.energy >= 0.0 && std::abs(w.fidelity + w.energy - 1.0) <= tol::kWeightSum;
}

inline void check_train(const Checker& c, const TrainConfig& t, const std::string& p) {
  c.require(t.n_episodes >= 1, p + ".episodes", "must be >= 1");
  c.require(t.learning_rate > 0.0, p + ".learning_rate", "must be positive");
  c.require(t.batch_size >= 1, p + ".batch_size", "must be >= 1");
  c.require(t.baseline_decay >= 0.0 && t.baseline_decay < 1.0, p + ".baseline_decay", "must be in [0, 1)");
  c.require(t.std_initial > 0.0, p + ".std_initial", "must be positive");
  c.require(t.std_final > 0.0, p + ".std_final", "must be positive");
  c.require(t.momentum >= 0.0 && t.momentum < 1.0, p + ".momentum", "must be in [0, 1)");
  c.require(weights_ok(t.weights), p + ".w_e", "w_f and w_e must be non-negative and sum to 1");
  c.require(!t.hidden_layers.empty(), p + ".hidden_layers", "at least one hidden layer is required");
  for (std::size_t i = 0; i < t.hidden_layers.size(); ++i) {
    c.require(t.hidden_layers[i] >= 1, p + ".hidden_layers[" + std::to_string(i) + "]", "must be positive");
  }
  c.require(t.output_scale > 0.0, p + ".output_scale", "must be positive");
}

}  // namespace detail

/// Checks every invariant of a run configuration. `lines` (from parsing)
/// attaches source lines to the diagnostics.
inline void validate(const RunConfig& cfg, const FieldLines* lines = nullptr) {
  const detail::Checker c(lines);
  const SystemConfig& s = cfg.system;
  c.require(cfg.jobs >= 1, "jobs", "must be >= 1");
  c.require(s.qubits == 1 || s.qubits == 2, "system.qubits", "must be 1 or 2");
  c.require(DriftParams{s.drift}.qubits() == s.qubits, "system.drift",
            "drift '" + std::string(drift_name(s.drift)) + "' does not act on " + std::to_string(s.qubits) + " qubit(s)");
  c.require(!s.controls.empty(), "system.controls", "at least one control is required");
  for (std::size_t i = 0; i < s.controls.size(); ++i) {
    try {
      control_from_label(s.controls[i], s.qubits);
    } catch (const std::invalid_argument& e) {
      c.fail("system.controls[" + std::to_string(i) + "]", e.what());
    }
  }
  c.require(s.total_time > 0.0 && std::isfinite(s.total_time), "system.total_time", "must be positive and finite");
  c.require(s.slices >= 2, "system.slices", "must be >= 2");
  c.require(s.amplitude_bound > 0.0, "system.amplitude_bound", "must be positive");
  c.require(s.t1 > 0.0, "system.t1", "must be positive");
  c.require(s.t2 > 0.0, "system.t2", "must be positive");
  c.require(!(std::isfinite(s.t1) && s.t2 > 2.0 * s.t1), "system.t2", "t2 must not exceed 2*t1");
  try {
    build_system(s);
  } catch (const std::invalid_argument& e) {
    c.fail("system", e.what());
  }

  c.require(!cfg.targets.empty(), "target", "at least one target is required");
  for (std::size_t i = 0; i < cfg.targets.size(); ++i) {
    try {
      resolve_target(cfg.targets[i], s.qubits);
    } catch (const std::invalid_argument& e) {
      c.fail(cfg.targets.size() == 1 ? "target" : "target[" + std::to_string(i) + "]", e.what());
    }
  }

  const GrapeConfig& g = cfg.grape;
  c.require(detail::weights_ok(g.weights), "grape.w_e", "w_f and w_e must be non-negative and sum to 1");
  c.require(g.eps_f > 0.0, "grape.eps_f", "must be positive");
  c.require(g.eps_e > 0.0, "grape.eps_e", "must be positive");
  c.require(g.n_iterations >= 1, "grape.iterations", "must be >= 1");
  c.require(g.init_scale >= 0.0, "grape.init_scale", "must be non-negative");
  detail::check_train(c, cfg.rla1, "rla1");
  detail::check_train(c, cfg.rla2, "rla2");

  const SweepConfig& w = cfg.sweep;
  c.require(!w.weights.empty(), "sweep.weights", "must not be empty");
  for (std::size_t i = 0; i < w.weights.size(); ++i) {
    c.require(detail::weights_ok(w.weights[i]), "sweep.weights[" + std::to_string(i) + "]",
              "w_f and w_e must be non-negative and sum to 1");
  }
  c.require(!w.learning_rates.empty(), "sweep.learning_rates", "must not be empty");
  for (std::size_t i = 0; i < w.learning_rates.size(); ++i) {
    c.require(w.learning_rates[i].eps_f > 0.0 && w.learning_rates[i].eps_e > 0.0,
              "sweep.learning_rates[" + std::to_string(i) + "]", "learning rates must be positive");
  }
  c.require(!w.seeds.empty(), "sweep.seeds", "must not be empty");
  c.require(!w.methods.empty(), "sweep.methods", "must not be empty");
  c.require(w.schedule.t_min > 0.0 && std::isfinite(w.schedule.t_max), "sweep.schedule",
            "t_min must be positive and t_max finite");
  c.require(w.schedule.t_max >= w.schedule.t_min, "sweep.schedule.t_max", "must be >= t_min");
  c.require(w.schedule.points >= 1, "sweep.schedule.points", "must be >= 1");
  c.require(w.ma_window >= 1, "sweep.ma_window", "must be >= 1");

  if (cfg.task == Task::Geodesic) c.require(s.qubits == 1, "system.qubits", "geodesic requires a one-qubit system");
  if (cfg.task == Task::Drlpe) {
    for (std::size_t i = 0; i < w.methods.size(); ++i) {
      c.require(w.methods[i] != Method::EoGrape, "sweep.methods[" + std::to_string(i) + "]",
                "drlpe runs eo-drlpe or eo-drlpe+warm only");
    }
  }
}

// ---------------------------------------------------------------------------
// Parsing

namespace detail {

/// Walks a YAML mapping, recording lines and rejecting keys nobody consumed.
class Section {
 public:
  Section(const YAML::Node& node, std::string path, FieldLines& lines) : node_(node), path_(std::move(path)), lines_(lines) {
    if (!node_.IsMap()) throw ConfigError(path_, line_of(node_), "expected a mapping");
    for (const auto& kv : node_) {
      const std::string key = kv.first.as<std::string>();
      lines_[join(key)] = line_of(kv.first);
    }
  }

  std::string join(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  std::optional<YAML::Node> get(const std::string& key) {
    seen_.insert(key);
    const YAML::Node n = node_[key];
    if (!n.IsDefined() || n.IsNull()) return std::nullopt;
    return n;
  }

  template <class T>
  void read(const std::string& key, T& out) {
    if (auto n = get(key)) out = scalar<T>(*n, join(key));
  }

  void finish() const {
    for (const auto& kv : node_) {
      const std::string key = kv.first.as<std::string>();
      if (!seen_.count(key)) throw ConfigError(join(key), line_of(kv.first), "unknown key");
    }
  }

  static int line_of(const YAML::Node& n) { return n.Mark().line >= 0 ? n.Mark().line + 1 : 0; }

  template <class T>
  static T scalar(const YAML::Node& n, const std::string& path) {
    if (!n.IsScalar()) throw ConfigError(path, line_of(n), "expected a scalar");
    try {
      if constexpr (std::is_same_v<T, std::uint64_t> || std::is_same_v<T, int>) {
        // yaml-cpp accepts "1.5" for integers on some versions; be strict.
        const std::string s = n.Scalar();
        if (s.empty() || s.find_first_not_of("0123456789-+") != std::string::npos) throw YAML::BadConversion(n.Mark());
        if constexpr (std::is_same_v<T, std::uint64_t>) {
          if (s[0] == '-') throw YAML::BadConversion(n.Mark());
        }
      }
      return n.as<T>();
    } catch (const YAML::BadConversion&) {
      throw ConfigError(path, line_of(n), "cannot read '" + n.Scalar() + "'");
    }
  }

 private:
  YAML::Node node_;
  std::string path_;
  FieldLines& lines_;
  std::set<std::string> seen_;
};

template <class T>
std::vector<T> read_list(const YAML::Node& n, const std::string& path, FieldLines& lines) {
  if (!n.IsSequence()) throw ConfigError(path, Section::line_of(n), "expected a list");
  std::vector<T> out;
  for (std::size_t i = 0; i < n.size(); ++i) {
    const std::string p = path + "[" + std::to_string(i) + "]";
    lines[p] = Section::line_of(n[i]);
    out.push_back(Section::scalar<T>(n[i], p));
  }
  return out;
}

inline std::pair<double, double> read_pair(const YAML::Node& n, const std::string& path) {
  if (!n.IsSequence() || n.size() != 2) throw ConfigError(path, Section::line_of(n), "expected a pair [a, b]");
  return {Section::scalar<double>(n[0], path + "[0]"), Section::scalar<double>(n[1], path + "[1]")};
}

inline void read_weights(Section& sec, Weights& w) {
  sec.read("w_f", w.fidelity);
  sec.read("w_e", w.energy);
}

inline void read_train(const YAML::Node& node, const std::string& path, FieldLines& lines, TrainConfig& t) {
  Section sec(node, path, lines);
  sec.read("episodes", t.n_episodes);
  sec.read("learning_rate", t.learning_rate);
  sec.read("batch_size", t.batch_size);
  sec.read("baseline_decay", t.baseline_decay);
  sec.read("std_initial", t.std_initial);
  sec.read("std_final", t.std_final);
  sec.read("momentum", t.momentum);
  read_weights(sec, t.weights);
  if (auto n = sec.get("hidden_layers")) t.hidden_layers = read_list<int>(*n, sec.join("hidden_layers"), lines);
  sec.read("output_scale", t.output_scale);
  if (auto n = sec.get("imitation")) {
    const std::string v = Section::scalar<std::string>(*n, sec.join("imitation"));
    if (v == "squared") t.imitation = ImitationNorm::Squared;
    else if (v == "l1") t.imitation = ImitationNorm::L1;
    else throw ConfigError(sec.join("imitation"), Section::line_of(*n), "expected squared or l1");
  }
  sec.finish();
}

}  // namespace detail

/// Parses YAML text into a validated RunConfig. The task comes from the
/// `task` key or from `task_hint` (the subcommand); when both are present
/// they must agree. Unset fields take the task's defaults.
inline RunConfig parse_config_text(const std::string& text, std::optional<Task> task_hint = std::nullopt,
                                   FieldLines* lines_out = nullptr) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError("", e.mark.line + 1, e.msg);
  }
  if (root.IsNull()) root = YAML::Node(YAML::NodeType::Map);
  FieldLines lines;
  detail::Section top(root, "", lines);

  std::optional<Task> task = task_hint;
  if (auto n = top.get("task")) {
    const std::string name = detail::Section::scalar<std::string>(*n, "task");
    const auto parsed = parse_task(name);
    if (!parsed) throw ConfigError("task", detail::Section::line_of(*n), "unknown task '" + name + "'");
    if (task_hint && *task_hint != *parsed) {
      throw ConfigError("task", detail::Section::line_of(*n),
                        "config is for '" + name + "' but the command is '" + std::string(task_name(*task_hint)) + "'");
    }
    task = parsed;
  }
  if (!task) throw ConfigError("task", 0, "missing task");
  RunConfig c = default_config(*task);

  top.read("seed", c.seed);
  top.read("output_dir", c.output_dir);
  top.read("fast", c.fast);
  top.read("jobs", c.jobs);

  if (auto n = top.get("system")) {
    detail::Section sec(*n, "system", lines);
    sec.read("qubits", c.system.qubits);
    if (auto d = sec.get("drift")) {
      const std::string v = detail::Section::scalar<std::string>(*d, "system.drift");
      const auto k = parse_drift(v);
      if (!k) throw ConfigError("system.drift", detail::Section::line_of(*d), "expected identity, z or zz");
      c.system.drift = *k;
    }
    sec.read("omega1", c.system.omega1);
    sec.read("omega2", c.system.omega2);
    sec.read("coupling", c.system.coupling);
    if (auto l = sec.get("controls")) c.system.controls = detail::read_list<std::string>(*l, "system.controls", lines);
    sec.read("total_time", c.system.total_time);
    sec.read("slices", c.system.slices);
    sec.read("t1", c.system.t1);
    sec.read("t2", c.system.t2);
    sec.read("amplitude_bound", c.system.amplitude_bound);
    sec.finish();
  }

  if (auto n = top.get("target")) {
    if (n->IsSequence()) {
      c.targets = detail::read_list<std::string>(*n, "target", lines);
    } else {
      c.targets = {detail::Section::scalar<std::string>(*n, "target")};
    }
  }

  if (auto n = top.get("grape")) {
    detail::Section sec(*n, "grape", lines);
    detail::read_weights(sec, c.grape.weights);
    sec.read("eps_f", c.grape.eps_f);
    sec.read("eps_e", c.grape.eps_e);
    sec.read("iterations", c.grape.n_iterations);
    sec.read("init_scale", c.grape.init_scale);
    if (auto m = sec.get("gradient")) {
      const std::string v = detail::Section::scalar<std::string>(*m, "grape.gradient");
      if (v == "exact") c.grape.gradient = GradientMode::Exact;
      else if (v == "first_order") c.grape.gradient = GradientMode::FirstOrder;
      else throw ConfigError("grape.gradient", detail::Section::line_of(*m), "expected exact or first_order");
    }
    sec.finish();
  }
  if (auto n = top.get("rla1")) detail::read_train(*n, "rla1", lines, c.rla1);
  if (auto n = top.get("rla2")) detail::read_train(*n, "rla2", lines, c.rla2);

  if (auto n = top.get("sweep")) {
    detail::Section sec(*n, "sweep", lines);
    if (auto l = sec.get("weights")) {
      if (!l->IsSequence()) throw ConfigError("sweep.weights", detail::Section::line_of(*l), "expected a list of [w_f, w_e]");
      c.sweep.weights.clear();
      for (std::size_t i = 0; i < l->size(); ++i) {
        const std::string p = "sweep.weights[" + std::to_string(i) + "]";
        lines[p] = detail::Section::line_of((*l)[i]);
        const auto [a, b] = detail::read_pair((*l)[i], p);
        c.sweep.weights.push_back({a, b});
      }
    }
    if (auto l = sec.get("learning_rates")) {
      if (!l->IsSequence()) {
        throw ConfigError("sweep.learning_rates", detail::Section::line_of(*l), "expected a list of [eps_f, eps_e]");
      }
      c.sweep.learning_rates.clear();
      for (std::size_t i = 0; i < l->size(); ++i) {
        const std::string p = "sweep.learning_rates[" + std::to_string(i) + "]";
        lines[p] = detail::Section::line_of((*l)[i]);
        const auto [a, b] = detail::read_pair((*l)[i], p);
        c.sweep.learning_rates.push_back({a, b});
      }
    }
    if (auto l = sec.get("seeds")) c.sweep.seeds = detail::read_list<std::uint64_t>(*l, "sweep.seeds", lines);
    if (auto l = sec.get("methods")) {
      c.sweep.methods.clear();
      const auto names = detail::read_list<std::string>(*l, "sweep.methods", lines);
      for (std::size_t i = 0; i < names.size(); ++i) {
        const auto m = parse_method(names[i]);
        if (!m) {
          const std::string p = "sweep.methods[" + std::to_string(i) + "]";
          throw ConfigError(p, lines[p], "expected eo-grape, eo-drlpe or eo-drlpe+warm");
        }
        c.sweep.methods.push_back(*m);
      }
    }
    if (auto s = sec.get("schedule")) {
      detail::Section sched(*s, "sweep.schedule", lines);
      sched.read("t_max", c.sweep.schedule.t_max);
      sched.read("t_min", c.sweep.schedule.t_min);
      sched.read("points", c.sweep.schedule.points);
      sched.finish();
    }
    sec.read("ma_window", c.sweep.ma_window);
    sec.finish();
  }
  top.finish();

  validate(c, &lines);
  if (lines_out) *lines_out = std::move(lines);
  return c;
}

inline RunConfig parse_config_file(const std::string& path, std::optional<Task> task_hint = std::nullopt) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", 0, "cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), task_hint);
}

// ---------------------------------------------------------------------------
// Serialization

namespace detail {

inline void emit_weights(YAML::Emitter& out, const Weights& w) {
  out << YAML::Key << "w_f" << YAML::Value << w.fidelity;
  out << YAML::Key << "w_e" << YAML::Value << w.energy;
}

inline void emit_train(YAML::Emitter& out, const char* name, const TrainConfig& t) {
  out << YAML::Key << name << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "episodes" << YAML::Value << t.n_episodes;
  out << YAML::Key << "learning_rate" << YAML::Value << t.learning_rate;
  out << YAML::Key << "batch_size" << YAML::Value << t.batch_size;
  out << YAML::Key << "baseline_decay" << YAML::Value << t.baseline_decay;
  out << YAML::Key << "std_initial" << YAML::Value << t.std_initial;
  out << YAML::Key << "std_final" << YAML::Value << t.std_final;
  out << YAML::Key << "momentum" << YAML::Value << t.momentum;
  emit_weights(out, t.weights);
  out << YAML::Key << "hidden_layers" << YAML::Value << YAML::Flow << t.hidden_layers;
  out << YAML::Key << "output_scale" << YAML::Value << t.output_scale;
  out << YAML::Key << "imitation" << YAML::Value << (t.imitation == ImitationNorm::L1 ? "l1" : "squared");
  out << YAML::EndMap;
}

}  // namespace detail

/// Complete YAML echo of a configuration; parse_config_text inverts it exactly.
inline std::string serialize_config(const RunConfig& c) {
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  out << YAML::BeginMap;
  out << YAML::Key << "task" << YAML::Value << std::string(task_name(c.task));
  out << YAML::Key << "seed" << YAML::Value << c.seed;
  out << YAML::Key << "output_dir" << YAML::Value << c.output_dir;
  out << YAML::Key << "fast" << YAML::Value << c.fast;
  out << YAML::Key << "jobs" << YAML::Value << c.jobs;

  const SystemConfig& s = c.system;
  out << YAML::Key << "system" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "qubits" << YAML::Value << s.qubits;
  out << YAML::Key << "drift" << YAML::Value << std::string(drift_name(s.drift));
  out << YAML::Key << "omega1" << YAML::Value << s.omega1;
  out << YAML::Key << "omega2" << YAML::Value << s.omega2;
  out << YAML::Key << "coupling" << YAML::Value << s.coupling;
  out << YAML::Key << "controls" << YAML::Value << YAML::Flow << s.controls;
  out << YAML::Key << "total_time" << YAML::Value << s.total_time;
  out << YAML::Key << "slices" << YAML::Value << s.slices;
  out << YAML::Key << "t1" << YAML::Value << s.t1;
  out << YAML::Key << "t2" << YAML::Value << s.t2;
  out << YAML::Key << "amplitude_bound" << YAML::Value << s.amplitude_bound;
  out << YAML::EndMap;

  out << YAML::Key << "target" << YAML::Value;
  if (c.targets.size() == 1) out << c.targets.front();
  else out << YAML::Flow << c.targets;

  out << YAML::Key << "grape" << YAML::Value << YAML::BeginMap;
  detail::emit_weights(out, c.grape.weights);
  out << YAML::Key << "eps_f" << YAML::Value << c.grape.eps_f;
  out << YAML::Key << "eps_e" << YAML::Value << c.grape.eps_e;
  out << YAML::Key << "iterations" << YAML::Value << c.grape.n_iterations;
  out << YAML::Key << "init_scale" << YAML::Value << c.grape.init_scale;
  out << YAML::Key << "gradient" << YAML::Value
      << (c.grape.gradient == GradientMode::FirstOrder ? "first_order" : "exact");
  out << YAML::EndMap;
  detail::emit_train(out, "rla1", c.rla1);
  detail::emit_train(out, "rla2", c.rla2);

  out << YAML::Key << "sweep" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "weights" << YAML::Value << YAML::BeginSeq;
  for (const auto& w : c.sweep.weights) out << YAML::Flow << std::vector<double>{w.fidelity, w.energy};
  out << YAML::EndSeq;
  out << YAML::Key << "learning_rates" << YAML::Value << YAML::BeginSeq;
  for (const auto& lr : c.sweep.learning_rates) out << YAML::Flow << std::vector<double>{lr.eps_f, lr.eps_e};
  out << YAML::EndSeq;
  out << YAML::Key << "seeds" << YAML::Value << YAML::Flow << c.sweep.seeds;
  std::vector<std::string> methods;
  for (Method m : c.sweep.methods) methods.emplace_back(method_name(m));
  out << YAML::Key << "methods" << YAML::Value << YAML::Flow << methods;
  out << YAML::Key << "schedule" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "t_max" << YAML::Value << c.sweep.schedule.t_max;
  out << YAML::Key << "t_min" << YAML::Value << c.sweep.schedule.t_min;
  out << YAML::Key << "points" << YAML::Value << c.sweep.schedule.points;
  out << YAML::EndMap;
  out << YAML::Key << "ma_window" << YAML::Value << c.sweep.ma_window;
  out << YAML::EndMap;

  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

/// Desk-scale reduction: GRAPE iterations and RL episodes divided by 10.
inline RunConfig apply_fast(RunConfig c) {
  if (!c.fast) return c;
  c.grape.n_iterations = std::max(1, c.grape.n_iterations / 10);
  c.rla1.n_episodes = std::max(1, c.rla1.n_episodes / 10);
  c.rla2.n_episodes = std::max(1, c.rla2.n_episodes / 10);
  return c;
}

}  // namespace eoqc::cli
