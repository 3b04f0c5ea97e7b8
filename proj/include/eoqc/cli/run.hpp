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

// Task dispatch and the run-directory layout:
//
//   <out>/manifest.json           schema version, config echo, file hashes, wall times
//   <out>/config.yaml             effective configuration
//   <out>/results.csv             one row per run
//   <out>/pulses/run_NNNN.csv     slice,<control labels>
//   <out>/traces/run_NNNN.csv     iteration,fidelity,energetic_cost,combined_cost (GRAPE rows)
//   <out>/episodes/run_NNNN.csv   episode,reward,fidelity,energetic_cost (RL rows)
//   <out>/trajectories/run_NNNN.csv  slice,x,y,z (one-qubit systems)
//
// Everything except manifest.json is a deterministic function of the config.

#pragma once

#include <openssl/evp.h>

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "eoqc/cli/config.hpp"
#include "json.hpp"

namespace eoqc::cli {

inline constexpr int kSchemaVersion = 1;

inline constexpr const char* kResultsHeader =
    "index,method,target,w_f,w_e,eps_f,eps_e,t1,t2,seed,metric,fidelity,infidelity,energetic_cost,path_length,"
    "fidelity_ma,cost_ma";

/// Shortest-round-trip-safe decimal rendering used in every table.
inline std::string fmt(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string fmt(const std::optional<double>& v) { return v ? fmt(*v) : std::string(); }

inline std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256 failed");
  }
  std::ostringstream out;
  for (unsigned int i = 0; i < len; ++i) out << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
  return out.str();
}

struct TaskOutput {
  SweepResult result;
  SystemSpec spec;
};

namespace detail {

inline std::vector<NamedTarget> targets_of(const RunConfig& c) {
  std::vector<NamedTarget> out;
  for (const auto& name : c.targets) out.push_back({name, resolve_target(name, c.system.qubits)});
  return out;
}

inline StudyConfig study_of(const RunConfig& c) {
  StudyConfig s;
  s.grape = c.grape;
  s.rla1 = c.rla1;
  s.rla2 = c.rla2;
  s.base_seed = c.seed;
  s.ma_window = c.sweep.ma_window;
  s.jobs = c.jobs;
  return s;
}

/// Appends `part`, renumbering rows so indices stay global.
inline void append(SweepResult& all, SweepResult part) {
  all.metric = part.metric;
  const int offset = static_cast<int>(all.rows.size());
  for (auto& r : part.rows) {
    r.index += offset;
    all.rows.push_back(std::move(r));
  }
  for (auto& a : part.artifacts) all.artifacts.push_back(std::move(a));
}

}  // namespace detail

/// Runs the configured task (after apply_fast) and returns its rows.
inline TaskOutput execute(const RunConfig& cfg) {
  validate(cfg);
  const RunConfig c = apply_fast(cfg);
  const SystemSpec spec = build_system(c.system);
  const auto targets = detail::targets_of(c);
  SweepResult out;
  switch (c.task) {
    case Task::Grape: {
      GrapeConfig g = c.grape;
      out = pareto_sweep(spec, targets, {g.weights}, {{g.eps_f, g.eps_e}}, {c.seed}, g, c.jobs);
      break;
    }
    case Task::Pareto: {
      std::vector<std::uint64_t> seeds;
      for (auto s : c.sweep.seeds) seeds.push_back(c.seed + s);
      out = pareto_sweep(spec, targets, c.sweep.weights, c.sweep.learning_rates, seeds, c.grape, c.jobs);
      break;
    }
    case Task::Drlpe:
    case Task::NoiseSweep: {
      std::vector<Decoherence> schedule{spec.noise()};
      if (c.task == Task::NoiseSweep) {
        const double t = spec.total_time();
        schedule = log_schedule(c.sweep.schedule.t_max * t, c.sweep.schedule.t_min * t, c.sweep.schedule.points);
      }
      for (const auto& target : targets) {
        for (Method m : c.sweep.methods) {
          StudyConfig s = detail::study_of(c);
          s.base_seed += out.rows.size();
          detail::append(out, noise_sweep(spec, target, m, schedule, s));
        }
      }
      if (c.task == Task::Drlpe) {
        for (auto& r : out.rows) r.fidelity_ma = r.cost_ma = std::nullopt;
      }
      break;
    }
    case Task::Geodesic: {
      for (const auto& target : targets) {
        StudyConfig s = detail::study_of(c);
        s.base_seed += out.rows.size();
        detail::append(out, geodesic_experiment(spec, target, c.sweep.methods, c.sweep.weights, s));
      }
      break;
    }
  }
  if (spec.n_qubits() == 1) {
    for (auto& a : out.artifacts) {
      if (a.trajectory.empty()) a.trajectory = bloch_trajectory(spec, a.pulses, basis_state(2, 0));
    }
  }
  return {std::move(out), spec};
}

// ---------------------------------------------------------------------------
// Tables

inline std::string results_csv(const SweepResult& r) {
  std::ostringstream out;
  out << kResultsHeader << "\n";
  for (const auto& row : r.rows) {
    // Learning rates only apply to gradient rows.
    const bool grape = row.method == Method::EoGrape;
    out << row.index << ',' << method_name(row.method) << ',' << row.target << ',' << fmt(row.w_f) << ','
        << fmt(row.w_e) << ',' << (grape ? fmt(row.eps_f) : "") << ',' << (grape ? fmt(row.eps_e) : "") << ','
        << fmt(row.t1) << ',' << fmt(row.t2)
        << ',' << row.seed << ',' << metric_name(r.metric) << ',' << fmt(row.fidelity) << ',' << fmt(row.infidelity)
        << ',' << fmt(row.energetic_cost) << ',' << fmt(row.path_length) << ',' << fmt(row.fidelity_ma) << ','
        << fmt(row.cost_ma) << "\n";
  }
  return out.str();
}

inline std::string pulses_csv(const SystemSpec& spec, const PulseSet& p) {
  std::ostringstream out;
  out << "slice";
  for (const auto& c : spec.controls()) out << ',' << c.name;
  out << "\n";
  for (int n = 0; n < p.slices(); ++n) {
    out << n;
    for (int k = 0; k < p.controls(); ++k) out << ',' << fmt(p(k, n));
    out << "\n";
  }
  return out.str();
}

inline std::string trace_csv(const std::vector<GrapeIteration>& trace) {
  std::ostringstream out;
  out << "iteration,fidelity,energetic_cost,combined_cost\n";
  for (const auto& it : trace) {
    out << it.iteration << ',' << fmt(it.fidelity) << ',' << fmt(it.energetic_cost) << ',' << fmt(it.combined_cost)
        << "\n";
  }
  return out.str();
}

inline std::string episodes_csv(const std::vector<EpisodeSummary>& episodes) {
  std::ostringstream out;
  out << "episode,reward,fidelity,energetic_cost\n";
  for (const auto& e : episodes) {
    out << e.episode << ',' << fmt(e.reward) << ',' << fmt(e.fidelity) << ',' << fmt(e.energetic_cost) << "\n";
  }
  return out.str();
}

inline std::string trajectory_csv(const std::vector<BlochVector>& traj) {
  std::ostringstream out;
  out << "slice,x,y,z\n";
  for (std::size_t n = 0; n < traj.size(); ++n) {
    out << n << ',' << fmt(traj[n].x) << ',' << fmt(traj[n].y) << ',' << fmt(traj[n].z) << "\n";
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Run directory

struct RunSummary {
  std::filesystem::path dir;
  std::size_t rows = 0;
  double wall_time = 0.0;
};

namespace detail {

inline std::string run_file(const char* folder, std::size_t i) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s/run_%04zu.csv", folder, i);
  return buf;
}

/// Generic YAML -> JSON conversion for the manifest's config echo.
inline nlohmann::ordered_json to_json(const YAML::Node& n) {
  if (n.IsMap()) {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (const auto& kv : n) j[kv.first.as<std::string>()] = to_json(kv.second);
    return j;
  }
  if (n.IsSequence()) {
    nlohmann::ordered_json j = nlohmann::ordered_json::array();
    for (const auto& v : n) j.push_back(to_json(v));
    return j;
  }
  if (n.IsNull()) return nullptr;
  const std::string& s = n.Scalar();
  if (n.Tag() == "!") return s;  // quoted scalar
  if (s == "true" || s == "false") return s == "true";
  if (s == ".inf" || s == "-.inf" || s == ".nan") return s;  // JSON has no infinities
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size()) {
      if (s.find_first_of(".eE") == std::string::npos) return static_cast<std::int64_t>(std::stoll(s));
      return v;
    }
  } catch (const std::exception&) {
  }
  return s;
}

inline std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace detail

/// Validates, executes and writes a run directory at cfg.output_dir. The
/// directory must not exist or be empty; nothing is created until the task
/// has finished, and a failed write removes what was created.
inline RunSummary run(const RunConfig& cfg) {
  namespace fs = std::filesystem;
  const auto t0 = std::chrono::steady_clock::now();
  validate(cfg);
  const fs::path dir = cfg.output_dir;
  if (dir.empty()) throw ConfigError("output_dir", 0, "must not be empty");
  if (fs::exists(dir) && !(fs::is_directory(dir) && fs::is_empty(dir))) {
    throw ConfigError("output_dir", 0, "'" + dir.string() + "' already exists and is not empty");
  }

  TaskOutput task = execute(cfg);
  const SweepResult& r = task.result;

  std::vector<std::pair<std::string, std::string>> files;
  files.emplace_back("config.yaml", serialize_config(cfg));
  files.emplace_back("results.csv", results_csv(r));
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    const RunArtifacts& a = r.artifacts[i];
    files.emplace_back(detail::run_file("pulses", i), pulses_csv(task.spec, a.pulses));
    if (!a.grape_trace.empty()) files.emplace_back(detail::run_file("traces", i), trace_csv(a.grape_trace));
    if (!a.episodes.empty()) files.emplace_back(detail::run_file("episodes", i), episodes_csv(a.episodes));
    if (!a.trajectory.empty()) files.emplace_back(detail::run_file("trajectories", i), trajectory_csv(a.trajectory));
  }

  nlohmann::ordered_json manifest;
  manifest["schema_version"] = kSchemaVersion;
  manifest["task"] = std::string(task_name(cfg.task));
  manifest["metric"] = std::string(metric_name(r.metric));
  manifest["rows"] = r.rows.size();
  manifest["config"] = detail::to_json(YAML::Load(files.front().second));
  nlohmann::ordered_json hashes = nlohmann::ordered_json::object();
  for (const auto& [name, content] : files) hashes[name] = sha256_hex(content);
  manifest["files"] = hashes;
  std::vector<double> row_times;
  for (const auto& row : r.rows) row_times.push_back(row.wall_time);
  manifest["wall_time_seconds"] = {{"rows", row_times}};

  const bool created = !fs::exists(dir);
  try {
    fs::create_directories(dir);
    for (const auto& [name, content] : files) {
      const fs::path p = dir / name;
      fs::create_directories(p.parent_path());
      std::ofstream out(p, std::ios::binary);
      out << content;
      if (!out) throw std::runtime_error("cannot write " + p.string());
    }
    RunSummary summary{dir, r.rows.size(), eoqc::detail::seconds_since(t0)};
    manifest["wall_time_seconds"]["total"] = summary.wall_time;
    manifest["created_utc"] = detail::utc_now();
    std::ofstream out(dir / "manifest.json", std::ios::binary);
    out << manifest.dump(2) << "\n";
    if (!out) throw std::runtime_error("cannot write manifest.json");
    return summary;
  } catch (...) {
    std::error_code ec;
    if (created) {
      fs::remove_all(dir, ec);
    } else {
      for (const auto& entry : fs::directory_iterator(dir, ec)) fs::remove_all(entry.path(), ec);
    }
    throw;
  }
}

}  // namespace eoqc::cli
