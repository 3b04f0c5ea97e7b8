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

#include <gtest/gtest.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "eoqc/cli/run.hpp"
#include "json.hpp"

namespace eoqc::cli {
namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t line_count(const fs::path& p) {
  const std::string s = slurp(p);
  return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

class Scratch : public ::testing::Test {
 protected:
  void SetUp() override {
    root_ = fs::temp_directory_path() /
            ("eoqc_cli_" + std::to_string(::getpid()) + "_" +
             ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(root_);
    fs::create_directories(root_);
  }
  void TearDown() override { fs::remove_all(root_); }

  RunConfig config(Task task, const std::string& name) const {
    RunConfig c = default_config(task);
    c.output_dir = (root_ / name).string();
    return c;
  }

  fs::path root_;
};

// ---------------------------------------------------------------------------
// Parsing

TEST(ParseConfig, MinimalFillsDefaults) {
  const RunConfig c = parse_config_text("task: grape\n");
  EXPECT_EQ(c, default_config(Task::Grape));
  EXPECT_EQ(c.system.slices, 100);
  EXPECT_EQ(c.grape.n_iterations, 500);
  EXPECT_EQ(c.targets, std::vector<std::string>{"hadamard"});
  EXPECT_TRUE(std::isinf(c.system.t1));
}

TEST(ParseConfig, TaskFromHintOrFile) {
  EXPECT_EQ(parse_config_text("", Task::Pareto), default_config(Task::Pareto));
  EXPECT_THROW(parse_config_text(""), ConfigError);
  try {
    parse_config_text("task: pareto\n", Task::Grape);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.field(), "task");
  }
}

TEST(ParseConfig, T2AboveTwiceT1NamesT2) {
  try {
    parse_config_text("task: grape\nsystem:\n  t1: 10\n  t2: 30\n");
    FAIL() << "expected an error";
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.field(), "system.t2");
    EXPECT_EQ(e.line(), 4);
    EXPECT_NE(std::string(e.what()).find("t2"), std::string::npos);
  }
  EXPECT_NO_THROW(parse_config_text("task: grape\nsystem:\n  t1: 10\n  t2: 20\n"));
}

TEST(ParseConfig, UnknownKeysRejectedWithPathAndLine) {
  try {
    parse_config_text("task: grape\nsystem:\n  qubits: 1\n  qubitz: 1\n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.field(), "system.qubitz");
    EXPECT_EQ(e.line(), 4);
  }
  try {
    parse_config_text("task: grape\nverbose: true\n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.field(), "verbose");
    EXPECT_EQ(e.line(), 2);
  }
  try {
    parse_config_text("task: noise-sweep\nsweep:\n  schedule:\n    t_mid: 3\n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.field(), "sweep.schedule.t_mid");
  }
}

TEST(ParseConfig, TypeAndValueErrors) {
  auto field_of = [](const std::string& text) {
    try {
      parse_config_text(text);
    } catch (const ConfigError& e) {
      return e.field();
    }
    return std::string("<none>");
  };
  EXPECT_EQ(field_of("task: grape\nsystem:\n  slices: many\n"), "system.slices");
  EXPECT_EQ(field_of("task: grape\nsystem:\n  slices: 2.5\n"), "system.slices");
  EXPECT_EQ(field_of("task: grape\nseed: -1\n"), "seed");
  EXPECT_EQ(field_of("task: grape\nsystem:\n  drift: xx\n"), "system.drift");
  EXPECT_EQ(field_of("task: grape\nsystem:\n  controls: [x1, q1]\n"), "system.controls[1]");
  EXPECT_EQ(field_of("task: grape\nsystem:\n  qubits: 2\n"), "system.drift");
  EXPECT_EQ(field_of("task: grape\ntarget: cnot\n"), "target");
  EXPECT_EQ(field_of("task: grape\ntarget: haar(x)\n"), "target");
  EXPECT_EQ(field_of("task: grape\ngrape:\n  w_f: 0.5\n"), "grape.w_e");
  EXPECT_EQ(field_of("task: grape\ngrape:\n  eps_e: 0\n"), "grape.eps_e");
  EXPECT_EQ(field_of("task: grape\nrla1:\n  hidden_layers: [4, 0]\n"), "rla1.hidden_layers[1]");
  EXPECT_EQ(field_of("task: geodesic\nsweep:\n  weights: [[0.5, 0.6]]\n"), "sweep.weights[0]");
  EXPECT_EQ(field_of("task: geodesic\nsweep:\n  methods: [krotov]\n"), "sweep.methods[0]");
  EXPECT_EQ(field_of("task: drlpe\nsweep:\n  methods: [eo-grape]\n"), "sweep.methods[0]");
  EXPECT_EQ(field_of("task: noise-sweep\nsweep:\n  schedule: {t_max: 1, t_min: 10}\n"), "sweep.schedule.t_max");
  EXPECT_EQ(field_of("task: geodesic\nsystem: {qubits: 2, drift: zz, controls: [x1]}\ntarget: identity\n"),
            "system.qubits");
  EXPECT_EQ(field_of("task: grape\nsystem: [1, 2]\n"), "system");
  EXPECT_EQ(field_of("task: grape\nsystem:\n  t1: [1\n"), "");
}

TEST(ParseConfig, RoundTripsDefaults) {
  for (const auto& [task, name] : kTaskNames) {
    const RunConfig c = default_config(task);
    EXPECT_EQ(parse_config_text(serialize_config(c)), c) << name;
  }
}

TEST(ParseConfig, RoundTripsCustomValues) {
  RunConfig c = default_config(Task::NoiseSweep);
  c.seed = 18446744073709551615ull;
  c.fast = true;
  c.jobs = 3;
  c.output_dir = "out dir/with: colon";
  c.system.omega1 = 0.1 + 0.2;
  c.system.total_time = 1.0 / 3.0;
  c.system.t1 = 7.25;
  c.system.t2 = 1e-3;
  c.system.controls = {"x1", "y1", "z1"};
  c.targets = {"hadamard", "t", "haar(42)"};
  c.grape.weights = {0.7, 0.30000000000000004};
  c.grape.gradient = GradientMode::FirstOrder;
  c.grape.init_scale = 0.0;
  c.rla1.hidden_layers = {3};
  c.rla2.imitation = ImitationNorm::L1;
  c.rla2.learning_rate = 1.2345678901234567e-5;
  c.sweep.weights = {{1, 0}, {0.25, 0.75}};
  c.sweep.learning_rates = {{1, 100}};
  c.sweep.seeds = {0, 5, 9};
  c.sweep.methods = {Method::EoGrape, Method::EoDrlpe, Method::EoDrlpeWarm};
  c.sweep.schedule = {50.5, 0.5, 7};
  c.sweep.ma_window = 5;
  validate(c);
  const std::string text = serialize_config(c);
  const RunConfig back = parse_config_text(text);
  EXPECT_EQ(back, c);
  EXPECT_EQ(serialize_config(back), text);
}

TEST(ParseConfig, SampleRecipesAreValid) {
  std::size_t seen = 0;
  for (const auto& entry : fs::directory_iterator(EOQC_CONFIG_DIR)) {
    if (entry.path().extension() != ".yaml") continue;
    ++seen;
    const RunConfig c = parse_config_file(entry.path().string());
    EXPECT_EQ(parse_config_text(serialize_config(c)), c) << entry.path();
  }
  EXPECT_EQ(seen, kTaskNames.size());
}

TEST(Targets, ResolveNamesAndHaar) {
  EXPECT_TRUE(resolve_target("hadamard", 1).isApprox(gate_matrix(NamedGate::Hadamard)));
  EXPECT_TRUE(resolve_target("identity", 2).isApprox(identity(4)));
  EXPECT_TRUE(resolve_target("haar(3)", 2).isApprox(haar_random_unitary(4, 3)));
  EXPECT_THROW(resolve_target("cnot", 1), std::invalid_argument);
  EXPECT_THROW(resolve_target("haar()", 1), std::invalid_argument);
  EXPECT_THROW(resolve_target("swap", 2), std::invalid_argument);
}

TEST(ApplyFast, DividesIterationsAndEpisodes) {
  RunConfig c = default_config(Task::Drlpe);
  EXPECT_EQ(apply_fast(c), c);
  c.fast = true;
  c.rla2.n_episodes = 5;
  const RunConfig f = apply_fast(c);
  EXPECT_EQ(f.grape.n_iterations, 50);
  EXPECT_EQ(f.rla1.n_episodes, 200);
  EXPECT_EQ(f.rla2.n_episodes, 1);
}

// ---------------------------------------------------------------------------
// Run directories

TEST_F(Scratch, GrapeFastTraceHasTenthOfIterations) {
  RunConfig c = config(Task::Grape, "grape");
  c.fast = true;
  const RunSummary s = run(c);
  EXPECT_EQ(s.rows, 1u);
  const fs::path dir = root_ / "grape";
  EXPECT_EQ(line_count(dir / "traces/run_0000.csv"), 1u + c.grape.n_iterations / 10);
  EXPECT_EQ(line_count(dir / "pulses/run_0000.csv"), 1u + 100u);
  EXPECT_EQ(slurp(dir / "pulses/run_0000.csv").substr(0, 9), "slice,x1\n");
  EXPECT_EQ(line_count(dir / "results.csv"), 2u);
  EXPECT_EQ(slurp(dir / "results.csv").substr(0, std::string(kResultsHeader).size()), kResultsHeader);
  EXPECT_EQ(parse_config_text(slurp(dir / "config.yaml")), c);
}

TEST_F(Scratch, ManifestHashesEveryFile) {
  RunConfig c = config(Task::Geodesic, "geo");
  c.fast = true;
  c.sweep.weights = {{1, 0}, {0.5, 0.5}};
  run(c);
  const fs::path dir = root_ / "geo";
  const auto manifest = nlohmann::json::parse(slurp(dir / "manifest.json"));
  EXPECT_EQ(manifest["schema_version"], kSchemaVersion);
  EXPECT_EQ(manifest["task"], "geodesic");
  EXPECT_EQ(manifest["metric"], "process");
  EXPECT_EQ(manifest["config"]["system"]["controls"], nlohmann::json({"x1", "y1"}));
  std::size_t files = 0;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (!entry.is_regular_file() || entry.path().filename() == "manifest.json") continue;
    ++files;
    const std::string rel = fs::relative(entry.path(), dir).generic_string();
    ASSERT_TRUE(manifest["files"].contains(rel)) << rel;
    EXPECT_EQ(manifest["files"][rel], sha256_hex(slurp(entry.path())));
  }
  EXPECT_EQ(files, manifest["files"].size());
}

TEST_F(Scratch, GeodesicTrajectoriesHaveNPlusOneRows) {
  RunConfig c = config(Task::Geodesic, "geo");
  c.fast = true;
  const RunSummary s = run(c);
  EXPECT_EQ(s.rows, 10u);
  for (std::size_t i = 0; i < s.rows; ++i) {
    const fs::path p = root_ / "geo" / detail::run_file("trajectories", i);
    EXPECT_EQ(line_count(p), 1u + static_cast<std::size_t>(c.system.slices) + 1u) << p;
    EXPECT_EQ(slurp(p).substr(0, 11), "slice,x,y,z");
  }
}

TEST_F(Scratch, RepeatedRunsAreByteIdentical) {
  for (Task task : {Task::Pareto, Task::Geodesic, Task::NoiseSweep, Task::Drlpe}) {
    RunConfig a = config(task, std::string(task_name(task)) + "_a");
    a.fast = true;
    a.sweep.weights = {{1, 0}, {0.6, 0.4}};
    a.sweep.learning_rates = {{1, 3}};
    a.sweep.schedule.points = 3;
    a.rla1.n_episodes = 64;
    a.rla1.hidden_layers = {8};
    RunConfig b = a;
    b.output_dir = (root_ / (std::string(task_name(task)) + "_b")).string();
    b.jobs = 3;  // row-level threading must not change any table
    run(a);
    run(b);
    std::size_t compared = 0;
    for (const auto& entry : fs::recursive_directory_iterator(a.output_dir)) {
      if (entry.path().extension() != ".csv") continue;
      const fs::path rel = fs::relative(entry.path(), a.output_dir);
      EXPECT_EQ(slurp(entry.path()), slurp(fs::path(b.output_dir) / rel)) << task_name(task) << " " << rel;
      ++compared;
    }
    EXPECT_GT(compared, 2u);
  }
}

TEST_F(Scratch, InvalidConfigLeavesNoDirectory) {
  RunConfig c = config(Task::Grape, "bad");
  c.system.t1 = 1.0;
  c.system.t2 = 3.0;
  EXPECT_THROW(run(c), ConfigError);
  EXPECT_FALSE(fs::exists(root_ / "bad"));
}

TEST_F(Scratch, RefusesNonEmptyOutputDirectory) {
  fs::create_directories(root_ / "taken");
  std::ofstream(root_ / "taken" / "keep.txt") << "x";
  RunConfig c = config(Task::Grape, "taken");
  c.fast = true;
  EXPECT_THROW(run(c), ConfigError);
  EXPECT_EQ(slurp(root_ / "taken" / "keep.txt"), "x");
  fs::remove(root_ / "taken" / "keep.txt");
  EXPECT_NO_THROW(run(c));
}

TEST_F(Scratch, SweepRowsAndSeeds) {
  RunConfig c = config(Task::NoiseSweep, "ns");
  c.fast = true;
  c.seed = 100;
  c.sweep.schedule.points = 4;
  run(c);
  std::istringstream rows(slurp(root_ / "ns" / "results.csv"));
  std::string line;
  std::getline(rows, line);
  int i = 0;
  while (std::getline(rows, line)) {
    std::vector<std::string> cols;
    std::stringstream ls(line);
    for (std::string cell; std::getline(ls, cell, ',');) cols.push_back(cell);
    ASSERT_GE(cols.size(), 16u);
    EXPECT_EQ(cols[0], std::to_string(i));
    EXPECT_EQ(cols[9], std::to_string(100 + i));
    EXPECT_EQ(cols[10], "noisy_state");
    ++i;
  }
  EXPECT_EQ(i, 4);
}

// ---------------------------------------------------------------------------
// Executable

class Tool : public Scratch {
 protected:
  int invoke(const std::string& args, const std::string& env = "") const {
    const std::string cmd = env + " " + EOQC_TOOL_PATH + " " + args + " > " + (root_ / "log.txt").string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }
  std::string log() const { return slurp(root_ / "log.txt"); }
};

TEST_F(Tool, GrapeFastSucceeds) {
  const fs::path out = root_ / "run";
  EXPECT_EQ(invoke("grape --target hadamard --fast --out " + out.string()), 0) << log();
  EXPECT_EQ(line_count(out / "traces/run_0000.csv"), 51u);
}

TEST_F(Tool, InvalidConfigExitsNonzeroWithoutDirectory) {
  const fs::path cfg = root_ / "bad.yaml";
  std::ofstream(cfg) << "task: grape\nsystem:\n  t1: 1.0\n  t2: 3.0\n";
  const fs::path out = root_ / "run";
  EXPECT_NE(invoke("grape --config " + cfg.string() + " --out " + out.string()), 0);
  EXPECT_NE(log().find("system.t2"), std::string::npos) << log();
  EXPECT_FALSE(fs::exists(out));
}

TEST_F(Tool, EnvironmentSetsOutputDirectory) {
  const fs::path out = root_ / "from_env";
  EXPECT_EQ(invoke("grape --fast --seed 3", "EOQC_OUT_DIR=" + out.string()), 0) << log();
  EXPECT_TRUE(fs::exists(out / "results.csv"));
  const fs::path flag = root_ / "from_flag";
  EXPECT_EQ(invoke("grape --fast --out " + flag.string(), "EOQC_OUT_DIR=" + out.string()), 0) << log();
  EXPECT_TRUE(fs::exists(flag / "results.csv"));
}

TEST_F(Tool, UnknownTargetFails) {
  EXPECT_NE(invoke("grape --target swap --out " + (root_ / "x").string()), 0);
  EXPECT_NE(log().find("target"), std::string::npos);
  EXPECT_FALSE(fs::exists(root_ / "x"));
}

}  // namespace
}  // namespace eoqc::cli
