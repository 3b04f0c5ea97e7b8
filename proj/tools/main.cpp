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

#include <cstdlib>
#include <iostream>

#include "CLI11.hpp"
#include "eoqc/cli/run.hpp"

namespace {

struct Flags {
  std::string config;
  bool fast = false;
  std::optional<int> jobs;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::vector<std::string> targets;
};

eoqc::cli::RunConfig resolve(eoqc::cli::Task task, const Flags& f) {
  using namespace eoqc::cli;
  RunConfig c = f.config.empty() ? default_config(task) : parse_config_file(f.config, task);
  // Precedence for the run directory: --out, then EOQC_OUT_DIR, then the config.
  if (const char* env = std::getenv("EOQC_OUT_DIR"); env && *env) c.output_dir = env;
  if (!f.out.empty()) c.output_dir = f.out;
  if (f.fast) c.fast = true;
  if (f.jobs) c.jobs = *f.jobs;
  if (f.seed) c.seed = *f.seed;
  if (!f.targets.empty()) c.targets = f.targets;
  validate(c);
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"eoqc: energy-optimized quantum pulse engineering"};
  app.require_subcommand(1);
  Flags flags;
  for (const auto& [task, name] : eoqc::cli::kTaskNames) {
    CLI::App* sub = app.add_subcommand(std::string(name));
    sub->add_option("--config", flags.config, "YAML run configuration")->check(CLI::ExistingFile);
    sub->add_flag("--fast", flags.fast, "divide GRAPE iterations and RL episodes by 10");
    sub->add_option("--jobs", flags.jobs, "worker threads for independent rows")->check(CLI::PositiveNumber);
    sub->add_option("--seed", flags.seed, "base seed");
    sub->add_option("--out", flags.out, "run directory (overrides EOQC_OUT_DIR and output_dir)");
    sub->add_option("--target", flags.targets, "target gate name or haar(<seed>); repeatable");
  }
  CLI11_PARSE(app, argc, argv);

  const CLI::App* chosen = app.get_subcommands().front();
  const auto task = *eoqc::cli::parse_task(chosen->get_name());
  try {
    const eoqc::cli::RunConfig cfg = resolve(task, flags);
    const auto summary = eoqc::cli::run(cfg);
    std::cout << chosen->get_name() << ": " << summary.rows << " row(s) written to " << summary.dir.string() << " in "
              << summary.wall_time << " s\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "eoqc " << chosen->get_name() << ": " << e.what() << "\n";
    return 1;
  }
}
