// Copyright 2026 The zurn Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// zurn: command-line front end for the urn experiments.
//
//   zurn <command> [--preset P] [--config FILE] [--seed S] [--realizations M]
//                  [--additions N] [--out DIR] [--threads T] [--set key=value]...
//
// Settings are layered: preset, then config file, then ZURN_SEED, then flags.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "zurn/harness/commands.hpp"

namespace {

using zurn::harness::ConfigError;
using zurn::harness::ExperimentConfig;

struct Flags {
  std::string preset;
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> realizations;
  std::optional<std::uint64_t> additions;
  std::optional<std::string> out;
  std::optional<unsigned> threads;
  std::vector<std::string> settings;
};

ExperimentConfig build_config(const Flags& f) {
  ExperimentConfig cfg;
  if (!f.preset.empty()) zurn::harness::apply_preset(cfg, f.preset);
  if (!f.config.empty()) zurn::harness::apply_config_file(cfg, f.config);
  if (const char* env = std::getenv("ZURN_SEED"); env && *env) {
    zurn::harness::apply_setting(cfg, "seed", env);
  }
  for (const auto& kv : f.settings) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
    zurn::harness::apply_setting(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (f.seed) cfg.seed = *f.seed;
  if (f.realizations) cfg.realizations = *f.realizations;
  if (f.additions) cfg.additions = *f.additions;
  if (f.out) cfg.out = *f.out;
  if (f.threads) cfg.threads = *f.threads;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Addition-urn simulation and verification lab"};
  app.set_version_flag("--version", std::string("zurn ") + zurn::harness::kVersion);
  app.require_subcommand(1);

  Flags flags;
  const std::vector<std::pair<std::string, std::string>> commands{
      {"simulate", "Run realizations; write final labels, A_n traces and a summary"},
      {"a-distribution", "Sample A_N over realizations and test its mean"},
      {"moments-check", "Compare Monte Carlo E[R_n], E[Q_n] with the exact recursion"},
      {"limit-check", "Test the exponential and Gamma(2,1) limit laws"},
      {"fixed-point", "Run the distributional fixed-point experiments"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--preset", flags.preset, "fig1, fig2a or fig2b")
        ->check(CLI::IsMember({"fig1", "fig2a", "fig2b"}));
    sub->add_option("--config", flags.config, "key = value config file");
    sub->add_option("--seed", flags.seed, "Master seed");
    sub->add_option("--realizations", flags.realizations, "Number of realizations M");
    sub->add_option("--additions", flags.additions, "Balls added per realization N");
    sub->add_option("--out", flags.out, "Output directory");
    sub->add_option("--threads", flags.threads, "Worker threads (0: all cores)");
    sub->add_option("--set", flags.settings, "Override one config key (key=value)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : zurn::harness::kExitConfigOrIo;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  ExperimentConfig cfg;
  try {
    cfg = build_config(flags);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return zurn::harness::kExitConfigOrIo;
  }
  return zurn::harness::run_command(name, cfg, std::cout, std::cerr);
}
