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

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "zurn/harness/commands.hpp"

namespace zurn::harness {
namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(slurp(p));
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> row;
    std::string field;
    std::istringstream ls(line);
    while (std::getline(ls, field, ',')) row.push_back(field);
    if (!line.empty() && line.back() == ',') row.emplace_back();
    rows.push_back(row);
  }
  return rows;
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("zurn_harness_" + name);
  fs::remove_all(dir);
  return dir;
}

/// Runs the CLI through the shell; returns its exit status.
int cli(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " + ZURN_CLI_PATH + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// ------------------------------------------------------------------ config

TEST(Config, ParsesLabels) {
  EXPECT_EQ(parse_labels("-1 1"), (std::vector<std::vector<std::int64_t>>{{-1}, {1}}));
  EXPECT_EQ(parse_labels(" 1,0   0,1 "), (std::vector<std::vector<std::int64_t>>{{1, 0}, {0, 1}}));
  EXPECT_THROW(parse_labels("1,x"), ConfigError);
  EXPECT_EQ(format_labels({{1, 0}, {0, -1}}), "1,0 0,-1");
}

TEST(Config, TextWithComments) {
  ExperimentConfig cfg;
  apply_config_text(cfg, "# header\ninitial = 1,0 0,1  # plane\nseed=7\n\nadditions = 10\n"
                         "checkpoints = 3 5\nbigint = yes\noutput_dir = somewhere\n");
  EXPECT_EQ(cfg.d, 2u);
  EXPECT_EQ(cfg.seed, 7u);
  EXPECT_EQ(cfg.additions, 10u);
  EXPECT_EQ(cfg.checkpoints, (std::vector<std::uint64_t>{3, 5}));
  EXPECT_TRUE(cfg.bigint);
  EXPECT_EQ(cfg.out, "somewhere");
  EXPECT_NO_THROW(validate(cfg));
}

TEST(Config, Errors) {
  ExperimentConfig cfg;
  EXPECT_THROW(apply_config_text(cfg, "no equals sign"), ConfigError);
  EXPECT_THROW(apply_setting(cfg, "colour", "red"), ConfigError);
  EXPECT_THROW(apply_setting(cfg, "seed", "-3"), ConfigError);
  EXPECT_THROW(apply_setting(cfg, "seed", "12abc"), ConfigError);
  EXPECT_THROW(apply_setting(cfg, "bigint", "maybe"), ConfigError);
  EXPECT_THROW(apply_config_file(cfg, "/nonexistent/zurn.cfg"), ConfigError);

  const auto invalid = [](auto mutate) {
    ExperimentConfig c;
    mutate(c);
    EXPECT_THROW(validate(c), ConfigError);
  };
  invalid([](ExperimentConfig& c) { c.initial.clear(); });
  invalid([](ExperimentConfig& c) { c.d = 2; });
  invalid([](ExperimentConfig& c) { c.k = 1; });
  invalid([](ExperimentConfig& c) { c.realizations = 0; });
  invalid([](ExperimentConfig& c) { c.checkpoints = {2}; });     // not after tau0
  invalid([](ExperimentConfig& c) { c.checkpoints = {5001}; });  // beyond the end
  invalid([](ExperimentConfig& c) { c.checkpoints = {10, 10}; });
}

TEST(Config, DescribeRoundTrips) {
  ExperimentConfig cfg;
  apply_config_text(cfg, "initial = 3,-1 2,2 0,5\nseed = 99\ncheckpoints = 4 9\nadditions = 20\n"
                         "ks_draw_threshold = 0.123456789012345678\nzero_pools = true\n");
  ExperimentConfig back;
  apply_config_text(back, describe(cfg));
  EXPECT_EQ(describe(back), describe(cfg));
  EXPECT_EQ(back.ks_draw_threshold, cfg.ks_draw_threshold);
}

TEST(Config, Presets) {
  ExperimentConfig cfg;
  apply_preset(cfg, "fig1");
  EXPECT_EQ(cfg.initial, (std::vector<std::vector<std::int64_t>>{{-1}, {1}}));
  EXPECT_EQ(cfg.realizations, 1u);
  EXPECT_EQ(cfg.tau0() + cfg.additions, 5000u);
  apply_preset(cfg, "fig2a");
  EXPECT_EQ(cfg.realizations, 5000u);
  apply_preset(cfg, "fig2b");
  EXPECT_EQ(cfg.initial, (std::vector<std::vector<std::int64_t>>{{1}, {1}}));
  EXPECT_EQ(cfg.realizations, 5000u);
  EXPECT_THROW(apply_preset(cfg, "fig3"), ConfigError);
}

// --------------------------------------------------------------- utilities

TEST(Csv, DoublesRoundTrip) {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 5e-324}) {
    EXPECT_EQ(std::strtod(format_double(v).c_str(), nullptr), v);
  }
  EXPECT_EQ(format_double(std::numeric_limits<double>::infinity()), "inf");
  EXPECT_EQ(format_double(-std::numeric_limits<double>::infinity()), "-inf");
  EXPECT_EQ(format_double(std::nan("")), "nan");
}

TEST(Csv, WritesHeaderAndLfRows) {
  const auto dir = scratch("csv");
  ensure_directory(dir);
  {
    CsvWriter w(dir / "t.csv", {"a", "b"});
    w.row({"1", "2"});
    w.close();
  }
  EXPECT_EQ(slurp(dir / "t.csv"), "a,b\n1,2\n");
  EXPECT_THROW(CsvWriter(dir / "missing" / "t.csv", {"a"}), IoError);
}

TEST(OrderedParallel, ConsumesInOrderForAnyThreadCount) {
  for (unsigned threads : {1u, 2u, 7u}) {
    std::vector<std::uint64_t> seen;
    ordered_parallel(
        1000, threads, [](std::uint64_t r) { return r * r; },
        [&](std::uint64_t r, std::uint64_t v) {
          EXPECT_EQ(v, r * r);
          seen.push_back(r);
        });
    ASSERT_EQ(seen.size(), 1000u);
    for (std::uint64_t i = 0; i < seen.size(); ++i) ASSERT_EQ(seen[i], i);
  }
}

TEST(OrderedParallel, PropagatesExceptions) {
  EXPECT_THROW(ordered_parallel(
                   300, 4,
                   [](std::uint64_t r) -> int {
                     if (r == 123) throw std::runtime_error("boom");
                     return 0;
                   },
                   [](std::uint64_t, int) {}),
               std::runtime_error);
}

// --------------------------------------------------------------------- CLI

TEST(Cli, Fig1PresetWritesFiveThousandLabels) {
  const auto dir = scratch("fig1");
  ASSERT_EQ(cli("simulate --preset fig1 --out " + dir.string()), 0);
  const auto labels = read_csv(dir / "labels_final.csv");
  ASSERT_EQ(labels.size(), 5001u);
  EXPECT_EQ(labels[0], (std::vector<std::string>{"realization", "index", "x1"}));
  EXPECT_EQ(labels[1], (std::vector<std::string>{"0", "0", "-1"}));
  EXPECT_EQ(labels[2], (std::vector<std::string>{"0", "1", "1"}));
  const auto summary = read_csv(dir / "summary.csv");
  ASSERT_EQ(summary.size(), 2u);
  EXPECT_EQ(summary[1][1], "ok");
  EXPECT_EQ(summary[1][2], "5000");
  const std::string manifest = slurp(dir / "manifest.txt");
  EXPECT_NE(manifest.find("seed = 20190501"), std::string::npos);
  EXPECT_NE(manifest.find("zurn_version = "), std::string::npos);
}

TEST(Cli, ZeroAdditionsReproducesTheInitialUrn) {
  const auto dir = scratch("n0");
  ASSERT_EQ(cli("simulate --set 'initial=3,1 -2,4 5,0' --additions 0 --out " + dir.string()), 0);
  const auto labels = read_csv(dir / "labels_final.csv");
  ASSERT_EQ(labels.size(), 4u);
  EXPECT_EQ(labels[1], (std::vector<std::string>{"0", "0", "3", "1"}));
  EXPECT_EQ(labels[2], (std::vector<std::string>{"0", "1", "-2", "4"}));
  EXPECT_EQ(labels[3], (std::vector<std::string>{"0", "2", "5", "0"}));
  const auto summary = read_csv(dir / "summary.csv");
  // A = S / (3 * 4).
  EXPECT_EQ(std::stod(summary[1][3]), 6.0 / 12.0);
  EXPECT_EQ(std::stod(summary[1][4]), 5.0 / 12.0);
}

TEST(Cli, ZeroAdditionsGivesEqualAAcrossRealizations) {
  const auto dir = scratch("m2n0");
  ASSERT_EQ(cli("a-distribution --set 'initial=1 1' --realizations 2 --additions 0 --out " +
                dir.string()),
            0);
  const auto rows = read_csv(dir / "a_final.csv");
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[1][2], rows[2][2]);
  EXPECT_EQ(std::stod(rows[1][2]), 1.0 / 3.0);
}

TEST(Cli, MomentsCheckExactOneStepCase) {
  const auto dir = scratch("moments3");
  ASSERT_EQ(cli("moments-check --set 'initial=1 1' --additions 1 --set checkpoints=3 "
                "--realizations 50 --out " + dir.string()),
            0);
  const auto rows = read_csv(dir / "moments.csv");
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[1], (std::vector<std::string>{"3", "16", "6", "16", "6", "0", "0", "0", "0"}));
}

TEST(Cli, ExitCodes) {
  const auto dir = scratch("codes");
  const std::string out = " --out " + dir.string();
  EXPECT_EQ(cli("simulate --set colour=red" + out), 2);
  EXPECT_EQ(cli("simulate --preset fig9" + out), 2);
  EXPECT_EQ(cli("simulate --config /nonexistent.cfg" + out), 2);
  EXPECT_EQ(cli("simulate --additions 0 --out /proc/zurn_cannot_write"), 2);
  EXPECT_EQ(cli("moments-check --set 'initial=1,0 0,1'" + out), 2);
  EXPECT_EQ(cli("no-such-command"), 2);
  // z is almost surely nonzero, so a zero threshold must fail.
  EXPECT_EQ(cli("a-distribution --realizations 20 --additions 50 --set a_z_threshold=0" + out), 1);
}

TEST(Cli, OverflowIsReportedAndBigIntRecovers) {
  // 3037000499^2 is just below 2^63, so the first added label overflows R and Q.
  const auto dir = scratch("overflow");
  const std::string base = "--set initial=3037000499 --additions 3 --realizations 2 --out ";
  EXPECT_EQ(cli("simulate " + base + dir.string()), 3);
  const auto summary = read_csv(dir / "summary.csv");
  ASSERT_EQ(summary.size(), 3u);
  EXPECT_EQ(summary[1][1], "overflow");
  EXPECT_EQ(summary[2][1], "overflow");
  EXPECT_EQ(cli("moments-check " + base + dir.string()), 3);

  EXPECT_EQ(cli("simulate --set bigint=true " + base + dir.string()), 0);
  const auto labels = read_csv(dir / "labels_final.csv");
  ASSERT_EQ(labels.size(), 9u);
  // A one-ball urn can only draw that ball twice.
  EXPECT_EQ(labels[2][2], "6074000998");
  EXPECT_EQ(cli("moments-check --set bigint=true " + base + dir.string()), 0);
}

TEST(Cli, SeedPrecedence) {
  const auto dir = scratch("seed");
  const fs::path cfg = dir.string() + ".cfg";
  {
    std::ofstream f(cfg);
    f << "seed = 5\nadditions = 3\n";
  }
  const std::string args = "simulate --config " + cfg.string() + " --out " + dir.string();
  ASSERT_EQ(cli(args), 0);
  EXPECT_NE(slurp(dir / "manifest.txt").find("seed = 5\n"), std::string::npos);
  ASSERT_EQ(cli(args, "ZURN_SEED=6"), 0);
  EXPECT_NE(slurp(dir / "manifest.txt").find("seed = 6\n"), std::string::npos);
  ASSERT_EQ(cli(args + " --seed 7", "ZURN_SEED=6"), 0);
  EXPECT_NE(slurp(dir / "manifest.txt").find("seed = 7\n"), std::string::npos);
  fs::remove(cfg);
}

std::map<std::string, std::string> csv_files(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.path().extension() == ".csv") out[e.path().filename().string()] = slurp(e.path());
  }
  return out;
}

TEST(Cli, OutputIsIndependentOfThreadCount) {
  const std::vector<std::string> runs{
      "simulate --set 'initial=1,0 0,1' --realizations 150 --additions 300 "
      "--set 'checkpoints=10 100 302'",
      "limit-check --set 'initial=1 1' --realizations 130 --additions 1500",
      "moments-check --realizations 300 --additions 30 --set 'checkpoints=5 32'",
      "fixed-point --set pool_size=3000 --set stationarity_trials=9 --set k3_iterations=3",
  };
  for (const auto& args : runs) {
    std::vector<std::map<std::string, std::string>> outputs;
    for (const std::string threads : {"1", "4", "3", "1"}) {
      const auto dir = scratch("threads" + std::to_string(outputs.size()));
      const int rc = cli(args + " --threads " + threads + " --out " + dir.string());
      ASSERT_TRUE(rc == 0 || rc == 1) << args;
      outputs.push_back(csv_files(dir));
      ASSERT_FALSE(outputs.back().empty());
    }
    for (std::size_t i = 1; i < outputs.size(); ++i) EXPECT_EQ(outputs[i], outputs[0]) << args;
  }
}

TEST(Cli, ZeroPoolsHaveZeroDistance) {
  const auto dir = scratch("zero");
  cli("fixed-point --set zero_pools=true --set pool_size=500 --set stationarity_trials=2 "
      "--set k3_iterations=2 --out " + dir.string());
  const auto rows = read_csv(dir / "fixedpoint.csv");
  ASSERT_EQ(rows.size(), 12u);
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_EQ(std::stod(rows[i][1]), 0.0);
  bool skipped = false;
  for (const auto& r : read_csv(dir / "fixedpoint_checks.csv")) {
    if (r[0] == "contraction") skipped = r[3] == "skip";
  }
  EXPECT_TRUE(skipped);
}

TEST(Cli, LimitCheckExcludesZeroA) {
  const auto dir = scratch("excl");
  // {0, 0} never leaves A = 0, so every realization is excluded.
  EXPECT_EQ(cli("limit-check --set 'initial=0 0' --realizations 5 --additions 200 --out " +
                dir.string()),
            0);
  const auto rows = read_csv(dir / "limit_report.csv");
  const auto& last = rows.back();
  EXPECT_EQ(last[0], "excluded_small_a");
  EXPECT_EQ(last[3], "5");
}

TEST(Commands, RunInProcess) {
  ExperimentConfig cfg;
  cfg.initial = {{1}, {1}};
  cfg.additions = 100;
  cfg.realizations = 200;
  cfg.out = scratch("inproc").string();
  std::ostringstream log, err;
  EXPECT_EQ(run_command("a-distribution", cfg, log, err), 0) << err.str();
  EXPECT_NE(log.str().find("oracle 0.33333333333333331"), std::string::npos) << log.str();
  EXPECT_EQ(run_command("bogus", cfg, log, err), kExitConfigOrIo);
}

}  // namespace
}  // namespace zurn::harness
