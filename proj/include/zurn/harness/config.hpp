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

// Experiment configuration: a flat "key = value" text file, presets, and the
// override chain preset < file < ZURN_SEED < command-line flags.

#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace zurn::harness {

/// Malformed or inconsistent configuration. Maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  std::vector<std::vector<std::int64_t>> initial{{-1}, {1}};
  std::size_t d = 1;
  int k = 2;
  std::uint64_t additions = 4998;
  std::uint64_t realizations = 1;
  std::uint64_t seed = 20190501;
  std::vector<std::uint64_t> checkpoints;
  std::string out = "zurn_out";
  bool bigint = false;
  unsigned threads = 0;  // 0: hardware concurrency

  // Statistical thresholds.
  double z_threshold = 4.0;          // moments-check
  double a_z_threshold = 3.0;        // a-distribution
  double ks_draw_threshold = 0.05;   // limit-check, quenched draw law
  double ks_added_threshold = 0.03;  // limit-check, pooled added-ball law
  double coupling_threshold = 0.1;   // limit-check, d = 2
  std::uint64_t coupling_tail = 500;
  double min_abs_a = 1e-6;
  std::uint64_t min_pooled = 100;    // fewer included realizations: pooled check skipped
  bool write_labels = true;          // simulate: labels_final.csv

  // fixed-point.
  std::uint64_t pool_size = 100000;
  std::uint64_t exp_iterations = 30;
  std::uint64_t noise_pairs = 10;
  std::uint64_t stationarity_trials = 100;
  std::uint64_t stationarity_iterations = 1;
  double stationarity_alpha = 0.01;
  double stationarity_min_pass = 0.95;
  std::uint64_t contraction_steps = 10;
  double contraction_low = 0.55;
  double contraction_high = 0.78;
  std::uint64_t k3_iterations = 40;
  double k3_alpha = 0.01;
  bool zero_pools = false;

  std::uint64_t tau0() const { return initial.size(); }
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(const std::string& key, const std::string& text) {
  T value{};
  const char* first = text.data();
  const char* last = first + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw ConfigError("bad value for '" + key + "': '" + text + "'");
  }
  return value;
}

inline bool parse_bool(const std::string& key, const std::string& text) {
  std::string t = text;
  std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::tolower(c); });
  if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
  if (t == "false" || t == "0" || t == "no" || t == "off") return false;
  throw ConfigError("bad boolean for '" + key + "': '" + text + "'");
}

}  // namespace detail

/// Labels are whitespace-separated; coordinates of one label are
/// comma-separated: "-1 1" or "1,0 0,1".
inline std::vector<std::vector<std::int64_t>> parse_labels(const std::string& text) {
  std::vector<std::vector<std::int64_t>> labels;
  std::istringstream in(text);
  std::string token;
  while (in >> token) {
    std::vector<std::int64_t> label;
    std::size_t start = 0;
    while (true) {
      const auto comma = token.find(',', start);
      label.push_back(detail::parse_number<std::int64_t>(
          "initial", token.substr(start, comma == std::string::npos ? std::string::npos
                                                                    : comma - start)));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    labels.push_back(std::move(label));
  }
  return labels;
}

inline std::string format_labels(const std::vector<std::vector<std::int64_t>>& labels) {
  std::string out;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (i) out += ' ';
    for (std::size_t c = 0; c < labels[i].size(); ++c) {
      if (c) out += ',';
      out += std::to_string(labels[i][c]);
    }
  }
  return out;
}

/// Sets one key. Unknown keys are errors.
inline void apply_setting(ExperimentConfig& cfg, const std::string& raw_key,
                          const std::string& raw_value) {
  using detail::parse_bool;
  using detail::parse_number;
  const std::string key = detail::trim(raw_key);
  const std::string value = detail::trim(raw_value);
  auto u64 = [&] { return parse_number<std::uint64_t>(key, value); };
  auto dbl = [&] { return parse_number<double>(key, value); };

  if (key == "initial") {
    cfg.initial = parse_labels(value);
    if (!cfg.initial.empty()) cfg.d = cfg.initial.front().size();
  } else if (key == "d") {
    cfg.d = u64();
  } else if (key == "k") {
    cfg.k = parse_number<int>(key, value);
  } else if (key == "additions") {
    cfg.additions = u64();
  } else if (key == "realizations") {
    cfg.realizations = u64();
  } else if (key == "seed") {
    cfg.seed = u64();
  } else if (key == "checkpoints") {
    cfg.checkpoints.clear();
    std::istringstream in(value);
    std::string tok;
    while (in >> tok) cfg.checkpoints.push_back(parse_number<std::uint64_t>(key, tok));
  } else if (key == "out" || key == "output_dir") {
    cfg.out = value;
  } else if (key == "bigint") {
    cfg.bigint = parse_bool(key, value);
  } else if (key == "threads") {
    cfg.threads = parse_number<unsigned>(key, value);
  } else if (key == "z_threshold") {
    cfg.z_threshold = dbl();
  } else if (key == "a_z_threshold") {
    cfg.a_z_threshold = dbl();
  } else if (key == "ks_draw_threshold") {
    cfg.ks_draw_threshold = dbl();
  } else if (key == "ks_added_threshold") {
    cfg.ks_added_threshold = dbl();
  } else if (key == "coupling_threshold") {
    cfg.coupling_threshold = dbl();
  } else if (key == "coupling_tail") {
    cfg.coupling_tail = u64();
  } else if (key == "min_abs_a") {
    cfg.min_abs_a = dbl();
  } else if (key == "min_pooled") {
    cfg.min_pooled = u64();
  } else if (key == "write_labels") {
    cfg.write_labels = parse_bool(key, value);
  } else if (key == "pool_size") {
    cfg.pool_size = u64();
  } else if (key == "exp_iterations") {
    cfg.exp_iterations = u64();
  } else if (key == "noise_pairs") {
    cfg.noise_pairs = u64();
  } else if (key == "stationarity_trials") {
    cfg.stationarity_trials = u64();
  } else if (key == "stationarity_iterations") {
    cfg.stationarity_iterations = u64();
  } else if (key == "stationarity_alpha") {
    cfg.stationarity_alpha = dbl();
  } else if (key == "stationarity_min_pass") {
    cfg.stationarity_min_pass = dbl();
  } else if (key == "contraction_steps") {
    cfg.contraction_steps = u64();
  } else if (key == "contraction_low") {
    cfg.contraction_low = dbl();
  } else if (key == "contraction_high") {
    cfg.contraction_high = dbl();
  } else if (key == "k3_iterations") {
    cfg.k3_iterations = u64();
  } else if (key == "k3_alpha") {
    cfg.k3_alpha = dbl();
  } else if (key == "zero_pools") {
    cfg.zero_pools = parse_bool(key, value);
  } else {
    throw ConfigError("unknown config key '" + key + "'");
  }
}

/// Parses "key = value" lines; '#' starts a comment.
inline void apply_config_text(ExperimentConfig& cfg, const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
    }
    apply_setting(cfg, line.substr(0, eq), line.substr(eq + 1));
  }
}

inline void apply_config_file(ExperimentConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  apply_config_text(cfg, buf.str());
}

/// fig1: one {-1,1} urn to 5000 balls. fig2a / fig2b: 5000 realizations to
/// 5000 balls from {-1,1} / {1,1}.
inline void apply_preset(ExperimentConfig& cfg, const std::string& name) {
  if (name == "fig1") {
    cfg.initial = {{-1}, {1}};
    cfg.realizations = 1;
  } else if (name == "fig2a") {
    cfg.initial = {{-1}, {1}};
    cfg.realizations = 5000;
  } else if (name == "fig2b") {
    cfg.initial = {{1}, {1}};
    cfg.realizations = 5000;
  } else {
    throw ConfigError("unknown preset '" + name + "' (expected fig1, fig2a or fig2b)");
  }
  cfg.d = 1;
  cfg.k = 2;
  cfg.additions = 4998;
}

/// Checks the invariants every command relies on.
inline void validate(const ExperimentConfig& cfg) {
  if (cfg.initial.empty()) throw ConfigError("initial configuration is empty");
  if (cfg.d == 0) throw ConfigError("d must be positive");
  for (const auto& l : cfg.initial) {
    if (l.size() != cfg.d) throw ConfigError("every initial label needs d coordinates");
  }
  if (cfg.k < 2) throw ConfigError("k must be at least 2");
  if (cfg.realizations < 1) throw ConfigError("realizations must be at least 1");
  const std::uint64_t lo = cfg.tau0(), hi = cfg.tau0() + cfg.additions;
  for (std::size_t i = 0; i < cfg.checkpoints.size(); ++i) {
    const auto c = cfg.checkpoints[i];
    if (c <= lo || c > hi) {
      throw ConfigError("checkpoint " + std::to_string(c) + " outside (" + std::to_string(lo) +
                        ", " + std::to_string(hi) + "]");
    }
    if (i > 0 && c <= cfg.checkpoints[i - 1]) {
      throw ConfigError("checkpoints must be strictly increasing");
    }
  }
}

/// Echo of every setting, one "key = value" line each; readable by
/// apply_config_text.
inline std::string describe(const ExperimentConfig& cfg) {
  std::ostringstream o;
  o.precision(17);
  o << "initial = " << format_labels(cfg.initial) << '\n'
    << "d = " << cfg.d << '\n'
    << "k = " << cfg.k << '\n'
    << "additions = " << cfg.additions << '\n'
    << "realizations = " << cfg.realizations << '\n'
    << "seed = " << cfg.seed << '\n'
    << "checkpoints =";
  for (auto c : cfg.checkpoints) o << ' ' << c;
  o << '\n'
    << "bigint = " << (cfg.bigint ? "true" : "false") << '\n'
    << "z_threshold = " << cfg.z_threshold << '\n'
    << "a_z_threshold = " << cfg.a_z_threshold << '\n'
    << "ks_draw_threshold = " << cfg.ks_draw_threshold << '\n'
    << "ks_added_threshold = " << cfg.ks_added_threshold << '\n'
    << "coupling_threshold = " << cfg.coupling_threshold << '\n'
    << "coupling_tail = " << cfg.coupling_tail << '\n'
    << "min_abs_a = " << cfg.min_abs_a << '\n'
    << "min_pooled = " << cfg.min_pooled << '\n'
    << "write_labels = " << (cfg.write_labels ? "true" : "false") << '\n'
    << "pool_size = " << cfg.pool_size << '\n'
    << "exp_iterations = " << cfg.exp_iterations << '\n'
    << "noise_pairs = " << cfg.noise_pairs << '\n'
    << "stationarity_trials = " << cfg.stationarity_trials << '\n'
    << "stationarity_iterations = " << cfg.stationarity_iterations << '\n'
    << "stationarity_alpha = " << cfg.stationarity_alpha << '\n'
    << "stationarity_min_pass = " << cfg.stationarity_min_pass << '\n'
    << "contraction_steps = " << cfg.contraction_steps << '\n'
    << "contraction_low = " << cfg.contraction_low << '\n'
    << "contraction_high = " << cfg.contraction_high << '\n'
    << "k3_iterations = " << cfg.k3_iterations << '\n'
    << "k3_alpha = " << cfg.k3_alpha << '\n'
    << "zero_pools = " << (cfg.zero_pools ? "true" : "false") << '\n';
  return o.str();
}

}  // namespace zurn::harness
