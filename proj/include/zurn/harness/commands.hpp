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

// The five CLI experiments. Every command validates the config, writes
// manifest.txt, then its CSV files into cfg.out, and returns an exit code:
//   0 all checks passed, 1 a statistical check failed,
//   2 config or I/O error, 3 integer overflow with bigint disabled.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numeric>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "zurn/analysis.hpp"
#include "zurn/fixedpoint.hpp"
#include "zurn/harness/config.hpp"
#include "zurn/harness/csv.hpp"
#include "zurn/harness/parallel.hpp"
#include "zurn/label_int.hpp"
#include "zurn/oracle.hpp"
#include "zurn/rng.hpp"
#include "zurn/urn.hpp"

namespace zurn::harness {

inline constexpr const char* kVersion = "1.0.0";

enum ExitCode : int {
  kExitOk = 0,
  kExitStatFail = 1,
  kExitConfigOrIo = 2,
  kExitOverflow = 3,
};

namespace detail {

inline std::filesystem::path prepare_output(const ExperimentConfig& cfg,
                                            const std::string& command) {
  const std::filesystem::path dir(cfg.out);
  ensure_directory(dir);
  std::ofstream m(dir / "manifest.txt", std::ios::binary | std::ios::trunc);
  if (!m) throw IoError("cannot write manifest in '" + dir.string() + "'");
  m << "zurn_version = " << kVersion << '\n' << "command = " << command << '\n' << describe(cfg);
  if (!m) throw IoError("cannot write manifest in '" + dir.string() + "'");
  return dir;
}

template <typename Int>
Urn<Int> make_urn(const ExperimentConfig& cfg) {
  std::vector<Label<Int>> init;
  init.reserve(cfg.initial.size());
  for (const auto& l : cfg.initial) init.emplace_back(l.begin(), l.end());
  return Urn<Int>(std::span<const Label<Int>>(init), cfg.d);
}

inline std::vector<double> initial_sum(const ExperimentConfig& cfg) {
  std::vector<double> s(cfg.d, 0.0);
  for (const auto& l : cfg.initial) {
    for (std::size_t c = 0; c < cfg.d; ++c) s[c] += static_cast<double>(l[c]);
  }
  return s;
}

struct MeanStderr {
  double mean;
  double stderr_;
};

inline MeanStderr mean_stderr(std::span<const double> v) {
  const double n = static_cast<double>(v.size());
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
  if (v.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / (n - 1.0) / n)};
}

/// z = (mc - exact) / stderr, with the zero-variance convention
/// z = 0 when mc equals exact and infinity otherwise.
inline double z_score(double mc, double exact, double se) {
  if (se == 0.0) {
    return mc == exact ? 0.0 : std::numeric_limits<double>::infinity();
  }
  return (mc - exact) / se;
}

inline const char* pass_word(bool ok) { return ok ? "pass" : "fail"; }

}  // namespace detail

// ---------------------------------------------------------------- simulate

template <typename Int>
int simulate(const ExperimentConfig& cfg, std::ostream& log) {
  using Arith = LabelArith<Int>;
  const auto dir = detail::prepare_output(cfg, "simulate");
  const std::size_t d = cfg.d;

  struct Result {
    std::optional<Urn<Int>> urn;  // empty after overflow
    std::string error;
    analysis::ATrace trace;
  };

  std::vector<std::string> label_header{"realization", "index"};
  std::vector<std::string> summary_header{"realization", "status", "n"};
  for (std::size_t c = 1; c <= d; ++c) label_header.push_back("x" + std::to_string(c));
  for (std::size_t c = 1; c <= d; ++c) summary_header.push_back("a" + std::to_string(c));
  for (std::size_t c = 1; c <= d; ++c) summary_header.push_back("sign" + std::to_string(c));

  std::optional<CsvWriter> labels;
  if (cfg.write_labels) labels.emplace(dir / "labels_final.csv", label_header);
  CsvWriter trace(dir / "a_trace.csv", {"realization", "n", "coord", "a"});
  CsvWriter summary(dir / "summary.csv", summary_header);

  std::uint64_t overflowed = 0;
  ordered_parallel(
      cfg.realizations, cfg.threads,
      [&](std::uint64_t r) {
        Result res;
        Urn<Int> urn = detail::make_urn<Int>(cfg);
        RngStream rng(cfg.seed, r);
        res.trace.record(urn);
        try {
          run(urn, cfg.additions, rng, cfg.k, std::span<const std::uint64_t>(cfg.checkpoints),
              [&](const Urn<Int>& u) { res.trace.record(u); });
          if (res.trace.checkpoints.back() != urn.size()) res.trace.record(urn);
          res.urn.emplace(std::move(urn));
        } catch (const OverflowError& e) {
          res.error = e.what();
        }
        return res;
      },
      [&](std::uint64_t r, Result res) {
        const std::string rs = std::to_string(r);
        for (std::size_t t = 0; t < res.trace.checkpoints.size(); ++t) {
          for (std::size_t c = 0; c < d; ++c) {
            trace.row({rs, std::to_string(res.trace.checkpoints[t]), std::to_string(c + 1),
                       format_double(res.trace.values[t][c])});
          }
        }
        if (!res.urn) {
          ++overflowed;
          log << "realization " << r << ": " << res.error << '\n';
          std::vector<std::string> row{rs, "overflow", ""};
          row.resize(summary_header.size());
          summary.row(row);
          return;
        }
        const Urn<Int>& urn = *res.urn;
        if (labels) {
          std::vector<std::string> row(2 + d);
          row[0] = rs;
          for (std::uint64_t i = 0; i < urn.size(); ++i) {
            row[1] = std::to_string(i);
            const auto l = urn.label(i);
            for (std::size_t c = 0; c < d; ++c) row[2 + c] = Arith::to_string(l[c]);
            labels->row(row);
          }
        }
        std::vector<std::string> row{rs, "ok", std::to_string(urn.size())};
        for (double a : analysis::compute_a(urn)) row.push_back(format_double(a));
        for (std::size_t c = 0; c < d; ++c) {
          row.push_back(format_double(analysis::sign_concentration(urn, c).fraction));
        }
        summary.row(row);
      });
  if (labels) labels->close();
  trace.close();
  summary.close();
  log << "simulate: " << cfg.realizations << " realizations, " << overflowed << " overflowed\n";
  return overflowed ? kExitOverflow : kExitOk;
}

// ---------------------------------------------------------- a-distribution

template <typename Int>
int a_distribution(const ExperimentConfig& cfg, std::ostream& log) {
  const auto dir = detail::prepare_output(cfg, "a-distribution");
  const std::size_t d = cfg.d;
  CsvWriter out(dir / "a_final.csv", {"realization", "coord", "a"});

  std::vector<std::vector<double>> values(d);
  std::uint64_t overflowed = 0;
  ordered_parallel(
      cfg.realizations, cfg.threads,
      [&](std::uint64_t r) -> std::optional<std::vector<double>> {
        Urn<Int> urn = detail::make_urn<Int>(cfg);
        RngStream rng(cfg.seed, r);
        try {
          run(urn, cfg.additions, rng, cfg.k);
        } catch (const OverflowError&) {
          return std::nullopt;
        }
        return analysis::compute_a(urn);
      },
      [&](std::uint64_t r, std::optional<std::vector<double>> a) {
        if (!a) {
          ++overflowed;
          return;
        }
        for (std::size_t c = 0; c < d; ++c) {
          out.row({std::to_string(r), std::to_string(c + 1), format_double((*a)[c])});
          values[c].push_back((*a)[c]);
        }
      });
  out.close();

  if (overflowed) {
    log << "a-distribution: " << overflowed << " realizations overflowed\n";
    return kExitOverflow;
  }
  const auto s0 = detail::initial_sum(cfg);
  const double t0 = static_cast<double>(cfg.tau0());
  bool ok = true;
  for (std::size_t c = 0; c < d; ++c) {
    const auto [mean, se] = detail::mean_stderr(values[c]);
    const double oracle = s0[c] / (t0 * (t0 + 1.0));
    const double z = detail::z_score(mean, oracle, se);
    const bool pass = std::abs(z) <= cfg.a_z_threshold;
    ok = ok && pass;
    log << "coord " << c + 1 << ": mean " << format_double(mean) << " stderr "
        << format_double(se) << " oracle " << format_double(oracle) << " z "
        << format_double(z) << ' ' << detail::pass_word(pass) << '\n';
  }
  return ok ? kExitOk : kExitStatFail;
}

// ----------------------------------------------------------- moments-check

template <typename Int>
int moments_check(const ExperimentConfig& cfg, std::ostream& log) {
  using Arith = LabelArith<Int>;
  if (cfg.d != 1) throw ConfigError("moments-check needs d = 1");
  const auto dir = detail::prepare_output(cfg, "moments-check");
  const std::uint64_t tau0 = cfg.tau0();

  std::vector<std::uint64_t> cps = cfg.checkpoints;
  if (cps.empty()) cps.push_back(tau0 + cfg.additions);
  const bool at_start = cps.front() == tau0;
  const std::span<const std::uint64_t> run_cps(cps.data() + (at_start ? 1 : 0),
                                               cps.size() - (at_start ? 1 : 0));
  const std::size_t n_cp = cps.size();

  std::vector<std::vector<double>> mc_r(n_cp), mc_q(n_cp);
  ordered_parallel(
      cfg.realizations, cfg.threads,
      [&](std::uint64_t r) {
        std::vector<std::pair<double, double>> rq;
        rq.reserve(n_cp);
        Urn<Int> urn = detail::make_urn<Int>(cfg);
        RngStream rng(cfg.seed, r);
        const auto record = [&](const Urn<Int>& u) {
          rq.emplace_back(Arith::to_double(u.sum_squared(0)), Arith::to_double(u.sum_sq()[0]));
        };
        if (at_start) record(urn);
        run(urn, cfg.additions, rng, cfg.k, run_cps, record);
        return rq;
      },
      [&](std::uint64_t, std::vector<std::pair<double, double>> rq) {
        for (std::size_t i = 0; i < n_cp; ++i) {
          mc_r[i].push_back(rq[i].first);
          mc_q[i].push_back(rq[i].second);
        }
      });

  oracle::MomentPair<long double> start{0, 0};
  {
    long double s = 0;
    for (const auto& l : cfg.initial) {
      s += static_cast<long double>(l[0]);
      start.q += static_cast<long double>(l[0]) * static_cast<long double>(l[0]);
    }
    start.r = s * s;
  }

  CsvWriter out(dir / "moments.csv", {"n", "mc_r", "mc_q", "exact_r", "exact_q", "stderr_r",
                                      "stderr_q", "z_r", "z_q"});
  bool ok = true;
  for (std::size_t i = 0; i < n_cp; ++i) {
    const auto exact = oracle::moment_recursion(tau0, start, cps[i]);
    const auto r = detail::mean_stderr(mc_r[i]);
    const auto q = detail::mean_stderr(mc_q[i]);
    const double er = static_cast<double>(exact.r), eq = static_cast<double>(exact.q);
    const double zr = detail::z_score(r.mean, er, r.stderr_);
    const double zq = detail::z_score(q.mean, eq, q.stderr_);
    const bool pass = std::abs(zr) <= cfg.z_threshold && std::abs(zq) <= cfg.z_threshold;
    ok = ok && pass;
    out.row({std::to_string(cps[i]), format_double(r.mean), format_double(q.mean),
             format_double(er), format_double(eq), format_double(r.stderr_),
             format_double(q.stderr_), format_double(zr), format_double(zq)});
    log << "n " << cps[i] << ": z_r " << format_double(zr) << " z_q " << format_double(zq) << ' '
        << detail::pass_word(pass) << '\n';
  }
  out.close();
  return ok ? kExitOk : kExitStatFail;
}

// ------------------------------------------------------------- limit-check

template <typename Int>
int limit_check(const ExperimentConfig& cfg, std::ostream& log) {
  using Arith = LabelArith<Int>;
  const auto dir = detail::prepare_output(cfg, "limit-check");
  const std::size_t d = cfg.d;
  const std::uint64_t n_final = cfg.tau0() + cfg.additions;
  if (cfg.additions == 0) throw ConfigError("limit-check needs additions > 0");
  if (d == 2 && (cfg.coupling_tail == 0 || cfg.coupling_tail > n_final)) {
    throw ConfigError("coupling_tail must be in [1, n]");
  }

  struct Result {
    bool overflow = false;
    bool excluded = false;
    std::vector<double> quenched_ks;  // per coordinate
    std::vector<double> added;        // X_N / (N A_N), per coordinate
    double coupling = 0.0;
  };

  const auto exp_cdf = [](double x) {
    return oracle::limit_cdf(x, oracle::LimitFamily::kExponential, 1.0);
  };
  const auto gamma_cdf = [](double x) {
    return oracle::limit_cdf(x, oracle::LimitFamily::kGamma2, 1.0);
  };

  CsvWriter report(dir / "limit_report.csv",
                   {"check", "realization", "coord", "statistic", "threshold", "pass"});
  std::vector<std::vector<double>> pooled(d);
  std::uint64_t overflowed = 0, excluded = 0;
  bool ok = true;
  double worst_quenched = 0.0;

  ordered_parallel(
      cfg.realizations, cfg.threads,
      [&](std::uint64_t r) {
        Result res;
        Urn<Int> urn = detail::make_urn<Int>(cfg);
        RngStream rng(cfg.seed, r);
        try {
          run(urn, cfg.additions, rng, cfg.k);
        } catch (const OverflowError&) {
          res.overflow = true;
          return res;
        }
        const auto a = analysis::compute_a(urn);
        if (std::any_of(a.begin(), a.end(),
                        [&](double v) { return std::abs(v) < cfg.min_abs_a; })) {
          res.excluded = true;
          return res;
        }
        const auto by_na = analysis::normalize_labels(urn, analysis::Normalization::kByNA);
        for (std::size_t c = 0; c < d; ++c) {
          auto col = by_na.coordinate(c);
          std::sort(col.begin(), col.end());
          res.quenched_ks.push_back(analysis::ks_statistic(col, exp_cdf));
          const double n = static_cast<double>(urn.size());
          res.added.push_back(Arith::to_double(urn.label(urn.size() - 1)[c]) / (n * a[c]));
        }
        if (d == 2) {
          const auto tail = analysis::normalize_labels(
              urn, analysis::Normalization::kByN, urn.size() - cfg.coupling_tail,
              cfg.coupling_tail);
          res.coupling = analysis::coordinate_coupling(tail, a);
        }
        return res;
      },
      [&](std::uint64_t r, Result res) {
        const std::string rs = std::to_string(r);
        if (res.overflow) {
          ++overflowed;
          return;
        }
        if (res.excluded) {
          ++excluded;
          return;
        }
        for (std::size_t c = 0; c < d; ++c) {
          const bool pass = res.quenched_ks[c] < cfg.ks_draw_threshold;
          ok = ok && pass;
          worst_quenched = std::max(worst_quenched, res.quenched_ks[c]);
          report.row({"quenched_draw", rs, std::to_string(c + 1), format_double(res.quenched_ks[c]),
                      format_double(cfg.ks_draw_threshold), detail::pass_word(pass)});
          pooled[c].push_back(res.added[c]);
        }
        if (d == 2) {
          const bool pass = res.coupling < cfg.coupling_threshold;
          ok = ok && pass;
          report.row({"coordinate_coupling", rs, "1:2", format_double(res.coupling),
                      format_double(cfg.coupling_threshold), detail::pass_word(pass)});
        }
      });

  const std::uint64_t included = cfg.realizations - overflowed - excluded;
  for (std::size_t c = 0; c < d; ++c) {
    if (included < std::max<std::uint64_t>(cfg.min_pooled, 1)) {
      report.row({"pooled_added", "all", std::to_string(c + 1), "",
                  format_double(cfg.ks_added_threshold), "skip"});
      continue;
    }
    std::sort(pooled[c].begin(), pooled[c].end());
    const double ks = analysis::ks_statistic(pooled[c], gamma_cdf);
    const bool pass = ks < cfg.ks_added_threshold;
    ok = ok && pass;
    report.row({"pooled_added", "all", std::to_string(c + 1), format_double(ks),
                format_double(cfg.ks_added_threshold), detail::pass_word(pass)});
    log << "pooled added-ball KS, coord " << c + 1 << ": " << format_double(ks) << ' '
        << detail::pass_word(pass) << '\n';
  }
  report.row({"excluded_small_a", "all", "", std::to_string(excluded), format_double(cfg.min_abs_a),
              "info"});
  report.close();
  log << "limit-check: " << included << " included, " << excluded << " excluded (|A_N| < "
      << format_double(cfg.min_abs_a) << "), " << overflowed << " overflowed; worst quenched KS "
      << format_double(worst_quenched) << '\n';
  if (overflowed) return kExitOverflow;
  return ok ? kExitOk : kExitStatFail;
}

// ------------------------------------------------------------- fixed-point

/// Stream indices of the fixed-point experiments under cfg.seed.
enum FixedPointStream : std::uint64_t {
  kStreamExp = 1,
  kStreamNoise = 2,
  kStreamContraction = 3,
  kStreamK3 = 4,
  kStreamStationarityBase = 1000,
};

inline int fixed_point(const ExperimentConfig& cfg, std::ostream& log) {
  using fixedpoint::SamplePool;
  if (cfg.pool_size < 2) throw ConfigError("pool_size must be at least 2");
  if (cfg.noise_pairs < 1) throw ConfigError("noise_pairs must be at least 1");
  const auto dir = detail::prepare_output(cfg, "fixed-point");
  const std::size_t m = cfg.pool_size;
  const auto gamma2 = [](RngStream& r) { return r.gamma2(); };
  const auto expo = [](RngStream& r) { return r.exponential(); };
  const auto exp_cdf = [](double x) {
    return oracle::limit_cdf(x, oracle::LimitFamily::kExponential, 1.0);
  };

  CsvWriter checks(dir / "fixedpoint_checks.csv", {"check", "statistic", "threshold", "pass"});
  bool ok = true;

  // Exponential fixed point of Y <- U (Y1 + Y2), started from Uniform[0, 2].
  {
    RngStream noise_rng(cfg.seed, kStreamNoise);
    const double floor = fixedpoint::ks_noise_floor(m, cfg.noise_pairs, noise_rng, expo);
    RngStream rng(cfg.seed, kStreamExp);
    auto pool = SamplePool::generate(m, rng, [](RngStream& r) { return 2.0 * r.uniform01(); });
    for (std::uint64_t it = 0; it < cfg.exp_iterations; ++it) {
      pool = fixedpoint::iterate_exp_pool(pool, rng);
    }
    const double ks = analysis::ks_statistic(pool.sorted_coordinate(), exp_cdf);
    const bool pass = ks < 2.0 * floor;
    ok = ok && pass;
    checks.row({"exp_fixed_point", format_double(ks), format_double(2.0 * floor),
                detail::pass_word(pass)});
    log << "exp fixed point: KS " << format_double(ks) << " vs 2 x floor "
        << format_double(2.0 * floor) << ' ' << detail::pass_word(pass) << '\n';
  }

  // Gamma(2,1) stationarity of X <- U1 X1 + U2 X2, one fresh pool per trial.
  if (cfg.stationarity_trials > 0) {
    const double crit =
        analysis::ks_critical_value(cfg.stationarity_alpha, static_cast<double>(m) / 2.0);
    std::uint64_t passed = 0;
    ordered_parallel(
        cfg.stationarity_trials, cfg.threads,
        [&](std::uint64_t t) {
          RngStream rng(cfg.seed, kStreamStationarityBase + t);
          auto pool = SamplePool::generate(m, rng, gamma2);
          for (std::uint64_t it = 0; it < cfg.stationarity_iterations; ++it) {
            pool = fixedpoint::iterate_pool(pool, 2, rng);
          }
          const auto fresh = SamplePool::generate(m, rng, gamma2).sorted_coordinate();
          return analysis::ks_two_sample(pool.sorted_coordinate(), fresh);
        },
        [&](std::uint64_t, double ks) { passed += ks < crit; });
    const double frac = static_cast<double>(passed) / static_cast<double>(cfg.stationarity_trials);
    const bool pass = frac >= cfg.stationarity_min_pass;
    ok = ok && pass;
    checks.row({"gamma_stationarity", format_double(frac), format_double(cfg.stationarity_min_pass),
                detail::pass_word(pass)});
    log << "gamma stationarity: " << passed << '/' << cfg.stationarity_trials
        << " trials below KS critical value " << format_double(crit) << ' '
        << detail::pass_word(pass) << '\n';
  }

  // Contraction between Gamma(2,1) and 2 Exp(1) under shared randomness.
  {
    RngStream rng(cfg.seed, kStreamContraction);
    SamplePool p = cfg.zero_pools ? SamplePool::scalar(std::vector<double>(m, 0.0))
                                  : SamplePool::generate(m, rng, gamma2);
    SamplePool q = cfg.zero_pools
                       ? SamplePool::scalar(std::vector<double>(m, 0.0))
                       : SamplePool::generate(m, rng, [](RngStream& r) { return 2.0 * r.exponential(); });
    const auto rep = fixedpoint::contraction_estimate(p, q, cfg.contraction_steps, rng);
    CsvWriter traj(dir / "fixedpoint.csv", {"iteration", "distance", "ratio"});
    for (std::size_t t = 0; t < rep.distances.size(); ++t) {
      traj.row({std::to_string(t), format_double(rep.distances[t]),
                t == 0 ? "" : format_double(rep.ratios[t - 1])});
    }
    traj.close();
    const std::string band =
        format_double(cfg.contraction_low) + ".." + format_double(cfg.contraction_high);
    if (cfg.contraction_steps == 0 || rep.distances.front() == 0.0) {
      checks.row({"contraction", "", band, "skip"});
      log << "contraction: initial distance is zero, ratio undefined (skip)\n";
    } else {
      const double gm = rep.geometric_mean_ratio(cfg.contraction_steps);
      const bool pass = gm >= cfg.contraction_low && gm <= cfg.contraction_high;
      ok = ok && pass;
      checks.row({"contraction", format_double(gm), band, detail::pass_word(pass)});
      log << "contraction: geometric mean ratio " << format_double(gm) << " in [" << band
          << "] " << detail::pass_word(pass) << '\n';
    }
  }

  // Three draws: the rescaled iterate leaves the Gamma family.
  if (cfg.k3_iterations > 0) {
    RngStream rng(cfg.seed, kStreamK3);
    auto pool = SamplePool::generate(m, rng, gamma2);
    std::vector<double> v;
    for (std::uint64_t it = 0; it < cfg.k3_iterations; ++it) {
      pool = fixedpoint::iterate_pool(pool, 3, rng);
      v.assign(pool.flat().begin(), pool.flat().end());
      const double mean = pool.mean()[0];
      for (double& x : v) x /= mean;
      pool = SamplePool::scalar(std::move(v));
    }
    auto sorted = pool.sorted_coordinate();
    const auto fit = analysis::fit_gamma_moments(sorted);
    const double ks = analysis::ks_statistic(sorted, [&](double x) { return fit.cdf(x); });
    const double crit = analysis::ks_critical_value(cfg.k3_alpha, static_cast<double>(m));
    const bool pass = ks > crit;
    ok = ok && pass;
    checks.row({"k3_non_gamma", format_double(ks), format_double(crit), detail::pass_word(pass)});
    log << "k=3: KS to fitted Gamma(" << format_double(fit.shape) << ") " << format_double(ks)
        << " vs critical " << format_double(crit) << ' ' << detail::pass_word(pass) << '\n';
  }

  checks.close();
  return ok ? kExitOk : kExitStatFail;
}

// ------------------------------------------------------------------ dispatch

/// Runs a named command and maps errors to exit codes. Errors are reported on
/// err.
inline int run_command(const std::string& name, const ExperimentConfig& cfg, std::ostream& log,
                       std::ostream& err) {
  try {
    validate(cfg);
    const auto pick = [&](auto int_tag) -> int {
      using Int = decltype(int_tag);
      if (name == "simulate") return simulate<Int>(cfg, log);
      if (name == "a-distribution") return a_distribution<Int>(cfg, log);
      if (name == "moments-check") return moments_check<Int>(cfg, log);
      if (name == "limit-check") return limit_check<Int>(cfg, log);
      if (name == "fixed-point") return fixed_point(cfg, log);
      throw ConfigError("unknown command '" + name + "'");
    };
    return cfg.bigint ? pick(BigInt{}) : pick(std::int64_t{});
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfigOrIo;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << '\n';
    return kExitConfigOrIo;
  } catch (const OverflowError& e) {
    err << e.what() << " (rerun with bigint = true)\n";
    return kExitOverflow;
  }
}

}  // namespace zurn::harness
