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

// Closed-form ground truth for the addition urn: annealed moments of the sum,
// the lower bound on the second moment of the limit, and the limit laws.

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace zurn::oracle {

using Rational = boost::multiprecision::cpp_rational;

/// Annealed (E[R_n], E[Q_n]) for one coordinate, where R_n = S_n^2 and
/// Q_n = sum of squared labels.
template <typename Real>
struct MomentPair {
  Real r;
  Real q;

  friend bool operator==(const MomentPair&, const MomentPair&) = default;
};

/// Advances (E[R_m], E[Q_m]) to m + 1 balls.
template <typename Real>
MomentPair<Real> moment_step(const MomentPair<Real>& at_m, std::uint64_t m) {
  const Real mm(m);
  const Real one(1);
  const Real two(2);
  const Real four(4);
  return {(one + four / mm + two / (mm * mm)) * at_m.r + two / mm * at_m.q,
          two / (mm * mm) * at_m.r + (one + two / mm) * at_m.q};
}

/// Exact annealed moments after n balls, starting from a deterministic urn of
/// tau0 balls. Real = double for speed, Real = Rational for exact checks.
template <typename Real>
MomentPair<Real> moment_recursion(std::uint64_t tau0, MomentPair<Real> start, std::uint64_t n) {
  if (tau0 == 0) throw std::invalid_argument("tau0 must be positive");
  if (n < tau0) throw std::invalid_argument("n must be at least tau0");
  for (std::uint64_t m = tau0; m < n; ++m) start = moment_step(start, m);
  return start;
}

/// Result of walking the recursion against r <= C n^4 and q <= 2 C n^3.
struct GrowthBoundReport {
  bool holds = true;
  double constant = 0.0;
  /// C was taken from Q at tau0 because R at tau0 is zero.
  bool constant_from_q = false;
  /// First n where a bound failed; 0 if none.
  std::uint64_t first_violation = 0;
  std::uint64_t checked_up_to = 0;
};

/// Checks both growth bounds at every n in [tau0, n_max]. C = R(tau0), or
/// Q(tau0) when R(tau0) = 0.
inline GrowthBoundReport check_growth_bounds(std::uint64_t tau0, MomentPair<double> start,
                                             std::uint64_t n_max) {
  GrowthBoundReport report;
  report.constant = start.r > 0.0 ? start.r : start.q;
  report.constant_from_q = !(start.r > 0.0);
  const long double c = report.constant;
  MomentPair<long double> cur{start.r, start.q};
  for (std::uint64_t n = tau0; n <= n_max; ++n) {
    const long double nn = static_cast<long double>(n);
    if (cur.r > c * nn * nn * nn * nn || cur.q > 2 * c * nn * nn * nn) {
      report.holds = false;
      report.first_violation = n;
      break;
    }
    report.checked_up_to = n;
    cur = moment_step(cur, n);
  }
  return report;
}

/// E[S_n] = n(n+1) / (tau0 (tau0+1)) * S_tau0, per coordinate.
inline std::vector<double> annealed_mean_sum(std::span<const double> s_tau0, std::uint64_t tau0,
                                             std::uint64_t n) {
  if (tau0 == 0 || n < tau0) throw std::invalid_argument("need n >= tau0 >= 1");
  const double factor = (static_cast<double>(n) * static_cast<double>(n + 1)) /
                        (static_cast<double>(tau0) * static_cast<double>(tau0 + 1));
  std::vector<double> out(s_tau0.begin(), s_tau0.end());
  for (double& v : out) v *= factor;
  return out;
}

/// Lower bound on E[A^2]: a_tau0_sq * prod_{k >= tau0} (1 - 2/(k+2)^2).
///
/// The partial product runs over j = k + 2 up to K, and the remaining tail is
/// replaced by exp of the midpoint of the bracket
///   -2/K - 4/(3K^3) <= sum_{j>K} log(1 - 2/j^2) <= -2/(K+1).
/// K grows until the bracket half-width is below 1e-12, which bounds the
/// relative error of the result.
inline double a_second_moment_lower_bound(double a_tau0_sq, std::uint64_t tau0) {
  if (tau0 == 0) throw std::invalid_argument("tau0 must be positive");
  if (a_tau0_sq == 0.0) return 0.0;
  constexpr long double kTolerance = 1e-12L;
  const auto half_width = [](long double k) {
    return 1.0L / (k * (k + 1.0L)) + 2.0L / (3.0L * k * k * k);
  };
  long double product = 1.0L;
  std::uint64_t last = tau0 + 1;  // product over j in (tau0 + 1, last]
  while (half_width(static_cast<long double>(last)) >= kTolerance) {
    ++last;
    const long double j = static_cast<long double>(last);
    product *= 1.0L - 2.0L / (j * j);
  }
  const long double k = static_cast<long double>(last);
  const long double tail_log = -0.5L * (2.0L / k + 4.0L / (3.0L * k * k * k) + 2.0L / (k + 1.0L));
  return static_cast<double>(static_cast<long double>(a_tau0_sq) * product * std::exp(tail_log));
}

enum class LimitFamily {
  kExponential,  // a * Exp(1): the quenched law of a draw, scaled by n
  kGamma2,       // a * Gamma(2, 1): the law of an added ball, scaled by n
};

/// CDF of a * Exp(1) or a * Gamma(2, 1). Negative a mirrors the support onto
/// the negative half-line.
inline double limit_cdf(double x, LimitFamily family, double a) {
  if (a == 0.0 || !std::isfinite(a)) {
    throw std::invalid_argument("limit_cdf needs a finite nonzero scale");
  }
  const double y = x / a;  // the unit-scale variable
  const auto survival = [family](double u) {
    if (u <= 0.0) return 1.0;
    return family == LimitFamily::kExponential ? std::exp(-u) : (1.0 + u) * std::exp(-u);
  };
  if (a > 0.0) return x <= 0.0 ? 0.0 : 1.0 - survival(y);
  // a < 0: P(a G <= x) = P(G >= x / a).
  return x >= 0.0 ? 1.0 : survival(y);
}

/// Characteristic function of G * a, G ~ Gamma(2, 1): (1 - i <t, a>)^{-2}.
inline std::complex<double> gamma_cf(std::span<const double> t, std::span<const double> a) {
  if (t.size() != a.size()) throw std::invalid_argument("gamma_cf: dimension mismatch");
  double s = 0.0;
  for (std::size_t j = 0; j < t.size(); ++j) s += t[j] * a[j];
  const std::complex<double> base(1.0, -s);
  return 1.0 / (base * base);
}

}  // namespace zurn::oracle
