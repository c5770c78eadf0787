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

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "zurn/urn.hpp"

namespace zurn::analysis {

/// A_n = S_n / (n (n+1)) per coordinate.
template <typename Int>
std::vector<double> compute_a(const Urn<Int>& urn) {
  const double denom = static_cast<double>(urn.size()) * static_cast<double>(urn.size() + 1);
  std::vector<double> a(urn.dim());
  for (std::size_t c = 0; c < urn.dim(); ++c) {
    a[c] = LabelArith<Int>::to_double(urn.sum()[c]) / denom;
  }
  return a;
}

/// A_n recorded at a sequence of checkpoints of one realization.
struct ATrace {
  std::vector<std::uint64_t> checkpoints;
  std::vector<std::vector<double>> values;

  template <typename Int>
  void record(const Urn<Int>& urn) {
    checkpoints.push_back(urn.size());
    values.push_back(compute_a(urn));
  }
};

enum class Normalization {
  kByN,   // label / n
  kByNA,  // label(j) / (n * A_n(j)), with the same realization's A_n
};

/// Labels rescaled for comparison with a limit law.
class NormalizedSample {
 public:
  NormalizedSample(std::size_t dim, std::vector<double> flat, Normalization how)
      : dim_(dim), values_(std::move(flat)), how_(how) {
    if (dim == 0 || values_.size() % dim != 0) {
      throw std::invalid_argument("NormalizedSample: size is not a multiple of the dimension");
    }
  }

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return values_.size() / dim_; }
  Normalization normalization() const { return how_; }
  std::span<const double> flat() const { return values_; }
  std::span<const double> value(std::size_t i) const {
    return std::span<const double>(values_).subspan(i * dim_, dim_);
  }
  std::vector<double> coordinate(std::size_t c) const {
    std::vector<double> out(size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = values_[i * dim_ + c];
    return out;
  }

 private:
  std::size_t dim_;
  std::vector<double> values_;
  Normalization how_;
};

/// Normalizes balls [first, first + count) of the urn at its current n.
/// count = 0 means "through the last ball".
template <typename Int>
NormalizedSample normalize_labels(const Urn<Int>& urn, Normalization how, std::uint64_t first = 0,
                                  std::uint64_t count = 0) {
  if (first >= urn.size()) throw std::invalid_argument("normalize_labels: empty range");
  if (count == 0 || first + count > urn.size()) count = urn.size() - first;
  const std::size_t d = urn.dim();
  const double n = static_cast<double>(urn.size());
  std::vector<double> scale(d, n);
  if (how == Normalization::kByNA) {
    const auto a = compute_a(urn);
    for (std::size_t c = 0; c < d; ++c) {
      if (a[c] == 0.0) throw std::domain_error("normalize_labels: A_n is zero in coordinate " +
                                               std::to_string(c));
      scale[c] = n * a[c];
    }
  }
  std::vector<double> flat(count * d);
  for (std::uint64_t i = 0; i < count; ++i) {
    const auto l = urn.label(first + i);
    for (std::size_t c = 0; c < d; ++c) {
      flat[i * d + c] = LabelArith<Int>::to_double(l[c]) / scale[c];
    }
  }
  return NormalizedSample(d, std::move(flat), how);
}

/// One-sample two-sided Kolmogorov-Smirnov statistic sup |F_m - F|, evaluated
/// on both sides of every step of the empirical CDF.
template <typename Cdf>
double ks_statistic(std::span<const double> sorted, Cdf&& cdf) {
  if (sorted.empty()) throw std::invalid_argument("ks_statistic: empty sample");
  if (!std::is_sorted(sorted.begin(), sorted.end())) {
    throw std::invalid_argument("ks_statistic: sample is not sorted");
  }
  const double m = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(sorted[i]);
    if (!(f >= 0.0 && f <= 1.0)) {
      throw std::domain_error("ks_statistic: CDF value outside [0, 1]");
    }
    d = std::max({d, static_cast<double>(i + 1) / m - f, f - static_cast<double>(i) / m});
  }
  return d;
}

/// Two-sample Kolmogorov-Smirnov statistic of two sorted samples.
inline double ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample: empty sample");
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

/// Asymptotic Kolmogorov critical value sqrt(-ln(alpha/2) / 2) / sqrt(n_eff).
/// Use n_eff = m for one sample, m n / (m + n) for two.
inline double ks_critical_value(double alpha, double n_eff) {
  return std::sqrt(-0.5 * std::log(alpha / 2.0)) / std::sqrt(n_eff);
}

/// Moment-matched scales for the two limit families of one coordinate.
struct LimitFit {
  double exp_scale;    // a in a * Exp(1); equals the sample mean
  double gamma_scale;  // a in a * Gamma(2, 1); half the sample mean
  int sign;
};

inline LimitFit fit_limits(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("fit_limits: empty sample");
  const double mean =
      std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
  if (mean == 0.0) throw std::domain_error("fit_limits: zero mean has no sign");
  return {mean, mean / 2.0, mean > 0.0 ? 1 : -1};
}

inline LimitFit fit_limits(const NormalizedSample& sample, std::size_t coord = 0) {
  return fit_limits(sample.coordinate(coord));
}

/// Gamma(shape, scale) fitted by mean and variance.
struct GammaFit {
  double shape;
  double scale;

  double cdf(double x) const {
    return x <= 0.0 ? 0.0 : boost::math::gamma_p(shape, x / scale);
  }
};

inline GammaFit fit_gamma_moments(std::span<const double> values) {
  if (values.size() < 2) throw std::invalid_argument("fit_gamma_moments: need two samples");
  const double m = static_cast<double>(values.size());
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / m;
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  var /= m - 1.0;
  if (!(mean > 0.0) || !(var > 0.0)) {
    throw std::domain_error("fit_gamma_moments: need positive mean and variance");
  }
  return {mean * mean / var, var / mean};
}

/// (1/m) sum_j exp(i <t, x_j>) over d-vectors stored flat.
inline std::complex<double> empirical_cf(std::span<const double> flat, std::size_t dim,
                                         std::span<const double> t) {
  if (dim == 0 || flat.empty() || flat.size() % dim != 0) {
    throw std::invalid_argument("empirical_cf: empty or ragged sample");
  }
  if (t.size() != dim) throw std::invalid_argument("empirical_cf: dimension mismatch");
  double re = 0.0, im = 0.0;
  const std::size_t m = flat.size() / dim;
  for (std::size_t i = 0; i < m; ++i) {
    double phase = 0.0;
    for (std::size_t c = 0; c < dim; ++c) phase += t[c] * flat[i * dim + c];
    re += std::cos(phase);
    im += std::sin(phase);
  }
  return {re / static_cast<double>(m), im / static_cast<double>(m)};
}

inline std::complex<double> empirical_cf(const NormalizedSample& sample,
                                         std::span<const double> t) {
  return empirical_cf(sample.flat(), sample.dim(), t);
}

struct SignConcentration {
  double fraction;
  /// A_n was exactly zero; fraction counts positive labels instead.
  bool zero_a_fallback;
};

/// Fraction of balls whose coordinate shares the sign of A_n; zeros count 0.5.
template <typename Int>
SignConcentration sign_concentration(const Urn<Int>& urn, std::size_t coord) {
  if (coord >= urn.dim()) throw std::out_of_range("sign_concentration: bad coordinate");
  const Int zero(0);
  const Int& s = urn.sum()[coord];
  const bool fallback = (s == zero);
  const bool want_positive = fallback || s > zero;
  double hits = 0.0;
  for (std::uint64_t i = 0; i < urn.size(); ++i) {
    const Int& x = urn.label(i)[coord];
    if (x == zero) {
      hits += 0.5;
    } else if ((x > zero) == want_positive) {
      hits += 1.0;
    }
  }
  return {hits / static_cast<double>(urn.size()), fallback};
}

/// Median of |x1/a1 - x2/a2| / (|x1/a1| + |x2/a2| + 1e-12). Near zero when
/// both coordinates are multiples of one shared scalar.
inline double coordinate_coupling(const NormalizedSample& samples, std::span<const double> a) {
  if (samples.dim() != 2 || a.size() != 2) {
    throw std::invalid_argument("coordinate_coupling: needs two coordinates");
  }
  if (a[0] == 0.0 || a[1] == 0.0 || !std::isfinite(a[0]) || !std::isfinite(a[1])) {
    throw std::invalid_argument("coordinate_coupling: degenerate scale vector");
  }
  if (samples.size() == 0) throw std::invalid_argument("coordinate_coupling: empty sample");
  constexpr double kEps = 1e-12;
  std::vector<double> stat(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto x = samples.value(i);
    const double u = x[0] / a[0];
    const double v = x[1] / a[1];
    stat[i] = std::abs(u - v) / (std::abs(u) + std::abs(v) + kEps);
  }
  std::sort(stat.begin(), stat.end());
  const std::size_t mid = stat.size() / 2;
  return stat.size() % 2 == 1 ? stat[mid] : 0.5 * (stat[mid - 1] + stat[mid]);
}

}  // namespace zurn::analysis
