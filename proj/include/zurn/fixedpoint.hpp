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

// Population dynamics for the distributional fixed-point maps
//   X <- sum_{i<=k} U_i X^(i)        (Gamma(2, 1) * mean is the k = 2 fixed point)
//   Y <- U (Y^(1) + Y^(2))           (exponential fixed point)
// A distribution is represented by a pool of samples; one iteration draws a
// fresh pool of the same size by pushing resampled members through the map.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "zurn/analysis.hpp"
#include "zurn/rng.hpp"

namespace zurn::fixedpoint {

class SamplePool {
 public:
  SamplePool(std::size_t dim, std::vector<double> flat) : dim_(dim), values_(std::move(flat)) {
    if (dim == 0 || values_.size() % dim != 0) {
      throw std::invalid_argument("SamplePool: size is not a multiple of the dimension");
    }
    if (size() < 2) throw std::invalid_argument("SamplePool: need at least two samples");
  }

  static SamplePool scalar(std::vector<double> values) { return SamplePool(1, std::move(values)); }

  /// m scalar samples from draw(rng).
  template <typename Draw>
  static SamplePool generate(std::size_t m, RngStream& rng, Draw&& draw) {
    std::vector<double> v(m);
    for (double& x : v) x = draw(rng);
    return scalar(std::move(v));
  }

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return values_.size() / dim_; }
  std::span<const double> flat() const { return values_; }
  std::span<const double> sample(std::size_t i) const {
    return std::span<const double>(values_).subspan(i * dim_, dim_);
  }

  std::vector<double> mean() const {
    std::vector<double> mu(dim_, 0.0);
    for (std::size_t i = 0; i < size(); ++i) {
      for (std::size_t c = 0; c < dim_; ++c) mu[c] += values_[i * dim_ + c];
    }
    for (double& v : mu) v /= static_cast<double>(size());
    return mu;
  }

  std::vector<double> sorted_coordinate(std::size_t c = 0) const {
    std::vector<double> out(size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = values_[i * dim_ + c];
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  std::size_t dim_;
  std::vector<double> values_;
};

/// One step of X <- sum_{i<=k} U_i X^(i). For each output sample the stream
/// yields (U_1, index_1, ..., U_k, index_k). The mean scales by k/2, so only
/// k = 2 preserves it.
inline SamplePool iterate_pool(const SamplePool& pool, int k, RngStream& rng) {
  if (k < 2) throw std::invalid_argument("iterate_pool: k must be at least 2");
  const std::size_t m = pool.size();
  const std::size_t d = pool.dim();
  std::vector<double> out(m * d, 0.0);
  for (std::size_t s = 0; s < m; ++s) {
    for (int i = 0; i < k; ++i) {
      const double u = rng.uniform01();
      const auto x = pool.sample(rng.below(m));
      for (std::size_t c = 0; c < d; ++c) out[s * d + c] += u * x[c];
    }
  }
  return SamplePool(d, std::move(out));
}

/// One step of Y <- U (Y^(1) + Y^(2)) with one U per output sample.
inline SamplePool iterate_exp_pool(const SamplePool& pool, RngStream& rng) {
  if (pool.dim() != 1) throw std::invalid_argument("iterate_exp_pool: pool must be scalar");
  const auto in = pool.flat();
  if (std::any_of(in.begin(), in.end(), [](double y) { return y < 0.0; })) {
    throw std::domain_error("iterate_exp_pool: negative sample");
  }
  const std::size_t m = pool.size();
  std::vector<double> out(m);
  for (std::size_t s = 0; s < m; ++s) {
    const double u = rng.uniform01();
    const double y1 = in[rng.below(m)];
    const double y2 = in[rng.below(m)];
    out[s] = u * (y1 + y2);
  }
  return SamplePool::scalar(std::move(out));
}

/// Exact Wasserstein distance of order 1 or 2 between two scalar empirical
/// measures: the integral over u in (0, 1) of |F_p^-1(u) - F_q^-1(u)|^order.
/// For equal sizes this is the sorted coupling; otherwise the two step
/// quantile functions are integrated over their merged breakpoints.
inline double wasserstein(const SamplePool& p, const SamplePool& q, int order) {
  if (p.dim() != 1 || q.dim() != 1) {
    throw std::invalid_argument("wasserstein: only scalar pools are supported");
  }
  if (order != 1 && order != 2) throw std::invalid_argument("wasserstein: order must be 1 or 2");
  const auto a = p.sorted_coordinate();
  const auto b = q.sorted_coordinate();
  const auto cost = [order](double x, double y) {
    const double diff = std::abs(x - y);
    return order == 1 ? diff : diff * diff;
  };
  double total = 0.0;
  if (a.size() == b.size()) {
    for (std::size_t i = 0; i < a.size(); ++i) total += cost(a[i], b[i]);
    total /= static_cast<double>(a.size());
  } else {
    // Breakpoints i/na and j/nb compared exactly via i*nb vs j*na.
    const std::uint64_t na = a.size(), nb = b.size();
    const double scale = static_cast<double>(na) * static_cast<double>(nb);
    std::uint64_t i = 0, j = 0, prev = 0;  // positions in units of 1/(na nb)
    while (i < na && j < nb) {
      const std::uint64_t next = std::min((i + 1) * nb, (j + 1) * na);
      total += cost(a[i], b[j]) * static_cast<double>(next - prev) / scale;
      prev = next;
      if ((i + 1) * nb == next) ++i;
      if ((j + 1) * na == next) ++j;
    }
  }
  return order == 1 ? total : std::sqrt(total);
}

struct ContractionReport {
  /// d_t: mean squared difference of index-coupled samples after t steps.
  /// d_0 is the exact squared l2 distance of the (sorted) input pools, and
  /// every d_t bounds the squared l2 distance of the pools from above.
  std::vector<double> distances;
  /// d_t / d_{t-1} for t >= 1; NaN where d_{t-1} = 0.
  std::vector<double> ratios;
  /// Squared l2 distance of the empirical pools (sorted coupling) after each step.
  std::vector<double> empirical_l2_sq;

  /// (d_steps / d_0)^(1/steps).
  double geometric_mean_ratio(std::size_t steps) const {
    if (steps == 0 || steps >= distances.size()) {
      throw std::out_of_range("geometric_mean_ratio: bad step count");
    }
    return std::pow(distances[steps] / distances[0], 1.0 / static_cast<double>(steps));
  }
};

/// Evolves two scalar pools under X <- sum U_i X^(i) with identical
/// randomness (same U's, same indices) and tracks how fast they approach each
/// other. q is shifted to p's mean first and both pools are sorted so that the
/// index coupling starts out optimal.
inline ContractionReport contraction_estimate(const SamplePool& p, const SamplePool& q,
                                              std::size_t iterations, RngStream& rng,
                                              int k = 2) {
  if (p.dim() != 1 || q.dim() != 1) {
    throw std::invalid_argument("contraction_estimate: only scalar pools are supported");
  }
  if (p.size() != q.size()) throw std::invalid_argument("contraction_estimate: size mismatch");
  if (k < 2) throw std::invalid_argument("contraction_estimate: k must be at least 2");
  const std::size_t m = p.size();
  std::vector<double> x = p.sorted_coordinate();
  std::vector<double> y = q.sorted_coordinate();
  const double shift = p.mean()[0] - q.mean()[0];
  for (double& v : y) v += shift;
  const double mean_x = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(m);
  const double mean_y = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(m);
  if (!(std::abs(mean_x - mean_y) <= 1e-9 * (1.0 + std::abs(mean_x)))) {
    throw std::domain_error("contraction_estimate: means differ after recentering");
  }

  const auto coupled = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) s += (x[i] - y[i]) * (x[i] - y[i]);
    return s / static_cast<double>(m);
  };
  const auto sorted_l2 = [&] {
    auto xs = x, ys = y;
    std::sort(xs.begin(), xs.end());
    std::sort(ys.begin(), ys.end());
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) s += (xs[i] - ys[i]) * (xs[i] - ys[i]);
    return s / static_cast<double>(m);
  };

  ContractionReport report;
  report.distances.push_back(coupled());
  report.empirical_l2_sq.push_back(report.distances.back());
  std::vector<double> nx(m), ny(m);
  for (std::size_t t = 0; t < iterations; ++t) {
    for (std::size_t s = 0; s < m; ++s) {
      double ax = 0.0, ay = 0.0;
      for (int i = 0; i < k; ++i) {
        const double u = rng.uniform01();
        const std::size_t idx = rng.below(m);
        ax += u * x[idx];
        ay += u * y[idx];
      }
      nx[s] = ax;
      ny[s] = ay;
    }
    x.swap(nx);
    y.swap(ny);
    const double prev = report.distances.back();
    report.distances.push_back(coupled());
    report.ratios.push_back(prev > 0.0 ? report.distances.back() / prev
                                       : std::numeric_limits<double>::quiet_NaN());
    report.empirical_l2_sq.push_back(sorted_l2());
  }
  return report;
}

/// Mean over `pairs` replicates of the two-sample KS statistic between two
/// independent pools of size m drawn from the same law. This is the distance
/// two exact samples of the target already show at this m.
template <typename Draw>
double ks_noise_floor(std::size_t m, std::size_t pairs, RngStream& rng, Draw&& draw) {
  if (pairs == 0) throw std::invalid_argument("ks_noise_floor: need at least one pair");
  double total = 0.0;
  for (std::size_t r = 0; r < pairs; ++r) {
    const auto a = SamplePool::generate(m, rng, draw).sorted_coordinate();
    const auto b = SamplePool::generate(m, rng, draw).sorted_coordinate();
    total += analysis::ks_two_sample(a, b);
  }
  return total / static_cast<double>(pairs);
}

}  // namespace zurn::fixedpoint
