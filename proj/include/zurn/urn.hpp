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
#include <concepts>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "zurn/label_int.hpp"
#include "zurn/rng.hpp"

namespace zurn {

/// A ball label: one integer per coordinate.
template <typename Int>
using Label = std::vector<Int>;

/// Anything that yields uniform indices in [0, n). RngStream is the
/// production source; ForcedDraws replays a fixed script in tests.
template <typename S>
concept IndexSource = requires(S& s, std::uint64_t n) {
  { s.below(n) } -> std::convertible_to<std::uint64_t>;
};

/// Replays a fixed sequence of 0-based indices.
class ForcedDraws {
 public:
  explicit ForcedDraws(std::vector<std::uint64_t> script) : script_(std::move(script)) {}

  std::uint64_t below(std::uint64_t n) {
    if (next_ >= script_.size()) throw std::logic_error("forced draw script exhausted");
    const std::uint64_t idx = script_[next_++];
    if (idx >= n) {
      throw std::logic_error("forced draw " + std::to_string(idx) + " out of range for " +
                             std::to_string(n) + " balls");
    }
    return idx;
  }

  std::size_t consumed() const { return next_; }

 private:
  std::vector<std::uint64_t> script_;
  std::size_t next_ = 0;
};

/// Urn of integer-vector labels under draw-k-with-replacement, add-the-sum.
///
/// Labels live in one flat append-only array; ball i occupies
/// [i*dim, (i+1)*dim). Ball indices are 0-based and follow addition order,
/// with the initial configuration first, in input order. The per-coordinate
/// sum S and sum of squares Q are maintained incrementally and always equal
/// a full rescan (see verify_sums()).
///
/// With Int = std::int64_t every addition and product is checked and
/// OverflowError is thrown instead of wrapping; the urn is left unchanged by
/// the failed step. Int = BigInt never overflows.
template <typename Int = std::int64_t>
class Urn {
  using Arith = LabelArith<Int>;

 public:
  Urn(std::span<const Label<Int>> initial, std::size_t dim) : dim_(dim) {
    if (dim == 0) throw std::invalid_argument("dimension must be positive");
    if (initial.empty()) throw std::invalid_argument("initial configuration is empty");
    labels_.reserve(initial.size() * dim);
    sum_.assign(dim, Int(0));
    sum_sq_.assign(dim, Int(0));
    for (std::size_t b = 0; b < initial.size(); ++b) {
      if (initial[b].size() != dim) {
        throw std::invalid_argument("initial label " + std::to_string(b) + " has " +
                                    std::to_string(initial[b].size()) +
                                    " coordinates, expected " + std::to_string(dim));
      }
      for (std::size_t c = 0; c < dim; ++c) {
        const Int& x = initial[b][c];
        Int sq;
        if (!Arith::mul(x, x, sq) || !Arith::add(sum_sq_[c], sq, sum_sq_[c]) ||
            !Arith::add(sum_[c], x, sum_[c])) {
          throw OverflowError(b + 1, c, "initial configuration sums");
        }
        labels_.push_back(x);
      }
    }
    tau0_ = initial.size();
    n_ = tau0_;
  }

  Urn(std::initializer_list<Label<Int>> initial, std::size_t dim)
      : Urn(std::span<const Label<Int>>(initial.begin(), initial.size()), dim) {}

  std::size_t dim() const { return dim_; }
  /// Current ball count n.
  std::uint64_t size() const { return n_; }
  /// Number of initial balls.
  std::uint64_t tau0() const { return tau0_; }

  std::span<const Int> label(std::uint64_t i) const {
    return std::span<const Int>(labels_).subspan(i * dim_, dim_);
  }
  std::span<const Int> labels_flat() const { return labels_; }

  /// S_n per coordinate.
  std::span<const Int> sum() const { return sum_; }
  /// Q_n per coordinate: the sum of squared labels.
  std::span<const Int> sum_sq() const { return sum_sq_; }

  /// R_n = S_n^2 for one coordinate, checked.
  Int sum_squared(std::size_t coord) const {
    Int r;
    if (!Arith::mul(sum_[coord], sum_[coord], r)) throw OverflowError(n_, coord, "R = S^2");
    return r;
  }

  void reserve(std::uint64_t balls) { labels_.reserve(balls * dim_); }

  /// Appends the coordinate-wise sum of the given balls. Returns the new label.
  std::span<const Int> add_sum_of(std::span<const std::uint64_t> drawn) {
    const std::size_t base = labels_.size();
    labels_.resize(base + dim_, Int(0));
    std::vector<Int>& new_sq = scratch_sq_;
    new_sq.resize(dim_);
    for (std::size_t c = 0; c < dim_; ++c) {
      Int& x = labels_[base + c];
      for (const std::uint64_t idx : drawn) {
        if (!Arith::add(x, labels_[idx * dim_ + c], x)) fail(base, c, "label sum");
      }
      if (!Arith::mul(x, x, new_sq[c])) fail(base, c, "label square");
    }
    // Validate all running sums before committing any of them.
    std::vector<Int>& next_sum = scratch_next_sum_;
    std::vector<Int>& next_sq = scratch_next_sq_;
    next_sum.resize(dim_);
    next_sq.resize(dim_);
    for (std::size_t c = 0; c < dim_; ++c) {
      if (!Arith::add(sum_[c], labels_[base + c], next_sum[c])) fail(base, c, "S");
      if (!Arith::add(sum_sq_[c], new_sq[c], next_sq[c])) fail(base, c, "Q");
    }
    sum_.swap(next_sum);
    sum_sq_.swap(next_sq);
    ++n_;
    return label(n_ - 1);
  }

  /// Recomputes S and Q from the label array and compares.
  bool verify_sums() const {
    std::vector<Int> s(dim_, Int(0)), q(dim_, Int(0));
    for (std::uint64_t i = 0; i < n_; ++i) {
      for (std::size_t c = 0; c < dim_; ++c) {
        const Int& x = labels_[i * dim_ + c];
        Int sq;
        if (!Arith::add(s[c], x, s[c]) || !Arith::mul(x, x, sq) || !Arith::add(q[c], sq, q[c])) {
          return false;
        }
      }
    }
    return s == sum_ && q == sum_sq_ && labels_.size() == n_ * dim_;
  }

 private:
  [[noreturn]] void fail(std::size_t base, std::size_t coord, const char* what) {
    labels_.resize(base);
    throw OverflowError(n_ + 1, coord, what);
  }

  std::size_t dim_;
  std::uint64_t tau0_ = 0;
  std::uint64_t n_ = 0;
  std::vector<Int> labels_;
  std::vector<Int> sum_;
  std::vector<Int> sum_sq_;
  std::vector<Int> scratch_sq_;
  std::vector<Int> scratch_next_sum_;
  std::vector<Int> scratch_next_sq_;
};

/// Uniform 0-based ball index.
template <typename Int, IndexSource Src>
std::uint64_t draw_index(const Urn<Int>& urn, Src& src) {
  return src.below(urn.size());
}

/// One step: draw k balls with replacement, append a ball labeled with their sum.
template <typename Int, IndexSource Src>
std::span<const Int> step(Urn<Int>& urn, Src& src, int k = 2) {
  if (k < 2) throw std::invalid_argument("k must be at least 2");
  std::uint64_t inline_buf[8];
  std::vector<std::uint64_t> heap_buf;
  std::span<std::uint64_t> drawn;
  if (k <= 8) {
    drawn = std::span<std::uint64_t>(inline_buf, static_cast<std::size_t>(k));
  } else {
    heap_buf.resize(static_cast<std::size_t>(k));
    drawn = heap_buf;
  }
  for (auto& idx : drawn) idx = draw_index(urn, src);
  return urn.add_sum_of(drawn);
}

/// Label of one uniformly drawn ball; the urn is not modified.
template <typename Int, IndexSource Src>
Label<Int> sample_draw(const Urn<Int>& urn, Src& src) {
  const auto l = urn.label(draw_index(urn, src));
  return Label<Int>(l.begin(), l.end());
}

/// Performs `additions` steps. After a step that brings the ball count to a
/// value in `checkpoints` (sorted, each in (tau0, tau0 + additions]), calls
/// recorder(urn).
template <typename Int, IndexSource Src, typename Recorder>
void run(Urn<Int>& urn, std::uint64_t additions, Src& src, int k,
         std::span<const std::uint64_t> checkpoints, Recorder&& recorder) {
  const std::uint64_t start = urn.size();
  const std::uint64_t end = start + additions;
  for (std::size_t i = 0; i < checkpoints.size(); ++i) {
    if (checkpoints[i] <= start || checkpoints[i] > end) {
      throw std::invalid_argument("checkpoint " + std::to_string(checkpoints[i]) +
                                  " outside (" + std::to_string(start) + ", " +
                                  std::to_string(end) + "]");
    }
    if (i > 0 && checkpoints[i] <= checkpoints[i - 1]) {
      throw std::invalid_argument("checkpoints must be strictly increasing");
    }
  }
  urn.reserve(end);
  std::size_t next = 0;
  while (urn.size() < end) {
    step(urn, src, k);
    if (next < checkpoints.size() && urn.size() == checkpoints[next]) {
      recorder(std::as_const(urn));
      ++next;
    }
  }
}

template <typename Int, IndexSource Src>
void run(Urn<Int>& urn, std::uint64_t additions, Src& src, int k = 2) {
  run(urn, additions, src, k, std::span<const std::uint64_t>{}, [](const Urn<Int>&) {});
}

}  // namespace zurn
