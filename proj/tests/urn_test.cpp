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

#include "zurn/urn.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cstdint>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "zurn/analysis.hpp"

namespace zurn {
namespace {

using Rational = boost::multiprecision::cpp_rational;
using Urn64 = Urn<std::int64_t>;
using L = Label<std::int64_t>;

Urn64 make(std::vector<L> init, std::size_t d = 1) { return Urn64(std::span<const L>(init), d); }

TEST(NewUrn, SymmetricStart) {
  const auto u = make({{-1}, {1}});
  EXPECT_EQ(u.size(), 2u);
  EXPECT_EQ(u.tau0(), 2u);
  EXPECT_EQ(u.sum()[0], 0);
  EXPECT_EQ(u.sum_sq()[0], 2);
  EXPECT_EQ(u.sum_squared(0), 0);
}

TEST(NewUrn, TwoOnes) {
  const auto u = make({{1}, {1}});
  EXPECT_EQ(u.size(), 2u);
  EXPECT_EQ(u.sum()[0], 2);
  EXPECT_EQ(u.sum_sq()[0], 2);
  EXPECT_EQ(u.sum_squared(0), 4);
}

TEST(NewUrn, AllZeroPlane) {
  const auto u = make({{0, 0}}, 2);
  EXPECT_EQ(u.size(), 1u);
  EXPECT_EQ(u.dim(), 2u);
  EXPECT_EQ(u.sum()[0], 0);
  EXPECT_EQ(u.sum()[1], 0);
  EXPECT_EQ(u.sum_sq()[1], 0);
}

TEST(NewUrn, RejectsBadInput) {
  EXPECT_THROW(make({}), std::invalid_argument);
  EXPECT_THROW(make({{1, 2}, {3}}, 2), std::invalid_argument);
  EXPECT_THROW(make({{1}}, 0), std::invalid_argument);
}

TEST(DrawIndex, SingleBall) {
  const auto u = make({{7}});
  RngStream rng(1, 0);
  for (int i = 0; i < 50; ++i) EXPECT_EQ(draw_index(u, rng), 0u);
}

TEST(DrawIndex, TwoBallsAreEquallyLikely) {
  const auto u = make({{-1}, {1}});
  RngStream rng(11, 4);
  const int n = 1000000;
  int second = 0;
  for (int i = 0; i < n; ++i) second += static_cast<int>(draw_index(u, rng));
  EXPECT_NEAR(static_cast<double>(second) / n, 0.5, 0.002);
}

TEST(DrawIndex, ReplaysForFixedStream) {
  auto u = make({{-1}, {1}});
  RngStream r1(99, 5);
  run(u, 200, r1);
  RngStream a(123, 17), b(123, 17);
  for (int i = 0; i < 500; ++i) ASSERT_EQ(draw_index(u, a), draw_index(u, b));
}

TEST(Step, ForcedSymmetricCancellation) {
  auto u = make({{-1}, {1}});
  ForcedDraws draws({0, 1});
  const auto added = step(u, draws, 2);
  EXPECT_EQ(added[0], 0);
  EXPECT_EQ(u.size(), 3u);
  EXPECT_EQ(u.sum()[0], 0);
}

TEST(Step, TwoOnesAlwaysAddTwo) {
  for (std::uint64_t i = 0; i < 2; ++i) {
    for (std::uint64_t j = 0; j < 2; ++j) {
      auto u = make({{1}, {1}});
      ForcedDraws draws({i, j});
      EXPECT_EQ(step(u, draws, 2)[0], 2);
      EXPECT_EQ(u.sum()[0], 4);
      EXPECT_EQ(u.sum_sq()[0], 6);
    }
  }
}

TEST(Step, TwoOnesWithThreeDrawsAlwaysAddThree) {
  for (std::uint64_t code = 0; code < 8; ++code) {
    auto u = make({{1}, {1}});
    ForcedDraws draws({code & 1, (code >> 1) & 1, (code >> 2) & 1});
    EXPECT_EQ(step(u, draws, 3)[0], 3);
    EXPECT_EQ(draws.consumed(), 3u);
  }
}

TEST(Step, RejectsKBelowTwo) {
  auto u = make({{1}});
  RngStream rng(1, 1);
  EXPECT_THROW(step(u, rng, 1), std::invalid_argument);
}

TEST(Step, InitialOverflowIsReported) {
  const std::int64_t big = std::int64_t{1} << 62;
  try {
    make({{1, big}}, 2);
    FAIL() << "expected OverflowError";
  } catch (const OverflowError& e) {
    EXPECT_EQ(e.step(), 1u);
    EXPECT_EQ(e.coord(), 1u);
  }
}

TEST(Step, LabelOverflowIsReportedAndUrnUntouched) {
  auto u = make({{1, std::int64_t{1} << 31}}, 2);
  ForcedDraws draws({0, 0});
  try {
    step(u, draws, 2);
    FAIL() << "expected OverflowError";
  } catch (const OverflowError& e) {
    EXPECT_EQ(e.step(), 2u);
    EXPECT_EQ(e.coord(), 1u);
  }
  EXPECT_EQ(u.size(), 1u);
  EXPECT_TRUE(u.verify_sums());
}

TEST(Step, SquareOverflowIsReported) {
  // 2^32 fits but its square does not.
  auto u = make({{std::int64_t{1} << 31}});
  ForcedDraws draws({0, 0});
  EXPECT_THROW(step(u, draws, 2), OverflowError);
  EXPECT_EQ(u.size(), 1u);
}

TEST(Step, BigIntModeNeverOverflows) {
  Urn<BigInt> u({Label<BigInt>{BigInt(1) << 62}}, 1);
  ForcedDraws draws({0, 0, 1, 1});
  step(u, draws, 2);
  step(u, draws, 2);
  EXPECT_EQ(u.label(2)[0], BigInt(1) << 64);
  EXPECT_EQ(u.sum()[0], (BigInt(1) << 62) + (BigInt(1) << 63) + (BigInt(1) << 64));
  EXPECT_TRUE(u.verify_sums());
}

TEST(Run, ZeroAdditionsLeavesUrnAlone) {
  auto u = make({{1}, {1}});
  RngStream rng(3, 0);
  int calls = 0;
  run(u, 0, rng, 2, {}, [&](const Urn64&) { ++calls; });
  EXPECT_EQ(calls, 0);
  EXPECT_EQ(u.size(), 2u);
  EXPECT_EQ(rng.position(), 0u);
}

TEST(Run, CheckpointSeesDeterministicA) {
  auto u = make({{1}, {1}});
  RngStream rng(3, 0);
  const std::vector<std::uint64_t> cps{3};
  std::vector<std::uint64_t> seen;
  run(u, 1, rng, 2, cps, [&](const Urn64& snap) {
    seen.push_back(snap.size());
    EXPECT_EQ(snap.sum()[0], 4);
    EXPECT_DOUBLE_EQ(analysis::compute_a(snap)[0], 4.0 / 12.0);
  });
  EXPECT_EQ(seen, cps);
}

TEST(Run, FigureOneLength) {
  auto u = make({{-1}, {1}});
  RngStream rng(2020, 0);
  run(u, 4998, rng);
  EXPECT_EQ(u.size(), 5000u);
  EXPECT_TRUE(u.verify_sums());
}

TEST(Run, RejectsCheckpointsOutsideWindow) {
  auto u = make({{1}, {1}});
  RngStream rng(3, 0);
  const auto noop = [](const Urn64&) {};
  const std::vector<std::uint64_t> at_start{2}, past_end{5}, unsorted{4, 3};
  EXPECT_THROW(run(u, 2, rng, 2, at_start, noop), std::invalid_argument);
  EXPECT_THROW(run(u, 2, rng, 2, past_end, noop), std::invalid_argument);
  EXPECT_THROW(run(u, 2, rng, 2, unsorted, noop), std::invalid_argument);
}

TEST(SampleDraw, SingleBall) {
  const auto u = make({{5}});
  RngStream rng(8, 8);
  EXPECT_EQ(sample_draw(u, rng), (L{5}));
}

TEST(SampleDraw, SymmetricUrnHasZeroMean) {
  const auto u = make({{-1}, {1}});
  RngStream rng(31, 2);
  const int n = 1000000;
  double s = 0;
  for (int i = 0; i < n; ++i) s += static_cast<double>(sample_draw(u, rng)[0]);
  EXPECT_NEAR(s / n, 0.0, 0.003);
  EXPECT_EQ(u.size(), 2u);
}

TEST(SampleDraw, QuenchedMeanIsSumOverN) {
  auto u = make({{-1}, {1}, {4}});
  RngStream rng(6, 1);
  run(u, 40, rng);
  // Every index has mass 1/n, so the exact quenched mean is the label average.
  Rational mean = 0;
  for (std::uint64_t i = 0; i < u.size(); ++i) mean += Rational(u.label(i)[0], u.size());
  EXPECT_EQ(mean, Rational(u.sum()[0], u.size()));
}

// Property: incremental sums equal a rescan and labels at most double (k = 2)
// or grow by a factor k per step, over random small urns.
TEST(UrnProperties, ConservationAndGrowthBound) {
  RngStream gen(555, 0);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t d = 1 + gen.below(3);
    const int k = 2 + static_cast<int>(gen.below(3));
    const std::size_t tau0 = 1 + gen.below(5);
    std::vector<L> init(tau0, L(d));
    for (auto& l : init) {
      for (auto& x : l) x = static_cast<std::int64_t>(gen.below(21)) - 10;
    }
    auto u = make(init, d);
    RngStream rng(555, 1 + static_cast<std::uint64_t>(trial));
    std::int64_t max_abs = 0;
    for (std::uint64_t i = 0; i < u.size(); ++i) {
      for (auto x : u.label(i)) max_abs = std::max(max_abs, std::abs(x));
    }
    for (int s = 0; s < 60; ++s) {
      const auto added = step(u, rng, k);
      std::int64_t new_max = max_abs;
      for (auto x : added) new_max = std::max(new_max, std::abs(x));
      ASSERT_LE(new_max, k * max_abs);
      max_abs = new_max;
    }
    ASSERT_TRUE(u.verify_sums());
    ASSERT_EQ(u.size(), tau0 + 60);
    for (std::uint64_t i = 0; i < tau0; ++i) {
      ASSERT_TRUE(std::equal(init[i].begin(), init[i].end(), u.label(i).begin()));
    }
  }
}

TEST(UrnProperties, IdenticalSeedsGiveIdenticalLabels) {
  auto a = make({{-1, 2}, {1, 0}}, 2);
  auto b = a;
  RngStream ra(7, 3), rb(7, 3);
  run(a, 3000, ra, 2);
  run(b, 3000, rb, 2);
  EXPECT_TRUE(std::equal(a.labels_flat().begin(), a.labels_flat().end(),
                         b.labels_flat().begin(), b.labels_flat().end()));
}

// E[A_{n+1} | urn] = A_n, by exhaustive enumeration of all n^2 draw pairs.
Rational exact_a(const Urn64& u) {
  return Rational(u.sum()[0]) / Rational(u.size() * (u.size() + 1));
}

Rational expected_next_a(const Urn64& u) {
  const std::uint64_t n = u.size();
  Rational total = 0;
  for (std::uint64_t i = 0; i < n; ++i) {
    for (std::uint64_t j = 0; j < n; ++j) {
      auto next = u;
      ForcedDraws draws({i, j});
      step(next, draws, 2);
      total += exact_a(next);
    }
  }
  return total / Rational(n * n);
}

TEST(UrnProperties, MartingaleOneStepExhaustive) {
  const auto ones = make({{1}, {1}});
  EXPECT_EQ(expected_next_a(ones), Rational(1, 3));
  EXPECT_EQ(exact_a(ones), Rational(1, 3));

  auto mixed = make({{-3}, {1}, {4}});
  RngStream rng(13, 0);
  for (int s = 0; s < 5; ++s) {
    EXPECT_EQ(expected_next_a(mixed), exact_a(mixed)) << "n = " << mixed.size();
    step(mixed, rng, 2);
  }
}

}  // namespace
}  // namespace zurn
