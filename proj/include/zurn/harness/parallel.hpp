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
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

namespace zurn::harness {

inline unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs produce(r) for r in [0, count) on a worker pool and hands each result
/// to consume(r, result) strictly in increasing r, on the calling thread.
/// Work is done in blocks so that at most one block of results is held in
/// memory. Output is independent of the thread count as long as produce(r)
/// depends only on r.
template <typename Produce, typename Consume>
void ordered_parallel(std::uint64_t count, unsigned threads, Produce&& produce,
                      Consume&& consume) {
  using Result = decltype(produce(std::uint64_t{0}));
  threads = resolve_threads(threads);
  const std::uint64_t block = std::max<std::uint64_t>(64, 16ull * threads);
  std::vector<std::optional<Result>> slots;
  for (std::uint64_t begin = 0; begin < count; begin += block) {
    const std::uint64_t end = std::min(count, begin + block);
    slots.clear();
    slots.resize(end - begin);
    std::atomic<std::uint64_t> next{begin};
    std::exception_ptr failure;
    std::mutex failure_mu;
    const auto worker = [&] {
      for (std::uint64_t r = next++; r < end; r = next++) {
        try {
          slots[r - begin].emplace(produce(r));
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mu);
          if (!failure) failure = std::current_exception();
          next = end;
        }
      }
    };
    const unsigned n_workers =
        static_cast<unsigned>(std::min<std::uint64_t>(threads, end - begin));
    if (n_workers <= 1) {
      worker();
    } else {
      std::vector<std::jthread> pool;
      pool.reserve(n_workers);
      for (unsigned t = 0; t < n_workers; ++t) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);
    for (std::uint64_t r = begin; r < end; ++r) consume(r, std::move(*slots[r - begin]));
  }
}

}  // namespace zurn::harness
