#pragma once

#include <mutex>
#include <thread>
#include <utility>
#include <vector>

#include "dqt/arith.hpp"

namespace dqt {

// Chunked range reduction with deterministic combination: partial results
// are accumulated per chunk and added in chunk order, so totals are
// identical for every thread count.
template <typename T, typename ChunkFn>
T chunked_reduce(i64 lo, i64 hi, int threads, ChunkFn chunk) {
  if (hi < lo) return T{};
  if (threads < 2 || hi - lo < 1024) return chunk(lo, hi);
  int parts = threads * 4;
  i64 span = (hi - lo + 1 + parts - 1) / parts;
  std::vector<std::pair<i64, i64>> ranges;
  for (i64 a = lo; a <= hi; a += span) ranges.emplace_back(a, std::min(hi, a + span - 1));
  std::vector<T> partial(ranges.size());
  std::vector<std::thread> pool;
  std::size_t next = 0;
  std::mutex mu;
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      while (true) {
        std::size_t mine;
        {
          std::lock_guard<std::mutex> lk(mu);
          if (next >= ranges.size()) return;
          mine = next++;
        }
        partial[mine] = chunk(ranges[mine].first, ranges[mine].second);
      }
    });
  }
  for (auto& th : pool) th.join();
  T total{};
  for (const T& p : partial) total = total + p;
  return total;
}

}  // namespace dqt
