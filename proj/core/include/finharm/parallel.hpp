#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace finharm {

/// Number of worker threads used by internal parallel loops (0 = hardware default).
void set_thread_count(unsigned n);
unsigned thread_count();

/// Runs body(i) for every i in [begin, end). Each index is processed exactly
/// once and results depend only on i, so output is independent of the thread count.
template <class F>
void parallel_for(std::size_t begin, std::size_t end, F&& body, std::size_t grain = 256) {
  if (end <= begin) return;
  const std::size_t n = end - begin;
  const std::size_t workers = std::min<std::size_t>(thread_count(), (n + grain - 1) / grain);
  if (workers <= 1) {
    for (std::size_t i = begin; i < end; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t lo = begin + w * chunk;
    const std::size_t hi = std::min(end, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&body, lo, hi] {
      for (std::size_t i = lo; i < hi; ++i) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace finharm
