// Minimal chunked parallel-for over an index range.

#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace tkge {

// Splits [0, n) into `workers` contiguous chunks and runs fn(begin, end) on
// each. workers <= 1 runs inline. Chunk boundaries depend only on n and
// workers, so per-chunk work is deterministic.
template <typename Fn>
void parallel_for(std::size_t n, int workers, Fn&& fn) {
  if (n == 0) return;
  std::size_t w = workers <= 1 ? 1 : std::min<std::size_t>(static_cast<std::size_t>(workers), n);
  if (w == 1) {
    fn(static_cast<std::size_t>(0), n);
    return;
  }
  std::vector<std::thread> threads;
  threads.reserve(w);
  const std::size_t chunk = (n + w - 1) / w;
  for (std::size_t i = 0; i < w; ++i) {
    const std::size_t begin = i * chunk;
    const std::size_t end = std::min(n, begin + chunk);
    if (begin >= end) break;
    threads.emplace_back([&fn, begin, end] { fn(begin, end); });
  }
  for (auto& t : threads) t.join();
}

}  // namespace tkge
