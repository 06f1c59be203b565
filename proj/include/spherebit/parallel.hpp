// parallel.hpp -- fixed-chunk parallel loops with deterministic assembly.
#pragma once

#include <cstdint>
#include <thread>
#include <vector>

namespace spherebit {

inline int hardware_threads() {
  const unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : static_cast<int>(n);
}

inline int resolve_threads(int requested) {
  return requested <= 0 ? hardware_threads() : requested;
}

// Runs f(chunk_index) for chunk_index in [0, chunks). Work is split by a
// static round-robin assignment, so which thread runs a chunk never depends
// on timing; callers that store per-chunk results and reduce them in index
// order get output independent of the thread count.
template <class F>
void parallel_chunks(std::int64_t chunks, int threads, F&& f) {
  threads = resolve_threads(threads);
  if (threads <= 1 || chunks <= 1) {
    for (std::int64_t c = 0; c < chunks; ++c) f(c);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int w = 0; w < threads; ++w) {
    pool.emplace_back([&, w]() {
      for (std::int64_t c = w; c < chunks; c += threads) f(c);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace spherebit
