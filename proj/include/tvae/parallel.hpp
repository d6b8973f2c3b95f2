#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace tvae {

// Process-wide default worker count; 0 means hardware concurrency.
void set_default_threads(unsigned n);
unsigned default_threads();

// Calls body(i) for i in [0, n) over contiguous chunks. Each index is visited
// exactly once, so writes to per-index slots stay deterministic.
template <class Body>
void parallel_for(std::size_t n, unsigned threads, Body&& body) {
  unsigned workers = threads == 0 ? default_threads() : threads;
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (n + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const std::size_t lo = w * chunk;
    const std::size_t hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &body] {
      for (std::size_t i = lo; i < hi; ++i) body(i);
    });
  }
}

}  // namespace tvae
