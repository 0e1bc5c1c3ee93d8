#pragma once

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace lorentz {

// Worker cap: LORENTZ_THREADS if set (>=1), else hardware concurrency, at most 16.
inline int thread_cap() {
  if (const char* env = std::getenv("LORENTZ_THREADS")) {
    int n = std::atoi(env);
    if (n >= 1) return std::min(n, 256);
  }
  unsigned hw = std::thread::hardware_concurrency();
  return std::max(1, std::min<int>(static_cast<int>(hw), 16));
}

// Runs body(i) for i in [0, n).  Each index is processed independently and
// results must be written to per-index slots, so the outcome does not depend
// on the partitioning: deterministic under any thread count.
template <class F>
void parallel_for(long long n, F&& body) {
  int workers = std::min<long long>(thread_cap(), n);
  if (workers <= 1) {
    for (long long i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  long long chunk = (n + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    long long lo = w * chunk, hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &body] {
      for (long long i = lo; i < hi; ++i) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace lorentz
