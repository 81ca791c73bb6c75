#pragma once

#include <atomic>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace bakerlab {

inline int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("BAKERLAB_THREADS")) {
    int n = std::atoi(env);
    if (n > 0) return n;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

// Index-parallel loop. Work items write only to their own slot, so the result
// is identical for every thread count.
inline void parallel_for(long n, int threads, const std::function<void(long)>& body) {
  threads = resolve_threads(threads);
  if (threads <= 1 || n <= 1) {
    for (long i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<long> next{0};
  auto worker = [&]() {
    for (;;) {
      long i = next.fetch_add(1);
      if (i >= n) return;
      body(i);
    }
  };
  std::vector<std::thread> pool;
  int k = static_cast<int>(std::min<long>(threads, n));
  pool.reserve(k);
  for (int t = 0; t < k; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
}

}  // namespace bakerlab
